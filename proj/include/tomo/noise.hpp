#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomo/qcore.hpp"
#include "tomo/rng.hpp"

namespace tomo {

enum class NoiseDistribution { Normal, Laplace, Brown, Blue, Pink };

NoiseDistribution parse_distribution(const std::string& name);
std::string distribution_name(NoiseDistribution d);

struct NoiseSpec {
    NoiseDistribution distribution = NoiseDistribution::Normal;
    double sigma = 0.0;  // radians
    std::uint64_t seed = 0;
    // Eq-faithful default rotates the second qubit only; both-qubit noise is
    // a non-default option.
    bool both_qubits = false;
};

struct RotationAngles {
    double theta = 0.0;
    double phi = 0.0;
    double xi = 0.0;
};

// 2x2 basis-rotation unitary
//   [ e^{i phi/2} cos(theta)    -i e^{i xi}  sin(theta) ]
//   [ -i e^{-i xi} sin(theta)    e^{-i phi/2} cos(theta) ]
Eigen::Matrix2cd rotation(const RotationAngles& a);

// n angle samples with mean ~0 and std ~sigma. Colored variants are shaped in
// the frequency domain (Gaussian spectrum scaled by f^{-beta/2}, beta = 2
// brown, -2 blue, 1 pink) and rescaled to exactly zero mean, std sigma.
std::vector<double> sample_angle_series(const NoiseSpec& spec, int n);

// 36 Born probabilities, each with its own freshly sampled rotation applied
// to the projector. Colored distributions consume one series of 3*36
// samples interleaved (theta, phi, xi) so temporal correlation survives.
MeasurementVector noisy_measure(const DensityMatrix& rho, const ProjectorSet& ps,
                                const NoiseSpec& spec);

}  // namespace tomo
