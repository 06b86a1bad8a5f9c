#include "tomo/noise.hpp"

#include <cmath>

#include "tomo/fft.hpp"

namespace tomo {

NoiseDistribution parse_distribution(const std::string& name) {
    if (name == "normal") return NoiseDistribution::Normal;
    if (name == "laplace") return NoiseDistribution::Laplace;
    if (name == "brown") return NoiseDistribution::Brown;
    if (name == "blue") return NoiseDistribution::Blue;
    if (name == "pink") return NoiseDistribution::Pink;
    throw ConfigError("unknown noise distribution: " + name);
}

std::string distribution_name(NoiseDistribution d) {
    switch (d) {
        case NoiseDistribution::Normal: return "normal";
        case NoiseDistribution::Laplace: return "laplace";
        case NoiseDistribution::Brown: return "brown";
        case NoiseDistribution::Blue: return "blue";
        case NoiseDistribution::Pink: return "pink";
    }
    return "normal";
}

Eigen::Matrix2cd rotation(const RotationAngles& a) {
    const Complex i(0.0, 1.0);
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    Eigen::Matrix2cd r;
    r(0, 0) = std::exp(i * (a.phi / 2.0)) * c;
    r(0, 1) = -i * std::exp(i * a.xi) * s;
    r(1, 0) = -i * std::exp(-i * a.xi) * s;
    r(1, 1) = std::exp(-i * (a.phi / 2.0)) * c;
    return r;
}

namespace {

double spectral_beta(NoiseDistribution d) {
    switch (d) {
        case NoiseDistribution::Brown: return 2.0;
        case NoiseDistribution::Blue: return -2.0;
        case NoiseDistribution::Pink: return 1.0;
        default: return 0.0;
    }
}

bool is_colored(NoiseDistribution d) {
    return d == NoiseDistribution::Brown || d == NoiseDistribution::Blue ||
           d == NoiseDistribution::Pink;
}

// Frequency-domain synthesis: Gaussian spectrum shaped by f^{-beta/2},
// Hermitian-symmetrized so the inverse transform is real.
std::vector<double> colored_series(double beta, double sigma, int n, Rng& rng) {
    const std::size_t m = next_pow2(static_cast<std::size_t>(std::max(n, 8)));
    std::vector<std::complex<double>> spec(m, {0.0, 0.0});
    for (std::size_t k = 1; k <= m / 2; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(m);
        const double amp = std::pow(f, -beta / 2.0);
        const double re = rng.normal();
        const double im = (k == m / 2) ? 0.0 : rng.normal();
        spec[k] = amp * std::complex<double>(re, im);
        if (k != m / 2) spec[m - k] = std::conj(spec[k]);
    }
    fft_pow2(spec, true);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = spec[static_cast<std::size_t>(i)].real();
    // Rescale to exactly zero mean and std sigma.
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : out) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    for (double& v : out) v = sd > 0.0 ? (v - mean) * sigma / sd : 0.0;
    return out;
}

}  // namespace

std::vector<double> sample_angle_series(const NoiseSpec& spec, int n) {
    if (n < 1) throw ConfigError("sample_angle_series needs n >= 1");
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (spec.sigma == 0.0) return out;
    Rng rng(spec.seed);
    switch (spec.distribution) {
        case NoiseDistribution::Normal:
            for (double& v : out) v = rng.normal(0.0, spec.sigma);
            break;
        case NoiseDistribution::Laplace:
            for (double& v : out) v = rng.laplace(spec.sigma);
            break;
        default:
            out = colored_series(spectral_beta(spec.distribution), spec.sigma, n, rng);
            break;
    }
    return out;
}

MeasurementVector noisy_measure(const DensityMatrix& rho, const ProjectorSet& ps,
                                const NoiseSpec& spec) {
    const int per_entry = spec.both_qubits ? 6 : 3;
    const std::vector<double> angles = sample_angle_series(spec, per_entry * kNumMeasurements);
    MeasurementVector out;
    const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
    for (int k = 0; k < kNumMeasurements; ++k) {
        const std::size_t off = static_cast<std::size_t>(per_entry * k);
        const Eigen::Matrix2cd r2 =
            rotation({angles[off], angles[off + 1], angles[off + 2]});
        const Eigen::Matrix2cd r1 =
            spec.both_qubits ? rotation({angles[off + 3], angles[off + 4], angles[off + 5]})
                             : eye;
        const Matrix4c rot = kron(r1, r2);
        const Matrix4c p = rot * ps[k] * rot.adjoint();
        const Complex tr = (rho.mat() * p).trace();
        if (std::abs(tr.imag()) > 1e-9)
            throw Error("noisy measurement probability has non-real trace");
        out[k] = clamp01(tr.real());
    }
    return out;
}

}  // namespace tomo
