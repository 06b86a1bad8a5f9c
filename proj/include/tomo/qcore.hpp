#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>

#include "tomo/common.hpp"
#include "tomo/rng.hpp"

namespace tomo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;

// Kronecker product; Eigen's unsupported module is avoided to keep the
// dependency surface to Eigen/Dense.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Two-qubit density matrix: Hermitian, PSD, unit trace (validated).
class DensityMatrix {
public:
    static constexpr double kHermTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kEigTol = -1e-10;

    // Validates the invariants; throws Error on violation.
    explicit DensityMatrix(const Matrix4c& m);

    const Matrix4c& mat() const { return mat_; }
    double purity() const { return (mat_ * mat_).trace().real(); }

private:
    Matrix4c mat_;
};

// 16 real parameters of the lower-triangular factor. Layout:
//   [ t0                              ]
//   [ t4+i t5    t1                   ]
//   [ t10+i t11  t6+i t7   t2         ]
//   [ t14+i t15  t12+i t13 t8+i t9 t3 ]
struct TauVector {
    std::array<double, kNumTau> t{};

    double& operator[](int i) { return t[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return t[static_cast<std::size_t>(i)]; }

    Matrix4c to_matrix() const;
    static TauVector from_matrix(const Matrix4c& tau);
};

// The 36 rank-1 projectors in canonical row-major wire order; index k = 6i+j.
// Consecutive blocks of four share a basis pair and sum to the identity.
class ProjectorSet {
public:
    const Matrix4c& operator[](int k) const { return projs_[static_cast<std::size_t>(k)]; }
    int size() const { return kNumMeasurements; }

private:
    friend ProjectorSet build_projector_set();
    std::array<Matrix4c, kNumMeasurements> projs_;
};

struct MeasurementVector {
    std::array<double, kNumMeasurements> m{};

    double& operator[](int i) { return m[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return m[static_cast<std::size_t>(i)]; }
    int missing_count() const;
};

// Single-qubit basis kets: u = computational, v = diagonal, w = circular.
Vector2c ket_u(int sign);
Vector2c ket_v(int sign);
Vector2c ket_w(int sign);

ProjectorSet build_projector_set();

// Born-rule probabilities m[k] = Tr(rho P[k]), clamped to [0,1].
MeasurementVector measure(const DensityMatrix& rho, const ProjectorSet& ps);

// rho = tau^dag tau / Tr(tau^dag tau). Valid for any finite nonzero input.
DensityMatrix tau_to_rho(const TauVector& t);

// Inverse map for strictly positive rho; unique factor with positive
// diagonal. Throws SingularStateError when a pivot falls below 1e-14.
TauVector rho_to_tau(const DensityMatrix& rho);

// Uhlmann fidelity |Tr sqrt(sqrt(pred) targ sqrt(pred))|^2.
double fidelity(const DensityMatrix& pred, const DensityMatrix& targ);

// Haar-distributed unitary via QR of a complex Ginibre matrix with the
// R-diagonal phase correction.
ComplexMatrix haar_unitary(int dim, Rng& rng);

// (1-eps)|psi><psi| + eps/4 I with eps = 1e-7; psi from a Haar unitary column.
DensityMatrix random_pure(Rng& rng);

// Ginibre-ensemble mixed state G G^dag / Tr(G G^dag).
DensityMatrix random_mixed(Rng& rng);

constexpr double kPurityEpsilon = 1e-7;

}  // namespace tomo
