#include "tomo/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

namespace tomo {

namespace {

const Complex kI(0.0, 1.0);

Matrix4c outer4(const Vector4c& v) { return v * v.adjoint(); }

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

DensityMatrix::DensityMatrix(const Matrix4c& m) : mat_(m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw Error("density matrix not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > kTraceTol || std::abs(m.trace().imag()) > kTraceTol)
        throw Error("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigTol)
        throw Error("density matrix has negative eigenvalue");
}

Matrix4c TauVector::to_matrix() const {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = t[0];
    m(1, 1) = t[1];
    m(2, 2) = t[2];
    m(3, 3) = t[3];
    m(1, 0) = Complex(t[4], t[5]);
    m(2, 1) = Complex(t[6], t[7]);
    m(3, 2) = Complex(t[8], t[9]);
    m(2, 0) = Complex(t[10], t[11]);
    m(3, 1) = Complex(t[12], t[13]);
    m(3, 0) = Complex(t[14], t[15]);
    return m;
}

TauVector TauVector::from_matrix(const Matrix4c& tau) {
    TauVector out;
    out.t[0] = tau(0, 0).real();
    out.t[1] = tau(1, 1).real();
    out.t[2] = tau(2, 2).real();
    out.t[3] = tau(3, 3).real();
    out.t[4] = tau(1, 0).real();
    out.t[5] = tau(1, 0).imag();
    out.t[6] = tau(2, 1).real();
    out.t[7] = tau(2, 1).imag();
    out.t[8] = tau(3, 2).real();
    out.t[9] = tau(3, 2).imag();
    out.t[10] = tau(2, 0).real();
    out.t[11] = tau(2, 0).imag();
    out.t[12] = tau(3, 1).real();
    out.t[13] = tau(3, 1).imag();
    out.t[14] = tau(3, 0).real();
    out.t[15] = tau(3, 0).imag();
    return out;
}

int MeasurementVector::missing_count() const {
    int n = 0;
    for (double v : m)
        if (is_missing(v)) ++n;
    return n;
}

Vector2c ket_u(int sign) {
    return sign > 0 ? Vector2c(1.0, 0.0) : Vector2c(0.0, 1.0);
}

Vector2c ket_v(int sign) {
    const double s = 1.0 / std::sqrt(2.0);
    return sign > 0 ? Vector2c(s, s) : Vector2c(s, -s);
}

Vector2c ket_w(int sign) {
    const double s = 1.0 / std::sqrt(2.0);
    return sign > 0 ? Vector2c(s, s * kI) : Vector2c(s, -s * kI);
}

ProjectorSet build_projector_set() {
    // Basis-pair layout of the 6x6 projector matrix, row-major. Entry (b, s)
    // is the single-qubit ket family b in {u,v,w} with sign s.
    struct K {
        char b;
        int s;
    };
    // clang-format off
    static const K layout[36][2] = {
        {{'u',+1},{'u',+1}}, {{'u',+1},{'u',-1}}, {{'u',-1},{'u',-1}}, {{'u',-1},{'u',+1}}, {{'u',-1},{'w',+1}}, {{'u',-1},{'w',-1}},
        {{'u',+1},{'w',-1}}, {{'u',+1},{'w',+1}}, {{'u',+1},{'v',+1}}, {{'u',+1},{'v',-1}}, {{'u',-1},{'v',-1}}, {{'u',-1},{'v',+1}},
        {{'v',-1},{'v',+1}}, {{'v',-1},{'v',-1}}, {{'v',+1},{'v',-1}}, {{'v',+1},{'v',+1}}, {{'v',+1},{'w',+1}}, {{'v',+1},{'w',-1}},
        {{'v',-1},{'w',-1}}, {{'v',-1},{'w',+1}}, {{'v',-1},{'u',+1}}, {{'v',-1},{'u',-1}}, {{'v',+1},{'u',-1}}, {{'v',+1},{'u',+1}},
        {{'w',+1},{'u',+1}}, {{'w',+1},{'u',-1}}, {{'w',-1},{'u',-1}}, {{'w',-1},{'u',+1}}, {{'w',-1},{'w',+1}}, {{'w',-1},{'w',-1}},
        {{'w',+1},{'w',-1}}, {{'w',+1},{'w',+1}}, {{'w',+1},{'v',+1}}, {{'w',+1},{'v',-1}}, {{'w',-1},{'v',-1}}, {{'w',-1},{'v',+1}},
    };
    // clang-format on
    auto ket = [](const K& k) -> Vector2c {
        switch (k.b) {
            case 'u': return ket_u(k.s);
            case 'v': return ket_v(k.s);
            default: return ket_w(k.s);
        }
    };
    ProjectorSet ps;
    for (int k = 0; k < kNumMeasurements; ++k) {
        const Vector2c a = ket(layout[k][0]);
        const Vector2c b = ket(layout[k][1]);
        Vector4c joint;
        joint << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
        ps.projs_[static_cast<std::size_t>(k)] = outer4(joint);
    }
    return ps;
}

MeasurementVector measure(const DensityMatrix& rho, const ProjectorSet& ps) {
    MeasurementVector out;
    for (int k = 0; k < kNumMeasurements; ++k) {
        const Complex tr = (rho.mat() * ps[k]).trace();
        if (std::abs(tr.imag()) > 1e-9)
            throw Error("measurement probability has non-real trace");
        out[k] = clamp01(tr.real());
    }
    return out;
}

DensityMatrix tau_to_rho(const TauVector& t) {
    double norm = 0.0;
    for (double v : t.t) {
        if (!std::isfinite(v)) throw Error("tau vector not finite");
        norm += v * v;
    }
    if (norm <= 0.0) throw ZeroNormError("tau vector has zero norm");
    const Matrix4c tau = t.to_matrix();
    Matrix4c rho = (tau.adjoint() * tau) / norm;
    // Symmetrize away the last-ulp asymmetry before validation.
    rho = Matrix4c(0.5 * (rho + rho.adjoint()));
    return DensityMatrix(rho);
}

TauVector rho_to_tau(const DensityMatrix& rho) {
    // Unique factorization rho = U U^dag with U upper triangular and positive
    // diagonal, computed from the trailing corner upward; tau = U^dag. The
    // diagonal reproduces the trailing-principal-minor ratios of the closed
    // form, and the round trip fixes the off-diagonal convention.
    const Matrix4c& r = rho.mat();
    Matrix4c u = Matrix4c::Zero();
    for (int j = 3; j >= 0; --j) {
        Complex acc = r(j, j);
        for (int k = j + 1; k < 4; ++k) acc -= u(j, k) * std::conj(u(j, k));
        const double pivot = acc.real();
        if (pivot < 1e-14) throw SingularStateError("state too close to singular for tau map");
        const double d = std::sqrt(pivot);
        u(j, j) = d;
        for (int i = j - 1; i >= 0; --i) {
            Complex s = r(i, j);
            for (int k = j + 1; k < 4; ++k) s -= u(i, k) * std::conj(u(j, k));
            u(i, j) = s / d;
        }
    }
    return TauVector::from_matrix(u.adjoint());
}

namespace {

Matrix4c hermitian_sqrt(const Matrix4c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
    Eigen::Vector4d ev = es.eigenvalues();
    for (int i = 0; i < 4; ++i) ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& pred, const DensityMatrix& targ) {
    const Matrix4c sp = hermitian_sqrt(pred.mat());
    Matrix4c inner = sp * targ.mat() * sp;
    inner = Matrix4c(0.5 * (inner + inner.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(inner, Eigen::EigenvaluesOnly);
    double tr = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > 0.0) tr += std::sqrt(ev);
    }
    const double f = tr * tr;
    return f > 1.0 ? 1.0 : f;
}

ComplexMatrix haar_unitary(int dim, Rng& rng) {
    ComplexMatrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        const Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return q;
}

DensityMatrix random_pure(Rng& rng) {
    const ComplexMatrix a = haar_unitary(4, rng);
    const Vector4c psi = a.col(0);
    Matrix4c rho = (1.0 - kPurityEpsilon) * outer4(psi) +
                   (kPurityEpsilon / 4.0) * Matrix4c::Identity();
    rho = Matrix4c(0.5 * (rho + rho.adjoint()));
    return DensityMatrix(rho / rho.trace().real());
}

DensityMatrix random_mixed(Rng& rng) {
    Matrix4c g;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
    Matrix4c w = g * g.adjoint();
    w = Matrix4c(0.5 * (w + w.adjoint()));
    return DensityMatrix(w / w.trace().real());
}

}  // namespace tomo
