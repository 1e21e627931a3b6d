#ifndef READOUT_OPERATORS_HPP
#define READOUT_OPERATORS_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

// Finite-dimensional operator algebra for the qutrit-cavity system.
//
// Basis conventions, fixed globally:
//   - qutrit levels ordered (g, e, f) = (0, 1, 2)
//   - Fock levels ordered 0..n_max-1
//   - composite space is qutrit (x) Fock, qutrit index slow, Fock index fast
//   - sigma_z,ab = |a><a| - |b><b|, so sigma_z,ge has eigenvalue +1 on |g>
//     (the Hamiltonian convention H_q = -1/2 hbar w_q sigma_z)

namespace readout {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr Cplx kI{0.0, 1.0};

/// Violations of numerical validity guards (truncation, diffusive step
/// size); distinct from configuration errors so callers can exit differently.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

inline double hermiticity_error(const Mat& m) {
    return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

/// Density matrix on a finite Hilbert space. Construction via `checked`
/// enforces unit trace and Hermiticity; the minimum eigenvalue is monitored
/// by callers, not enforced here.
struct DensityMatrix {
    Mat mat;

    DensityMatrix() = default;
    explicit DensityMatrix(Mat m) : mat(std::move(m)) {}

    static DensityMatrix checked(Mat m, double tol = 1e-9) {
        if (m.rows() != m.cols())
            throw std::invalid_argument("DensityMatrix: matrix not square");
        if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol)
            throw std::invalid_argument("DensityMatrix: trace not 1");
        if (hermiticity_error(m) > tol)
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        return DensityMatrix(std::move(m));
    }

    Eigen::Index dim() const { return mat.rows(); }
    double trace_error() const { return std::abs(mat.trace() - Cplx{1.0, 0.0}); }
    double hermiticity_err() const { return hermiticity_error(mat); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(mat));
        return es.eigenvalues().minCoeff();
    }
};

/// Qutrit projectors, transition operators and pairwise sigma_z's in the
/// ordered basis (g, e, f). sigma_ab = |a><b| lowers b -> a.
struct QutritOps {
    Mat pi_g, pi_e, pi_f;
    Mat sigma_ge, sigma_gf, sigma_ef;
    Mat sigma_z_ge, sigma_z_gf, sigma_z_ef;

    static QutritOps build() {
        QutritOps ops;
        auto ket = [](int i) {
            Vec v = Vec::Zero(3);
            v(i) = 1.0;
            return v;
        };
        const Vec g = ket(0), e = ket(1), f = ket(2);
        ops.pi_g = g * g.adjoint();
        ops.pi_e = e * e.adjoint();
        ops.pi_f = f * f.adjoint();
        ops.sigma_ge = g * e.adjoint();
        ops.sigma_gf = g * f.adjoint();
        ops.sigma_ef = e * f.adjoint();
        ops.sigma_z_ge = ops.pi_g - ops.pi_e;
        ops.sigma_z_gf = ops.pi_g - ops.pi_f;
        ops.sigma_z_ef = ops.pi_e - ops.pi_f;
        return ops;
    }
};

/// Photon-number truncation of the cavity Fock space.
struct FockConfig {
    int n_max = 1;

    void validate() const {
        if (n_max < 1) throw std::invalid_argument("FockConfig: n_max must be >= 1");
    }
};

/// Truncated annihilation/creation/number operators; a|n> = sqrt(n)|n-1>.
struct FockOps {
    Mat a, a_dag, n;
};

inline FockOps build_fock_operators(const FockConfig& cfg) {
    cfg.validate();
    const int d = cfg.n_max;
    FockOps ops;
    ops.a = Mat::Zero(d, d);
    for (int k = 1; k < d; ++k) ops.a(k - 1, k) = std::sqrt(double(k));
    ops.a_dag = ops.a.adjoint();
    ops.n = ops.a_dag * ops.a;
    return ops;
}

/// Kronecker product, qutrit-major: index of A is slow, index of B fast.
inline Mat tensor(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Lindblad dissipator D[L] rho = L rho L^+ - 1/2 {L^+L, rho}. Traceless.
inline Mat dissipator(const Mat& l, const Mat& rho) {
    if (l.rows() != rho.rows() || l.cols() != rho.cols())
        throw std::invalid_argument("dissipator: dimension mismatch");
    const Mat ldl = l.adjoint() * l;
    return l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

/// Measurement (innovation) superoperator
/// M[L] rho = L rho + rho L^+ - Tr(L rho + rho L^+) rho. Traceless.
inline Mat measurement_superop(const Mat& l, const Mat& rho) {
    if (l.rows() != rho.rows() || l.cols() != rho.cols())
        throw std::invalid_argument("measurement_superop: dimension mismatch");
    const Mat s = l * rho + rho * l.adjoint();
    return s - s.trace() * rho;
}

/// Coherent-state column vector in the truncated Fock basis. Throws when the
/// truncation swallows more than `norm_tol` of the state's norm.
inline Vec coherent_vector(Cplx alpha, const FockConfig& cfg, double norm_tol = 1e-6) {
    cfg.validate();
    Vec v(cfg.n_max);
    // amplitudes alpha^n/sqrt(n!) against e^{-|alpha|^2/2}, built recursively
    Cplx amp = std::exp(-0.5 * std::norm(alpha));
    v(0) = amp;
    for (int n = 1; n < cfg.n_max; ++n) {
        amp *= alpha / std::sqrt(double(n));
        v(n) = amp;
    }
    const double nrm = v.norm();
    if (nrm < 1.0 - norm_tol)
        throw std::runtime_error("coherent_vector: Fock truncation too small for |alpha|");
    return v;
}

/// <beta|alpha> = exp(-(|alpha|^2+|beta|^2)/2 + beta^* alpha), untruncated.
inline Cplx coherent_overlap(Cplx beta, Cplx alpha) {
    return std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)) + std::conj(beta) * alpha);
}

/// Partial trace over the Fock factor of a qutrit (x) Fock state.
inline Mat partial_trace_cavity(const Mat& rho, int n_max) {
    if (rho.rows() != 3 * n_max || rho.cols() != 3 * n_max)
        throw std::invalid_argument("partial_trace_cavity: dimension mismatch");
    Mat out = Mat::Zero(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int n = 0; n < n_max; ++n)
                out(a, b) += rho(a * n_max + n, b * n_max + n);
    return out;
}

/// Partial trace over the qutrit factor.
inline Mat partial_trace_qutrit(const Mat& rho, int n_max) {
    if (rho.rows() != 3 * n_max || rho.cols() != 3 * n_max)
        throw std::invalid_argument("partial_trace_qutrit: dimension mismatch");
    Mat out = Mat::Zero(n_max, n_max);
    for (int n = 0; n < n_max; ++n)
        for (int m = 0; m < n_max; ++m)
            for (int a = 0; a < 3; ++a)
                out(n, m) += rho(a * n_max + n, a * n_max + m);
    return out;
}

}  // namespace readout

#endif
