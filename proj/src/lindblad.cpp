#include "readout/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include "readout/coherent.hpp"

namespace readout {

void LindbladModel::validate() const {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw std::invalid_argument("LindbladModel: Hamiltonian not square");
    if (hermiticity_error(hamiltonian) >
        1e-9 * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("LindbladModel: Hamiltonian not Hermitian");
    for (const auto& ch : channels) {
        if (ch.rate < 0.0) throw std::invalid_argument("LindbladModel: negative rate");
        if (ch.op.rows() != hamiltonian.rows() || ch.op.cols() != hamiltonian.cols())
            throw std::invalid_argument("LindbladModel: channel dimension mismatch");
    }
}

Mat lindblad_rhs(const LindbladModel& model, const Mat& rho) {
    Mat out = -kI * (model.hamiltonian * rho - rho * model.hamiltonian);
    for (const auto& ch : model.channels) {
        if (ch.rate == 0.0) continue;
        out += ch.rate * dissipator(ch.op, rho);
    }
    return out;
}

namespace {

// Conservative frequency scale from matrix norms; sets the RK4 step.
double dynamics_scale(const LindbladModel& model) {
    double scale = model.hamiltonian.cwiseAbs().rowwise().sum().maxCoeff();
    for (const auto& ch : model.channels) {
        const double lnorm = ch.op.cwiseAbs().rowwise().sum().maxCoeff();
        scale = std::max(scale, ch.rate * lnorm * lnorm);
    }
    return scale;
}

// channels with L^+L precomputed once per evolve call
struct CachedChannel {
    double rate;
    Mat op, op_dag, ldl;
};

struct Rk4Workspace {
    std::vector<CachedChannel> channels;
    Mat k1, k2, k3, k4, tmp, rhs;

    void rhs_into(const Mat& h, const Mat& rho, Mat& out) {
        out.noalias() = -kI * (h * rho);
        out.noalias() += kI * (rho * h);
        for (const auto& ch : channels) {
            tmp.noalias() = ch.op * rho;
            out.noalias() += ch.rate * (tmp * ch.op_dag);
            out.noalias() -= (0.5 * ch.rate) * (ch.ldl * rho);
            out.noalias() -= (0.5 * ch.rate) * (rho * ch.ldl);
        }
    }
};

void rk4_step(const LindbladModel& model, Mat& rho, double h, Rk4Workspace& w) {
    w.rhs_into(model.hamiltonian, rho, w.k1);
    w.rhs = rho + (0.5 * h) * w.k1;
    w.rhs_into(model.hamiltonian, w.rhs, w.k2);
    w.rhs = rho + (0.5 * h) * w.k2;
    w.rhs_into(model.hamiltonian, w.rhs, w.k3);
    w.rhs = rho + h * w.k3;
    w.rhs_into(model.hamiltonian, w.rhs, w.k4);
    rho += (h / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
    rho = hermitize(rho);
}

}  // namespace

std::vector<DensityMatrix> evolve_lindblad(const LindbladModel& model,
                                           const DensityMatrix& rho0,
                                           const std::vector<double>& t_grid,
                                           double step_scale) {
    model.validate();
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw std::invalid_argument("evolve_lindblad: grid must start at 0");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("evolve_lindblad: grid must be ascending");
    if (rho0.dim() != model.dim())
        throw std::invalid_argument("evolve_lindblad: state dimension mismatch");

    const double scale = dynamics_scale(model);
    const double h_target =
        scale > 0.0 ? step_scale / (50.0 * scale)
                    : (t_grid.back() > 0.0 ? t_grid.back() : 1.0);

    std::vector<DensityMatrix> out;
    out.reserve(t_grid.size());
    out.push_back(rho0);

    Mat rho = rho0.mat;
    Rk4Workspace w;
    for (const auto& ch : model.channels) {
        if (ch.rate == 0.0) continue;
        w.channels.push_back({ch.rate, ch.op, ch.op.adjoint(), ch.op.adjoint() * ch.op});
    }
    for (size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const int n_sub = std::max(1, int(std::ceil(span / h_target)));
        const double h = span / n_sub;
        for (int s = 0; s < n_sub; ++s) rk4_step(model, rho, h, w);
        out.push_back(DensityMatrix(rho));
    }
    return out;
}

LindbladModel build_composite_generator(const QutritCavityParams& params,
                                        const FockConfig& cfg,
                                        bool override_truncation_guard) {
    params.validate();
    cfg.validate();

    // Truncation guard along the driven path: needs
    // |alpha|^2 + 5 sqrt(|alpha|^2 + 1) < n_max at all probed times.
    {
        const double kappa = params.kappa();
        std::vector<double> probe{0.0};
        if (kappa > 0.0) {
            for (int k = 1; k <= 40; ++k) probe.push_back(k * 0.5 / kappa);
        }
        double worst = 0.0;
        auto amps_path = evolve_amplitudes(params, CavityAmplitudes{}, probe);
        auto consider = [&](const CavityAmplitudes& a) {
            for (int lvl = 0; lvl < 3; ++lvl) {
                const double n = std::norm(a[lvl]);
                worst = std::max(worst, n + 5.0 * std::sqrt(n + 1.0));
            }
        };
        for (const auto& a : amps_path) consider(a);
        if (kappa > 0.0) consider(steady_state_amplitudes(params));
        if (worst >= double(cfg.n_max) && !override_truncation_guard)
            throw TruncationError("composite generator: n_max=" + std::to_string(cfg.n_max) +
                                  " too small, need > " + std::to_string(worst));
    }

    const QutritOps q = QutritOps::build();
    const FockOps fock = build_fock_operators(cfg);
    const Mat id3 = Mat::Identity(3, 3);
    const Mat idf = Mat::Identity(cfg.n_max, cfg.n_max);

    const Mat shift_op = params.shift(0) * q.pi_g + params.shift(1) * q.pi_e +
                         params.shift(2) * q.pi_f;
    const Cplx eps = params.epsilon();

    Mat h = params.omega_q * tensor(q.pi_e, idf) +
            (2.0 * params.omega_q + params.alpha_q) * tensor(q.pi_f, idf) +
            params.delta_rd * tensor(id3, fock.n) + tensor(shift_op, fock.n) -
            (eps * tensor(id3, fock.a_dag) + std::conj(eps) * tensor(id3, fock.a));

    LindbladModel model;
    model.hamiltonian = hermitize(h);

    auto add = [&](double rate, const Mat& op) {
        if (rate > 0.0) model.channels.push_back({rate, op});
    };
    add(params.kappa(), tensor(id3, fock.a));
    add(params.gamma_1_ge, tensor(q.sigma_ge, idf));
    add(params.gamma_1_gf, tensor(q.sigma_gf, idf));
    add(params.gamma_1_ef, tensor(q.sigma_ef, idf));
    add(0.5 * params.gamma_phi_ge, tensor(q.sigma_z_ge, idf));
    add(0.5 * params.gamma_phi_gf, tensor(q.sigma_z_gf, idf));
    add(0.5 * params.gamma_phi_ef, tensor(q.sigma_z_ef, idf));
    return model;
}

DensityMatrix qubit_decay_analytic(const QubitDecayParams& params, Cplx alpha, Cplx beta,
                                   double t) {
    params.validate();
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
        throw std::invalid_argument("qubit_decay_analytic: amplitudes not normalized");
    const double g1 = params.gamma_1, g2 = params.gamma_2();
    Mat rho(2, 2);
    rho(0, 0) = 1.0 + (std::norm(alpha) - 1.0) * std::exp(-g1 * t);
    rho(1, 1) = std::norm(beta) * std::exp(-g1 * t);
    rho(0, 1) = alpha * std::conj(beta) *
                std::exp(kI * params.omega_q_tilde * t) * std::exp(-g2 * t);
    rho(1, 0) = std::conj(rho(0, 1));
    return DensityMatrix(std::move(rho));
}

std::pair<double, double> ramsey_probabilities(double omega_d, double t_pi2,
                                               double delta_tilde, double gamma_2,
                                               double t_free) {
    if (t_pi2 < 0.0 || t_free < 0.0)
        throw std::invalid_argument("ramsey_probabilities: times must be >= 0");
    const double p_g =
        0.5 - 0.5 * std::cos(omega_d * t_pi2 + delta_tilde * t_free) * std::exp(-gamma_2 * t_free);
    return {p_g, 1.0 - p_g};
}

}  // namespace readout
