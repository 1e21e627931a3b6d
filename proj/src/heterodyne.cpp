#include "readout/heterodyne.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "readout/effective.hpp"
#include "readout/rng.hpp"

namespace readout {

void HeterodyneConfig::validate() const {
    params.validate();
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("HeterodyneConfig: eta must be in [0,1]");
    if (dt <= 0.0 || t_final <= 0.0)
        throw std::invalid_argument("HeterodyneConfig: dt and t_final must be > 0");
    if (n_traj < 1) throw std::invalid_argument("HeterodyneConfig: n_traj must be >= 1");
    if (output_stride < 1)
        throw std::invalid_argument("HeterodyneConfig: output_stride must be >= 1");
    if (n_steps() < 1 || n_steps() % output_stride != 0)
        throw std::invalid_argument(
            "HeterodyneConfig: t_final/dt must be a positive multiple of output_stride");
}

std::pair<Mat, Mat> quadrature_observables(const CavityAmplitudes& amps, double phi_lo) {
    const Cplx rot = std::exp(-kI * phi_lo);
    Mat l_i = Mat::Zero(3, 3), l_q = Mat::Zero(3, 3);
    for (int a = 0; a < 3; ++a) {
        const Cplx r = amps[a] * rot;
        l_i(a, a) = r.real();
        l_q(a, a) = r.imag();
    }
    return {l_i, l_q};
}

EffectiveStepRates make_step_rates(const QutritCavityParams& p, const CavityAmplitudes& amps) {
    EffectiveStepRates r;
    const DephasingRates d = dephasing_rates(amps, p);
    const int pa[3] = {0, 0, 1}, pb[3] = {1, 2, 2};
    const double bare[3] = {p.omega_q, 2.0 * p.omega_q + p.alpha_q, p.omega_q + p.alpha_q};
    for (int k = 0; k < 3; ++k) {
        const int a = pa[k], b = pb[k];
        r.gamma_1[size_t(k)] = p.gamma_1(a, b);
        r.coherence_rate[size_t(k)] =
            0.5 * p.gamma_1(a, b) + p.gamma_phi(a, b) + d.gamma_d(a, b);
        const double dchi = p.shift(b) - p.shift(a);
        r.omega_bar[size_t(k)] =
            bare[k] + dchi * std::real(amps[a] * std::conj(amps[b]));
    }
    return r;
}

namespace {

// Conditional state in its natural coordinates: real populations plus the
// three upper coherences (ge, gf, ef).
struct PairState {
    std::array<double, 3> p{};
    std::array<Cplx, 3> c{};

    static PairState from(const Mat& rho) {
        PairState s;
        s.p = {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
        s.c = {rho(0, 1), rho(0, 2), rho(1, 2)};
        return s;
    }
    Mat to_mat() const {
        Mat m(3, 3);
        m(0, 0) = p[0];
        m(1, 1) = p[1];
        m(2, 2) = p[2];
        m(0, 1) = c[0];
        m(0, 2) = c[1];
        m(1, 2) = c[2];
        m(1, 0) = std::conj(c[0]);
        m(2, 0) = std::conj(c[1]);
        m(2, 1) = std::conj(c[2]);
        return m;
    }
};

struct DiagObservables {
    std::array<double, 3> ibar{}, qbar{};
};

DiagObservables diag_observables(const CavityAmplitudes& amps, double phi_lo) {
    const Cplx rot = std::exp(-kI * phi_lo);
    DiagObservables o;
    for (int a = 0; a < 3; ++a) {
        const Cplx r = amps[a] * rot;
        o.ibar[size_t(a)] = r.real();
        o.qbar[size_t(a)] = r.imag();
    }
    return o;
}

// Measurement factor m_a for level a; applied as a congruence
// rho' = M rho M / Tr(M rho M) with M = diag(m).
std::array<double, 3> kraus_factors(const DiagObservables& o, const std::array<double, 3>& p,
                                    double eta, double kappa, double dt, double dw_i,
                                    double dw_q) {
    const double ek = eta * kappa;
    const double sek = std::sqrt(ek);
    const double li_mean = o.ibar[0] * p[0] + o.ibar[1] * p[1] + o.ibar[2] * p[2];
    const double lq_mean = o.qbar[0] * p[0] + o.qbar[1] * p[1] + o.qbar[2] * p[2];
    std::array<double, 3> m;
    for (int a = 0; a < 3; ++a) {
        const double ia = o.ibar[size_t(a)], qa = o.qbar[size_t(a)];
        const double expo = sek * (ia * dw_i + qa * dw_q) +
                            (2.0 * ek * (li_mean * ia + lq_mean * qa) -
                             ek * (ia * ia + qa * qa)) *
                                dt;
        m[size_t(a)] = std::exp(expo);
    }
    return m;
}

void apply_kraus(PairState& s, const std::array<double, 3>& m) {
    double trace = 0.0;
    for (int a = 0; a < 3; ++a) {
        s.p[size_t(a)] *= m[size_t(a)] * m[size_t(a)];
        trace += s.p[size_t(a)];
    }
    s.c[0] *= m[0] * m[1];
    s.c[1] *= m[0] * m[2];
    s.c[2] *= m[1] * m[2];
    for (auto& v : s.p) v /= trace;
    for (auto& v : s.c) v /= trace;
}

// Precomputed per-step deterministic data shared by all trajectories.
struct DriftSchedule {
    int n_steps = 0;
    double dt = 0.0;
    Eigen::Matrix3d pop_step;                  // exp(R dt)
    std::vector<std::array<Cplx, 3>> coh_mul;  // per-step coherence multipliers
    std::vector<DiagObservables> obs;          // L_I/L_Q diagonals at step starts
    double max_guard = 0.0;                    // max eta kappa |beta|^2 dt over the run
};

Cplx envelope_mu(const QutritCavityParams& p, int a, int b, const CavityAmplitudes& amps) {
    const double bare = (a == 0 && b == 1) ? p.omega_q
                        : (a == 0 && b == 2) ? (2.0 * p.omega_q + p.alpha_q)
                                             : (p.omega_q + p.alpha_q);
    const double dchi = p.shift(b) - p.shift(a);
    return kI * Cplx(bare) - Cplx(p.gamma_2(a, b)) + kI * dchi * amps[a] * std::conj(amps[b]);
}

DriftSchedule build_schedule(const HeterodyneConfig& cfg) {
    const QutritCavityParams& p = cfg.params;
    DriftSchedule sch;
    sch.n_steps = cfg.n_steps();
    sch.dt = cfg.dt;
    sch.pop_step = population_propagator(p, cfg.dt);
    sch.coh_mul.resize(size_t(sch.n_steps));
    sch.obs.resize(size_t(sch.n_steps) + 1);

    const int pa[3] = {0, 0, 1}, pb[3] = {1, 2, 2};
    const double ek = cfg.eta * p.kappa();

    auto amps_at = [&](double t) -> CavityAmplitudes {
        if (cfg.freeze_at_steady_state) return steady_state_amplitudes(p);
        return {propagate_amplitude(p, 0, cfg.alpha0.alpha_g, t),
                propagate_amplitude(p, 1, cfg.alpha0.alpha_e, t),
                propagate_amplitude(p, 2, cfg.alpha0.alpha_f, t)};
    };

    CavityAmplitudes a0 = amps_at(0.0);
    for (int k = 0; k <= sch.n_steps; ++k) {
        const double t = k * cfg.dt;
        const CavityAmplitudes ak = (k == 0) ? a0 : amps_at(t);
        sch.obs[size_t(k)] = diag_observables(ak, cfg.phi_lo);
        for (int pair = 0; pair < 3; ++pair) {
            const double b2 = std::norm(ak.beta(pa[pair], pb[pair]));
            sch.max_guard = std::max(sch.max_guard, ek * b2 * cfg.dt);
        }
        if (k == sch.n_steps) break;

        // RK4 multiplier of y' = mu(t) y over [t, t+dt], subdivided so the
        // fastest coefficient stays inside the stability region
        double pole_scale = 0.0;
        for (int lvl = 0; lvl < 3; ++lvl)
            pole_scale = std::max(pole_scale, std::abs(Cplx(p.delta_rd + p.shift(lvl),
                                                            -0.5 * p.kappa())));
        for (int pair = 0; pair < 3; ++pair) {
            const int a = pa[pair], b = pb[pair];
            const double mu_scale =
                std::max({std::abs(envelope_mu(p, a, b, ak)),
                          std::abs(envelope_mu(p, a, b, amps_at(t + cfg.dt))), pole_scale});
            const int n_sub = std::max(1, int(std::ceil(cfg.dt * mu_scale / 0.05)));
            const double h = cfg.dt / n_sub;
            Cplx mul = 1.0;
            for (int s = 0; s < n_sub; ++s) {
                const Cplx m0 = envelope_mu(p, a, b, amps_at(t + s * h));
                const Cplx mh = envelope_mu(p, a, b, amps_at(t + (s + 0.5) * h));
                const Cplx m1 = envelope_mu(p, a, b, amps_at(t + (s + 1.0) * h));
                if (m0 == mh && mh == m1) {  // frozen coefficient: exact step
                    mul *= std::exp(m0 * h);
                    continue;
                }
                const Cplx k1 = m0;
                const Cplx k2 = mh * (1.0 + 0.5 * h * k1);
                const Cplx k3 = mh * (1.0 + 0.5 * h * k2);
                const Cplx k4 = m1 * (1.0 + h * k3);
                mul *= 1.0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            sch.coh_mul[size_t(k)][size_t(pair)] = mul;
        }
    }
    return sch;
}

void apply_drift(PairState& s, const DriftSchedule& sch, int k) {
    const Eigen::Vector3d pv =
        sch.pop_step * Eigen::Vector3d(s.p[0], s.p[1], s.p[2]);
    s.p = {pv(0), pv(1), pv(2)};
    for (int pair = 0; pair < 3; ++pair)
        s.c[size_t(pair)] *= sch.coh_mul[size_t(k)][size_t(pair)];
}

double min_eigenvalue3(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    return es.eigenvalues().minCoeff();
}

TrajectoryResult run_one(const HeterodyneConfig& cfg, const DriftSchedule& sch,
                         const PairState& s0, uint64_t traj_index) {
    const double ek = cfg.eta * cfg.params.kappa();
    const double sek2 = 2.0 * std::sqrt(ek);
    const double sqdt = std::sqrt(cfg.dt);
    const int stride = cfg.output_stride;
    const int n_stored = sch.n_steps / stride;

    TrajectoryResult out;
    out.times.reserve(size_t(n_stored) + 1);
    out.states.reserve(size_t(n_stored) + 1);
    out.record_i.reserve(size_t(n_stored));
    out.record_q.reserve(size_t(n_stored));
    out.wiener_i.reserve(size_t(n_stored));
    out.wiener_q.reserve(size_t(n_stored));
    out.cum_i.reserve(size_t(n_stored) + 1);
    out.cum_q.reserve(size_t(n_stored) + 1);

    PairState s = s0;
    double cum_i = 0.0, cum_q = 0.0;

    auto store_state = [&](int k) {
        const Mat m = s.to_mat();
        out.times.push_back(k * cfg.dt);
        out.states.push_back(m);
        out.cum_i.push_back(cum_i);
        out.cum_q.push_back(cum_q);
        out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue3(m));
    };
    store_state(0);

    for (int k = 0; k < sch.n_steps; ++k) {
        const auto [g_i, g_q] = rng::normal_pair(cfg.seed, traj_index, uint64_t(k));
        const double dw_i = g_i * sqdt, dw_q = g_q * sqdt;

        const DiagObservables& o = sch.obs[size_t(k)];
        const double li_mean = o.ibar[0] * s.p[0] + o.ibar[1] * s.p[1] + o.ibar[2] * s.p[2];
        const double lq_mean = o.qbar[0] * s.p[0] + o.qbar[1] * s.p[1] + o.qbar[2] * s.p[2];
        const double v_i = sek2 * li_mean + dw_i / cfg.dt;
        const double v_q = sek2 * lq_mean + dw_q / cfg.dt;
        cum_i += v_i * cfg.dt;
        cum_q += v_q * cfg.dt;

        if (k % stride == 0) {
            out.record_i.push_back(v_i);
            out.record_q.push_back(v_q);
            out.wiener_i.push_back(dw_i);
            out.wiener_q.push_back(dw_q);
        }

        apply_drift(s, sch, k);
        if (cfg.eta > 0.0)
            apply_kraus(s, kraus_factors(o, s.p, cfg.eta, cfg.params.kappa(), cfg.dt, dw_i,
                                         dw_q));

        if ((k + 1) % stride == 0) store_state(k + 1);
    }
    return out;
}

}  // namespace

DensityMatrix sme_step(const DensityMatrix& rho, const Mat& l_i, const Mat& l_q,
                       const EffectiveStepRates& rates, double eta, double kappa, double dt,
                       double dw_i, double dw_q) {
    if (rho.dim() != 3 || l_i.rows() != 3 || l_q.rows() != 3)
        throw std::invalid_argument("sme_step: qutrit operators must be 3x3");

    // step guard from the quadrature separations
    double max_b2 = 0.0;
    const int pa[3] = {0, 0, 1}, pb[3] = {1, 2, 2};
    for (int k = 0; k < 3; ++k) {
        const double di = (l_i(pa[k], pa[k]) - l_i(pb[k], pb[k])).real();
        const double dq = (l_q(pa[k], pa[k]) - l_q(pb[k], pb[k])).real();
        max_b2 = std::max(max_b2, di * di + dq * dq);
    }
    if (eta * kappa * max_b2 * dt > 0.01)
        throw GuardError("sme_step: diffusive step guard violated");

    PairState s = PairState::from(rho.mat);

    // deterministic part at frozen coefficients
    QutritCavityParams pr;  // rate matrix only needs the gamma_1 triple
    pr.gamma_1_ge = rates.gamma_1[0];
    pr.gamma_1_gf = rates.gamma_1[1];
    pr.gamma_1_ef = rates.gamma_1[2];
    const Eigen::Matrix3d e = population_propagator(pr, dt);
    const Eigen::Vector3d pv = e * Eigen::Vector3d(s.p[0], s.p[1], s.p[2]);
    s.p = {pv(0), pv(1), pv(2)};
    for (int k = 0; k < 3; ++k)
        s.c[size_t(k)] *= std::exp((kI * rates.omega_bar[size_t(k)] -
                                    Cplx(rates.coherence_rate[size_t(k)])) *
                                   dt);

    if (eta > 0.0) {
        DiagObservables o;
        for (int a = 0; a < 3; ++a) {
            o.ibar[size_t(a)] = l_i(a, a).real();
            o.qbar[size_t(a)] = l_q(a, a).real();
        }
        apply_kraus(s, kraus_factors(o, s.p, eta, kappa, dt, dw_i, dw_q));
    }
    return DensityMatrix(s.to_mat());
}

std::pair<double, double> record_step(const DensityMatrix& rho, const Mat& l_i, const Mat& l_q,
                                      double eta, double kappa, double dw_i, double dw_q,
                                      double dt) {
    const double sek2 = 2.0 * std::sqrt(eta * kappa);
    const double li_mean = (l_i * rho.mat).trace().real();
    const double lq_mean = (l_q * rho.mat).trace().real();
    return {sek2 * li_mean + dw_i / dt, sek2 * lq_mean + dw_q / dt};
}

EnsembleResult run_ensemble(const HeterodyneConfig& cfg, const DensityMatrix& rho0) {
    cfg.validate();
    if (rho0.dim() != 3) throw std::invalid_argument("run_ensemble: state must be 3x3");

    const DriftSchedule sch = build_schedule(cfg);
    if (sch.max_guard > 0.01)
        throw GuardError(
            "run_ensemble: diffusive step guard eta*kappa*|beta|^2*dt <= 0.01 violated");

    const PairState s0 = PairState::from(rho0.mat);

    EnsembleResult result;
    result.eta_above_geometric = cfg.eta_above_geometric();
    result.trajectories.resize(size_t(cfg.n_traj));

    int n_threads = cfg.n_threads > 0
                        ? cfg.n_threads
                        : int(std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
    n_threads = std::min(n_threads, cfg.n_traj);

    auto worker = [&](int first, int last) {
        for (int t = first; t < last; ++t)
            result.trajectories[size_t(t)] = run_one(cfg, sch, s0, uint64_t(t));
    };
    if (n_threads <= 1) {
        worker(0, cfg.n_traj);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (cfg.n_traj + n_threads - 1) / n_threads;
        for (int i = 0; i < n_threads; ++i) {
            const int first = i * chunk;
            const int last = std::min(cfg.n_traj, first + chunk);
            if (first < last) pool.emplace_back(worker, first, last);
        }
        for (auto& th : pool) th.join();
    }

    // deterministic reduction in trajectory order
    const size_t n_stored = result.trajectories.front().times.size();
    result.times = result.trajectories.front().times;
    result.mean_states.assign(n_stored, Mat::Zero(3, 3));
    for (const auto& traj : result.trajectories)
        for (size_t j = 0; j < n_stored; ++j) result.mean_states[j] += traj.states[j];
    for (auto& m : result.mean_states) m /= double(cfg.n_traj);
    return result;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(rho.mat));
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

}  // namespace readout
