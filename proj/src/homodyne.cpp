#include "readout/homodyne.hpp"

#include <cmath>

#include "readout/rng.hpp"

namespace readout {

namespace {

const Mat kSigmaZ = [] {
    Mat m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}();

double purity(const Mat& rho) { return (rho * rho).trace().real(); }

void check_qubit(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw std::invalid_argument("qubit state must be 2x2");
}

}  // namespace

std::pair<DensityMatrix, double> kraus_update(const HomodyneConfig& cfg,
                                              const DensityMatrix& rho, double q) {
    cfg.validate();
    check_qubit(rho);
    const double qb = cfg.q_bar();
    const double eg = -(qb - q) * (qb - q);
    const double ee = -(qb + q) * (qb + q);

    // density from the unshifted weights (may underflow far in the tails)
    const double rho_gg = rho.mat(0, 0).real();
    const double rho_ee = rho.mat(1, 1).real();
    const double density =
        std::sqrt(2.0 / M_PI) * (std::exp(2.0 * eg) * rho_gg + std::exp(2.0 * ee) * rho_ee);

    // state update with the common exponential factored out
    const double shift = std::max(eg, ee);
    const double wg = std::exp(eg - shift);
    const double we = std::exp(ee - shift);
    Mat m(2, 2);
    m(0, 0) = wg * wg * rho.mat(0, 0);
    m(0, 1) = wg * we * rho.mat(0, 1);
    m(1, 0) = wg * we * rho.mat(1, 0);
    m(1, 1) = we * we * rho.mat(1, 1);
    const double norm = m(0, 0).real() + m(1, 1).real();
    if (norm <= 0.0) throw std::runtime_error("kraus_update: zero normalization");
    m /= norm;
    return {DensityMatrix(std::move(m)), density};
}

double sample_quadrature(const HomodyneConfig& cfg, const DensityMatrix& rho, double u,
                         double z) {
    check_qubit(rho);
    const double rho_gg = rho.mat(0, 0).real();
    const double mean = (u <= rho_gg) ? cfg.q_bar() : -cfg.q_bar();
    return mean + 0.5 * z;  // per-quadrature variance 1/4
}

DensityMatrix sme_step(const HomodyneConfig& cfg, const DensityMatrix& rho, double dw) {
    check_qubit(rho);
    const double km = cfg.k_m();
    const Mat det = km * (kSigmaZ * rho.mat * kSigmaZ - rho.mat);
    const Mat innov = std::sqrt(km) * measurement_superop(kSigmaZ, rho.mat);
    Mat m = hermitize(rho.mat + det * cfg.dt + innov * dw);
    m /= m.trace().real();
    return DensityMatrix(std::move(m));
}

double record_step(const HomodyneConfig& cfg, const DensityMatrix& rho, double dw) {
    check_qubit(rho);
    const double z = (rho.mat(0, 0) - rho.mat(1, 1)).real();
    return 2.0 * std::sqrt(cfg.k_m()) * z * cfg.dt + dw;
}

std::array<double, 3> bloch_step(const HomodyneConfig& cfg, const std::array<double, 3>& xyz,
                                 double dw) {
    const auto [x, y, z] = xyz;
    if (x * x + y * y + z * z > 1.0 + 1e-9)
        throw std::invalid_argument("bloch_step: vector outside the unit ball");
    const double km = cfg.k_m();
    const double sk = std::sqrt(km);
    return {x - 2.0 * km * x * cfg.dt - 2.0 * sk * x * z * dw,
            y - 2.0 * km * y * cfg.dt - 2.0 * sk * y * z * dw,
            z + 2.0 * sk * (1.0 - z * z) * dw};
}

namespace {

template <typename StepFn>
QubitTrajectory run_trajectory(const DensityMatrix& rho0, int n_steps, bool keep_series,
                               StepFn step) {
    QubitTrajectory out;
    DensityMatrix rho = rho0;
    if (keep_series) {
        out.z_series.reserve(size_t(n_steps) + 1);
        out.record.reserve(size_t(n_steps));
    }
    auto z_of = [](const DensityMatrix& r) { return (r.mat(0, 0) - r.mat(1, 1)).real(); };
    if (keep_series) out.z_series.push_back(z_of(rho));
    out.min_purity = out.max_purity = purity(rho.mat);
    for (int k = 0; k < n_steps; ++k) {
        double dy = 0.0;
        rho = step(rho, uint64_t(k), dy);
        const double p = purity(rho.mat);
        out.min_purity = std::min(out.min_purity, p);
        out.max_purity = std::max(out.max_purity, p);
        if (keep_series) {
            out.z_series.push_back(z_of(rho));
            out.record.push_back(dy);
        }
    }
    out.final_state = std::move(rho);
    return out;
}

}  // namespace

QubitTrajectory run_kraus_trajectory(const HomodyneConfig& cfg, const DensityMatrix& rho0,
                                     int n_steps, uint64_t traj_index, bool keep_series) {
    cfg.validate();
    return run_trajectory(rho0, n_steps, keep_series,
                          [&](const DensityMatrix& rho, uint64_t k, double& dy) {
                              const double zn = rng::normal(cfg.seed, traj_index, k);
                              const double u = rng::uniform(cfg.seed ^ 0x9e3779b97f4a7c15ull,
                                                            traj_index, k);
                              const double q = sample_quadrature(cfg, rho, u, zn);
                              dy = 2.0 * q * std::sqrt(cfg.dt);
                              return kraus_update(cfg, rho, q).first;
                          });
}

QubitTrajectory run_sme_trajectory(const HomodyneConfig& cfg, const DensityMatrix& rho0,
                                   int n_steps, uint64_t traj_index, bool keep_series) {
    cfg.validate();
    return run_trajectory(rho0, n_steps, keep_series,
                          [&](const DensityMatrix& rho, uint64_t k, double& dy) {
                              const double dw =
                                  rng::normal(cfg.seed, traj_index, k) * std::sqrt(cfg.dt);
                              dy = record_step(cfg, rho, dw);
                              return sme_step(cfg, rho, dw);
                          });
}

}  // namespace readout
