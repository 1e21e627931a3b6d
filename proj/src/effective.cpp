#include "readout/effective.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace readout {

Eigen::Matrix3d population_rate_matrix(const QutritCavityParams& p) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
    r(0, 1) = p.gamma_1_ge;
    r(0, 2) = p.gamma_1_gf;
    r(1, 1) = -p.gamma_1_ge;
    r(1, 2) = p.gamma_1_ef;
    r(2, 2) = -(p.gamma_1_gf + p.gamma_1_ef);
    return r;
}

Eigen::Matrix3d population_propagator(const QutritCavityParams& p, double t) {
    return (population_rate_matrix(p) * t).exp();
}

std::vector<std::array<double, 3>> evolve_populations(const QutritCavityParams& p,
                                                      const std::array<double, 3>& p0,
                                                      const std::vector<double>& t_grid) {
    p.validate();
    for (double v : p0)
        if (v < -1e-12) throw std::invalid_argument("evolve_populations: negative population");
    if (std::abs(p0[0] + p0[1] + p0[2] - 1.0) > 1e-9)
        throw std::invalid_argument("evolve_populations: populations must sum to 1");

    const Eigen::Vector3d v0(p0[0], p0[1], p0[2]);
    std::vector<std::array<double, 3>> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        const Eigen::Vector3d v = population_propagator(p, t) * v0;
        out.push_back({v(0), v(1), v(2)});
    }
    return out;
}

std::vector<DensityMatrix> evolve_effective_state(const EffectiveQutritModel& model,
                                                  const DensityMatrix& rho0,
                                                  const std::vector<double>& t_grid) {
    const QutritCavityParams& p = model.params;
    p.validate();
    if (rho0.dim() != 3)
        throw std::invalid_argument("evolve_effective_state: state must be 3x3");

    // Off-diagonal envelopes: identical ODEs to the positive-P coherences
    // (gamma_2,ab = gamma_phi,ab + gamma_1,ab/2 matches the effective rates).
    CoherenceEnvelopes c0{rho0.mat(0, 1), rho0.mat(0, 2), rho0.mat(1, 2)};
    std::vector<CoherenceEnvelopes> envs;
    if (model.source == DephasingSource::steady_state) {
        // frozen amplitudes: coefficients constant, integrate exactly
        const CavityAmplitudes ss = steady_state_amplitudes(p);
        envs.reserve(t_grid.size());
        auto coeff = [&](int a, int b, double gamma, double bare) {
            const double dchi = p.shift(b) - p.shift(a);
            return kI * Cplx(bare) - Cplx(gamma) + kI * dchi * ss[a] * std::conj(ss[b]);
        };
        const Cplx mu_ge = coeff(0, 1, p.gamma_2(0, 1), p.omega_q);
        const Cplx mu_gf = coeff(0, 2, p.gamma_2(0, 2), 2.0 * p.omega_q + p.alpha_q);
        const Cplx mu_ef = coeff(1, 2, p.gamma_2(1, 2), p.omega_q + p.alpha_q);
        for (double t : t_grid)
            envs.push_back({c0.c_ge * std::exp(mu_ge * t), c0.c_gf * std::exp(mu_gf * t),
                            c0.c_ef * std::exp(mu_ef * t)});
    } else {
        const auto amps = evolve_amplitudes(p, model.alpha0, t_grid);
        envs = evolve_coherences(p, amps, c0, t_grid);
    }

    const auto pops = evolve_populations(
        p, {rho0.mat(0, 0).real(), rho0.mat(1, 1).real(), rho0.mat(2, 2).real()}, t_grid);

    std::vector<DensityMatrix> out;
    out.reserve(t_grid.size());
    for (size_t i = 0; i < t_grid.size(); ++i) {
        Mat m = Mat::Zero(3, 3);
        m(0, 0) = pops[i][0];
        m(1, 1) = pops[i][1];
        m(2, 2) = pops[i][2];
        m(0, 1) = envs[i].c_ge;
        m(0, 2) = envs[i].c_gf;
        m(1, 2) = envs[i].c_ef;
        m(1, 0) = std::conj(m(0, 1));
        m(2, 0) = std::conj(m(0, 2));
        m(2, 1) = std::conj(m(1, 2));
        out.push_back(DensityMatrix(std::move(m)));
    }
    return out;
}

}  // namespace readout
