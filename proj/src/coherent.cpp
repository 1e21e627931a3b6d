#include "readout/coherent.hpp"

#include <cmath>
#include <stdexcept>

namespace readout {

namespace {

Cplx cavity_pole(const QutritCavityParams& p, int level) {
    // lambda_a with alpha' = lambda alpha + i eps, lambda = -i(Delta_a - i kappa/2)
    return -kI * (Cplx(p.delta_rd + p.shift(level)) - kI * 0.5 * p.kappa());
}

Cplx steady_amp(const QutritCavityParams& p, int level) {
    const Cplx denom = Cplx(p.delta_rd + p.shift(level)) - kI * 0.5 * p.kappa();
    if (std::abs(denom) == 0.0)
        throw std::invalid_argument("steady_state_amplitudes: resonant lossless divide");
    return p.epsilon() / denom;
}

void check_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
    if (t_grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("time grid must be strictly ascending");
}

}  // namespace

CavityAmplitudes steady_state_amplitudes(const QutritCavityParams& p) {
    p.validate();
    return {steady_amp(p, 0), steady_amp(p, 1), steady_amp(p, 2)};
}

Cplx propagate_amplitude(const QutritCavityParams& p, int level, Cplx alpha0, double t) {
    const Cplx lambda = cavity_pole(p, level);
    if (std::abs(lambda) == 0.0) {
        // undamped resonant limit: alpha(t) = alpha0 + i eps t
        return alpha0 + kI * p.epsilon() * t;
    }
    const Cplx ss = -kI * p.epsilon() / lambda;
    return ss + (alpha0 - ss) * std::exp(lambda * t);
}

std::vector<CavityAmplitudes> evolve_amplitudes(const QutritCavityParams& p,
                                                const CavityAmplitudes& alpha0,
                                                const std::vector<double>& t_grid) {
    p.validate();
    check_grid(t_grid);
    std::vector<CavityAmplitudes> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        out.push_back({propagate_amplitude(p, 0, alpha0.alpha_g, t),
                       propagate_amplitude(p, 1, alpha0.alpha_e, t),
                       propagate_amplitude(p, 2, alpha0.alpha_f, t)});
    }
    return out;
}

namespace {

// Complex coefficient of the pair coherence ODE, c_ab' = mu_ab(t) c_ab, with
// gamma the total non-measurement rate for the pair (gamma_2 here; the
// effective qutrit model reuses this with the same value by definition).
Cplx envelope_coeff(const QutritCavityParams& p, int a, int b, const CavityAmplitudes& amps,
                    double gamma) {
    const double bare =
        (a == 0 && b == 1) ? p.omega_q
        : (a == 0 && b == 2) ? (2.0 * p.omega_q + p.alpha_q)
                             : (p.omega_q + p.alpha_q);
    const double dchi = p.shift(b) - p.shift(a);
    return kI * Cplx(bare) - Cplx(gamma) + kI * dchi * amps[a] * std::conj(amps[b]);
}

}  // namespace

std::vector<CoherenceEnvelopes> evolve_coherences(const QutritCavityParams& p,
                                                  const std::vector<CavityAmplitudes>& amps,
                                                  const CoherenceEnvelopes& c0,
                                                  const std::vector<double>& t_grid) {
    p.validate();
    check_grid(t_grid);
    if (amps.size() != t_grid.size())
        throw std::invalid_argument("evolve_coherences: amplitude/grid size mismatch");

    std::vector<CoherenceEnvelopes> out;
    out.reserve(t_grid.size());
    out.push_back(c0);

    const double pairs[3][3] = {{0, 1, p.gamma_2(0, 1)},
                                {0, 2, p.gamma_2(0, 2)},
                                {1, 2, p.gamma_2(1, 2)}};

    CoherenceEnvelopes c = c0;
    for (size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const CavityAmplitudes& a0 = amps[i - 1];

        // subdivide so both the coefficient magnitude and its variation rate
        // (set by the cavity poles) stay well inside the RK4 accuracy region
        double scale = 0.0;
        for (int k = 0; k < 3; ++k) {
            const int a = int(pairs[k][0]), b = int(pairs[k][1]);
            scale = std::max(scale, std::abs(envelope_coeff(p, a, b, a0, pairs[k][2])));
            scale = std::max(scale,
                             std::abs(envelope_coeff(p, a, b, amps[i], pairs[k][2])));
        }
        for (int lvl = 0; lvl < 3; ++lvl)
            scale = std::max(scale, std::abs(Cplx(p.delta_rd + p.shift(lvl),
                                                  -0.5 * p.kappa())));
        const int n_sub = std::max(1, int(std::ceil(span * scale / 0.05)));
        const double h = span / n_sub;

        auto amps_at = [&](double offset) {
            return CavityAmplitudes{propagate_amplitude(p, 0, a0.alpha_g, offset),
                                    propagate_amplitude(p, 1, a0.alpha_e, offset),
                                    propagate_amplitude(p, 2, a0.alpha_f, offset)};
        };

        for (int s = 0; s < n_sub; ++s) {
            const CavityAmplitudes as0 = amps_at(s * h);
            const CavityAmplitudes ash = amps_at((s + 0.5) * h);
            const CavityAmplitudes as1 = amps_at((s + 1.0) * h);
            Cplx* slots[3] = {&c.c_ge, &c.c_gf, &c.c_ef};
            for (int k = 0; k < 3; ++k) {
                const int a = int(pairs[k][0]), b = int(pairs[k][1]);
                const double g = pairs[k][2];
                const Cplx m0 = envelope_coeff(p, a, b, as0, g);
                const Cplx mh = envelope_coeff(p, a, b, ash, g);
                const Cplx m1 = envelope_coeff(p, a, b, as1, g);
                const Cplx y = *slots[k];
                if (m0 == mh && mh == m1) {  // frozen coefficient: exact step
                    *slots[k] = y * std::exp(m0 * h);
                    continue;
                }
                const Cplx k1 = m0 * y;
                const Cplx k2 = mh * (y + 0.5 * h * k1);
                const Cplx k3 = mh * (y + 0.5 * h * k2);
                const Cplx k4 = m1 * (y + h * k3);
                *slots[k] = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        out.push_back(c);
    }
    return out;
}

DephasingRates dephasing_rates(const CavityAmplitudes& amps, const QutritCavityParams& p) {
    DephasingRates r;
    auto gd = [&](int a, int b) {
        return (p.shift(b) - p.shift(a)) * std::imag(amps[a] * std::conj(amps[b]));
    };
    const double kappa = p.kappa();
    r.gamma_d_ge = gd(0, 1);
    r.gamma_d_gf = gd(0, 2);
    r.gamma_d_ef = gd(1, 2);
    r.gamma_m_ge = kappa * std::norm(amps.beta(0, 1));
    r.gamma_m_gf = kappa * std::norm(amps.beta(0, 2));
    r.gamma_m_ef = kappa * std::norm(amps.beta(1, 2));
    return r;
}

DephasingRates steady_state_dephasing(const QutritCavityParams& p) {
    const CavityAmplitudes ss = steady_state_amplitudes(p);  // shares the divide check
    (void)ss;
    // beta_ab(inf) = -eps (shift_b - shift_a) / (D_a D_b) gives
    //   Gamma_m(inf) = kappa |eps|^2 dchi^2 / (|D_a|^2 |D_b|^2).
    // Gamma_d is evaluated through the pole product D_a conj(D_b) instead of
    // the pre-divided amplitudes, which keeps its one cancellation explicit
    // and the rate accurate to ~(Delta/dchi) eps.
    DephasingRates r;
    auto pole = [&](int a) {
        return Cplx(p.delta_rd + p.shift(a), -0.5 * p.kappa());
    };
    auto gm = [&](int a, int b) {
        const double dchi = p.shift(b) - p.shift(a);
        const Cplx beta = -p.epsilon() * dchi / (pole(a) * pole(b));
        return p.kappa() * std::norm(beta);
    };
    auto gd = [&](int a, int b) {
        const double dchi = p.shift(b) - p.shift(a);
        const Cplx prod = pole(a) * std::conj(pole(b));
        return -dchi * std::norm(p.epsilon()) * prod.imag() / std::norm(prod);
    };
    r.gamma_m_ge = gm(0, 1);
    r.gamma_m_gf = gm(0, 2);
    r.gamma_m_ef = gm(1, 2);
    r.gamma_d_ge = gd(0, 1);
    r.gamma_d_gf = gd(0, 2);
    r.gamma_d_ef = gd(1, 2);
    return r;
}

double thermal_variance(double n_bar, double kappa, double n0, double t) {
    if (n_bar < 0.0 || n0 < 0.0)
        throw std::invalid_argument("thermal_variance: photon numbers must be >= 0");
    return n_bar + (n0 - n_bar) * std::exp(-kappa * t);
}

DensityMatrix reconstruct_composite_state(const std::array<double, 3>& populations,
                                          const CavityAmplitudes& amps,
                                          const CoherenceEnvelopes& envs,
                                          const FockConfig& cfg) {
    cfg.validate();
    const double psum = populations[0] + populations[1] + populations[2];
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("reconstruct_composite_state: populations must sum to 1");

    const Vec ket[3] = {coherent_vector(amps.alpha_g, cfg), coherent_vector(amps.alpha_e, cfg),
                        coherent_vector(amps.alpha_f, cfg)};
    const int d = cfg.n_max;
    Mat rho = Mat::Zero(3 * d, 3 * d);

    auto block = [&](int a, int b) { return rho.block(a * d, b * d, d, d); };
    for (int a = 0; a < 3; ++a)
        block(a, a) = populations[size_t(a)] * (ket[a] * ket[a].adjoint());

    const Cplx cs[3] = {envs.c_ge, envs.c_gf, envs.c_ef};
    const int pair_a[3] = {0, 0, 1}, pair_b[3] = {1, 2, 2};
    for (int k = 0; k < 3; ++k) {
        const int a = pair_a[k], b = pair_b[k];
        const Cplx overlap = coherent_overlap(amps[b], amps[a]);  // <alpha_b|alpha_a>
        if (std::abs(overlap) == 0.0)
            throw std::runtime_error("reconstruct_composite_state: vanishing coherent overlap");
        const Mat upper = (cs[k] / overlap) * (ket[a] * ket[b].adjoint());
        block(a, b) = upper;
        block(b, a) = upper.adjoint();
    }
    return DensityMatrix(std::move(rho));
}

}  // namespace readout
