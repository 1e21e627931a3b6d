#ifndef READOUT_COHERENT_HPP
#define READOUT_COHERENT_HPP

#include <array>
#include <vector>

#include "readout/operators.hpp"
#include "readout/params.hpp"

// Analytic positive-P reduction of the composite master equation: cavity
// amplitude trajectories, coherence envelopes, measurement/dephasing rates
// and reconstruction of the full qutrit (x) cavity state.

namespace readout {

/// Coherent-state amplitudes of the cavity entangled with |g>, |e>, |f>.
struct CavityAmplitudes {
    Cplx alpha_g{0.0, 0.0};
    Cplx alpha_e{0.0, 0.0};
    Cplx alpha_f{0.0, 0.0};

    Cplx operator[](int a) const {
        return a == 0 ? alpha_g : (a == 1 ? alpha_e : alpha_f);
    }
    Cplx beta(int a, int b) const { return (*this)[a] - (*this)[b]; }
};

/// Off-diagonal envelope functions; c_eg etc. are the implied conjugates
/// and are never stored.
struct CoherenceEnvelopes {
    Cplx c_ge{0.0, 0.0};
    Cplx c_gf{0.0, 0.0};
    Cplx c_ef{0.0, 0.0};
};

/// Signed instantaneous dephasing rates Gamma_d,ab and displaced-frame rates
/// Gamma_m,ab = kappa |beta_ab|^2. Gamma_d can be transiently negative; the
/// two coincide as Gamma_m = 2 Gamma_d only at steady state.
struct DephasingRates {
    double gamma_d_ge = 0.0, gamma_d_gf = 0.0, gamma_d_ef = 0.0;
    double gamma_m_ge = 0.0, gamma_m_gf = 0.0, gamma_m_ef = 0.0;

    double gamma_d(int a, int b) const {
        if (a == 0 && b == 1) return gamma_d_ge;
        if (a == 0 && b == 2) return gamma_d_gf;
        return gamma_d_ef;
    }
    double gamma_m(int a, int b) const {
        if (a == 0 && b == 1) return gamma_m_ge;
        if (a == 0 && b == 2) return gamma_m_gf;
        return gamma_m_ef;
    }
};

/// alpha_a(inf) = eps / (Delta_rd + shift_a - i kappa/2).
CavityAmplitudes steady_state_amplitudes(const QutritCavityParams& p);

/// Exact propagation of one amplitude from `alpha0` over time `t`:
/// alpha(t) = alpha_ss + (alpha0 - alpha_ss) e^{-i(Delta_a - i kappa/2) t}.
Cplx propagate_amplitude(const QutritCavityParams& p, int level, Cplx alpha0, double t);

/// Exponential-integrator solution on a time grid (no discretization error).
std::vector<CavityAmplitudes> evolve_amplitudes(const QutritCavityParams& p,
                                                const CavityAmplitudes& alpha0,
                                                const std::vector<double>& t_grid);

/// RK4 on the scalar envelope ODEs
///   c_ge' = i(w_q + i gamma_2,ge) c_ge + i chi alpha_g alpha_e^* c_ge, etc.
/// Amplitudes must be supplied on the same grid; substage values are filled
/// in with the exact amplitude propagator.
std::vector<CoherenceEnvelopes> evolve_coherences(const QutritCavityParams& p,
                                                  const std::vector<CavityAmplitudes>& amps,
                                                  const CoherenceEnvelopes& c0,
                                                  const std::vector<double>& t_grid);

DephasingRates dephasing_rates(const CavityAmplitudes& amps, const QutritCavityParams& p);

/// Closed-form steady-state rates; satisfies gamma_m = 2 gamma_d exactly.
DephasingRates steady_state_dephasing(const QutritCavityParams& p);

/// Thermal photon-number variance: N(t) = N_bar + (N0 - N_bar) e^{-kappa t}.
double thermal_variance(double n_bar, double kappa, double n0, double t);

/// Composite qutrit (x) Fock state from populations, amplitudes and
/// envelopes: coherent-state projectors on the diagonal and
/// c_ab/<alpha_b|alpha_a> weighted |alpha_a><alpha_b| off the diagonal.
DensityMatrix reconstruct_composite_state(const std::array<double, 3>& populations,
                                          const CavityAmplitudes& amps,
                                          const CoherenceEnvelopes& envs,
                                          const FockConfig& cfg);

}  // namespace readout

#endif
