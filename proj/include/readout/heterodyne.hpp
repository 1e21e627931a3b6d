#ifndef READOUT_HETERODYNE_HPP
#define READOUT_HETERODYNE_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "readout/coherent.hpp"
#include "readout/operators.hpp"
#include "readout/params.hpp"

// Qutrit heterodyne stochastic master equation. The cavity is adiabatically
// eliminated: the deterministic amplitude path alpha_a(t) schedules the
// quadrature operators L_I(t), L_Q(t) and the measurement-induced dephasing,
// while the conditional qutrit state diffuses under two Wiener records.
//
// One trajectory step applies the deterministic effective-qutrit propagator
// followed by the normalized measurement factor
//   M = exp[ sqrt(eta kappa)(L_I dW_I + L_Q dW_Q)
//            + (2 eta kappa (<L_I>L_I + <L_Q>L_Q) - eta kappa (L_I^2+L_Q^2)) dt ],
// the finite-dt form of the heterodyne Kraus channel; expanding to O(dt)
// gives the diffusive SME drho = ... + sqrt(eta kappa) M[L_I] rho dW_I + ...
// At eta = 0 the update reduces to the unconditioned effective equation
// exactly.

namespace readout {

struct HeterodyneConfig {
    QutritCavityParams params;
    double phi_lo = 0.0;  // net demodulation phase, radians
    double eta = 0.0;     // total measurement efficiency in [0,1]
    double dt = 0.0;      // s
    int n_traj = 1;
    uint64_t seed = 0;
    double t_final = 0.0;  // s

    bool freeze_at_steady_state = false;  // schedule alpha(inf) instead of the transient
    CavityAmplitudes alpha0{};            // cavity amplitudes at t=0 (vacuum)
    int output_stride = 1;                // store every k-th sample
    int n_threads = 0;                    // 0 = hardware default

    int n_steps() const { return int(std::llround(t_final / dt)); }
    void validate() const;

    /// True when eta exceeds kappa_out/kappa (physically suspect; monitored).
    bool eta_above_geometric() const { return eta > params.eta_geom() + 1e-12; }
};

/// L_I = sum_a Re(alpha_a e^{-i phi}) Pi_a and the Im counterpart; both
/// Hermitian, diagonal in the energy basis, mutually commuting.
std::pair<Mat, Mat> quadrature_observables(const CavityAmplitudes& amps, double phi_lo);

/// Per-pair coefficients of the deterministic (unconditioned) part.
struct EffectiveStepRates {
    std::array<double, 3> gamma_1{};         // pair decays (ge, gf, ef)
    std::array<double, 3> coherence_rate{};  // gamma_1/2 + gamma_phi + Gamma_d per pair
    std::array<double, 3> omega_bar{};       // pair frequencies incl. ac-Stark shifts
};

EffectiveStepRates make_step_rates(const QutritCavityParams& p, const CavityAmplitudes& amps);

/// One diffusive update at frozen coefficients. dW must be Normal(0, dt);
/// enforces the step guard eta kappa max|beta|^2 dt <= 0.01.
DensityMatrix sme_step(const DensityMatrix& rho, const Mat& l_i, const Mat& l_q,
                       const EffectiveStepRates& rates, double eta, double kappa, double dt,
                       double dw_i, double dw_q);

/// Instantaneous records V = 2 sqrt(eta kappa) <L> + dW/dt for both
/// quadratures (same increments as the paired sme_step).
std::pair<double, double> record_step(const DensityMatrix& rho, const Mat& l_i, const Mat& l_q,
                                      double eta, double kappa, double dw_i, double dw_q,
                                      double dt);

/// One sample path. Stored samples sit on the strided grid
/// times[j] = j * stride * dt; `record_*[j]`/`wiener_*[j]` belong to the step
/// starting at times[j] (one fewer entry than times), and `cum_*[j]` is the
/// full-resolution integral of the record over [0, times[j]).
struct TrajectoryResult {
    std::vector<double> times;
    std::vector<Mat> states;
    std::vector<double> record_i, record_q;
    std::vector<double> wiener_i, wiener_q;
    std::vector<double> cum_i, cum_q;
    double min_eigenvalue = 1.0;  // smallest eigenvalue seen at stored samples
};

struct EnsembleResult {
    std::vector<double> times;     // stored grid
    std::vector<Mat> mean_states;  // ensemble average at stored times
    std::vector<TrajectoryResult> trajectories;
    bool eta_above_geometric = false;
};

/// n_traj independent reproducible paths; bit-identical for a fixed
/// (seed, config) under any thread count.
EnsembleResult run_ensemble(const HeterodyneConfig& cfg, const DensityMatrix& rho0);

/// S(rho) = -Tr(rho ln rho) in nats, eigenvalues clamped at zero.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace readout

#endif
