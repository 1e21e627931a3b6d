#ifndef READOUT_LINDBLAD_HPP
#define READOUT_LINDBLAD_HPP

#include <utility>
#include <vector>

#include "readout/operators.hpp"
#include "readout/params.hpp"

// Deterministic master-equation integration: generic Lindblad models, the
// full composite qutrit (x) cavity generator used as the brute-force oracle,
// and closed-form qubit benchmarks.

namespace readout {

struct LindbladChannel {
    double rate;  // 1/s, >= 0
    Mat op;
};

struct LindbladModel {
    Mat hamiltonian;  // angular-frequency units (H/hbar)
    std::vector<LindbladChannel> channels;

    Eigen::Index dim() const { return hamiltonian.rows(); }
    void validate() const;
};

/// drho/dt = -i[H, rho] + sum_mu k_mu D[L_mu] rho
Mat lindblad_rhs(const LindbladModel& model, const Mat& rho);

/// Fixed-step classical RK4 on the vectorized generator. Returns one state
/// per grid time; states are re-Hermitized after every internal step.
/// `steps_per_unit` overrides the step-size heuristic when positive.
std::vector<DensityMatrix> evolve_lindblad(const LindbladModel& model,
                                           const DensityMatrix& rho0,
                                           const std::vector<double>& t_grid,
                                           double step_scale = 1.0);

/// Thrown when the requested Fock truncation cannot hold the driven cavity
/// state. Silent truncation corrupts dephasing rates, so this is fatal
/// unless explicitly overridden.
struct TruncationError : GuardError {
    using GuardError::GuardError;
};

/// Composite rotating-frame generator: Hamiltonian
///   w_q |e><e| + (2 w_q + alpha_q)|f><f| + Delta_rd a^+a
///   + chi_qr (|e><e| + 2|f><f|) a^+a - (eps a^+ + eps^* a)
/// lifted to qutrit (x) Fock, with channels kappa D[a], the three gamma_1
/// decays and the three gamma_phi/2 pairwise dephasings.
LindbladModel build_composite_generator(const QutritCavityParams& params,
                                        const FockConfig& cfg,
                                        bool override_truncation_guard = false);

/// Closed-form free decay of a qubit prepared in alpha|g> + beta|e>.
DensityMatrix qubit_decay_analytic(const QubitDecayParams& params, Cplx alpha, Cplx beta,
                                   double t);

/// Ramsey fringe populations after (pi/2, free evolution T_free, pi/2).
std::pair<double, double> ramsey_probabilities(double omega_d, double t_pi2,
                                               double delta_tilde, double gamma_2,
                                               double t_free);

}  // namespace readout

#endif
