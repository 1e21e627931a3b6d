#ifndef READOUT_EFFECTIVE_HPP
#define READOUT_EFFECTIVE_HPP

#include <array>
#include <vector>

#include "readout/coherent.hpp"
#include "readout/operators.hpp"
#include "readout/params.hpp"

// Effective reduced qutrit master equation: population rate equations plus
// independently evolving coherences with measurement-induced dephasing.
//
// The diagonal follows dp_g = g1_ge p_e + g1_gf p_f etc.; each off-diagonal
// follows its own scalar ODE
//   rho_ge' = [i w_q - g1_ge/2 - gphi_ge + i chi alpha_g alpha_e^*] rho_ge
// (and the gf/ef analogues with their own frequencies). The three pair
// frequencies do not form a consistent level diagram; the coherences are
// deliberately evolved independently.

namespace readout {

enum class DephasingSource {
    transient,     // Gamma_d(t) along the solved amplitude path (default)
    steady_state,  // amplitudes frozen at alpha(inf)
};

struct EffectiveQutritModel {
    QutritCavityParams params;
    DephasingSource source = DephasingSource::transient;
    CavityAmplitudes alpha0{};  // cavity state at t=0 (vacuum by default)
};

/// 3x3 rate matrix R with dp/dt = R p (columns sum to zero).
Eigen::Matrix3d population_rate_matrix(const QutritCavityParams& p);

/// exp(R t), computed once per call; preserves the population sum exactly.
Eigen::Matrix3d population_propagator(const QutritCavityParams& p, double t);

/// Matrix-exponential solution of the rate equations on a grid.
std::vector<std::array<double, 3>> evolve_populations(const QutritCavityParams& p,
                                                      const std::array<double, 3>& p0,
                                                      const std::vector<double>& t_grid);

/// Full effective-qutrit evolution: rate-equation diagonal, scalar-ODE
/// off-diagonals (with instantaneous or steady-state dephasing).
std::vector<DensityMatrix> evolve_effective_state(const EffectiveQutritModel& model,
                                                  const DensityMatrix& rho0,
                                                  const std::vector<double>& t_grid);

}  // namespace readout

#endif
