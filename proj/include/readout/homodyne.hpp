#ifndef READOUT_HOMODYNE_HPP
#define READOUT_HOMODYNE_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "readout/operators.hpp"

// Dispersive qubit measurement via homodyne detection: the finite-dt Kraus
// channel, its diffusive-limit stochastic master equation, Bloch-component
// SDEs and the measurement record.
//
// sigma_z = |g><g| - |e><e| (eigenvalue +1 on the ground state), so
// <sigma_z> = rho_gg - rho_ee and E[dy] = +2 sqrt(k_m) dt for |g>.

namespace readout {

struct HomodyneConfig {
    double chi = 0.0;    // dispersive shift, rad/s
    double kappa = 0.0;  // total cavity decay, 1/s
    double n_bar = 0.0;  // mean intracavity photons
    double dt = 0.0;     // integrator step, s
    uint64_t seed = 0;

    double phi_chi() const { return std::atan2(kappa, 2.0 * chi); }
    double k_m() const {  // measurement strength kappa n_bar sin^2(phi_chi)
        const double s = std::sin(phi_chi());
        return kappa * n_bar * s * s;
    }
    double q_bar() const { return std::sqrt(k_m() * dt); }

    void validate() const {
        if (kappa < 0.0 || n_bar < 0.0 || dt <= 0.0)
            throw std::invalid_argument("HomodyneConfig: kappa, n_bar >= 0 and dt > 0 required");
        if (k_m() * dt > 0.01)
            throw std::invalid_argument("HomodyneConfig: diffusive limit needs k_m*dt <= 0.01");
    }
};

/// POVM update for one measured quadrature sample q:
///   K_q = N [ e^{-(q_bar-q)^2} |g><g| + e^{-(q_bar+q)^2} |e><e| ],
/// returns the normalized post-measurement state and the probability density
/// of q (two-Gaussian mixture, per-quadrature variance 1/4).
std::pair<DensityMatrix, double> kraus_update(const HomodyneConfig& cfg,
                                              const DensityMatrix& rho, double q);

/// Draw q from the exact conditional mixture given (u, z) with u uniform on
/// (0,1] and z standard normal: branch g with probability rho_gg, then
/// q = +-q_bar + z/2.
double sample_quadrature(const HomodyneConfig& cfg, const DensityMatrix& rho, double u,
                         double z);

/// Euler-Maruyama step of the diffusive SME
///   drho = k_m (sz rho sz - rho) dt + sqrt(k_m) M[sz] rho dW,
/// re-Hermitized and renormalized.
DensityMatrix sme_step(const HomodyneConfig& cfg, const DensityMatrix& rho, double dw);

/// Record increment dy = 2 sqrt(k_m) <sigma_z> dt + dW (same dW as the
/// paired sme_step).
double record_step(const HomodyneConfig& cfg, const DensityMatrix& rho, double dw);

/// Euler-Maruyama update of the Bloch components
///   dx = -2 k_m x dt - 2 sqrt(k_m) x z dW   (same for y)
///   dz = 2 sqrt(k_m) (1 - z^2) dW
std::array<double, 3> bloch_step(const HomodyneConfig& cfg, const std::array<double, 3>& xyz,
                                 double dw);

struct QubitTrajectory {
    DensityMatrix final_state;
    std::vector<double> z_series;  // <sigma_z> at every step (index 0 = t=0)
    std::vector<double> record;    // per-step record increments
    double min_purity = 1.0;
    double max_purity = 1.0;
};

/// Trajectory from the exact finite-dt Kraus chain, with q drawn from the
/// true conditional density. Preserves purity and the z-martingale exactly.
QubitTrajectory run_kraus_trajectory(const HomodyneConfig& cfg, const DensityMatrix& rho0,
                                     int n_steps, uint64_t traj_index,
                                     bool keep_series = false);

/// Trajectory from the Euler-Maruyama SME with Normal(0,dt) increments.
QubitTrajectory run_sme_trajectory(const HomodyneConfig& cfg, const DensityMatrix& rho0,
                                   int n_steps, uint64_t traj_index,
                                   bool keep_series = false);

}  // namespace readout

#endif
