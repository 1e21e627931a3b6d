#ifndef READOUT_SCENARIO_CONFIG_HPP
#define READOUT_SCENARIO_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "readout/heterodyne.hpp"
#include "readout/params.hpp"

// Scenario files are line-oriented `key = value` text with `#` comments.
// Frequencies and decay rates are cyclic megahertz (the kappa/2pi convention
// of the hardware literature); the loader multiplies by 2 pi once, here.
// Lifetimes are microseconds (0 disables the channel), times are
// nanoseconds/microseconds as named, and the drive amplitude is
// sqrt(photons per microsecond).

namespace readout::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    int schema_version = 1;

    // qutrit-cavity physics
    double omega_q_mhz = 0.0, alpha_q_mhz = 0.0;
    double chi_qr_mhz = 0.0, delta_rd_mhz = 0.0;
    double kappa_in_mhz = 0.0, kappa_out_mhz = 0.0, kappa_int_mhz = 0.0;
    double a_in_re = 0.0, a_in_im = 0.0;  // sqrt(photons/us)
    double t1_ge_us = 0.0, t1_gf_us = 0.0, t1_ef_us = 0.0;
    double tphi_ge_us = 0.0, tphi_gf_us = 0.0, tphi_ef_us = 0.0;

    // measurement chain
    double eta = 0.0;
    double phi_lo_deg = 0.0;

    // integration / ensemble
    double dt_ns = 1.0;
    double t_final_us = 1.0;
    int n_traj = 1;
    uint64_t seed = 0;
    int output_stride = 1;
    int n_threads = 0;
    bool steady_state = false;
    int save_trajectories = 3;
    std::string rho0 = "demo";  // g | e | f | mixed | demo
    double window_t0_us = 0.0, window_t1_us = 0.0;  // 0,0 = full span
    int n_max = 0;  // Fock truncation for composite checks; 0 = auto

    // command-specific grids
    int amplitudes_points = 401;
    double sweep_start_mhz = -3.0, sweep_stop_mhz = 3.0;
    int sweep_points = 121;
    double ramsey_omega_d_mhz = 0.0, ramsey_t_pi2_us = 0.0;
    double ramsey_delta_mhz = 1.0, ramsey_gamma2_per_us = 0.1;
    double ramsey_t_max_us = 10.0;
    int ramsey_points = 501;
    double filter_t_us = 1.0;
    int filter_cp_n = 2;
    double filter_omega_max_mhz = 8.0;
    int filter_points = 400;
    std::string filter_spectrum = "white";  // white | lorentzian
    double filter_s0_mhz = 1.0;
    double filter_omega_c_mhz = 1.0;

    static ScenarioConfig parse(std::istream& in);
    static ScenarioConfig parse_file(const std::string& path);

    /// Canonical key = value form; parse(serialize(c)) == c.
    std::string serialize() const;

    QutritCavityParams to_params() const;
    HeterodyneConfig to_heterodyne() const;
    DensityMatrix initial_state() const;

    void validate() const;
};

}  // namespace readout::cli

#endif
