#ifndef READOUT_PARAMS_HPP
#define READOUT_PARAMS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace readout {

/// Physical parameters of the driven qutrit-cavity system. All frequencies
/// and rates are angular (rad/s, 1/s); the CLI layer converts from cyclic MHz.
///
/// The dispersive shifts default to the weakly-anharmonic ladder
/// (0, chi_qr, 2 chi_qr); an arbitrary triple can be set through
/// `set_dispersive_shifts` since the reduction applies to any shifts.
struct QutritCavityParams {
    double omega_q = 0.0;   // qubit frequency (Lamb shift included), rad/s
    double alpha_q = 0.0;   // anharmonicity w_fg - 2 w_q, rad/s
    double chi_qr = 0.0;    // dispersive shift per excitation, rad/s
    double delta_rd = 0.0;  // cavity-drive detuning w_r - w_d, rad/s

    double kappa_in = 0.0;   // input-port decay, 1/s
    double kappa_out = 0.0;  // output-port decay, 1/s
    double kappa_int = 0.0;  // internal losses, 1/s

    std::complex<double> a_in_bar{0.0, 0.0};  // drive amplitude, sqrt(photons/s)

    double gamma_1_ge = 0.0, gamma_1_gf = 0.0, gamma_1_ef = 0.0;     // decay, 1/s
    double gamma_phi_ge = 0.0, gamma_phi_gf = 0.0, gamma_phi_ef = 0.0;  // pure dephasing, 1/s

    bool custom_shifts = false;
    std::array<double, 3> shifts{0.0, 0.0, 0.0};  // per-level cavity pull when custom

    double kappa() const { return kappa_in + kappa_out + kappa_int; }
    std::complex<double> epsilon() const { return std::sqrt(kappa_in) * a_in_bar; }
    double eta_geom() const {
        const double k = kappa();
        return k > 0.0 ? kappa_out / k : 0.0;
    }

    /// Cavity pull for qutrit level a in (0,1,2)=(g,e,f).
    double shift(int level) const {
        return custom_shifts ? shifts[size_t(level)] : double(level) * chi_qr;
    }

    void set_dispersive_shifts(double chi_g, double chi_e, double chi_f) {
        custom_shifts = true;
        shifts = {chi_g, chi_e, chi_f};
    }

    double gamma_2(int a, int b) const {  // gamma_phi,ab + gamma_1,ab/2
        return gamma_phi(a, b) + 0.5 * gamma_1(a, b);
    }
    double gamma_1(int a, int b) const {
        if (a == 0 && b == 1) return gamma_1_ge;
        if (a == 0 && b == 2) return gamma_1_gf;
        if (a == 1 && b == 2) return gamma_1_ef;
        throw std::invalid_argument("gamma_1: pair must be (g,e), (g,f) or (e,f)");
    }
    double gamma_phi(int a, int b) const {
        if (a == 0 && b == 1) return gamma_phi_ge;
        if (a == 0 && b == 2) return gamma_phi_gf;
        if (a == 1 && b == 2) return gamma_phi_ef;
        throw std::invalid_argument("gamma_phi: pair must be (g,e), (g,f) or (e,f)");
    }

    void validate() const {
        auto nonneg = [](double x, const char* name) {
            if (!(x >= 0.0)) throw std::invalid_argument(std::string(name) + " must be >= 0");
        };
        nonneg(kappa_in, "kappa_in");
        nonneg(kappa_out, "kappa_out");
        nonneg(kappa_int, "kappa_int");
        nonneg(gamma_1_ge, "gamma_1_ge");
        nonneg(gamma_1_gf, "gamma_1_gf");
        nonneg(gamma_1_ef, "gamma_1_ef");
        nonneg(gamma_phi_ge, "gamma_phi_ge");
        nonneg(gamma_phi_gf, "gamma_phi_gf");
        nonneg(gamma_phi_ef, "gamma_phi_ef");
    }
};

/// Phenomenological qubit decay parameters; gamma_2 = gamma_phi + gamma_1/2.
struct QubitDecayParams {
    double omega_q_tilde = 0.0;  // rad/s
    double gamma_1 = 0.0;        // 1/s
    double gamma_phi = 0.0;      // 1/s

    double gamma_2() const { return gamma_phi + 0.5 * gamma_1; }

    void validate() const {
        if (gamma_1 < 0.0 || gamma_phi < 0.0)
            throw std::invalid_argument("QubitDecayParams: rates must be >= 0");
    }
};

}  // namespace readout

#endif
