#ifndef READOUT_FILTERS_HPP
#define READOUT_FILTERS_HPP

#include <functional>
#include <string>

// Dephasing filter functions and the coherence-decay overlap integral
//   |rho_ge(t)/rho_ge(0)| = exp[ -(t^2/2) Int dw/2pi g(w,t) S_v(w) ].
//
// S_v is the double-sided frequency-noise PSD (rad^2/s^2 per rad/s). When a
// physical parameter lambda carries the noise, fold the transfer slope in
// first: S_v(w) = (d w_q / d lambda)^2 S_lambda(w).

namespace readout {

/// Double-sided noise PSD. `omega_min` is an explicit low-frequency cutoff
/// for spectra that diverge at w -> 0 (e.g. 1/f); integration starts there.
struct NoiseSpectrum {
    std::function<double(double)> psd;
    std::string tag;
    double omega_min = 0.0;

    static NoiseSpectrum white(double s0);
    static NoiseSpectrum lorentzian(double s0, double omega_c);  // s0/(1+(w/wc)^2)
    static NoiseSpectrum one_over_f(double amp, double omega_min);

    /// Even and nonnegative on a sample grid scaled by omega_scale.
    void validate(double omega_scale) const;
};

/// Ramsey filter g0(w,t) = sin^2(wt/2)/(wt/2)^2, in [0,1], g0(0)=1.
double ramsey_filter(double omega, double t);

/// CP filter for an even number N of pi pulses:
/// tan^2(wt/2N) g0(w,t); zero at w=0; +inf sentinel at an exactly-hit pole.
double cp_filter(double omega, double t, int n_pulses);

struct QuadratureOptions {
    int resolution_mult = 1;    // Simpson panels per filter half-period, x16
    double tail_rel = 1e-10;    // stop when the estimated tail is this small
    int max_cells = 200000;
};

/// Coherence ratio in (0,1] for a filter already bound to t, i.e.
/// g(omega) = filter(omega, t). Integrates in half-period cells of the
/// filter and closes the slowly-decaying 1/w^2 tail analytically once the
/// cell contributions settle onto that envelope.
double coherence_decay(const NoiseSpectrum& spectrum,
                       const std::function<double(double)>& filter, double t,
                       const QuadratureOptions& opt = {});

}  // namespace readout

#endif
