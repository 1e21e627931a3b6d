#include "readout/filters.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace readout {

NoiseSpectrum NoiseSpectrum::white(double s0) {
    if (s0 < 0.0) throw std::invalid_argument("white spectrum: S0 must be >= 0");
    return {[s0](double) { return s0; }, "white", 0.0};
}

NoiseSpectrum NoiseSpectrum::lorentzian(double s0, double omega_c) {
    if (s0 < 0.0 || omega_c <= 0.0)
        throw std::invalid_argument("lorentzian spectrum: S0 >= 0 and omega_c > 0 required");
    return {[s0, omega_c](double w) { return s0 / (1.0 + (w / omega_c) * (w / omega_c)); },
            "lorentzian", 0.0};
}

NoiseSpectrum NoiseSpectrum::one_over_f(double amp, double omega_min) {
    if (amp < 0.0 || omega_min <= 0.0)
        throw std::invalid_argument("1/f spectrum: needs amp >= 0 and a positive cutoff");
    return {[amp](double w) { return amp / std::abs(w); }, "one_over_f", omega_min};
}

void NoiseSpectrum::validate(double omega_scale) const {
    if (!psd) throw std::invalid_argument("NoiseSpectrum: missing evaluator");
    for (int k = 1; k <= 8; ++k) {
        const double w = std::max(omega_min, 1e-12) + 0.125 * k * omega_scale;
        const double sp = psd(w), sm = psd(-w);
        if (sp < 0.0 || sm < 0.0)
            throw std::invalid_argument("NoiseSpectrum: negative PSD sample");
        if (std::abs(sp - sm) > 1e-9 * std::max(1.0, std::abs(sp)))
            throw std::invalid_argument("NoiseSpectrum: PSD not even in omega");
    }
}

double ramsey_filter(double omega, double t) {
    if (t <= 0.0) throw std::invalid_argument("ramsey_filter: t must be > 0");
    const double x = 0.5 * omega * t;
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0;
    }
    const double s = std::sin(x) / x;
    return s * s;
}

double cp_filter(double omega, double t, int n_pulses) {
    if (t <= 0.0) throw std::invalid_argument("cp_filter: t must be > 0");
    if (n_pulses < 2 || n_pulses % 2 != 0)
        throw std::invalid_argument("cp_filter: N must be an even integer >= 2");
    const double u = 0.5 * omega * t / n_pulses;
    const double c = std::cos(u);
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    const double tn = std::tan(u);
    return tn * tn * ramsey_filter(omega, t);
}

double coherence_decay(const NoiseSpectrum& spectrum,
                       const std::function<double(double)>& filter, double t,
                       const QuadratureOptions& opt) {
    if (t <= 0.0) throw std::invalid_argument("coherence_decay: t must be > 0");
    spectrum.validate(2.0 * M_PI / t);

    // Simpson weight on one cell [a, a+width] with 16*mult panels
    const int panels = 16 * std::max(1, opt.resolution_mult);
    auto integrate_cell = [&](double a, double width) {
        const double h = width / panels;
        double acc = 0.0;
        auto f = [&](double w) {
            const double g = filter(w);
            if (!std::isfinite(g)) return 0.0;  // measure-zero pole sentinel
            return g * spectrum.psd(w);
        };
        for (int k = 0; k < panels; ++k) {
            const double x0 = a + k * h;
            acc += (h / 6.0) * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
        }
        return acc;
    };

    // cells of one filter half-period; sin^2(w t/2) has period 2 pi / t in w
    const double width = 2.0 * M_PI / t;
    const double w_start = std::max(spectrum.omega_min, 0.0);

    double accum = 0.0;
    double tail_correction = 0.0;
    // 1/w^2 envelope detection over trailing cells: c_k * a_k * (a_k+width)
    // settles to a constant; the remaining tail then telescopes to
    // c_k * a_k / width exactly.
    double prev_scaled[4] = {0.0, 0.0, 0.0, 0.0};
    int settled = 0;
    bool done = false;

    for (int k = 0; k < opt.max_cells && !done; ++k) {
        const double a = w_start + k * width;
        const double w_end = a + width;
        const double c = integrate_cell(a, width);
        accum += c;

        const double tail_est = std::max(0.0, c) * std::max(a, width) / width;
        const double scaled = c * std::max(a, 0.5 * width) * w_end;
        bool envelope = k >= 8;
        for (double p : prev_scaled)
            if (!(std::abs(scaled - p) <= 0.02 * std::abs(scaled))) envelope = false;
        prev_scaled[k % 4] = scaled;
        settled = envelope ? settled + 1 : 0;

        if (k >= 8 &&
            (settled >= 4 || tail_est <= std::max(opt.tail_rel, 1e-7) * std::abs(accum))) {
            tail_correction = tail_est;
            done = true;
        }
    }
    if (!done)
        throw std::runtime_error(
            "coherence_decay: spectrum integral did not converge (set a cutoff?)");

    const double integral = (accum + tail_correction) / M_PI;  // 2x half-line over 2 pi
    return std::exp(-0.5 * t * t * integral);
}

}  // namespace readout
