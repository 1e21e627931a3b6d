#include "readout/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace readout {

namespace {

size_t stored_index(const std::vector<double>& times, double t) {
    // nearest stored sample; windows are defined on the stored grid
    const auto it = std::lower_bound(times.begin(), times.end(), t - 1e-15);
    if (it == times.end()) return times.size() - 1;
    return size_t(it - times.begin());
}

}  // namespace

IQPoint time_average_record(const TrajectoryResult& traj, double t0, double t1) {
    if (traj.times.size() < 2) throw std::invalid_argument("time_average_record: no samples");
    if (!(t1 > t0)) throw std::invalid_argument("time_average_record: empty window");
    if (t0 < traj.times.front() - 1e-15 || t1 > traj.times.back() + 1e-15)
        throw std::invalid_argument("time_average_record: window outside trajectory span");
    const size_t j0 = stored_index(traj.times, t0);
    const size_t j1 = stored_index(traj.times, t1);
    if (j1 <= j0) throw std::invalid_argument("time_average_record: window too narrow");
    const double span = traj.times[j1] - traj.times[j0];
    return {(traj.cum_i[j1] - traj.cum_i[j0]) / span,
            (traj.cum_q[j1] - traj.cum_q[j0]) / span};
}

std::array<IQPoint, 3> predicted_centroids(const HeterodyneConfig& cfg, double t0, double t1) {
    if (!(t1 > t0)) throw std::invalid_argument("predicted_centroids: empty window");
    const double scale = 2.0 * std::sqrt(cfg.eta * cfg.params.kappa());
    std::array<IQPoint, 3> cen{};
    const int n = 512;
    const double h = (t1 - t0) / n;
    for (int a = 0; a < 3; ++a) {
        double si = 0.0, sq = 0.0;
        for (int k = 0; k <= n; ++k) {  // trapezoid on the closed-form path
            const double t = t0 + k * h;
            const double w = (k == 0 || k == n) ? 0.5 : 1.0;
            Cplx alpha;
            if (cfg.freeze_at_steady_state)
                alpha = steady_state_amplitudes(cfg.params)[a];
            else
                alpha = propagate_amplitude(cfg.params, a, cfg.alpha0[a], t);
            const Cplx r = alpha * std::exp(-kI * cfg.phi_lo);
            si += w * r.real();
            sq += w * r.imag();
        }
        cen[size_t(a)] = {scale * si / n, scale * sq / n};
    }
    return cen;
}

ClassificationResult classify(const ScatterSet& scatter) {
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const double dx = scatter.centroids[size_t(a)].vbar_i -
                              scatter.centroids[size_t(b)].vbar_i;
            const double dy = scatter.centroids[size_t(a)].vbar_q -
                              scatter.centroids[size_t(b)].vbar_q;
            if (dx * dx + dy * dy == 0.0)
                throw std::invalid_argument("classify: coincident centroids");
        }
    if (!scatter.labels_true.empty() && scatter.labels_true.size() != scatter.points.size())
        throw std::invalid_argument("classify: label/point count mismatch");

    ClassificationResult result;
    result.labels.reserve(scatter.points.size());
    for (const auto& pt : scatter.points) {
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 3; ++a) {
            const double dx = pt.vbar_i - scatter.centroids[size_t(a)].vbar_i;
            const double dy = pt.vbar_q - scatter.centroids[size_t(a)].vbar_q;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2 - 0.0) {  // strict: ties keep the lower-energy label
                best_d2 = d2;
                best = a;
            }
        }
        result.labels.push_back(best);
    }
    if (!scatter.labels_true.empty()) {
        for (size_t i = 0; i < scatter.points.size(); ++i)
            result.confusion[size_t(scatter.labels_true[i])][size_t(result.labels[i])]++;
    }
    return result;
}

double two_gaussian_error_rate(double distance, double sigma) {
    return 0.5 * std::erfc(distance / (2.0 * std::sqrt(2.0) * sigma));
}

FrequencySweep frequency_sweep(const QutritCavityParams& params,
                               const std::vector<double>& delta_grid) {
    FrequencySweep sweep;
    sweep.rows.reserve(delta_grid.size());
    for (double delta : delta_grid) {
        QutritCavityParams p = params;
        p.delta_rd = delta;
        const CavityAmplitudes ss = steady_state_amplitudes(p);
        sweep.rows.push_back({delta, std::abs(ss.beta(0, 1)), std::abs(ss.beta(0, 2)),
                              std::abs(ss.beta(1, 2))});
    }
    auto argmax = [&](auto field) {
        int best = 0;
        for (int i = 1; i < int(sweep.rows.size()); ++i)
            if (field(sweep.rows[size_t(i)]) > field(sweep.rows[size_t(best)])) best = i;
        return best;
    };
    sweep.argmax_ge = argmax([](const SweepRow& r) { return r.sep_ge; });
    sweep.argmax_gf = argmax([](const SweepRow& r) { return r.sep_gf; });
    sweep.argmax_ef = argmax([](const SweepRow& r) { return r.sep_ef; });
    return sweep;
}

}  // namespace readout
