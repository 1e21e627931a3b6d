#ifndef READOUT_ANALYSIS_HPP
#define READOUT_ANALYSIS_HPP

#include <array>
#include <optional>
#include <vector>

#include "readout/heterodyne.hpp"
#include "readout/params.hpp"

// Measurement post-processing: time-averaged IQ points, nearest-centroid
// classification and readout-frequency sweeps.

namespace readout {

/// Time-averaged record over a measurement window.
struct IQPoint {
    double vbar_i = 0.0;
    double vbar_q = 0.0;
};

struct ScatterSet {
    std::vector<IQPoint> points;
    std::vector<int> labels_true;  // empty when unknown; entries in {0,1,2}
    std::array<IQPoint, 3> centroids;
};

struct ClassificationResult {
    std::vector<int> labels;
    std::array<std::array<int, 3>, 3> confusion{};  // [true][predicted]; valid
                                                    // only with labels_true
};

/// Mean of the record over [t0, t1), exact at full integrator resolution
/// via the trajectory's cumulative integrals. Window endpoints snap to the
/// stored sample grid.
IQPoint time_average_record(const TrajectoryResult& traj, double t0, double t1);

/// Theory centroids 2 sqrt(eta kappa) (Ibar_a, Qbar_a) time-averaged over
/// the window on the deterministic amplitude path.
std::array<IQPoint, 3> predicted_centroids(const HeterodyneConfig& cfg, double t0, double t1);

/// Euclidean nearest centroid; ties break toward the lower-energy state.
ClassificationResult classify(const ScatterSet& scatter);

/// Closed-form misclassification rate for two Gaussian clusters at centroid
/// distance d with per-axis standard deviation s: erfc(d / (2 sqrt(2) s))/2.
double two_gaussian_error_rate(double distance, double sigma);

struct SweepRow {
    double delta_rd = 0.0;
    double sep_ge = 0.0, sep_gf = 0.0, sep_ef = 0.0;  // |beta_ab(inf)|
};

struct FrequencySweep {
    std::vector<SweepRow> rows;
    int argmax_ge = 0, argmax_gf = 0, argmax_ef = 0;  // row indices
};

/// Steady-state pointer separations across a readout-frequency grid.
FrequencySweep frequency_sweep(const QutritCavityParams& params,
                               const std::vector<double>& delta_grid);

}  // namespace readout

#endif
