#ifndef DRIFTCAL_TIMESYNC_HPP
#define DRIFTCAL_TIMESYNC_HPP

#include <span>
#include <vector>

#include "driftcal/types.hpp"

namespace driftcal {

/// Correlation-maximizing clock offset for one window.
/// `offset_seconds` is the amount to add to the reference timestamps.
struct OffsetEstimate {
    double window_center_hours = 0.0;
    double offset_seconds = 0.0;
    double correlation = 0.0;
};

struct SyncOptions {
    double window_hours = 5.0;
    double search_bound_seconds = 200.0;
    double grid_step_seconds = 2.0;
};

/// Windowed cross-correlation between a sensor stream and a reference
/// stream. Both are linearly resampled onto the sensor's native grid and
/// min-max normalized per window; Pearson correlation is scanned over the
/// offset grid with ties broken toward the smallest |offset|. Windows with
/// zero-variance signal or insufficient overlap are skipped.
std::vector<OffsetEstimate> estimate_offsets(const Series& sensor,
                                             const Series& reference,
                                             const SyncOptions& options = {});

/// Piecewise-linear offset model: one OLS line per breakpoint segment.
struct OffsetModel {
    struct Segment {
        double upper_bound_hours = 0.0;  // t <= bound belongs here; last is open
        double slope_s_per_hour = 0.0;
        double intercept_s = 0.0;
    };
    std::vector<Segment> segments;

    double offset_seconds(double t_hours) const;
};

/// Fit one line per segment delimited by the breakpoints (paper-style:
/// a single breakpoint splits t <= b from t > b). Each segment needs at
/// least two estimates.
OffsetModel fit_offset_model(std::span<const OffsetEstimate> estimates,
                             std::span<const double> breakpoints);

/// Shift every timestamp by offset(t)/3600; values are untouched.
Series apply_offset(const Series& series, const OffsetModel& model);

}  // namespace driftcal

#endif  // DRIFTCAL_TIMESYNC_HPP
