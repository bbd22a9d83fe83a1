#ifndef DRIFTCAL_METRICS_HPP
#define DRIFTCAL_METRICS_HPP

#include <span>
#include <utility>
#include <vector>

#include "driftcal/drift.hpp"
#include "driftcal/types.hpp"

namespace driftcal {

/// Time windows excluded from evaluation (no ground truth, or the sensor
/// known to be invalid).
struct EvalMask {
    std::vector<std::pair<double, double>> windows;

    bool covers(double t) const;
};

/// Aligned prediction/truth pairs. `valid` marks usable pairs; empty means
/// everything is usable.
struct EvalSeries {
    std::vector<double> t_hours;
    std::vector<double> predictions;
    std::vector<double> truths;
    std::vector<bool> valid;
};

/// Mean squared residual over unmasked, valid pairs.
/// Throws ValidationError when no usable pair remains.
double mse(const EvalSeries& series, const EvalMask& mask = {});
double mse(std::span<const double> predictions, std::span<const double> truths);

double rmse(const EvalSeries& series, const EvalMask& mask = {});
double rmse(std::span<const double> predictions, std::span<const double> truths);

/// Ratio of a method's MSE to a baseline's; < 1 means improvement.
/// Throws ValidationError when the baseline MSE is zero.
double relative_mse(double method_mse, double baseline_mse);

/// Absolute-residual quantile (linear interpolation between order
/// statistics) over the usable pairs.
double abs_residual_quantile(const EvalSeries& series, double q,
                             const EvalMask& mask = {});

/// Pair corrected outputs with a reference series by timestamp: exact match
/// first, then nearest neighbor within `max_dt_hours`. Unmatched records are
/// dropped; invalid corrections keep valid = false.
EvalSeries pair_by_time(std::span<const CorrectionResult> corrected,
                        const Series& reference, double max_dt_hours);

}  // namespace driftcal

#endif  // DRIFTCAL_METRICS_HPP
