#include "driftcal/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "driftcal/errors.hpp"

namespace driftcal {

namespace {

std::vector<double> usable_residuals(const EvalSeries& series, const EvalMask& mask) {
    const std::size_t n = series.predictions.size();
    if (series.truths.size() != n ||
        (!series.t_hours.empty() && series.t_hours.size() != n) ||
        (!series.valid.empty() && series.valid.size() != n)) {
        throw ValidationError("evaluation series columns must have equal length");
    }
    std::vector<double> residuals;
    residuals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!series.valid.empty() && !series.valid[i]) continue;
        if (!series.t_hours.empty() && mask.covers(series.t_hours[i])) continue;
        residuals.push_back(series.predictions[i] - series.truths[i]);
    }
    return residuals;
}

}  // namespace

bool EvalMask::covers(double t) const {
    for (const auto& [lo, hi] : windows) {
        if (t >= lo && t <= hi) return true;
    }
    return false;
}

double mse(const EvalSeries& series, const EvalMask& mask) {
    const auto residuals = usable_residuals(series, mask);
    if (residuals.empty()) {
        throw ValidationError("mse: no usable prediction/truth pairs");
    }
    double sum = 0.0;
    for (double r : residuals) sum += r * r;
    return sum / double(residuals.size());
}

double mse(std::span<const double> predictions, std::span<const double> truths) {
    EvalSeries s;
    s.predictions.assign(predictions.begin(), predictions.end());
    s.truths.assign(truths.begin(), truths.end());
    return mse(s);
}

double rmse(const EvalSeries& series, const EvalMask& mask) {
    return std::sqrt(mse(series, mask));
}

double rmse(std::span<const double> predictions, std::span<const double> truths) {
    return std::sqrt(mse(predictions, truths));
}

double relative_mse(double method_mse, double baseline_mse) {
    if (!(baseline_mse > 0.0)) {
        throw ValidationError("relative_mse: baseline MSE must be positive");
    }
    return method_mse / baseline_mse;
}

double abs_residual_quantile(const EvalSeries& series, double q, const EvalMask& mask) {
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile must be in [0, 1]");
    auto residuals = usable_residuals(series, mask);
    if (residuals.empty()) {
        throw ValidationError("quantile: no usable prediction/truth pairs");
    }
    for (double& r : residuals) r = std::abs(r);
    std::sort(residuals.begin(), residuals.end());
    const double h = q * double(residuals.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= residuals.size()) return residuals.back();
    const double frac = h - double(lo);
    return residuals[lo] + frac * (residuals[lo + 1] - residuals[lo]);
}

EvalSeries pair_by_time(std::span<const CorrectionResult> corrected,
                        const Series& reference, double max_dt_hours) {
    if (reference.t_hours.size() != reference.values.size()) {
        throw ValidationError("reference series columns must have equal length");
    }
    EvalSeries out;
    if (reference.t_hours.empty()) return out;
    for (const auto& c : corrected) {
        auto it = std::lower_bound(reference.t_hours.begin(), reference.t_hours.end(),
                                   c.t_hours);
        std::size_t best = reference.t_hours.size();
        double best_dt = max_dt_hours;
        if (it != reference.t_hours.end()) {
            const auto i = static_cast<std::size_t>(it - reference.t_hours.begin());
            const double dt = std::abs(reference.t_hours[i] - c.t_hours);
            if (dt <= best_dt) {
                best = i;
                best_dt = dt;
            }
        }
        if (it != reference.t_hours.begin()) {
            const auto i = static_cast<std::size_t>(it - reference.t_hours.begin()) - 1;
            const double dt = std::abs(reference.t_hours[i] - c.t_hours);
            if (dt < best_dt || (dt <= best_dt && best == reference.t_hours.size())) {
                best = i;
            }
        }
        if (best == reference.t_hours.size()) continue;
        out.t_hours.push_back(c.t_hours);
        out.predictions.push_back(c.y_hat);
        out.truths.push_back(reference.values[best]);
        out.valid.push_back(c.valid);
    }
    return out;
}

}  // namespace driftcal
