#include "driftcal/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "driftcal/errors.hpp"

namespace driftcal {

Calibration fit_affine(std::span<const CalibrationSample> samples, double t_hours) {
    const std::size_t n = samples.size();
    if (n < 3) {
        throw InsufficientDataError(
            "fit_affine needs at least 3 samples, got " + std::to_string(n));
    }

    double y_mean = 0.0;
    double x_mean = 0.0;
    for (const auto& s : samples) {
        y_mean += s.y_ref;
        x_mean += s.x_signal;
    }
    y_mean /= double(n);
    x_mean /= double(n);

    double s_yy = 0.0;
    double s_yx = 0.0;
    for (const auto& s : samples) {
        s_yy += (s.y_ref - y_mean) * (s.y_ref - y_mean);
        s_yx += (s.y_ref - y_mean) * (s.x_signal - x_mean);
    }
    if (s_yy == 0.0) {
        throw SingularDesignError("fit_affine: reference values have no spread");
    }

    Calibration cal;
    cal.t_hours = t_hours;
    cal.n_samples = static_cast<int>(n);
    cal.beta1 = s_yx / s_yy;
    cal.beta0 = x_mean - cal.beta1 * y_mean;

    double rss = 0.0;
    for (const auto& s : samples) {
        const double r = s.x_signal - (cal.beta0 + cal.beta1 * s.y_ref);
        rss += r * r;
    }
    const double s2 = rss / double(n - 2);
    cal.se1 = std::sqrt(s2 / s_yy);
    cal.se0 = std::sqrt(s2 * (1.0 / double(n) + y_mean * y_mean / s_yy));
    return cal;
}

Calibration make_calibration_from_cycle(std::span<const SensorRecord> records,
                                        const CycleSelection& sel) {
    if (sel.low_count < 3 || sel.low_count > 6 || sel.high_count < 3 ||
        sel.high_count > 6) {
        throw ValidationError("per-level sample counts must be in 3..6");
    }
    if (!(sel.window_hi_hours > sel.window_lo_hours)) {
        throw ValidationError("calibration window must have positive length");
    }

    const double mid = 0.5 * (sel.window_lo_hours + sel.window_hi_hours);

    std::vector<std::size_t> low_idx;
    std::vector<std::size_t> high_idx;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!r.valid || !r.reference.has_value()) continue;
        if (r.t_hours < sel.window_lo_hours || r.t_hours > sel.window_hi_hours) continue;
        if (*r.reference <= sel.low_threshold) low_idx.push_back(i);
        else if (*r.reference >= sel.high_threshold) high_idx.push_back(i);
    }

    const auto closest_to_mid = [&](std::vector<std::size_t>& idx, int count) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(records[a].t_hours - mid) < std::abs(records[b].t_hours - mid);
        });
        idx.resize(static_cast<std::size_t>(count));
    };

    if (low_idx.size() < static_cast<std::size_t>(sel.low_count)) {
        throw CalibrationUnavailableError(
            "window [" + std::to_string(sel.window_lo_hours) + ", " +
            std::to_string(sel.window_hi_hours) + "] has only " +
            std::to_string(low_idx.size()) + " low-level samples");
    }
    if (high_idx.size() < static_cast<std::size_t>(sel.high_count)) {
        throw CalibrationUnavailableError(
            "window [" + std::to_string(sel.window_lo_hours) + ", " +
            std::to_string(sel.window_hi_hours) + "] has only " +
            std::to_string(high_idx.size()) + " high-level samples");
    }
    closest_to_mid(low_idx, sel.low_count);
    closest_to_mid(high_idx, sel.high_count);

    std::vector<CalibrationSample> samples;
    samples.reserve(low_idx.size() + high_idx.size());
    double t_sum = 0.0;
    for (std::size_t i : low_idx) {
        samples.push_back({*records[i].reference, records[i].signal_mv});
        t_sum += records[i].t_hours;
    }
    for (std::size_t i : high_idx) {
        samples.push_back({*records[i].reference, records[i].signal_mv});
        t_sum += records[i].t_hours;
    }
    return fit_affine(samples, t_sum / double(samples.size()));
}

}  // namespace driftcal
