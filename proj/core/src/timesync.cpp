#include "driftcal/timesync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "driftcal/errors.hpp"

namespace driftcal {

namespace {

constexpr double kSecondsPerHour = 3600.0;

double linear_interp(const Series& s, double t) {
    auto it = std::lower_bound(s.t_hours.begin(), s.t_hours.end(), t);
    if (it == s.t_hours.begin()) return s.values.front();
    if (it == s.t_hours.end()) return s.values.back();
    const auto hi = static_cast<std::size_t>(it - s.t_hours.begin());
    const auto lo = hi - 1;
    const double span = s.t_hours[hi] - s.t_hours[lo];
    if (span <= 0.0) return s.values[lo];
    const double w = (t - s.t_hours[lo]) / span;
    return s.values[lo] + w * (s.values[hi] - s.values[lo]);
}

double median_step(const Series& s) {
    std::vector<double> steps;
    steps.reserve(s.t_hours.size());
    for (std::size_t i = 1; i < s.t_hours.size(); ++i) {
        steps.push_back(s.t_hours[i] - s.t_hours[i - 1]);
    }
    std::sort(steps.begin(), steps.end());
    return steps[steps.size() / 2];
}

bool min_max_normalize(std::vector<double>& xs) {
    const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi == lo) return false;
    const double span = hi - lo;
    for (double& x : xs) x = (x - lo) / span;
    return true;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(n);
    mb /= double(n);
    double saa = 0.0;
    double sbb = 0.0;
    double sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

void validate_series(const Series& s, const char* what) {
    if (s.t_hours.size() != s.values.size()) {
        throw ValidationError(std::string(what) + ": time and value columns differ in length");
    }
    if (s.t_hours.size() < 2) {
        throw ValidationError(std::string(what) + ": series needs at least two samples");
    }
    if (!std::is_sorted(s.t_hours.begin(), s.t_hours.end())) {
        throw ValidationError(std::string(what) + ": series must be sorted by time");
    }
}

}  // namespace

std::vector<OffsetEstimate> estimate_offsets(const Series& sensor,
                                             const Series& reference,
                                             const SyncOptions& options) {
    validate_series(sensor, "sensor");
    validate_series(reference, "reference");
    if (!(options.window_hours > 0.0) || !(options.search_bound_seconds > 0.0) ||
        !(options.grid_step_seconds > 0.0)) {
        throw ValidationError("sync options must be positive");
    }

    const double bound_h = options.search_bound_seconds / kSecondsPerHour;
    const double overlap_lo = std::max(sensor.t_hours.front(), reference.t_hours.front());
    const double overlap_hi = std::min(sensor.t_hours.back(), reference.t_hours.back());
    const double native_dt = median_step(sensor);

    // Offsets scanned outward from zero so ties resolve to the smallest |offset|.
    std::vector<double> offsets{0.0};
    for (double s = options.grid_step_seconds; s <= options.search_bound_seconds;
         s += options.grid_step_seconds) {
        offsets.push_back(s);
        offsets.push_back(-s);
    }

    std::vector<OffsetEstimate> estimates;
    for (double w_lo = overlap_lo; w_lo + options.window_hours <= overlap_hi + 1e-12;
         w_lo += options.window_hours) {
        const double w_hi = w_lo + options.window_hours;
        const double g_lo = w_lo + bound_h;
        const double g_hi = w_hi - bound_h;
        if (g_hi <= g_lo) continue;

        std::vector<double> grid;
        for (double t = g_lo; t <= g_hi + 1e-12; t += native_dt) grid.push_back(t);
        if (grid.size() < 8) continue;

        // Every shifted lookup must stay inside the reference range.
        if (grid.front() - bound_h < reference.t_hours.front() ||
            grid.back() + bound_h > reference.t_hours.back()) {
            continue;
        }

        std::vector<double> s_win(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            s_win[i] = linear_interp(sensor, grid[i]);
        }
        if (!min_max_normalize(s_win)) continue;  // flat sensor window

        double best_corr = -std::numeric_limits<double>::infinity();
        double best_offset = 0.0;
        bool found = false;
        std::vector<double> r_win(grid.size());
        for (double offset_s : offsets) {
            const double shift_h = offset_s / kSecondsPerHour;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                r_win[i] = linear_interp(reference, grid[i] - shift_h);
            }
            if (!min_max_normalize(r_win)) continue;  // flat reference window
            const double corr = pearson(s_win, r_win);
            if (std::isnan(corr)) continue;
            if (corr > best_corr) {
                best_corr = corr;
                best_offset = offset_s;
                found = true;
            }
        }
        if (!found) continue;

        OffsetEstimate est;
        est.window_center_hours = 0.5 * (w_lo + w_hi);
        est.offset_seconds = best_offset;
        est.correlation = best_corr;
        estimates.push_back(est);
    }
    return estimates;
}

double OffsetModel::offset_seconds(double t_hours) const {
    if (segments.empty()) return 0.0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (t_hours <= segments[i].upper_bound_hours) {
            return segments[i].slope_s_per_hour * t_hours + segments[i].intercept_s;
        }
    }
    const auto& last = segments.back();
    return last.slope_s_per_hour * t_hours + last.intercept_s;
}

OffsetModel fit_offset_model(std::span<const OffsetEstimate> estimates,
                             std::span<const double> breakpoints) {
    std::vector<double> bps(breakpoints.begin(), breakpoints.end());
    std::sort(bps.begin(), bps.end());

    const std::size_t n_segments = bps.size() + 1;
    std::vector<std::vector<const OffsetEstimate*>> buckets(n_segments);
    for (const auto& e : estimates) {
        std::size_t seg = bps.size();
        for (std::size_t i = 0; i < bps.size(); ++i) {
            if (e.window_center_hours <= bps[i]) {
                seg = i;
                break;
            }
        }
        buckets[seg].push_back(&e);
    }

    OffsetModel model;
    model.segments.resize(n_segments);
    for (std::size_t s = 0; s < n_segments; ++s) {
        const auto& bucket = buckets[s];
        if (bucket.size() < 2) {
            throw ValidationError("offset segment " + std::to_string(s) + " has " +
                                  std::to_string(bucket.size()) +
                                  " estimates; need at least 2");
        }
        double mt = 0.0;
        double mo = 0.0;
        for (const auto* e : bucket) {
            mt += e->window_center_hours;
            mo += e->offset_seconds;
        }
        mt /= double(bucket.size());
        mo /= double(bucket.size());
        double stt = 0.0;
        double sto = 0.0;
        for (const auto* e : bucket) {
            stt += (e->window_center_hours - mt) * (e->window_center_hours - mt);
            sto += (e->window_center_hours - mt) * (e->offset_seconds - mo);
        }
        if (stt == 0.0) {
            throw ValidationError("offset segment " + std::to_string(s) +
                                  " has no spread in window centers");
        }
        auto& seg = model.segments[s];
        seg.slope_s_per_hour = sto / stt;
        seg.intercept_s = mo - seg.slope_s_per_hour * mt;
        seg.upper_bound_hours =
            s < bps.size() ? bps[s] : std::numeric_limits<double>::infinity();
    }
    return model;
}

Series apply_offset(const Series& series, const OffsetModel& model) {
    Series out = series;
    for (double& t : out.t_hours) {
        t += model.offset_seconds(t) / kSecondsPerHour;
    }
    return out;
}

}  // namespace driftcal
