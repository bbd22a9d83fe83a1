#include "driftcal/drift.hpp"

#include <algorithm>
#include <cmath>

#include "driftcal/errors.hpp"

namespace driftcal {

namespace {

CorrectionResult invert_record(const SensorRecord& record, double b0, double b1,
                               double var0, double var1, CorrectionMode mode,
                               double slope_floor) {
    CorrectionResult out;
    out.t_hours = record.t_hours;
    out.mode = mode;
    if (!record.valid || std::abs(b1) < slope_floor) {
        out.valid = false;
        return out;
    }
    out.y_hat = (record.signal_mv - b0) / b1;
    out.sigma_y = std::sqrt(var0 + out.y_hat * out.y_hat * var1) / std::abs(b1);
    return out;
}

std::vector<Calibration> sorted_by_time(std::span<const Calibration> cals) {
    std::vector<Calibration> sorted(cals.begin(), cals.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Calibration& a, const Calibration& b) {
                         return a.t_hours < b.t_hours;
                     });
    return sorted;
}

}  // namespace

std::string mode_name(CorrectionMode mode) {
    switch (mode) {
        case CorrectionMode::kOffline: return "offline";
        case CorrectionMode::kOnline: return "online";
        case CorrectionMode::kStepwise: return "stepwise";
        case CorrectionMode::kLinearInterp: return "linear";
    }
    return "unknown";
}

CorrectionMode parse_mode(const std::string& name) {
    if (name == "offline") return CorrectionMode::kOffline;
    if (name == "online") return CorrectionMode::kOnline;
    if (name == "stepwise") return CorrectionMode::kStepwise;
    if (name == "linear") return CorrectionMode::kLinearInterp;
    throw ValidationError("unknown correction mode: " + name);
}

std::vector<CoefficientModel> train_models(std::span<const Calibration> cals,
                                           const KernelSpec& kernel,
                                           const DriftOptions& options) {
    if (cals.empty()) {
        throw ValidationError("train_models requires at least one calibration");
    }
    std::vector<CoefficientModel> models;
    models.reserve(2);
    for (int coeff = 0; coeff < 2; ++coeff) {
        GpTrainingSet training;
        training.times.reserve(cals.size());
        training.targets.reserve(cals.size());
        training.noise_vars.reserve(cals.size());
        for (const auto& c : cals) {
            training.times.push_back(c.t_hours);
            training.targets.push_back(coeff == 0 ? c.beta0 : c.beta1);
            const double se = coeff == 0 ? c.se0 : c.se1;
            training.noise_vars.push_back(se * se);
        }
        KernelSpec k = kernel;
        if (options.optimize_variance && cals.size() >= 2) {
            k = fit_variance(training, kernel).kernel;
        }
        models.push_back({coeff, fit_gp(training, k)});
    }
    return models;
}

std::vector<CorrectionResult> correct(std::span<const CoefficientModel> models,
                                      std::span<const SensorRecord> records,
                                      CorrectionMode mode,
                                      const DriftOptions& options) {
    if (models.size() != 2) {
        throw ValidationError("correct expects one model per affine coefficient");
    }
    std::vector<CorrectionResult> out;
    out.reserve(records.size());
    if (records.empty()) return out;

    std::vector<double> ts(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) ts[i] = records[i].t_hours;

    const CoefficientModel* baseline = nullptr;
    const CoefficientModel* sensitivity = nullptr;
    for (const auto& m : models) {
        if (m.coefficient_index == 0) baseline = &m;
        if (m.coefficient_index == 1) sensitivity = &m;
    }
    if (baseline == nullptr || sensitivity == nullptr) {
        throw ValidationError("correct needs coefficient models with indices 0 and 1");
    }

    const auto p0 = predict(baseline->posterior, ts);
    const auto p1 = predict(sensitivity->posterior, ts);
    for (std::size_t i = 0; i < records.size(); ++i) {
        out.push_back(invert_record(records[i], p0[i].mean, p1[i].mean,
                                    p0[i].variance, p1[i].variance, mode,
                                    options.slope_floor));
    }
    return out;
}

std::vector<CorrectionResult> correct_offline(std::span<const Calibration> cals,
                                              const KernelSpec& kernel,
                                              std::span<const SensorRecord> records,
                                              const DriftOptions& options) {
    const auto models = train_models(cals, kernel, options);
    return correct(models, records, CorrectionMode::kOffline, options);
}

std::vector<CorrectionResult> correct_online(std::span<const Calibration> cals,
                                             const KernelSpec& kernel,
                                             std::span<const SensorRecord> records,
                                             const DriftOptions& options) {
    const auto sorted = sorted_by_time(cals);
    std::vector<double> cal_times(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) cal_times[i] = sorted[i].t_hours;

    std::vector<CorrectionResult> out(records.size());

    // Records sharing the same set of past calibrations share one model fit.
    std::vector<std::size_t> prefix(records.size());
    std::size_t max_prefix = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        prefix[i] = static_cast<std::size_t>(
            std::upper_bound(cal_times.begin(), cal_times.end(), records[i].t_hours) -
            cal_times.begin());
        max_prefix = std::max(max_prefix, prefix[i]);
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        if (prefix[i] == 0) {
            out[i].t_hours = records[i].t_hours;
            out[i].mode = CorrectionMode::kOnline;
            out[i].valid = false;
        }
    }

    for (std::size_t k = 1; k <= max_prefix; ++k) {
        std::vector<std::size_t> group;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (prefix[i] == k) group.push_back(i);
        }
        if (group.empty()) continue;

        const auto models = train_models(
            std::span<const Calibration>(sorted.data(), k), kernel, options);
        std::vector<SensorRecord> subset;
        subset.reserve(group.size());
        for (std::size_t i : group) subset.push_back(records[i]);
        const auto corrected = correct(models, subset, CorrectionMode::kOnline, options);
        for (std::size_t j = 0; j < group.size(); ++j) {
            out[group[j]] = corrected[j];
        }
    }
    return out;
}

std::vector<CorrectionResult> baseline_stepwise(std::span<const Calibration> cals,
                                                std::span<const SensorRecord> records,
                                                const DriftOptions& options) {
    if (cals.empty()) {
        throw ValidationError("baseline_stepwise requires at least one calibration");
    }
    const auto sorted = sorted_by_time(cals);

    std::vector<CorrectionResult> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        auto it = std::upper_bound(
            sorted.begin(), sorted.end(), rec.t_hours,
            [](double t, const Calibration& c) { return t < c.t_hours; });
        // First calibration extends backward in time.
        const Calibration& c = (it == sorted.begin()) ? sorted.front() : *(it - 1);
        out.push_back(invert_record(rec, c.beta0, c.beta1, c.se0 * c.se0,
                                    c.se1 * c.se1, CorrectionMode::kStepwise,
                                    options.slope_floor));
    }
    return out;
}

std::vector<CorrectionResult> baseline_linear(std::span<const Calibration> cals,
                                              std::span<const SensorRecord> records,
                                              const DriftOptions& options) {
    if (cals.size() < 2) {
        auto out = baseline_stepwise(cals, records, options);
        for (auto& r : out) r.mode = CorrectionMode::kLinearInterp;
        return out;
    }
    const auto sorted = sorted_by_time(cals);

    std::vector<CorrectionResult> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        double b0, b1, se0, se1;
        if (rec.t_hours <= sorted.front().t_hours) {
            const auto& c = sorted.front();
            b0 = c.beta0; b1 = c.beta1; se0 = c.se0; se1 = c.se1;
        } else if (rec.t_hours >= sorted.back().t_hours) {
            const auto& c = sorted.back();
            b0 = c.beta0; b1 = c.beta1; se0 = c.se0; se1 = c.se1;
        } else {
            auto hi = std::upper_bound(
                sorted.begin(), sorted.end(), rec.t_hours,
                [](double t, const Calibration& c) { return t < c.t_hours; });
            auto lo = hi - 1;
            const double span = hi->t_hours - lo->t_hours;
            const double w = span > 0.0 ? (rec.t_hours - lo->t_hours) / span : 0.0;
            b0 = lo->beta0 + w * (hi->beta0 - lo->beta0);
            b1 = lo->beta1 + w * (hi->beta1 - lo->beta1);
            se0 = lo->se0 + w * (hi->se0 - lo->se0);
            se1 = lo->se1 + w * (hi->se1 - lo->se1);
        }
        out.push_back(invert_record(rec, b0, b1, se0 * se0, se1 * se1,
                                    CorrectionMode::kLinearInterp,
                                    options.slope_floor));
    }
    return out;
}

}  // namespace driftcal
