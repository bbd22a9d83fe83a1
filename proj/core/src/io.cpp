#include "driftcal/io.hpp"

#include <algorithm>
#include <cmath>

#include "driftcal/csv.hpp"
#include "driftcal/errors.hpp"

namespace driftcal {

using csv::format_double;
using csv::parse_double;

void write_records_csv(const std::string& path, std::span<const SensorRecord> records) {
    csv::Table table;
    table.header = {"t_hours", "signal_mv", "valid"};
    table.rows.reserve(records.size());
    for (const auto& r : records) {
        table.rows.push_back({format_double(r.t_hours), format_double(r.signal_mv),
                              r.valid ? "1" : "0"});
    }
    csv::write_file(path, table);
}

std::vector<SensorRecord> read_records_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto t_col = table.column("t_hours");
    const auto x_col = table.column("signal_mv");
    const auto v_col = table.column("valid");
    std::vector<SensorRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        SensorRecord r;
        r.t_hours = parse_double(row[t_col]);
        r.signal_mv = parse_double(row[x_col]);
        r.valid = row[v_col] != "0";
        records.push_back(r);
    }
    return records;
}

void write_series_csv(const std::string& path, const Series& series,
                      const std::string& value_column) {
    csv::Table table;
    table.header = {"t_hours", value_column};
    table.rows.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        table.rows.push_back(
            {format_double(series.t_hours[i]), format_double(series.values[i])});
    }
    csv::write_file(path, table);
}

Series read_series_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto t_col = table.column("t_hours");
    std::size_t v_col = table.header.size();
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i != t_col) {
            v_col = i;
            break;
        }
    }
    if (v_col == table.header.size()) {
        throw ParseError(path + ": series needs a value column besides t_hours");
    }
    Series s;
    s.t_hours.reserve(table.rows.size());
    s.values.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        s.t_hours.push_back(parse_double(row[t_col]));
        s.values.push_back(parse_double(row[v_col]));
    }
    return s;
}

void write_calibrations_csv(const std::string& path, std::span<const Calibration> cals) {
    csv::Table table;
    table.header = {"t_hours", "beta0", "beta1", "se0", "se1", "n_samples"};
    table.rows.reserve(cals.size());
    for (const auto& c : cals) {
        table.rows.push_back({format_double(c.t_hours), format_double(c.beta0),
                              format_double(c.beta1), format_double(c.se0),
                              format_double(c.se1), std::to_string(c.n_samples)});
    }
    csv::write_file(path, table);
}

std::vector<Calibration> read_calibrations_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto t = table.column("t_hours");
    const auto b0 = table.column("beta0");
    const auto b1 = table.column("beta1");
    const auto s0 = table.column("se0");
    const auto s1 = table.column("se1");
    const auto n = table.column("n_samples");
    std::vector<Calibration> cals;
    cals.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        Calibration c;
        c.t_hours = parse_double(row[t]);
        c.beta0 = parse_double(row[b0]);
        c.beta1 = parse_double(row[b1]);
        c.se0 = parse_double(row[s0]);
        c.se1 = parse_double(row[s1]);
        c.n_samples = static_cast<int>(parse_double(row[n]));
        cals.push_back(c);
    }
    return cals;
}

void write_corrections_csv(const std::string& path,
                           std::span<const CorrectionResult> results) {
    csv::Table table;
    table.header = {"t_hours", "y_hat", "sigma_y", "mode", "valid"};
    table.rows.reserve(results.size());
    for (const auto& r : results) {
        table.rows.push_back({format_double(r.t_hours), format_double(r.y_hat),
                              format_double(r.sigma_y), mode_name(r.mode),
                              r.valid ? "1" : "0"});
    }
    csv::write_file(path, table);
}

std::vector<CorrectionResult> read_corrections_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto t = table.column("t_hours");
    const auto y = table.column("y_hat");
    const auto s = table.column("sigma_y");
    const auto m = table.column("mode");
    const auto v = table.column("valid");
    std::vector<CorrectionResult> results;
    results.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        CorrectionResult r;
        r.t_hours = parse_double(row[t]);
        r.y_hat = parse_double(row[y]);
        r.sigma_y = parse_double(row[s]);
        r.mode = parse_mode(row[m]);
        r.valid = row[v] != "0";
        results.push_back(r);
    }
    return results;
}

void write_band_csv(const std::string& path, const GpModel& model,
                    std::span<const double> ts) {
    const auto preds = predict(model, ts);
    csv::Table table;
    table.header = {"t_hours", "mean", "lo95", "hi95"};
    table.rows.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double sd = std::sqrt(preds[i].variance);
        table.rows.push_back({format_double(ts[i]), format_double(preds[i].mean),
                              format_double(preds[i].mean - 2.0 * sd),
                              format_double(preds[i].mean + 2.0 * sd)});
    }
    csv::write_file(path, table);
}

void write_offsets_csv(const std::string& path,
                       std::span<const OffsetEstimate> estimates) {
    csv::Table table;
    table.header = {"window_center_hours", "offset_s", "correlation"};
    table.rows.reserve(estimates.size());
    for (const auto& e : estimates) {
        table.rows.push_back({format_double(e.window_center_hours),
                              format_double(e.offset_seconds),
                              format_double(e.correlation)});
    }
    csv::write_file(path, table);
}

void write_schedule_trace_csv(const std::string& path,
                              std::span<const ScheduleTraceRow> trace) {
    csv::Table table;
    table.header = {"t_hours",     "sensor_id",       "interval_hours",
                    "uncertainty", "calibrated_flag", "budget_freq"};
    table.rows.reserve(trace.size());
    for (const auto& row : trace) {
        table.rows.push_back({format_double(row.t_hours), std::to_string(row.sensor),
                              format_double(row.interval_hours),
                              format_double(row.uncertainty),
                              row.calibrated ? "1" : "0",
                              format_double(row.budget_frequency)});
    }
    csv::write_file(path, table);
}

void write_sweep_norm_csv(const std::string& path, const SweepResult& result,
                          std::span<const std::string> sensor_names) {
    std::vector<double> intervals;
    std::vector<std::pair<std::size_t, std::string>> series;  // (sensor, method)
    for (const auto& row : result.summary) {
        if (std::find(intervals.begin(), intervals.end(), row.interval_hours) ==
            intervals.end()) {
            intervals.push_back(row.interval_hours);
        }
        const auto key = std::make_pair(row.sensor, row.method);
        if (std::find(series.begin(), series.end(), key) == series.end()) {
            series.push_back(key);
        }
    }
    std::sort(intervals.begin(), intervals.end());
    std::sort(series.begin(), series.end());

    csv::Table table;
    table.header.push_back("interval_hours");
    for (const auto& [sensor, method] : series) {
        const std::string name = sensor < sensor_names.size()
                                     ? sensor_names[sensor]
                                     : "sensor" + std::to_string(sensor + 1);
        table.header.push_back(name + "_" + method);
    }
    for (const double interval : intervals) {
        std::vector<std::string> row;
        row.push_back(format_double(interval));
        for (const auto& [sensor, method] : series) {
            const auto it =
                std::find_if(result.summary.begin(), result.summary.end(),
                             [&](const SweepSummaryRow& r) {
                                 return r.sensor == sensor && r.method == method &&
                                        r.interval_hours == interval;
                             });
            row.push_back(it == result.summary.end() ? "nan"
                                                     : format_double(it->median_rel_mse));
        }
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

void write_sweep_cells_csv(const std::string& path, const SweepResult& result,
                           std::span<const std::string> sensor_names) {
    csv::Table table;
    table.header = {"sensor", "method", "interval_hours", "rep", "mse", "rel_mse"};
    table.rows.reserve(result.cells.size());
    for (const auto& c : result.cells) {
        const std::string name = c.sensor < sensor_names.size()
                                     ? sensor_names[c.sensor]
                                     : "sensor" + std::to_string(c.sensor + 1);
        table.rows.push_back({name, c.method, format_double(c.interval_hours),
                              std::to_string(c.rep), format_double(c.mse),
                              format_double(c.rel_mse)});
    }
    csv::write_file(path, table);
}

}  // namespace driftcal
