// driftcal command line tool: synthetic fleet generation, calibration
// extraction, drift correction, calibration-schedule simulation, clock
// synchronization and evaluation, all CSV in and CSV out.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "driftcal/csv.hpp"
#include "driftcal/errors.hpp"
#include "driftcal/io.hpp"
#include "driftcal/metrics.hpp"
#include "driftcal/simulate.hpp"
#include "driftcal/timesync.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Removes produced files unless commit() ran; failed commands leave no
/// partial outputs behind.
class OutputGuard {
public:
    ~OutputGuard() {
        for (const auto& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    std::string track(std::string path) {
        paths_.push_back(path);
        return path;
    }
    void commit() { paths_.clear(); }

private:
    std::vector<std::string> paths_;
};

std::string default_out_dir() {
    const char* env = std::getenv("DRIFTCAL_OUT_DIR");
    return env != nullptr && *env != '\0' ? env : ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw driftcal::ValidationError("cannot create directory: " + dir);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw driftcal::ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::ostringstream hex;
    hex << std::hex << fnv1a(buf.str());
    return hex.str();
}

/// Manifests record the full configuration (no timestamps, no absolute
/// paths) so identical runs produce identical bytes.
void write_manifest(OutputGuard& guard, const std::string& dir, json manifest) {
    const auto path = guard.track(join_path(dir, "manifest.json"));
    std::ofstream out(path, std::ios::binary);
    out << manifest.dump(2) << "\n";
    if (!out) throw driftcal::ParseError("write failed: " + path);
}

/// Same, next to a single-file output: <stem>_manifest.json.
void write_sidecar_manifest(OutputGuard& guard, const std::string& out_file,
                            json manifest) {
    const fs::path p(out_file);
    const auto path = guard.track(
        (p.parent_path() / (p.stem().string() + "_manifest.json")).string());
    std::ofstream out(path, std::ios::binary);
    out << manifest.dump(2) << "\n";
    if (!out) throw driftcal::ParseError("write failed: " + path);
}

std::string base_name(const std::string& path) {
    return fs::path(path).filename().string();
}

struct KernelFlags {
    std::string config_path;
    std::string family = "matern";
    double length = 200.0;
    std::string nu = "1.5";
    double rq_alpha = 1.0;
    double variance = 1.0;
    bool fixed_variance = false;

    CLI::Option* o_family = nullptr;
    CLI::Option* o_length = nullptr;
    CLI::Option* o_nu = nullptr;
    CLI::Option* o_alpha = nullptr;
    CLI::Option* o_variance = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kernel-config", config_path,
                        "Kernel config file; explicit flags override its fields");
        o_family = cmd->add_option("--kernel", family, "Kernel family (rbf|rq|matern)")
                       ->check(CLI::IsMember({"rbf", "rq", "matern"}));
        o_length = cmd->add_option("--length", length, "Kernel length scale in hours")
                       ->check(CLI::PositiveNumber);
        o_nu = cmd->add_option("--nu", nu, "Matern smoothness (0.5|1.5|2.5)")
                   ->check(CLI::IsMember({"0.5", "1.5", "2.5"}));
        o_alpha = cmd->add_option("--rq-alpha", rq_alpha, "Rational quadratic shape")
                      ->check(CLI::PositiveNumber);
        o_variance = cmd->add_option("--variance", variance, "Kernel variance template")
                         ->check(CLI::PositiveNumber);
        cmd->add_flag("--fixed-variance", fixed_variance,
                      "Keep the template variance instead of maximizing evidence");
    }

    driftcal::KernelSpec spec() const {
        driftcal::KernelSpec k;
        const bool from_file = !config_path.empty();
        if (from_file) k = driftcal::load_kernel_config(config_path);
        if (!from_file || o_family->count() > 0) k.family = driftcal::parse_family(family);
        if (!from_file || o_length->count() > 0) k.length_hours = length;
        if (!from_file || o_nu->count() > 0) k.nu = driftcal::parse_nu(nu);
        if (!from_file || o_alpha->count() > 0) k.alpha = rq_alpha;
        if (!from_file || o_variance->count() > 0) k.variance = variance;
        return k;
    }

    json to_json() const {
        const auto k = spec();
        return json{{"family", driftcal::family_name(k.family)},
                    {"length_hours", k.length_hours},
                    {"nu", driftcal::nu_value(k.nu)},
                    {"rq_alpha", k.alpha},
                    {"variance", k.variance},
                    {"rq_squared_distance", k.rq_squared_distance},
                    {"fixed_variance", fixed_variance}};
    }
};

driftcal::EvalMask parse_mask(const std::string& text) {
    driftcal::EvalMask mask;
    if (text.empty()) return mask;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw driftcal::ValidationError("mask window must be lo:hi, got: " + item);
        }
        mask.windows.emplace_back(driftcal::csv::parse_double(item.substr(0, colon)),
                                  driftcal::csv::parse_double(item.substr(colon + 1)));
    }
    return mask;
}

/// "matern:200,rq:200,rbf:50" with an optional third field for nu or alpha.
std::vector<driftcal::KernelSpec> parse_kernel_list(const std::string& text) {
    std::vector<driftcal::KernelSpec> kernels;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::vector<std::string> parts;
        std::istringstream fields(item);
        std::string part;
        while (std::getline(fields, part, ':')) parts.push_back(part);
        if (parts.size() < 2) {
            throw driftcal::ValidationError(
                "kernel entry must be family:length[:nu|:alpha], got: " + item);
        }
        driftcal::KernelSpec k;
        k.family = driftcal::parse_family(parts[0]);
        k.length_hours = driftcal::csv::parse_double(parts[1]);
        if (parts.size() > 2) {
            if (k.family == driftcal::KernelFamily::kMatern) {
                k.nu = driftcal::parse_nu(parts[2]);
            } else if (k.family == driftcal::KernelFamily::kRationalQuadratic) {
                k.alpha = driftcal::csv::parse_double(parts[2]);
            }
        }
        kernels.push_back(k);
    }
    return kernels;
}

std::vector<double> parse_interval_grid(const std::string& text) {
    // Either "10:100:10" (start:stop:step) or a plain comma list.
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ':')) {
            parts.push_back(driftcal::csv::parse_double(item));
        }
        if (parts.size() != 3 || parts[2] <= 0.0) {
            throw driftcal::ValidationError("interval grid must be start:stop:step");
        }
        for (double v = parts[0]; v <= parts[1] + 1e-9; v += parts[2]) out.push_back(v);
    } else {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (!item.empty()) out.push_back(driftcal::csv::parse_double(item));
        }
    }
    return out;
}

driftcal::ScenarioSpec load_or_default_scenario(const std::string& path,
                                                std::optional<std::uint64_t> seed) {
    driftcal::ScenarioSpec scn =
        path.empty() ? driftcal::default_scenario() : driftcal::load_scenario(path);
    if (seed.has_value()) scn.seed = *seed;
    return scn;
}

json scenario_manifest(const std::string& path, const driftcal::ScenarioSpec& scn) {
    json j;
    j["source"] = path.empty() ? "builtin-default" : fs::path(path).filename().string();
    j["hash"] = path.empty() ? "builtin" : file_hash_hex(path);
    j["seed"] = scn.seed;
    j["horizon_hours"] = scn.horizon_hours;
    j["sensors"] = json::array();
    for (const auto& s : scn.sensors) j["sensors"].push_back(s.name);
    return j;
}

double half_median_step(const driftcal::Series& s) {
    if (s.size() < 2) return 1e-9;
    std::vector<double> steps;
    for (std::size_t i = 1; i < s.size(); ++i) {
        steps.push_back(s.t_hours[i] - s.t_hours[i - 1]);
    }
    std::sort(steps.begin(), steps.end());
    return 0.5 * steps[steps.size() / 2];
}

std::vector<driftcal::SensorRecord> attach_reference(
    std::vector<driftcal::SensorRecord> records, const driftcal::Series& reference,
    double max_dt) {
    for (auto& r : records) {
        auto it = std::lower_bound(reference.t_hours.begin(), reference.t_hours.end(),
                                   r.t_hours);
        double best_dt = max_dt;
        std::size_t best = reference.size();
        if (it != reference.t_hours.end()) {
            const auto i = static_cast<std::size_t>(it - reference.t_hours.begin());
            const double dt = std::abs(reference.t_hours[i] - r.t_hours);
            if (dt <= best_dt) {
                best = i;
                best_dt = dt;
            }
        }
        if (it != reference.t_hours.begin()) {
            const auto i = static_cast<std::size_t>(it - reference.t_hours.begin()) - 1;
            const double dt = std::abs(reference.t_hours[i] - r.t_hours);
            if (dt < best_dt) best = i;
        }
        if (best != reference.size()) r.reference = reference.values[best];
    }
    return records;
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int cmd_gen_data(const std::string& scenario_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
    const auto scn = load_or_default_scenario(scenario_path, seed);
    ensure_dir(out_dir);
    OutputGuard guard;

    const auto fleet = driftcal::generate(scn);
    driftcal::Series reference{fleet.t_hours, fleet.reference};
    driftcal::write_series_csv(guard.track(join_path(out_dir, "reference.csv")),
                               reference, "oxygen_pct");
    for (std::size_t s = 0; s < scn.sensors.size(); ++s) {
        driftcal::write_records_csv(
            guard.track(join_path(out_dir, scn.sensors[s].name + ".csv")),
            fleet.sensors[s]);
    }

    json manifest;
    manifest["command"] = "gen-data";
    manifest["scenario"] = scenario_manifest(scenario_path, scn);
    write_manifest(guard, out_dir, manifest);
    guard.commit();
    std::cout << "wrote " << scn.sensors.size() << " sensor files + reference to "
              << out_dir << "\n";
    return 0;
}

int cmd_calibrate(const std::string& sensor_path, const std::string& reference_path,
                  double interval, double first, int low_count, int high_count,
                  double low_threshold, double high_threshold,
                  const driftcal::CycleSpec& cycle, const std::string& out_path) {
    auto records = driftcal::read_records_csv(sensor_path);
    const auto reference = driftcal::read_series_csv(reference_path);
    records = attach_reference(std::move(records), reference,
                               half_median_step(reference));
    if (records.empty()) {
        throw driftcal::ValidationError("sensor file has no records: " + sensor_path);
    }

    double horizon = 0.0;
    for (const auto& r : records) horizon = std::max(horizon, r.t_hours);

    driftcal::CycleSelection sel;
    sel.low_count = low_count;
    sel.high_count = high_count;
    sel.low_threshold = low_threshold;
    sel.high_threshold = high_threshold;

    int deferred = 0;
    const auto cals = driftcal::schedule_calibrations(records, cycle, horizon, first,
                                                      interval, sel, &deferred);
    if (cals.empty()) {
        throw driftcal::CalibrationUnavailableError(
            "no calibration window with enough usable samples");
    }

    OutputGuard guard;
    driftcal::write_calibrations_csv(guard.track(out_path), cals);
    json manifest;
    manifest["command"] = "calibrate";
    manifest["sensor"] = base_name(sensor_path);
    manifest["reference"] = base_name(reference_path);
    manifest["interval_hours"] = interval;
    manifest["first_hours"] = first;
    manifest["low_count"] = low_count;
    manifest["high_count"] = high_count;
    manifest["low_threshold"] = low_threshold;
    manifest["high_threshold"] = high_threshold;
    manifest["cycle_high_hours"] = cycle.high_hours;
    manifest["cycle_low_hours"] = cycle.low_hours;
    manifest["deferred_windows"] = deferred;
    write_sidecar_manifest(guard, out_path, manifest);
    guard.commit();
    std::cout << "wrote " << cals.size() << " calibrations to " << out_path;
    if (deferred > 0) std::cout << " (" << deferred << " windows deferred)";
    std::cout << "\n";
    return 0;
}

int cmd_correct(const std::string& sensor_path, const std::string& cals_path,
                const std::string& mode_name, const KernelFlags& kernel_flags,
                const std::string& out_path, const std::string& bands_prefix) {
    const auto records = driftcal::read_records_csv(sensor_path);
    const auto cals = driftcal::read_calibrations_csv(cals_path);
    const auto mode = driftcal::parse_mode(mode_name);

    driftcal::DriftOptions drift;
    drift.optimize_variance = !kernel_flags.fixed_variance;
    const auto kernel = kernel_flags.spec();

    std::vector<driftcal::CorrectionResult> results;
    switch (mode) {
        case driftcal::CorrectionMode::kOffline:
            results = driftcal::correct_offline(cals, kernel, records, drift);
            break;
        case driftcal::CorrectionMode::kOnline:
            results = driftcal::correct_online(cals, kernel, records, drift);
            break;
        case driftcal::CorrectionMode::kStepwise:
            results = driftcal::baseline_stepwise(cals, records, drift);
            break;
        case driftcal::CorrectionMode::kLinearInterp:
            results = driftcal::baseline_linear(cals, records, drift);
            break;
    }

    OutputGuard guard;
    driftcal::write_corrections_csv(guard.track(out_path), results);
    if (!bands_prefix.empty()) {
        const auto models = driftcal::train_models(cals, kernel, drift);
        std::vector<double> ts(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) ts[i] = records[i].t_hours;
        driftcal::write_band_csv(guard.track(bands_prefix + "_beta0.csv"),
                                 models[0].posterior, ts);
        driftcal::write_band_csv(guard.track(bands_prefix + "_beta1.csv"),
                                 models[1].posterior, ts);
    }
    json manifest;
    manifest["command"] = "correct";
    manifest["sensor"] = base_name(sensor_path);
    manifest["calibrations"] = base_name(cals_path);
    manifest["mode"] = mode_name;
    manifest["kernel"] = kernel_flags.to_json();
    write_sidecar_manifest(guard, out_path, manifest);
    guard.commit();
    std::cout << "wrote " << results.size() << " corrected rows to " << out_path
              << "\n";
    return 0;
}

int cmd_sweep(const std::string& scenario_path, std::optional<std::uint64_t> seed,
              const std::string& mode_name, const std::string& kernels_text,
              const std::string& intervals_text, int reps, int threads,
              const std::string& out_dir) {
    const auto scn = load_or_default_scenario(scenario_path, seed);
    driftcal::SweepOptions opts;
    opts.kernels = parse_kernel_list(kernels_text);
    opts.intervals_hours = parse_interval_grid(intervals_text);
    opts.reps = reps;
    opts.threads = threads;
    opts.mode = driftcal::parse_mode(mode_name);

    const auto result = driftcal::run_correction_sweep(scn, opts);

    std::vector<std::string> names;
    for (const auto& s : scn.sensors) names.push_back(s.name);
    ensure_dir(out_dir);
    OutputGuard guard;
    driftcal::write_sweep_cells_csv(guard.track(join_path(out_dir, "sweep_cells.csv")),
                                    result, names);
    driftcal::write_sweep_norm_csv(guard.track(join_path(out_dir, "sweep_norm.csv")),
                                   result, names);

    json manifest;
    manifest["command"] = "sweep";
    manifest["scenario"] = scenario_manifest(scenario_path, scn);
    manifest["mode"] = mode_name;
    manifest["kernels"] = kernels_text;
    manifest["intervals"] = opts.intervals_hours;
    manifest["reps"] = reps;
    write_manifest(guard, out_dir, manifest);
    guard.commit();

    std::cout << "wrote sweep tables (" << result.cells.size() << " cells) to "
              << out_dir << "\n";
    if (result.deferred_calibrations > 0) {
        std::cout << "deferred " << result.deferred_calibrations
                  << " unusable calibration windows\n";
    }
    return 0;
}

int cmd_schedule_sim(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                     double interval, double alpha, double max_interval,
                     double update_period, int reps, int threads,
                     const KernelFlags& kernel_flags, const std::string& out_dir) {
    const auto scn = load_or_default_scenario(scenario_path, seed);
    driftcal::ScheduleSimOptions opts;
    opts.schedule.alpha = alpha;
    opts.schedule.initial_interval_hours = interval;
    opts.schedule.max_interval_hours = max_interval;
    opts.schedule.update_period_hours = update_period;
    opts.kernel = kernel_flags.spec();
    opts.drift.optimize_variance = !kernel_flags.fixed_variance;
    opts.reps = reps;
    opts.threads = threads;

    const auto summary = driftcal::run_schedule_sim(scn, opts);

    ensure_dir(out_dir);
    OutputGuard guard;

    driftcal::csv::Table per_sensor;
    per_sensor.header = {"sensor",        "alpha",
                         "interval_hours", "rmse_adaptive",
                         "rmse_fixed",    "calibrations_adaptive",
                         "calibrations_fixed"};
    for (std::size_t s = 0; s < scn.sensors.size(); ++s) {
        per_sensor.rows.push_back(
            {scn.sensors[s].name, driftcal::csv::format_double(alpha),
             driftcal::csv::format_double(interval),
             driftcal::csv::format_double(summary.adaptive_mean[s].rmse),
             driftcal::csv::format_double(summary.fixed_mean[s].rmse),
             std::to_string(summary.adaptive_mean[s].calibrations),
             std::to_string(summary.fixed_mean[s].calibrations)});
    }
    driftcal::csv::write_file(guard.track(join_path(out_dir, "schedule_summary.csv")),
                              per_sensor);

    driftcal::csv::Table fleet;
    fleet.header = {"alpha", "interval_hours", "fleet_mse_adaptive",
                    "fleet_mse_fixed", "rel_mse"};
    fleet.rows.push_back({driftcal::csv::format_double(alpha),
                          driftcal::csv::format_double(interval),
                          driftcal::csv::format_double(summary.mean_fleet_mse_adaptive),
                          driftcal::csv::format_double(summary.mean_fleet_mse_fixed),
                          driftcal::csv::format_double(summary.fleet_relative_mse)});
    driftcal::csv::write_file(guard.track(join_path(out_dir, "schedule_fleet.csv")),
                              fleet);

    if (!summary.adaptive_runs.empty() && !summary.adaptive_runs[0].trace.empty()) {
        driftcal::write_schedule_trace_csv(
            guard.track(join_path(out_dir, "schedule_trace.csv")),
            summary.adaptive_runs[0].trace);
    }

    json manifest;
    manifest["command"] = "schedule-sim";
    manifest["scenario"] = scenario_manifest(scenario_path, scn);
    manifest["alpha"] = alpha;
    manifest["interval_hours"] = interval;
    manifest["max_interval_hours"] = max_interval;
    manifest["update_period_hours"] = update_period;
    manifest["reps"] = reps;
    manifest["kernel"] = kernel_flags.to_json();
    write_manifest(guard, out_dir, manifest);
    guard.commit();

    std::cout << "fleet relative MSE (adaptive vs fixed): "
              << summary.fleet_relative_mse << "\n";
    return 0;
}

int cmd_eval(const std::vector<std::string>& corrected_paths,
             const std::string& reference_path, const std::string& mask_text,
             const std::string& sensor_name, double interval,
             const std::string& out_path) {
    const auto reference = driftcal::read_series_csv(reference_path);
    const auto mask = parse_mask(mask_text);
    const double max_dt = half_median_step(reference);

    struct Row {
        std::string method;
        double mse, rmse, q50, q90;
    };
    std::vector<Row> rows;
    std::optional<double> stepwise_mse;
    for (const auto& path : corrected_paths) {
        const auto corrected = driftcal::read_corrections_csv(path);
        if (corrected.empty()) {
            throw driftcal::ValidationError("no rows in " + path);
        }
        const auto series = driftcal::pair_by_time(corrected, reference, max_dt);
        const double m = driftcal::mse(series, mask);
        Row row;
        row.method = driftcal::mode_name(corrected.front().mode);
        row.mse = m;
        row.rmse = std::sqrt(m);
        row.q50 = driftcal::abs_residual_quantile(series, 0.5, mask);
        row.q90 = driftcal::abs_residual_quantile(series, 0.9, mask);
        if (row.method == "stepwise") stepwise_mse = m;
        rows.push_back(row);
    }

    driftcal::csv::Table table;
    table.header = {"sensor", "method", "interval", "mse",
                    "rmse",   "rel_mse", "q50_abs",  "q90_abs"};
    for (const auto& r : rows) {
        const std::string rel =
            stepwise_mse.has_value()
                ? driftcal::csv::format_double(r.mse / *stepwise_mse)
                : "nan";
        table.rows.push_back({sensor_name, r.method,
                              driftcal::csv::format_double(interval),
                              driftcal::csv::format_double(r.mse),
                              driftcal::csv::format_double(r.rmse), rel,
                              driftcal::csv::format_double(r.q50),
                              driftcal::csv::format_double(r.q90)});
    }
    OutputGuard guard;
    driftcal::csv::write_file(guard.track(out_path), table);
    json manifest;
    manifest["command"] = "eval";
    json inputs = json::array();
    for (const auto& p : corrected_paths) inputs.push_back(base_name(p));
    manifest["corrected"] = inputs;
    manifest["reference"] = base_name(reference_path);
    manifest["mask"] = mask_text;
    manifest["sensor"] = sensor_name;
    manifest["interval"] = interval;
    write_sidecar_manifest(guard, out_path, manifest);
    guard.commit();
    std::cout << "wrote " << rows.size() << " metric rows to " << out_path << "\n";
    return 0;
}

int cmd_sync(const std::string& sensor_path, const std::string& reference_path,
             double window, double bound, double step,
             const std::string& breakpoints_text, const std::string& out_dir) {
    const auto sensor = driftcal::read_series_csv(sensor_path);
    const auto reference = driftcal::read_series_csv(reference_path);

    driftcal::SyncOptions opts;
    opts.window_hours = window;
    opts.search_bound_seconds = bound;
    opts.grid_step_seconds = step;
    const auto estimates = driftcal::estimate_offsets(sensor, reference, opts);
    if (estimates.empty()) {
        throw driftcal::ValidationError(
            "no usable correlation windows between the two series");
    }

    std::vector<double> breakpoints;
    if (!breakpoints_text.empty()) {
        std::istringstream in(breakpoints_text);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (!item.empty()) breakpoints.push_back(driftcal::csv::parse_double(item));
        }
    }
    const auto model = driftcal::fit_offset_model(estimates, breakpoints);
    const auto synced = driftcal::apply_offset(reference, model);

    ensure_dir(out_dir);
    OutputGuard guard;
    driftcal::write_offsets_csv(guard.track(join_path(out_dir, "offsets.csv")),
                                estimates);
    driftcal::write_series_csv(
        guard.track(join_path(out_dir, "reference_synced.csv")), synced,
        "value");
    json manifest;
    manifest["command"] = "sync";
    manifest["sensor"] = base_name(sensor_path);
    manifest["reference"] = base_name(reference_path);
    manifest["window_hours"] = window;
    manifest["bound_seconds"] = bound;
    manifest["step_seconds"] = step;
    manifest["breakpoints"] = breakpoints_text;
    write_manifest(guard, out_dir, manifest);
    guard.commit();
    std::cout << "estimated " << estimates.size() << " window offsets; model has "
              << model.segments.size() << " segment(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "driftcal: probabilistic sensor drift correction and "
        "uncertainty-driven calibration scheduling"};
    app.require_subcommand(1);
    // Parent-level flags (--seed) remain usable after the subcommand name.
    app.fallthrough();

    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "Override the scenario seed")->expected(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "Generate a synthetic sensor fleet");
    std::string gen_scenario;
    std::string gen_out = default_out_dir();
    gen->add_option("--scenario", gen_scenario, "Scenario file (defaults to the stock fleet)");
    gen->add_option("--out", gen_out, "Output directory");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Extract calibrations from a sensor stream");
    std::string cal_sensor, cal_reference;
    std::string cal_out = join_path(default_out_dir(), "calibrations.csv");
    double cal_interval = 50.0;
    double cal_first = 0.0;
    int cal_low = 5, cal_high = 5;
    double cal_low_thr = 10.0, cal_high_thr = 90.0;
    cal->add_option("--sensor", cal_sensor, "Sensor records CSV")->required();
    cal->add_option("--reference", cal_reference, "Reference series CSV")->required();
    cal->add_option("--interval", cal_interval, "Calibration interval in hours")
        ->check(CLI::PositiveNumber);
    cal->add_option("--first", cal_first, "First calibration time in hours");
    cal->add_option("--low-count", cal_low, "Samples per low plateau (3..6)");
    cal->add_option("--high-count", cal_high, "Samples per high plateau (3..6)");
    cal->add_option("--low-threshold", cal_low_thr, "Reference level counted as low");
    cal->add_option("--high-threshold", cal_high_thr, "Reference level counted as high");
    driftcal::CycleSpec cal_cycle;
    cal->add_option("--cycle-high-hours", cal_cycle.high_hours,
                    "Saturated phase length per cycle");
    cal->add_option("--cycle-low-hours", cal_cycle.low_hours,
                    "Anoxic phase length per cycle");
    cal->add_option("--out", cal_out, "Output calibrations CSV");

    // correct
    auto* cor = app.add_subcommand("correct", "Drift-correct a sensor stream");
    std::string cor_sensor, cor_cals, cor_bands;
    std::string cor_mode = "offline";
    std::string cor_out = join_path(default_out_dir(), "corrected.csv");
    KernelFlags cor_kernel;
    cor->add_option("--sensor", cor_sensor, "Sensor records CSV")->required();
    cor->add_option("--calibrations", cor_cals, "Calibrations CSV")->required();
    cor->add_option("--mode", cor_mode, "offline|online|stepwise|linear")
        ->check(CLI::IsMember({"offline", "online", "stepwise", "linear"}));
    cor_kernel.attach(cor);
    cor->add_option("--bands", cor_bands,
                    "Prefix for coefficient band CSVs (offline models)");
    cor->add_option("--out", cor_out, "Output corrections CSV");

    // sweep
    auto* swp = app.add_subcommand("sweep", "Calibration-interval sweep over a fleet");
    std::string swp_scenario;
    std::string swp_mode = "offline";
    std::string swp_kernels = "matern:200,rq:200,rbf:50";
    std::string swp_intervals = "10:100:10";
    int swp_reps = 50;
    int swp_threads = int(std::thread::hardware_concurrency());
    std::string swp_out = default_out_dir();
    swp->add_option("--scenario", swp_scenario, "Scenario file");
    swp->add_option("--mode", swp_mode, "offline|online")
        ->check(CLI::IsMember({"offline", "online"}));
    swp->add_option("--kernels", swp_kernels, "family:length[,family:length...]");
    swp->add_option("--intervals", swp_intervals, "start:stop:step or comma list");
    swp->add_option("--reps", swp_reps, "Repetitions per cell")->check(CLI::PositiveNumber);
    swp->add_option("--threads", swp_threads, "Worker threads");
    swp->add_option("--out", swp_out, "Output directory");

    // schedule-sim
    auto* sch = app.add_subcommand("schedule-sim",
                                   "Adaptive calibration scheduling simulation");
    std::string sch_scenario;
    double sch_interval = 50.0, sch_alpha = 0.1, sch_max = 100.0, sch_period = 1.0;
    int sch_reps = 1;
    int sch_threads = int(std::thread::hardware_concurrency());
    KernelFlags sch_kernel;
    std::string sch_out = default_out_dir();
    sch->add_option("--scenario", sch_scenario, "Scenario file");
    sch->add_option("--interval", sch_interval, "Initial calibration interval (hours)")
        ->check(CLI::PositiveNumber);
    sch->add_option("--alpha", sch_alpha, "Learning rate in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    sch->add_option("--max-interval", sch_max, "Maximum calibration interval (hours)")
        ->check(CLI::PositiveNumber);
    sch->add_option("--update-period", sch_period, "Interval update period (hours)")
        ->check(CLI::PositiveNumber);
    sch->add_option("--reps", sch_reps, "Repetitions")->check(CLI::PositiveNumber);
    sch->add_option("--threads", sch_threads, "Worker threads");
    sch_kernel.attach(sch);
    sch->add_option("--out", sch_out, "Output directory");

    // eval
    auto* evl = app.add_subcommand("eval", "Score corrected output against reference");
    std::vector<std::string> evl_corrected;
    std::string evl_reference, evl_mask;
    std::string evl_sensor = "sensor";
    double evl_interval = 0.0;
    std::string evl_out = join_path(default_out_dir(), "metrics.csv");
    evl->add_option("--corrected", evl_corrected, "Corrected CSV file(s)")
        ->required()
        ->delimiter(',');
    evl->add_option("--reference", evl_reference, "Reference series CSV")->required();
    evl->add_option("--mask", evl_mask, "Excluded windows lo:hi[,lo:hi...]");
    evl->add_option("--sensor", evl_sensor, "Sensor name for the summary rows");
    evl->add_option("--interval", evl_interval, "Interval column value");
    evl->add_option("--out", evl_out, "Output metrics CSV");

    // sync
    auto* syn = app.add_subcommand("sync", "Estimate and correct clock offsets");
    std::string syn_sensor, syn_reference, syn_breakpoints;
    double syn_window = 5.0, syn_bound = 200.0, syn_step = 2.0;
    std::string syn_out = default_out_dir();
    syn->add_option("--sensor", syn_sensor, "Sensor series CSV")->required();
    syn->add_option("--reference", syn_reference, "Reference series CSV")->required();
    syn->add_option("--window", syn_window, "Correlation window (hours)")
        ->check(CLI::PositiveNumber);
    syn->add_option("--bound", syn_bound, "Offset search bound (seconds)")
        ->check(CLI::PositiveNumber);
    syn->add_option("--step", syn_step, "Offset grid step (seconds)")
        ->check(CLI::PositiveNumber);
    syn->add_option("--breakpoints", syn_breakpoints,
                    "Offset model breakpoints (hours, comma separated)");
    syn->add_option("--out", syn_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(gen_scenario, gen_out, seed);
        if (cal->parsed()) {
            return cmd_calibrate(cal_sensor, cal_reference, cal_interval, cal_first,
                                 cal_low, cal_high, cal_low_thr, cal_high_thr,
                                 cal_cycle, cal_out);
        }
        if (cor->parsed()) {
            return cmd_correct(cor_sensor, cor_cals, cor_mode, cor_kernel, cor_out,
                               cor_bands);
        }
        if (swp->parsed()) {
            return cmd_sweep(swp_scenario, seed, swp_mode, swp_kernels, swp_intervals,
                             swp_reps, swp_threads, swp_out);
        }
        if (sch->parsed()) {
            return cmd_schedule_sim(sch_scenario, seed, sch_interval, sch_alpha,
                                    sch_max, sch_period, sch_reps, sch_threads,
                                    sch_kernel, sch_out);
        }
        if (evl->parsed()) {
            return cmd_eval(evl_corrected, evl_reference, evl_mask, evl_sensor,
                            evl_interval, evl_out);
        }
        if (syn->parsed()) {
            return cmd_sync(syn_sensor, syn_reference, syn_window, syn_bound, syn_step,
                            syn_breakpoints, syn_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
