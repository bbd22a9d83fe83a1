#ifndef DRIFTCAL_IO_HPP
#define DRIFTCAL_IO_HPP

#include <span>
#include <string>
#include <vector>

#include "driftcal/calibration.hpp"
#include "driftcal/drift.hpp"
#include "driftcal/simulate.hpp"
#include "driftcal/timesync.hpp"
#include "driftcal/types.hpp"

namespace driftcal {

// Sensor records: t_hours,signal_mv,valid
void write_records_csv(const std::string& path, std::span<const SensorRecord> records);
std::vector<SensorRecord> read_records_csv(const std::string& path);

// Generic (time, value) series; the value column is the first non-time one.
void write_series_csv(const std::string& path, const Series& series,
                      const std::string& value_column);
Series read_series_csv(const std::string& path);

// Calibrations: t_hours,beta0,beta1,se0,se1,n_samples
void write_calibrations_csv(const std::string& path, std::span<const Calibration> cals);
std::vector<Calibration> read_calibrations_csv(const std::string& path);

// Corrections: t_hours,y_hat,sigma_y,mode,valid
void write_corrections_csv(const std::string& path,
                           std::span<const CorrectionResult> results);
std::vector<CorrectionResult> read_corrections_csv(const std::string& path);

// Coefficient posterior band for plotting: t_hours,mean,lo95,hi95 (2 sigma).
void write_band_csv(const std::string& path, const GpModel& model,
                    std::span<const double> ts);

// Offset estimates: window_center_hours,offset_s,correlation
void write_offsets_csv(const std::string& path,
                       std::span<const OffsetEstimate> estimates);

// Schedule trace: t_hours,sensor_id,interval_hours,uncertainty,calibrated_flag,budget_freq
void write_schedule_trace_csv(const std::string& path,
                              std::span<const ScheduleTraceRow> trace);

/// Wide sweep table, one row per interval and one relative-MSE column per
/// (sensor, method) pair: interval_hours,<sensor>_<method>,...
void write_sweep_norm_csv(const std::string& path, const SweepResult& result,
                          std::span<const std::string> sensor_names);

/// Long-format raw sweep cells: sensor,method,interval_hours,rep,mse,rel_mse
void write_sweep_cells_csv(const std::string& path, const SweepResult& result,
                           std::span<const std::string> sensor_names);

}  // namespace driftcal

#endif  // DRIFTCAL_IO_HPP
