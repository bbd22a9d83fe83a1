#ifndef DRIFTCAL_TYPES_HPP
#define DRIFTCAL_TYPES_HPP

#include <optional>
#include <vector>

namespace driftcal {

/// One timestamped raw sensor reading. `signal_mv` is the electrical output;
/// `reference` is the aligned ground-truth analyte value (%O2) when one
/// exists. Readings inside dropout windows carry valid = false.
struct SensorRecord {
    double t_hours = 0.0;
    double signal_mv = 0.0;
    std::optional<double> reference;
    bool valid = true;
};

/// A plain (time, value) series, sorted by time.
struct Series {
    std::vector<double> t_hours;
    std::vector<double> values;

    std::size_t size() const { return t_hours.size(); }
};

}  // namespace driftcal

#endif  // DRIFTCAL_TYPES_HPP
