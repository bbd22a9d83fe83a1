#ifndef DRIFTCAL_CALIBRATION_HPP
#define DRIFTCAL_CALIBRATION_HPP

#include <span>
#include <utility>
#include <vector>

#include "driftcal/types.hpp"

namespace driftcal {

/// One fitted affine response x = beta0 + beta1 * y at a point in time,
/// with standard errors from the regression.
struct Calibration {
    double t_hours = 0.0;   // midpoint of the samples used
    double beta0 = 0.0;     // baseline, mV
    double beta1 = 0.0;     // sensitivity, mV per %O2
    double se0 = 0.0;
    double se1 = 0.0;
    int n_samples = 0;
};

/// A reference/signal pair fed to the affine fit.
struct CalibrationSample {
    double y_ref = 0.0;     // %O2
    double x_signal = 0.0;  // mV
};

/// Ordinary least squares of signal against reference value.
/// Standard errors use the classical closed forms with s^2 = RSS / (n - 2);
/// a perfect fit yields SE = 0. Requires >= 3 samples (finite residual
/// degrees of freedom) and spread in y_ref.
Calibration fit_affine(std::span<const CalibrationSample> samples, double t_hours);

struct CycleSelection {
    double window_lo_hours = 0.0;
    double window_hi_hours = 0.0;
    int low_count = 5;              // samples taken near the low plateau, 3..6
    int high_count = 5;             // samples taken near the high plateau, 3..6
    double low_threshold = 10.0;    // reference <= this qualifies as low
    double high_threshold = 90.0;   // reference >= this qualifies as high
};

/// Build a calibration from records inside one saturation-anoxic cycle:
/// pick the requested number of valid, reference-aligned samples closest to
/// the window midpoint at each plateau and run fit_affine with t = mean
/// timestamp of the selected samples.
/// Throws CalibrationUnavailableError when either plateau lacks samples.
Calibration make_calibration_from_cycle(std::span<const SensorRecord> records,
                                        const CycleSelection& selection);

}  // namespace driftcal

#endif  // DRIFTCAL_CALIBRATION_HPP
