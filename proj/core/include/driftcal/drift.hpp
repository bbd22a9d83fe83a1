#ifndef DRIFTCAL_DRIFT_HPP
#define DRIFTCAL_DRIFT_HPP

#include <span>
#include <string>
#include <vector>

#include "driftcal/calibration.hpp"
#include "driftcal/gpr.hpp"
#include "driftcal/types.hpp"

namespace driftcal {

enum class CorrectionMode { kOffline, kOnline, kStepwise, kLinearInterp };

std::string mode_name(CorrectionMode mode);
CorrectionMode parse_mode(const std::string& name);

/// GP posterior over one response coefficient as a function of time,
/// trained on the calibration history (noise = squared standard errors).
struct CoefficientModel {
    int coefficient_index = 0;  // 0 = baseline, 1 = sensitivity
    GpModel posterior;
};

struct CorrectionResult {
    double t_hours = 0.0;
    double y_hat = 0.0;    // %O2
    double sigma_y = 0.0;  // propagated 1-sigma, %O2
    CorrectionMode mode = CorrectionMode::kOffline;
    bool valid = true;
};

struct DriftOptions {
    /// Maximize the marginal likelihood over the kernel variance when at
    /// least two calibrations are available; otherwise the template variance
    /// is kept as-is.
    bool optimize_variance = true;
    /// |beta1(t)| below this marks the inversion invalid (mV per %O2).
    double slope_floor = 1e-6;
};

/// One GP per coefficient, trained on calibration times/estimates/SE^2.
std::vector<CoefficientModel> train_models(std::span<const Calibration> cals,
                                           const KernelSpec& kernel,
                                           const DriftOptions& options = {});

/// Invert the affine response per record using the coefficient posteriors:
/// y = (x - beta0(t)) / beta1(t), with first-order uncertainty propagation
/// sigma_y^2 = (var0 + y^2 var1) / beta1(t)^2. Results keep record order.
std::vector<CorrectionResult> correct(std::span<const CoefficientModel> models,
                                      std::span<const SensorRecord> records,
                                      CorrectionMode mode = CorrectionMode::kOffline,
                                      const DriftOptions& options = {});

/// Train once on the full calibration history, then correct every record.
std::vector<CorrectionResult> correct_offline(std::span<const Calibration> cals,
                                              const KernelSpec& kernel,
                                              std::span<const SensorRecord> records,
                                              const DriftOptions& options = {});

/// Causal variant: each record is corrected with models trained only on
/// calibrations at or before its timestamp; retraining happens at
/// calibration times only. Records before the first calibration come back
/// with valid = false.
std::vector<CorrectionResult> correct_online(std::span<const Calibration> cals,
                                             const KernelSpec& kernel,
                                             std::span<const SensorRecord> records,
                                             const DriftOptions& options = {});

/// Carry the most recent calibration forward (and the first one backward).
std::vector<CorrectionResult> baseline_stepwise(std::span<const Calibration> cals,
                                                std::span<const SensorRecord> records,
                                                const DriftOptions& options = {});

/// Piecewise-linear coefficients between calibrations, flat outside the
/// calibrated range. Falls back to stepwise with fewer than 2 calibrations.
std::vector<CorrectionResult> baseline_linear(std::span<const Calibration> cals,
                                              std::span<const SensorRecord> records,
                                              const DriftOptions& options = {});

}  // namespace driftcal

#endif  // DRIFTCAL_DRIFT_HPP
