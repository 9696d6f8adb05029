#pragma once

#include <cstddef>
#include <span>

namespace tfd {

/// LogLog: log y = intercept + slope log x.
/// LogAbscissa: y = intercept + slope log x.
enum class FitModel { LogLog, LogAbscissa };

const char* fit_model_name(FitModel m) noexcept;

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;  // clamped to [0, 1]
    FitModel model = FitModel::LogLog;
    std::size_t points = 0;

    /// Slopes feeding an assertion need r^2 >= 0.98.
    bool conclusive(double min_r_squared = 0.98) const noexcept { return r_squared >= min_r_squared; }
};

/// Ordinary least squares y = a + b x. Needs at least two distinct x.
FitResult fit_linear(std::span<const double> x, std::span<const double> y);

/// Requires x > 0 (and y > 0 for LogLog).
FitResult fit_power_law(std::span<const double> x, std::span<const double> y);
FitResult fit_log_abscissa(std::span<const double> x, std::span<const double> y);
FitResult fit(FitModel model, std::span<const double> x, std::span<const double> y);

}  // namespace tfd
