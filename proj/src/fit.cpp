#include "tfd/fit.hpp"

#include "tfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tfd {

const char* fit_model_name(FitModel m) noexcept {
    return m == FitModel::LogLog ? "loglog" : "logabscissa";
}

FitResult fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("fit: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("fit: need at least two points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DomainError("fit: non-finite sample");
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DomainError("fit: abscissae are all equal");
    FitResult f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy > 0.0) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - (f.intercept + f.slope * x[i]);
            ssr += e * e;
        }
        f.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
    } else {
        f.r_squared = 1.0;  // constant data is fitted exactly
    }
    return f;
}

namespace {

std::vector<double> logs(std::span<const double> v, const char* what) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw DomainError(std::string("fit: ") + what + " must be positive for a log fit");
        out[i] = std::log(v[i]);
    }
    return out;
}

}  // namespace

FitResult fit_power_law(std::span<const double> x, std::span<const double> y) {
    const auto lx = logs(x, "x");
    const auto ly = logs(y, "y");
    auto f = fit_linear(lx, ly);
    f.model = FitModel::LogLog;
    return f;
}

FitResult fit_log_abscissa(std::span<const double> x, std::span<const double> y) {
    const auto lx = logs(x, "x");
    auto f = fit_linear(lx, y);
    f.model = FitModel::LogAbscissa;
    return f;
}

FitResult fit(FitModel model, std::span<const double> x, std::span<const double> y) {
    return model == FitModel::LogLog ? fit_power_law(x, y) : fit_log_abscissa(x, y);
}

}  // namespace tfd
