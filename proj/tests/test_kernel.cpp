#include "doctest.h"

#include "tfd/errors.hpp"
#include "tfd/fit.hpp"
#include "tfd/kernel.hpp"
#include "tfd/solver.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace tfd;

namespace {

constexpr double kPi = std::numbers::pi;

double heat(int d, double t, double r) { return std::pow(4.0 * kPi * t, -0.5 * d) * std::exp(-r * r / (4.0 * t)); }

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
    return v;
}

double log_slope(const EquationParams& p, double a, double b) {
    const auto r = logspace(a, b, 9);
    std::vector<double> z;
    for (double x : r) z.push_back(eval_kernel_mellin(p, 1.0, x));
    return fit_power_law(r, z).slope;
}

}  // namespace

TEST_CASE("EquationParams validation") {
    CHECK_THROWS_AS(EquationParams::make(0.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(EquationParams::make(1.2, 1.0, 1), DomainError);
    CHECK_THROWS_AS(EquationParams::make(0.5, 2.5, 1), DomainError);
    CHECK_THROWS_AS(EquationParams::make(0.5, 1.0, 6), DomainError);
    CHECK(EquationParams::make(0.5, 1.0, 3).shifted(2).dim == 5);
}

TEST_CASE("fourier symbol values") {
    const double s = 1.0 / std::sqrt(2.0 * kPi);
    CHECK(fourier_symbol(EquationParams::make(0.3, 1.2, 1), 0.0, 7.0) == doctest::Approx(s).epsilon(1e-15));
    CHECK(fourier_symbol(EquationParams::make(1.0, 2.0, 1), 1.0, 1.0) ==
          doctest::Approx(0.1467626).epsilon(1e-6));
    CHECK(fourier_symbol(EquationParams::make(0.5, 1.0, 1), 2.0, 1.0) ==
          doctest::Approx(s * std::exp(4.0) * std::erfc(2.0)).epsilon(1e-11));
    const auto p = EquationParams::make(0.4, 1.3, 2);
    double prev = 1.0;
    for (double rho : logspace(1e-3, 1e3, 40)) {
        const double v = fourier_symbol(p, rho, 1.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("grid heat kernel") {
    const auto p = EquationParams::make(1.0, 2.0, 1);
    const auto g = GridSpec::make(1, 40.0, 4096);
    const Field z = eval_kernel_grid(p, 1.0, g);
    CHECK(z.mass() == doctest::Approx(1.0).epsilon(1e-12));
    double worst = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double x = z.node(i)[0];
        // below ~1e-8 of the peak the FFT rounding floor dominates
        if (std::abs(x) <= 8.0) worst = std::max(worst, std::abs(z[i] / heat(1, 1.0, x) - 1.0));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("grid Poisson kernel") {
    const auto p = EquationParams::make(1.0, 1.0, 1);
    const auto g = GridSpec::make(1, 2000.0, std::size_t{1} << 16);
    const Field z = eval_kernel_grid(p, 1.0, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double x = z.node(i)[0];
        if (std::abs(x) <= 10.0) worst = std::max(worst, std::abs(z[i] * kPi * (1.0 + x * x) - 1.0));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("grid kernel refuses an unresolved symbol") {
    CHECK_THROWS_AS(eval_kernel_grid(EquationParams::make(1.0, 2.0, 1), 1e-6, GridSpec::make(1, 10.0, 64)),
                    ResolutionError);
}

TEST_CASE("grid and Mellin routes agree") {
    const auto p = EquationParams::make(0.6, 1.5, 2);
    const Field z = eval_kernel_grid(p, 1.0, GridSpec::make(2, 32.0, 4096));
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
        const double m = eval_kernel_mellin(p, 1.0, r);
        CHECK(point_value(z, {r, 0.0, 0.0}) == doctest::Approx(m).epsilon(1e-3));
    }
}

TEST_CASE("grid kernel mass") {
    struct Case {
        double alpha, beta;
    };
    for (const Case c : {Case{1.0, 0.7}, Case{0.5, 1.3}, Case{0.5, 2.0}}) {
        const auto p = EquationParams::make(c.alpha, c.beta, 1);
        const Field z = eval_kernel_grid(p, 1.0, GridSpec::make(1, 100.0, std::size_t{1} << 16));
        CHECK(z.mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Mellin heat kernel") {
    const auto p1 = EquationParams::make(1.0, 2.0, 1);
    CHECK(eval_kernel_mellin(p1, 1.0, 1.0, default_contour(p1)) == doctest::Approx(0.2196956).epsilon(1e-6));
    for (int d = 1; d <= 3; ++d) {
        const auto p = EquationParams::make(1.0, 2.0, d);
        for (double t : {0.5, 2.0}) {
            for (double r : {0.1, 1.0, 3.0, 6.0 * std::sqrt(t)}) {
                CHECK(eval_kernel_mellin(p, t, r) == doctest::Approx(heat(d, t, r)).epsilon(1e-10));
            }
        }
    }
    // far field only through the log route
    CHECK(log_kernel_mellin(p1, 1.0, 80.0) == doctest::Approx(-0.5 * std::log(4.0 * kPi) - 1600.0).epsilon(1e-12));
}

TEST_CASE("Mellin Poisson kernel") {
    const auto p = EquationParams::make(1.0, 1.0, 1);
    for (double r : {0.01, 0.5, 3.0, 10.0, 200.0}) {
        CHECK(eval_kernel_mellin(p, 1.0, r) == doctest::Approx(1.0 / (kPi * (1.0 + r * r))).epsilon(1e-10));
    }
}

TEST_CASE("contour checks") {
    const auto p = EquationParams::make(0.5, 1.0, 1);
    const auto s = contour_strip(p);
    CHECK(s.left == -1.0);
    CHECK(s.right == 1.0);
    CHECK(std::isinf(contour_strip(EquationParams::make(0.5, 2.0, 1)).right));
    ContourSpec bad;
    bad.abscissa = 1.5;
    CHECK_THROWS_AS(eval_kernel_mellin(p, 1.0, 1.0, bad), ContourError);
    bad.abscissa = -0.25;
    bad.nodes = 100;
    CHECK_THROWS_AS(eval_kernel_mellin(p, 1.0, 1.0, bad), ContourError);
    const auto dc = default_contour(EquationParams::make(0.5, 2.0, 1));
    CHECK(dc.abscissa == doctest::Approx(-0.125));
    // the default line cannot resolve the far field: cancellation is reported
    CHECK_THROWS_AS(eval_kernel_mellin(EquationParams::make(1.0, 2.0, 1), 1.0, 12.0,
                                       default_contour(EquationParams::make(1.0, 2.0, 1))),
                    Error);
}

TEST_CASE("Mellin log-slopes in the asymptotic regimes") {
    CHECK(log_slope(EquationParams::make(0.5, 2.0, 3), 0.05, 0.2) == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(log_slope(EquationParams::make(0.5, 1.0, 1), 8.0, 64.0) == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("regime classification") {
    auto r = classify_regime(EquationParams::make(0.5, 1.0, 1), 1.0, 1.0);
    CHECK(r.similarity_r == doctest::Approx(0.5));
    CHECK(r.regime == Regime::NearField_dEqBeta);
    CHECK(r.envelope == doctest::Approx(1.0));

    r = classify_regime(EquationParams::make(0.5, 1.5, 1), 16.0, 0.0);
    CHECK(r.regime == Regime::NearField_dLtBeta);
    CHECK(r.envelope == doctest::Approx(std::pow(16.0, -1.0 / 3.0)));
    CHECK_FALSE(r.singular);

    r = classify_regime(EquationParams::make(0.5, 2.0, 2), 1.0, 4.0);
    CHECK(r.similarity_r == doctest::Approx(4.0));
    CHECK(r.regime == Regime::FarField_gaussian);
    CHECK(r.sigma == doctest::Approx(1.5 * std::pow(std::sqrt(0.5) / 4.0, 1.0 / 1.5)));

    r = classify_regime(EquationParams::make(0.5, 1.0, 2), 1.0, 0.0);
    CHECK(r.regime == Regime::NearField_dGtBeta);
    CHECK(r.singular);
    CHECK(std::isinf(r.envelope));

    // R = 1 exactly breaks to the near field
    r = classify_regime(EquationParams::make(0.5, 1.0, 2), 1.0, 2.0);
    CHECK(r.similarity_r == doctest::Approx(1.0));
    CHECK(is_near_field(r.regime));

    r = classify_regime(EquationParams::make(0.5, 1.0, 2), 1.0, 10.0);
    CHECK(r.regime == Regime::FarField_stable);
    CHECK(r.envelope == doctest::Approx(std::pow(10.0, -3.0)));

    r = classify_regime(EquationParams::make(1.0, 1.0, 2), 1.0, 0.5);
    CHECK(r.regime == Regime::NearField_alpha1);
}

TEST_CASE("radial derivative by dimension shift") {
    const auto heatp = EquationParams::make(1.0, 2.0, 1);
    CHECK(radial_derivative_via_shift(heatp, 1.0, 1.0) == doctest::Approx(-0.1098478).epsilon(1e-6));

    const auto p = EquationParams::make(0.5, 1.5, 1);
    const double h = 1e-3;
    const double fd = (eval_kernel_mellin(p, 1.0, 2.0 + h) - eval_kernel_mellin(p, 1.0, 2.0 - h)) / (2.0 * h);
    CHECK(radial_derivative_via_shift(p, 1.0, 2.0) == doctest::Approx(fd).epsilon(1e-3));

    // alpha = 1, d < beta: the profile is smooth at 0 and the derivative is linear in r
    const auto q = EquationParams::make(1.0, 1.5, 1);
    const double a = radial_derivative_via_shift(q, 1.0, 1e-3);
    const double b = radial_derivative_via_shift(q, 1.0, 2e-3);
    CHECK(a < 0.0);
    CHECK(b / a == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("positivity, radial decrease and self-similarity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.2, 1.0);
    std::uniform_real_distribution<double> ub(0.3, 2.0);
    const auto radii = logspace(0.05, 20.0, 12);
    for (int k = 0; k < 5; ++k) {
        const auto p = EquationParams::make(ua(rng), ub(rng), 1 + k % 3);
        double prev = INFINITY;
        for (double r : radii) {
            const double z = eval_kernel_mellin(p, 1.0, r);
            CHECK(z > 0.0);
            CHECK(z < prev * (1.0 + 1e-9));
            prev = z;
        }
        for (double t : {0.3, 4.0}) {
            const double r = 1.7;
            const double lhs = eval_kernel_mellin(p, t, r);
            const double rhs = std::pow(t, -p.alpha * p.dim / p.beta) *
                               eval_kernel_mellin(p, 1.0, r * std::pow(t, -p.alpha / p.beta));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
        }
    }
}
