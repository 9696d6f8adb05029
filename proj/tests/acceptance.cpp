// One line per acceptance criterion; exit status is nonzero if any fails.

#include "tfd/errors.hpp"
#include "tfd/experiments.hpp"
#include "tfd/specfun.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace tfd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string failed;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failed += " [failed: " + what + "]";
        }
    }
};

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
    return v;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

double heat(int d, double t, double r) { return std::pow(4.0 * kPi * t, -0.5 * d) * std::exp(-r * r / (4.0 * t)); }

// worst relative error of a grid kernel against `exact` on nodes with |x| <= rmax
double grid_error(const Field& z, double rmax, const std::function<double(double)>& exact) {
    double worst = 0.0;
    const int d = z.grid().dim;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double r = norm(z.node(i), d);
        if (r <= rmax) worst = std::max(worst, rel(z[i], exact(r)));
    }
    return worst;
}

// ---------------------------------------------------------------- 1

void heat_oracle(Outcome& o) {
    struct G {
        int d;
        double L;
        std::size_t n;
    };
    const G grids[] = {{1, 40.0, 4096}, {2, 20.0, 512}, {3, 20.0, 128}};
    double worst_grid = 0.0;
    double worst_mellin = 0.0;
    for (const G& g : grids) {
        const auto p = EquationParams::make(1.0, 2.0, g.d);
        for (double t : {0.25, 1.0, 4.0}) {
            const double rmax = 6.0 * std::sqrt(t);
            const Field z = eval_kernel_grid(p, t, GridSpec::make(g.d, g.L, g.n));
            worst_grid = std::max(worst_grid, grid_error(z, rmax, [&](double r) { return heat(g.d, t, r); }));
            for (int k = 1; k <= 24; ++k) {
                const double r = rmax * k / 24.0;
                worst_mellin = std::max(worst_mellin, rel(eval_kernel_mellin(p, t, r), heat(g.d, t, r)));
            }
        }
    }
    o.detail << "grid " << worst_grid << ", mellin " << worst_mellin;
    o.require(worst_grid <= 1e-6 && worst_mellin <= 1e-6, "relative error <= 1e-6");
}

// ---------------------------------------------------------------- 2

void poisson_oracle(Outcome& o) {
    const auto p = EquationParams::make(1.0, 1.0, 1);
    const double t = 1.0;
    auto exact = [t](double r) { return t / (kPi * (t * t + r * r)); };
    const Field z = eval_kernel_grid(p, t, GridSpec::make(1, 2000.0, std::size_t{1} << 16));
    const double g = grid_error(z, 10.0, exact);
    double m = 0.0;
    for (int k = 1; k <= 40; ++k) m = std::max(m, rel(eval_kernel_mellin(p, t, 0.25 * k), exact(0.25 * k)));
    o.detail << "grid " << g << ", mellin " << m;
    o.require(g <= 1e-4 && m <= 1e-4, "relative error <= 1e-4");
}

// ---------------------------------------------------------------- 3

void mittag_leffler_suite(Outcome& o) {
    bool zero = true;
    for (int i = 1; i <= 10; ++i) zero = zero && mittag_leffler_neg(0.1 * i, 0.0) == 1.0;
    o.require(zero, "E_a(0) == 1");

    double e1 = 0.0;
    for (double x : logspace(1e-3, 700.0, 60)) e1 = std::max(e1, rel(mittag_leffler_neg(1.0, x), std::exp(-x)));
    o.require(e1 <= 1e-12, "E_1(-x) = exp(-x)");

    const double half = mittag_leffler_neg(0.5, 1.0);
    o.require(std::abs(half - 0.4275836) <= 1e-6, "E_1/2(-1)");

    double lo = 1e300;
    double hi = 0.0;
    std::vector<double> xs{0.0};
    for (double x : logspace(1e-4, 1e6, 200)) xs.push_back(x);
    for (int i = 1; i <= 9; ++i) {
        const MittagLefflerNeg ml(0.1 * i);
        for (double x : xs) {
            const double q = (1.0 + x) * ml(x);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
    }
    o.detail << "E_1 err " << e1 << ", E_1/2(-1) = " << half << ", (1+x)E in [" << lo << ", " << hi << "]";
    o.require(lo >= 1e-3 && hi <= 1e3, "(1+x)E_a(-x) in [1e-3, 1e3]");
}

// ---------------------------------------------------------------- 4

void structural_identities(Outcome& o) {
    struct Mass {
        double alpha, beta, tol;
    };
    double worst_mass = 0.0;
    bool mass_ok = true;
    for (const Mass m : {Mass{1.0, 2.0, 1e-6}, Mass{0.5, 2.0, 1e-6}, Mass{0.3, 2.0, 1e-6}, Mass{1.0, 0.7, 2e-2},
                         Mass{0.5, 1.3, 2e-2}, Mass{0.8, 1.6, 2e-2}}) {
        const auto p = EquationParams::make(m.alpha, m.beta, 1);
        const double t = 1.0;
        const double L = 100.0 * std::pow(t, m.alpha / m.beta);
        const double err = std::abs(eval_kernel_grid(p, t, GridSpec::make(1, L, std::size_t{1} << 16)).mass() - 1.0);
        worst_mass = std::max(worst_mass, err);
        mass_ok = mass_ok && err <= m.tol;
    }
    o.require(mass_ok, "mass");

    std::mt19937_64 eng(kDefaultSeed);
    std::uniform_real_distribution<double> ua(0.2, 1.0);
    std::uniform_real_distribution<double> ub(0.3, 2.0);
    const auto radii = logspace(0.02, 30.0, 50);
    bool decreasing = true;
    double worst_deriv = 0.0;
    double worst_scale = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto p = EquationParams::make(ua(eng), ub(eng), 1 + k % 3);
        double prev = INFINITY;
        for (double r : radii) {
            const double z = eval_kernel_mellin(p, 1.0, r);
            decreasing = decreasing && z > 0.0 && z < prev;
            prev = z;
        }
        for (double r : {0.3, 1.0, 3.0}) {
            const double h = 1e-4 * r;
            const double fd = (eval_kernel_mellin(p, 1.0, r + h) - eval_kernel_mellin(p, 1.0, r - h)) / (2.0 * h);
            worst_deriv = std::max(worst_deriv, rel(radial_derivative_via_shift(p, 1.0, r), fd));
        }
        for (double t : {0.2, 5.0}) {
            for (double r : {0.5, 2.0}) {
                const double rhs = std::pow(t, -p.alpha * p.dim / p.beta) *
                                   eval_kernel_mellin(p, 1.0, r * std::pow(t, -p.alpha / p.beta));
                worst_scale = std::max(worst_scale, rel(eval_kernel_mellin(p, t, r), rhs));
            }
        }
    }
    o.detail << "mass err " << worst_mass << ", decreasing " << (decreasing ? "yes" : "no") << ", derivative "
             << worst_deriv << ", scaling " << worst_scale;
    o.require(decreasing, "strict radial decrease");
    o.require(worst_deriv <= 1e-3, "derivative identity 1e-3");
    o.require(worst_scale <= 1e-6, "scaling 1e-6");
}

// ---------------------------------------------------------------- 5

FitResult kernel_fit(const EquationParams& p, double a, double b, FitModel model) {
    const auto r = logspace(a, b, 11);
    std::vector<double> z;
    for (double x : r) z.push_back(eval_kernel_mellin(p, 1.0, x));
    return fit(model, r, z);
}

void regime_slopes(Outcome& o) {
    struct Triple {
        double alpha, beta;
        int d;
    };
    double worst = 0.0;
    // near field, d > beta: one decade deep inside R << 1
    for (const Triple c : {Triple{0.3, 0.5, 1}, Triple{0.5, 1.0, 2}, Triple{0.8, 1.5, 3}, Triple{0.6, 1.2, 2}}) {
        const auto p = EquationParams::make(c.alpha, c.beta, c.d);
        const auto f = kernel_fit(p, 1e-6, 1e-5, FitModel::LogLog);
        const double e = rel(f.slope, c.beta - c.d);
        worst = std::max(worst, e);
        o.require(e <= 0.05 && f.conclusive(), "near slope " + p.describe());
    }
    // far field, beta < 2
    for (const Triple c : {Triple{0.5, 1.0, 1}, Triple{0.3, 0.5, 2}, Triple{0.9, 1.7, 3}, Triple{1.0, 1.0, 1}}) {
        const auto p = EquationParams::make(c.alpha, c.beta, c.d);
        const auto f = kernel_fit(p, 100.0, 1000.0, FitModel::LogLog);
        const double e = rel(f.slope, -c.d - c.beta);
        worst = std::max(worst, e);
        o.require(e <= 0.05 && f.conclusive(), "far slope " + p.describe());
    }
    o.detail << "worst slope error " << worst;
    // d = beta: Z tracks the log envelope
    double min_r2 = 1.0;
    for (const Triple c : {Triple{0.5, 1.0, 1}, Triple{0.7, 2.0, 2}}) {
        const auto p = EquationParams::make(c.alpha, c.beta, c.d);
        const auto f = kernel_fit(p, 1e-6, 1e-3, FitModel::LogAbscissa);
        min_r2 = std::min(min_r2, f.r_squared);
        o.require(f.conclusive() && f.slope < 0.0, "log envelope " + p.describe());
    }
    o.detail << ", log r^2 " << min_r2;
    // beta = 2: log(-log Z) against log R has slope 1 / (2 - alpha)
    double worst_stretch = 0.0;
    for (const Triple c : {Triple{0.5, 2.0, 1}, Triple{0.3, 2.0, 2}, Triple{0.8, 2.0, 3}, Triple{0.1, 2.0, 1}}) {
        const auto p = EquationParams::make(c.alpha, c.beta, c.d);
        std::vector<double> R;
        std::vector<double> y;
        for (double s : logspace(1e3, 1e5, 11)) {
            R.push_back(s);
            const double r = 2.0 * std::sqrt(s);  // R = r^2 / 4 at t = 1
            y.push_back(-log_kernel_mellin(p, 1.0, r));
        }
        const auto f = fit_power_law(R, y);
        const double e = rel(f.slope, 1.0 / (2.0 - c.alpha));
        worst_stretch = std::max(worst_stretch, e);
        o.detail << ", sigma(" << c.alpha << "," << c.d << ")=" << std::exp(f.intercept);
        o.require(e <= 0.10 && f.conclusive(), "stretch exponent " + p.describe());
    }
    o.detail << ", worst stretch error " << worst_stretch;
}

// ---------------------------------------------------------------- 6, 8

std::vector<double> mollifier_eps() {
    std::vector<double> e;
    for (int k = 2; k <= 7; ++k) e.push_back(std::ldexp(1.0, -k));
    return e;
}

GridSpec mollifier_grid() { return GridSpec::make(1, 200.0, std::size_t{1} << 20); }

void mollifier_counterexample(Outcome& o) {
    MollifierCounterexampleConfig cfg;
    cfg.params = EquationParams::make(0.5, 0.5, 1);
    cfg.t1 = 4.0;
    cfg.t2 = 6.0;
    cfg.eps_list = mollifier_eps();
    cfg.grid = mollifier_grid();
    const auto r = run_mollifier_counterexample(cfg);
    o.detail << "slope " << r.growth_fit.slope << " (r^2 " << r.growth_fit.r_squared << "), far err "
             << r.far_rel_error << ", ratio x" << r.ratio_growth;
    o.require(r.resolved == cfg.eps_list.size(), "all eps resolved");
    o.require(r.growth_verdict == Verdict::Pass, "slope -0.5 +- 10%");
    o.require(r.far_verdict == Verdict::Pass, "far field within 2%");
    o.require(r.monotone_verdict == Verdict::Pass, "ratio monotone");

    cfg.params = EquationParams::make(0.5, 1.0, 1);
    const auto c = run_mollifier_counterexample(cfg);
    o.detail << "; d=beta: log slope " << c.growth_fit.slope << " (r^2 " << c.growth_fit.r_squared << ")";
    o.require(c.growth_verdict == Verdict::Pass, "d = beta log growth");
}

void harnack_coherence(Outcome& o) {
    HarnackNonlocalConfig cfg;
    cfg.params = EquationParams::make(0.5, 0.5, 1);
    for (double e : mollifier_eps()) cfg.data.push_back(InitialDataSpec::mollifier(e));
    cfg.sampler.r = 1.5;
    cfg.sampler.T = 7.0;
    cfg.sampler.t1 = 4.0;
    cfg.sampler.t2 = 6.0;
    cfg.sampler.x1 = Point{0.0, 0.0, 0.0};
    cfg.sampler.x2 = Point{1.0, 0.0, 0.0};
    cfg.n_tuples = 1;
    cfg.grid = mollifier_grid();
    cfg.expect_plain_divergence = true;
    const auto r = run_harnack_nonlocal(cfg);
    o.detail << "C-hat spread x" << r.c_hat_spread << ", raw ratio x" << r.plain_growth;
    o.require(r.c_hat_spread <= 2.0, "C-hat within x2");
    o.require(r.plain_growth >= 4.0 && r.plain_monotone, "raw ratio grows >= x4");
    o.require(r.verdict == Verdict::Pass, "verdict");

    // the factor must not see the kernel normalization
    PotentialOptions other;
    other.normalization = RieszNormalization::NormalizedLog;
    other.kernel_scale = 0.37;
    const auto tuple = cfg.sampler.sample(cfg.params, 1).front();
    bool exact = true;
    for (const auto& spec : cfg.data) {
        const Field u0 = sample_initial_data(spec, cfg.grid);
        exact = exact && harnack_bound_factor(cfg.params, u0, tuple, cfg.sampler.T) ==
                             harnack_bound_factor(cfg.params, u0, tuple, cfg.sampler.T, other);
    }
    const auto p2 = EquationParams::make(0.6, 1.0, 2);
    const Field g2 = sample_initial_data(InitialDataSpec::mollifier(0.5), GridSpec::make(2, 10.0, 256));
    const auto t2 = HarnackTuple::make(p2, 1.2, 1.8, {0.1, 0.0, 0.0}, {0.0, -0.2, 0.0}, 0.5);
    exact = exact && harnack_bound_factor(p2, g2, t2, 3.0) == harnack_bound_factor(p2, g2, t2, 3.0, other);
    o.detail << ", normalization invariance " << (exact ? "bit-exact" : "broken");
    o.require(exact, "bit-exact invariance");
}

// ---------------------------------------------------------------- 7

void lp_counterexample(Outcome& o) {
    LpCounterexampleConfig cfg;
    cfg.params = EquationParams::make(0.5, 0.5, 1);
    cfg.p = 1.0;
    cfg.t1 = 16.0;
    cfg.t2 = 17.0;
    for (int k = 0; k <= 6; ++k) cfg.n_list.push_back(std::ldexp(1.0, k));
    cfg.grid = GridSpec::make(1, 200.0, std::size_t{1} << 17);
    const auto r = run_lp_counterexample(cfg);
    o.detail << "slope " << r.growth_fit.slope << " (r^2 " << r.growth_fit.r_squared << "), max ||u_n||_1 / sqrt(pi) "
             << r.max_norm_ratio;
    o.require(r.resolved == cfg.n_list.size(), "all n resolved");
    o.require(r.growth_verdict == Verdict::Pass, "slope +0.5 +- 10%");
    o.require(r.norm_verdict == Verdict::Pass, "norm bound");
}

// ---------------------------------------------------------------- 9

void local_harnack(Outcome& o) {
    auto family = [] {
        std::vector<InitialDataSpec> d;
        for (int k = 2; k <= 6; ++k) d.push_back(InitialDataSpec::mollifier(std::ldexp(1.0, -k)));
        return d;
    };
    {
        HarnackLocalConfig cfg;
        cfg.local_case = LocalCase::TimeFractional_dLtBeta;
        cfg.params = EquationParams::make(0.5, 1.5, 1);
        cfg.data = family();
        cfg.sampler.r = 1.0;
        cfg.sampler.T = 24.0;
        cfg.n_tuples = 200;
        cfg.grid = GridSpec::make(1, 50.0, std::size_t{1} << 16);
        const auto r = run_harnack_local(cfg);
        o.detail << "time-fractional: max ratio " << r.max_ratio << ", eps slope " << r.trend_fit->slope;
        o.require(r.verdict == Verdict::Pass, "bounded without eps trend");
    }
    for (bool lag : {true, false}) {
        HarnackLocalConfig cfg;
        cfg.local_case = LocalCase::SpaceFractional_alpha1;
        cfg.params = EquationParams::make(1.0, 1.0, 1);
        cfg.data = family();
        cfg.sampler.r = 0.5;
        cfg.sampler.T = 3.0;
        cfg.n_tuples = 200;
        cfg.with_time_lag = lag;
        cfg.grid = GridSpec::make(1, 200.0, std::size_t{1} << 18);
        const auto r = run_harnack_local(cfg);
        o.detail << "; alpha=1" << (lag ? "" : " no-lag") << ": max ratio " << r.max_ratio << ", Poisson err "
                 << *r.poisson_rel_error << ", eps slope " << r.trend_fit->slope;
        o.require(r.verdict == Verdict::Pass, lag ? "alpha = 1 with lag" : "alpha = 1 without lag");
    }
}

// ---------------------------------------------------------------- 10

void equation_residual(Outcome& o) {
    for (double a : {0.3, 0.5, 0.8}) {
        for (double lambda : {1.0, 4.0}) {
            const double r1 = fourier_mode_residual(a, lambda, TimeGrid::uniform(1.0, 2000));
            const double r2 = fourier_mode_residual(a, lambda, TimeGrid::uniform(1.0, 4000));
            const double q = r1 / r2;
            o.detail << "(" << a << "," << lambda << "): " << r1 << " x" << q << "; ";
            std::ostringstream w;
            w << "alpha " << a << " lambda " << lambda;
            o.require(r1 <= 1e-4, w.str() + " residual");
            o.require(q >= 3.5, w.str() + " halving x4");
        }
    }
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    void (*run)(Outcome&);
};

}  // namespace

int main() {
    const Criterion all[] = {
        {1, "heat kernel oracle", 10.0, heat_oracle},
        {2, "Poisson kernel oracle", 10.0, poisson_oracle},
        {3, "Mittag-Leffler suite", 60.0, mittag_leffler_suite},
        {4, "structural identities", 120.0, structural_identities},
        {5, "regime slopes", 300.0, regime_slopes},
        {6, "mollifier counterexample", 180.0, mollifier_counterexample},
        {7, "L^1 counterexample", 180.0, lp_counterexample},
        {8, "non-local Harnack coherence", 300.0, harnack_coherence},
        {9, "local Harnack", 300.0, local_harnack},
        {10, "equation residual", 60.0, equation_residual},
    };
    int failures = 0;
    for (const auto& c : all) {
        Outcome o;
        o.detail.precision(4);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.failed += std::string(" [exception: ") + e.what() + "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.failed += " [over budget]";
        }
        std::printf("criterion %2d %-28s %s  %.1fs  %s%s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                    o.detail.str().c_str(), o.failed.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(all)) - failures, std::size(all));
    return failures == 0 ? 0 : 1;
}
