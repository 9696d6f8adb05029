#include "tfd/errors.hpp"
#include "tfd/experiments.hpp"
#include "tfd/specfun.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

using namespace tfd;

namespace {

struct Common {
    double alpha = 0.5;
    double beta = 0.5;
    int dim = 1;
    std::size_t grid_n = std::size_t{1} << 14;
    double grid_l = 200.0;
    std::string out;

    EquationParams params() const { return EquationParams::make(alpha, beta, dim); }
    GridSpec grid() const { return GridSpec::make(dim, grid_l, grid_n); }
};

void add_common(CLI::App* app, Common& c, bool with_grid = true) {
    app->add_option("--alpha", c.alpha, "time order in (0, 1]")->capture_default_str();
    app->add_option("--beta", c.beta, "space order in (0, 2]")->capture_default_str();
    app->add_option("--dim", c.dim, "spatial dimension")->capture_default_str();
    if (with_grid) {
        app->add_option("--grid-n", c.grid_n, "points per axis (power of two)")->capture_default_str();
        app->add_option("--grid-l", c.grid_l, "half extent L of [-L, L)^d")->capture_default_str();
        app->add_option("--out", c.out, "CSV path (a .meta sidecar is written next to it)");
    }
}

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Pass: return 0;
        case Verdict::Inconclusive: return 2;
        default: return 1;
    }
}

void report(const char* key, double v) { std::printf("%s=%s\n", key, format_double(v).c_str()); }
void report(const char* key, const std::string& v) { std::printf("%s=%s\n", key, v.c_str()); }

void report_fit(const char* key, const FitResult& f) {
    std::printf("%s={model:%s, slope:%s, intercept:%s, r_squared:%s, points:%zu}\n", key, fit_model_name(f.model),
                format_double(f.slope).c_str(), format_double(f.intercept).c_str(),
                format_double(f.r_squared).c_str(), f.points);
}

void maybe_emit(const SweepResult& s, const std::string& path) {
    if (path.empty()) return;
    emit_csv(s, path);
    report("csv", path);
}

// mollifier:<eps> | gauss-n:<n>,<p> | gauss
InitialDataSpec parse_data(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (kind == "gauss" && arg.empty()) return InitialDataSpec::plain_gaussian();
        if (kind == "mollifier" && !arg.empty()) return InitialDataSpec::mollifier(std::stod(arg));
        if (kind == "gauss-n" && !arg.empty()) {
            const auto comma = arg.find(',');
            const double n = std::stod(arg.substr(0, comma));
            const double p = comma == std::string::npos ? 1.0 : std::stod(arg.substr(comma + 1));
            return InitialDataSpec::scaled_gaussian(n, p);
        }
    } catch (const std::logic_error&) {
    }
    throw DomainError("--data: expected mollifier:<eps>, gauss-n:<n>,<p> or gauss, got '" + text + "'");
}

std::vector<double> default_eps() {
    std::vector<double> e;
    for (int k = 2; k <= 7; ++k) e.push_back(std::ldexp(1.0, -k));
    return e;
}

std::vector<InitialDataSpec> mollifier_family(const std::vector<double>& eps) {
    std::vector<InitialDataSpec> d;
    for (double e : eps) d.push_back(InitialDataSpec::mollifier(e));
    return d;
}

// A handful of fast invariant checks; the full suites live in ctest.
int selftest() {
    int failed = 0;
    auto check = [&](const char* name, bool ok, double value) {
        std::printf("%-34s %s  %s\n", name, ok ? "ok" : "FAILED", format_double(value).c_str());
        failed += ok ? 0 : 1;
    };
    constexpr double pi = std::numbers::pi;

    const double half = mittag_leffler_neg(0.5, 1.0);
    check("E_1/2(-1) = e erfc(1)", std::abs(half / (std::exp(1.0) * std::erfc(1.0)) - 1.0) < 1e-12, half);
    const double e1 = mittag_leffler_neg(1.0, 3.0);
    check("E_1(-3) = exp(-3)", std::abs(e1 / std::exp(-3.0) - 1.0) < 1e-13, e1);

    const auto heat = EquationParams::make(1.0, 2.0, 1);
    const double zh = eval_kernel_mellin(heat, 1.0, 2.0);
    check("Mellin heat kernel at r = 2", std::abs(zh / (std::exp(-1.0) / std::sqrt(4.0 * pi)) - 1.0) < 1e-10, zh);
    const Field zg = eval_kernel_grid(heat, 1.0, GridSpec::make(1, 40.0, 4096));
    const double g0 = point_value(zg, {0.0, 0.0, 0.0});
    check("grid heat kernel at 0", std::abs(g0 * std::sqrt(4.0 * pi) - 1.0) < 1e-10, g0);

    const auto poisson = EquationParams::make(1.0, 1.0, 1);
    const double zp = eval_kernel_mellin(poisson, 1.0, 3.0);
    check("Mellin Poisson kernel at r = 3", std::abs(zp * pi * 10.0 - 1.0) < 1e-10, zp);

    const auto frac = EquationParams::make(0.5, 1.3, 1);
    const double mass = eval_kernel_grid(frac, 1.0, GridSpec::make(1, 100.0, std::size_t{1} << 16)).mass();
    check("kernel mass (alpha .5, beta 1.3)", std::abs(mass - 1.0) < 2e-2, mass);

    const double a = eval_kernel_mellin(frac, 1.0, 1.0);
    const double b = eval_kernel_mellin(frac, 1.0, 1.5);
    check("radial decrease", a > b && b > 0.0, a - b);

    const double scaled = std::pow(4.0, -0.5 / 1.3) * eval_kernel_mellin(frac, 1.0, 1.0 * std::pow(4.0, -0.5 / 1.3));
    const double direct = eval_kernel_mellin(frac, 4.0, 1.0);
    check("self-similar scaling", std::abs(direct / scaled - 1.0) < 1e-6, direct);

    const auto g = GridSpec::make(1, 20.0, 1024);
    const Field u0 = sample_initial_data(InitialDataSpec::plain_gaussian(), g);
    const Field u = mild_solve(frac, u0, 1.0);
    check("mild solution mass", std::abs(u.mass() - u0.mass()) < 1e-12, u.mass());

    const double res = fourier_mode_residual(0.5, 1.0, TimeGrid::uniform(1.0, 2000));
    check("Fourier-mode residual (alpha .5)", res < 1e-4, res);

    std::printf("%s\n", failed == 0 ? "selftest passed" : "selftest FAILED");
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fundamental solution, counterexamples and Harnack checks for space-time fractional diffusion"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    // kernel-eval
    Common ke;
    double ke_t = 1.0;
    double ke_r = 1.0;
    std::string ke_method = "mellin";
    auto* kernel_cmd = app.add_subcommand("kernel-eval", "evaluate Z(t, r)");
    add_common(kernel_cmd, ke);
    kernel_cmd->add_option("--t", ke_t, "time")->capture_default_str();
    kernel_cmd->add_option("--r", ke_r, "radius |x|")->capture_default_str();
    kernel_cmd->add_option("--method", ke_method, "fft, mellin or asymptotic")
        ->check(CLI::IsMember({"fft", "mellin", "asymptotic"}))
        ->capture_default_str();

    // solve
    Common so;
    double so_t = 1.0;
    std::string so_data = "gauss";
    auto* solve_cmd = app.add_subcommand("solve", "mild solution on the periodic grid");
    add_common(solve_cmd, so);
    solve_cmd->add_option("--t", so_t, "time")->capture_default_str();
    solve_cmd->add_option("--data", so_data, "mollifier:<eps> | gauss-n:<n>,<p> | gauss")->capture_default_str();

    // counterexample-mollifier
    Common cm;
    MollifierCounterexampleConfig cm_cfg;
    std::vector<double> cm_sweep = default_eps();
    double cm_x0 = 1.0;
    std::uint64_t cm_seed = kDefaultSeed;
    auto* cm_cmd = app.add_subcommand("counterexample-mollifier", "sharpening mollifiers: u(t1, 0) / u(t2, x0)");
    add_common(cm_cmd, cm);
    cm_cmd->add_option("--t1", cm_cfg.t1)->capture_default_str();
    cm_cmd->add_option("--t2", cm_cfg.t2)->capture_default_str();
    cm_cmd->add_option("--x0", cm_x0, "first coordinate of x0")->capture_default_str();
    cm_cmd->add_option("--sweep", cm_sweep, "decreasing eps list")->delimiter(',');
    cm_cmd->add_option("--seed", cm_seed, "recorded only; the sweep is deterministic");

    // counterexample-lp
    Common cl;
    LpCounterexampleConfig cl_cfg;
    std::vector<double> cl_sweep{1, 2, 4, 8, 16, 32, 64};
    std::uint64_t cl_seed = kDefaultSeed;
    auto* cl_cmd = app.add_subcommand("counterexample-lp", "L^p-normalized Gaussians n^{d/p} exp(-n^2 |x|^2)");
    add_common(cl_cmd, cl);
    cl_cmd->add_option("--p", cl_cfg.p)->capture_default_str();
    cl_cmd->add_option("--t1", cl_cfg.t1)->capture_default_str();
    cl_cmd->add_option("--t2", cl_cfg.t2)->capture_default_str();
    cl_cmd->add_option("--sweep", cl_sweep, "increasing n list")->delimiter(',');
    cl_cmd->add_option("--seed", cl_seed, "recorded only; the sweep is deterministic");

    // harnack-nonlocal
    Common hn;
    HarnackNonlocalConfig hn_cfg;
    std::vector<double> hn_sweep{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::optional<double> hn_t1;
    std::optional<double> hn_t2;
    bool hn_refine = false;
    auto* hn_cmd = app.add_subcommand("harnack-nonlocal", "empirical constant against the potential bound factor");
    add_common(hn_cmd, hn);
    hn_cmd->add_option("--t1", hn_t1, "pin t1 instead of sampling it");
    hn_cmd->add_option("--t2", hn_t2, "pin t2 instead of sampling it");
    hn_cmd->add_option("--sweep", hn_sweep, "mollifier eps list")->delimiter(',');
    hn_cmd->add_option("--seed", hn_cfg.sampler.seed)->capture_default_str();
    hn_cmd->add_option("--tuples", hn_cfg.n_tuples)->capture_default_str();
    hn_cmd->add_option("--radius", hn_cfg.sampler.r, "r of the admissible tuples")->capture_default_str();
    hn_cmd->add_option("--horizon", hn_cfg.sampler.T, "T of the admissible tuples")->capture_default_str();
    hn_cmd->add_flag("--refine", hn_refine, "repeat on a grid with N doubled");

    // harnack-local
    Common hl;
    HarnackLocalConfig hl_cfg;
    std::vector<double> hl_sweep{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::optional<double> hl_t1;
    std::optional<double> hl_t2;
    std::string hl_case = "time-fractional";
    bool hl_no_lag = false;
    auto* hl_cmd = app.add_subcommand("harnack-local", "plain ratio u(t1, x1) / u(t2, x2) in the local cases");
    add_common(hl_cmd, hl);
    hl_cmd->add_option("--case", hl_case, "time-fractional (alpha < 1, 1 = d < beta) or space-fractional (alpha = 1)")
        ->check(CLI::IsMember({"time-fractional", "space-fractional"}))
        ->capture_default_str();
    hl_cmd->add_option("--t1", hl_t1, "pin t1 instead of sampling it");
    hl_cmd->add_option("--t2", hl_t2, "pin t2 instead of sampling it");
    hl_cmd->add_option("--sweep", hl_sweep, "mollifier eps list")->delimiter(',');
    hl_cmd->add_option("--seed", hl_cfg.sampler.seed)->capture_default_str();
    hl_cmd->add_option("--tuples", hl_cfg.n_tuples)->capture_default_str();
    hl_cmd->add_option("--radius", hl_cfg.sampler.r)->capture_default_str();
    hl_cmd->add_option("--horizon", hl_cfg.sampler.T)->capture_default_str();
    hl_cmd->add_flag("--no-lag", hl_no_lag, "sample t1 below the lag (space-fractional case only)");

    auto* self_cmd = app.add_subcommand("selftest", "quick invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kernel_cmd->parsed()) {
            const auto p = ke.params();
            report("params", p.describe());
            if (ke_method == "mellin") {
                const auto d = eval_kernel_mellin_detail(p, ke_t, ke_r, saddle_contour(p, ke_t, ke_r));
                report("Z", std::exp(d.log_value));
                report("log_Z", d.log_value);
                report("discretization", d.discretization);
            } else if (ke_method == "fft") {
                const Field z = eval_kernel_grid(p, ke_t, ke.grid());
                report("Z", point_value(z, {ke_r, 0.0, 0.0}));
                report("mass", z.mass());
            } else {
                const auto rep = classify_regime(p, ke_t, ke_r);
                report("regime", regime_name(rep.regime));
                report("R", rep.similarity_r);
                report("envelope", rep.envelope);
                if (rep.regime == Regime::FarField_gaussian) report("sigma", rep.sigma);
            }
            return 0;
        }
        if (solve_cmd->parsed()) {
            const auto p = so.params();
            const auto g = so.grid();
            const Field u0 = sample_initial_data(parse_data(so_data), g);
            const Field u = mild_solve(p, u0, so_t);
            report("params", p.describe());
            report("mass_u0", u0.mass());
            report("mass_u", u.mass());
            report("u_at_0", point_value(u, {0.0, 0.0, 0.0}));
            report("max_u", u.max_value());
            if (!so.out.empty()) {
                // slice along the first axis through the origin
                SweepResult s;
                s.label = "solve:" + so_data;
                s.sweep_name = "x";
                s.observables = {"u0", "u"};
                s.params = p;
                s.grid = g;
                s.times = {so_t};
                for (std::size_t i = 0; i < g.points_per_axis; ++i) {
                    const Point x{g.coordinate(i), 0.0, 0.0};
                    s.add_row(x[0], {point_value(u0, x), point_value(u, x)});
                }
                maybe_emit(s, so.out);
            }
            return 0;
        }
        if (cm_cmd->parsed()) {
            cm_cfg.params = cm.params();
            cm_cfg.grid = cm.grid();
            cm_cfg.eps_list = cm_sweep;
            cm_cfg.x0 = {cm_x0, 0.0, 0.0};
            const auto r = run_mollifier_counterexample(cm_cfg);
            auto s = r.sweep;
            s.seed = cm_seed;
            report_fit("growth_fit", r.growth_fit);
            report_fit("ratio_fit", r.ratio_fit);
            if (cm_cfg.params.dim > cm_cfg.params.beta) report("expected_slope", r.expected_slope);
            report("far_rel_error", r.far_rel_error);
            report("ratio_growth", r.ratio_growth);
            report("ratio_monotone", r.ratio_monotone ? "true" : "false");
            if (!r.stop_reason.empty()) report("stopped", r.stop_reason);
            report("verdict", verdict_name(r.verdict));
            maybe_emit(s, cm.out);
            return exit_code(r.verdict);
        }
        if (cl_cmd->parsed()) {
            cl_cfg.params = cl.params();
            cl_cfg.grid = cl.grid();
            cl_cfg.n_list = cl_sweep;
            const auto r = run_lp_counterexample(cl_cfg);
            auto s = r.sweep;
            s.seed = cl_seed;
            report_fit("growth_fit", r.growth_fit);
            report("expected_slope", r.expected_slope);
            report("initial_norm", r.initial_norm);
            report("max_norm_ratio", r.max_norm_ratio);
            if (!r.stop_reason.empty()) report("stopped", r.stop_reason);
            report("verdict", verdict_name(r.verdict));
            maybe_emit(s, cl.out);
            return exit_code(r.verdict);
        }
        if (hn_cmd->parsed()) {
            hn_cfg.params = hn.params();
            hn_cfg.grid = hn.grid();
            hn_cfg.data = mollifier_family(hn_sweep);
            hn_cfg.sampler.t1 = hn_t1;
            hn_cfg.sampler.t2 = hn_t2;
            hn_cfg.refine_check = hn_refine;
            hn_cfg.expect_plain_divergence = hn_sweep.size() >= 2;
            const auto r = run_harnack_nonlocal(hn_cfg);
            for (const auto& d : r.per_data) {
                std::printf("data={%s, max_c_hat:%s, max_plain_ratio:%s, max_factor:%s, skipped:%zu}\n",
                            d.data.c_str(), format_double(d.max_c_hat).c_str(),
                            format_double(d.max_plain_ratio).c_str(), format_double(d.max_factor).c_str(), d.skipped);
            }
            for (const auto& b : r.bands) {
                std::printf("band={t2/t1:(%s, %s], count:%zu, max_c_hat:%s}\n", format_double(b.lo).c_str(),
                            format_double(b.hi).c_str(), b.count, format_double(b.max_c_hat).c_str());
            }
            report("max_c_hat", r.max_c_hat);
            report("c_hat_spread", r.c_hat_spread);
            report("plain_growth", r.plain_growth);
            if (r.refined_max_c_hat) report("refined_max_c_hat", *r.refined_max_c_hat);
            report("verdict", verdict_name(r.verdict));
            maybe_emit(r.sweep, hn.out);
            return exit_code(r.verdict);
        }
        if (hl_cmd->parsed()) {
            hl_cfg.local_case =
                hl_case == "time-fractional" ? LocalCase::TimeFractional_dLtBeta : LocalCase::SpaceFractional_alpha1;
            hl_cfg.params = hl.params();
            hl_cfg.grid = hl.grid();
            hl_cfg.data = mollifier_family(hl_sweep);
            hl_cfg.sampler.t1 = hl_t1;
            hl_cfg.sampler.t2 = hl_t2;
            hl_cfg.with_time_lag = !hl_no_lag;
            const auto r = run_harnack_local(hl_cfg);
            for (const auto& d : r.per_data) {
                std::printf("data={%s, max_ratio:%s}\n", d.data.c_str(), format_double(d.max_plain_ratio).c_str());
            }
            report("max_ratio", r.max_ratio);
            report("stability", r.stability);
            if (r.trend_fit) report_fit("trend_fit", *r.trend_fit);
            if (r.poisson_max_ratio) report("poisson_max_ratio", *r.poisson_max_ratio);
            if (r.poisson_rel_error) report("poisson_rel_error", *r.poisson_rel_error);
            report("verdict", verdict_name(r.verdict));
            maybe_emit(r.sweep, hl.out);
            return exit_code(r.verdict);
        }
        if (self_cmd->parsed()) return selftest();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
