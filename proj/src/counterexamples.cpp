#include "tfd/errors.hpp"
#include "tfd/experiments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tfd {

double data_parameter(const InitialDataSpec& spec, std::size_t index) {
    switch (spec.kind) {
        case InitialDataSpec::Kind::Mollifier: return spec.epsilon;
        case InitialDataSpec::Kind::ScaledGaussian: return spec.n;
        default: return static_cast<double>(index);
    }
}

namespace {

Verdict slope_verdict(const FitResult& f, double expected, double rel_tol, double min_r2) {
    if (!f.conclusive(min_r2)) return Verdict::Inconclusive;
    return std::abs(f.slope - expected) <= rel_tol * std::abs(expected) ? Verdict::Pass : Verdict::Fail;
}

Verdict growth_verdict(const FitResult& f, double min_r2) {
    if (!f.conclusive(min_r2)) return Verdict::Inconclusive;
    return f.slope > 0.0 ? Verdict::Pass : Verdict::Fail;
}

}  // namespace

MollifierCounterexampleResult run_mollifier_counterexample(const MollifierCounterexampleConfig& cfg) {
    const EquationParams& p = cfg.params;
    p.validate();
    const int d = p.dim;
    if (static_cast<double>(d) < p.beta) throw DomainError("run_mollifier_counterexample: needs d >= beta");
    if (!(norm(cfg.x0, d) > 0.0)) throw DomainError("run_mollifier_counterexample: x0 must be nonzero");
    if (!(cfg.t1 > 0.0) || !(cfg.t2 > 0.0)) throw DomainError("run_mollifier_counterexample: times must be positive");
    if (cfg.eps_list.size() < 2) throw DomainError("run_mollifier_counterexample: need at least two eps values");
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
        if (!(cfg.eps_list[i] > 0.0) || (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))) {
            throw DomainError("run_mollifier_counterexample: eps list must be positive and strictly decreasing");
        }
    }

    MollifierCounterexampleResult out;
    out.sweep.label = "counterexample-mollifier";
    out.sweep.sweep_name = "eps";
    out.sweep.observables = {"u_t1_0", "u_t2_x0", "ratio", "kernel_t2_x0"};
    out.sweep.params = p;
    out.sweep.grid = cfg.grid;
    out.sweep.times = {cfg.t1, cfg.t2};
    out.kernel_t2_x0 = eval_kernel_mellin(p, cfg.t2, norm(cfg.x0, d));

    const MildPropagator at1(p, cfg.grid, cfg.t1, cfg.policy);
    const MildPropagator at2(p, cfg.grid, cfg.t2, cfg.policy);
    const Point origin{0.0, 0.0, 0.0};
    std::vector<double> eps;
    std::vector<double> u1;
    std::vector<double> ratio;
    double u2_last = 0.0;
    for (double e : cfg.eps_list) {
        try {
            const Field u0 = sample_initial_data(InitialDataSpec::mollifier(e), cfg.grid);
            const double a = point_value(at1.apply(u0), origin);
            const double b = point_value(at2.apply(u0), cfg.x0);
            out.sweep.add_row(e, {a, b, a / b, out.kernel_t2_x0});
            eps.push_back(e);
            u1.push_back(a);
            ratio.push_back(a / b);
            u2_last = b;
        } catch (const ResolutionError& err) {
            out.stop_reason = err.what();
            break;
        } catch (const AliasingError& err) {
            out.stop_reason = err.what();
            break;
        }
    }
    out.resolved = eps.size();
    if (!out.stop_reason.empty()) out.sweep.notes.push_back("stopped: " + out.stop_reason);
    if (out.resolved < 3) {
        out.growth_verdict = Verdict::Inconclusive;
        out.verdict = Verdict::Inconclusive;
        return out;
    }

    if (static_cast<double>(d) > p.beta) {
        out.expected_slope = p.beta - d;
        out.growth_fit = fit_power_law(eps, u1);
        out.growth_verdict = slope_verdict(out.growth_fit, out.expected_slope, cfg.slope_tolerance, cfg.min_r_squared);
    } else {
        std::vector<double> inv(eps.size());
        for (std::size_t i = 0; i < eps.size(); ++i) inv[i] = 1.0 / eps[i];
        out.growth_fit = fit_log_abscissa(inv, u1);
        out.growth_verdict = growth_verdict(out.growth_fit, cfg.min_r_squared);
    }
    out.ratio_fit = fit_power_law(eps, ratio);

    out.far_rel_error = std::abs(u2_last / out.kernel_t2_x0 - 1.0);
    out.far_verdict = out.far_rel_error <= cfg.far_tolerance ? Verdict::Pass : Verdict::Fail;

    out.ratio_monotone = true;
    for (std::size_t i = 1; i < ratio.size(); ++i) out.ratio_monotone = out.ratio_monotone && ratio[i] > ratio[i - 1];
    out.ratio_growth = ratio.back() / ratio.front();
    out.monotone_verdict = out.ratio_monotone ? Verdict::Pass : Verdict::Fail;

    out.verdict = combine(combine(out.growth_verdict, out.far_verdict), out.monotone_verdict);
    out.sweep.sort_rows();
    return out;
}

void check_lp_case(const EquationParams& params, double p) {
    params.validate();
    const double d = params.dim;
    if (!(p >= 1.0)) throw DomainError("L^p counterexample: p must be >= 1");
    if (d > params.beta) {
        if (!(p < d / params.beta)) {
            std::ostringstream os;
            os << "L^p counterexample: d > beta requires p < d/beta = " << d / params.beta << " (got p = " << p << ")";
            throw DomainError(os.str());
        }
        return;
    }
    if (d == params.beta) {
        if (p != 1.0) throw DomainError("L^p counterexample: d = beta requires p = 1");
        return;
    }
    throw DomainError("L^p counterexample: requires d >= beta");
}

LpCounterexampleResult run_lp_counterexample(const LpCounterexampleConfig& cfg) {
    const EquationParams& par = cfg.params;
    check_lp_case(par, cfg.p);
    const int d = par.dim;
    if (!(cfg.t1 > 0.0) || !(cfg.t2 > 0.0)) throw DomainError("run_lp_counterexample: times must be positive");
    if (cfg.n_list.size() < 2) throw DomainError("run_lp_counterexample: need at least two n values");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (!(cfg.n_list[i] >= 1.0) || (i > 0 && !(cfg.n_list[i] > cfg.n_list[i - 1]))) {
            throw DomainError("run_lp_counterexample: n list must be >= 1 and strictly increasing");
        }
    }

    LpCounterexampleResult out;
    out.sweep.label = "counterexample-lp";
    out.sweep.sweep_name = "n";
    out.sweep.observables = {"u_t1_0", "lp_t2", "lp_u0", "ratio"};
    out.sweep.params = par;
    out.sweep.grid = cfg.grid;
    out.sweep.times = {cfg.t1, cfg.t2};
    out.sweep.notes.push_back("p=" + format_double(cfg.p));
    out.initial_norm = std::pow(std::numbers::pi / cfg.p, d / (2.0 * cfg.p));
    out.expected_slope = d / cfg.p - par.beta;

    const MildPropagator at1(par, cfg.grid, cfg.t1, cfg.policy);
    const MildPropagator at2(par, cfg.grid, cfg.t2, cfg.policy);
    const Point origin{0.0, 0.0, 0.0};
    std::vector<double> ns;
    std::vector<double> u1;
    for (double n : cfg.n_list) {
        try {
            const Field u0 = sample_initial_data(InitialDataSpec::scaled_gaussian(n, cfg.p), cfg.grid);
            const double a = point_value(at1.apply(u0), origin);
            const double lp = lp_norm(at2.apply(u0), cfg.p);
            out.sweep.add_row(n, {a, lp, lp_norm(u0, cfg.p), a / lp});
            ns.push_back(n);
            u1.push_back(a);
            out.max_norm_ratio = std::max(out.max_norm_ratio, lp / out.initial_norm);
        } catch (const ResolutionError& err) {
            out.stop_reason = err.what();
            break;
        } catch (const AliasingError& err) {
            out.stop_reason = err.what();
            break;
        }
    }
    out.resolved = ns.size();
    if (!out.stop_reason.empty()) out.sweep.notes.push_back("stopped: " + out.stop_reason);
    if (out.resolved < 3) {
        out.verdict = Verdict::Inconclusive;
        return out;
    }

    if (static_cast<double>(d) > par.beta) {
        out.growth_fit = fit_power_law(ns, u1);
        out.growth_verdict = slope_verdict(out.growth_fit, out.expected_slope, cfg.slope_tolerance, cfg.min_r_squared);
    } else {
        std::vector<double> y(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) y[i] = u1[i] / std::pow(ns[i], out.expected_slope);
        out.growth_fit = fit_log_abscissa(ns, y);
        out.growth_verdict = growth_verdict(out.growth_fit, cfg.min_r_squared);
    }
    out.norm_verdict = out.max_norm_ratio <= 1.0 + cfg.norm_slack ? Verdict::Pass : Verdict::Fail;
    out.verdict = combine(out.growth_verdict, out.norm_verdict);
    return out;
}

}  // namespace tfd
