#pragma once

#include "tfd/fit.hpp"
#include "tfd/potential.hpp"
#include "tfd/solver.hpp"
#include "tfd/sweep.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tfd {

inline constexpr std::uint64_t kDefaultSeed = 0xF0C5;

/// eps for mollifiers, n for scaled Gaussians, otherwise the list index.
double data_parameter(const InitialDataSpec& spec, std::size_t index);

// ---------------------------------------------------------------- mollifier

struct MollifierCounterexampleConfig {
    EquationParams params;
    double t1 = 4.0;
    double t2 = 6.0;
    Point x0{1.0, 0.0, 0.0};
    std::vector<double> eps_list;  // strictly decreasing
    GridSpec grid;
    MLEvalPolicy policy;
    double slope_tolerance = 0.10;   // relative, d > beta
    double far_tolerance = 0.02;     // |u(t2, x0) / Z(t2, x0) - 1| at the smallest eps
    double min_r_squared = 0.98;
};

struct MollifierCounterexampleResult {
    SweepResult sweep;       // eps, u_t1_0, u_t2_x0, ratio, kernel_t2_x0
    FitResult growth_fit;    // d > beta: log u vs log eps; d = beta: u vs log(1/eps)
    FitResult ratio_fit;     // log ratio vs log eps
    double expected_slope = 0.0;   // beta - d; unused for d = beta
    double kernel_t2_x0 = 0.0;
    double far_rel_error = 0.0;
    bool ratio_monotone = false;
    double ratio_growth = 0.0;     // ratio at smallest eps / at largest
    std::size_t resolved = 0;
    std::string stop_reason;       // empty when every eps was processed
    Verdict growth_verdict = Verdict::Inconclusive;
    Verdict far_verdict = Verdict::Fail;
    Verdict monotone_verdict = Verdict::Fail;
    Verdict verdict = Verdict::Fail;
};

MollifierCounterexampleResult run_mollifier_counterexample(const MollifierCounterexampleConfig& cfg);

// ---------------------------------------------------------------- L^p

struct LpCounterexampleConfig {
    EquationParams params;
    double p = 1.0;
    double t1 = 1.0;
    double t2 = 2.0;
    std::vector<double> n_list;  // strictly increasing, >= 1
    GridSpec grid;
    MLEvalPolicy policy;
    double slope_tolerance = 0.10;
    double norm_slack = 0.02;
    double min_r_squared = 0.98;
};

struct LpCounterexampleResult {
    SweepResult sweep;      // n, u_t1_0, lp_t2, lp_u0, ratio
    FitResult growth_fit;   // d > beta: log u vs log n; d = beta: u / n^{d/p-beta} vs log n
    double expected_slope = 0.0;
    double initial_norm = 0.0;     // (pi/p)^{d/(2p)}, independent of n
    double max_norm_ratio = 0.0;   // max_n ||u_n(t2)||_p / initial_norm
    std::size_t resolved = 0;
    std::string stop_reason;
    Verdict growth_verdict = Verdict::Inconclusive;
    Verdict norm_verdict = Verdict::Fail;
    Verdict verdict = Verdict::Fail;
};

/// Throws DomainError unless (d > beta, 1 <= p < d/beta) or (d = beta, p = 1).
void check_lp_case(const EquationParams& params, double p);
LpCounterexampleResult run_lp_counterexample(const LpCounterexampleConfig& cfg);

// ---------------------------------------------------------------- Harnack

/// Seeded tuple generator. x1, x2 uniform in B_r(0). With the time lag,
/// t1 ~ U[tau, T - tau] and t2 ~ U(t1, t1 + tau] where tau = (2r)^{beta/alpha};
/// without it t1 ~ U[tau/8, tau) so only the lower bound of the window fails.
/// Any pinned coordinate overrides the draw.
struct TupleSampler {
    double r = 0.5;
    double T = 3.0;
    std::uint64_t seed = kDefaultSeed;
    bool time_lag = true;
    std::optional<Point> x1;
    std::optional<Point> x2;
    std::optional<double> t1;
    std::optional<double> t2;

    std::vector<HarnackTuple> sample(const EquationParams& params, std::size_t n) const;
};

struct HarnackDataSummary {
    std::string data;
    double data_param = 0.0;
    double max_c_hat = 0.0;
    double max_plain_ratio = 0.0;
    double max_factor = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

struct HarnackBand {
    double lo = 1.0;  // t2/t1 in (lo, hi]
    double hi = 1.0;
    double max_c_hat = 0.0;
    std::size_t count = 0;
};

struct HarnackNonlocalConfig {
    EquationParams params;
    std::vector<InitialDataSpec> data;
    TupleSampler sampler;
    std::size_t n_tuples = 20;
    GridSpec grid;
    MLEvalPolicy policy;
    PotentialOptions potential;
    bool refine_check = false;            // rerun with N doubled
    bool expect_plain_divergence = false; // for a sharpening mollifier family
    double band = 2.0;
    double min_plain_growth = 4.0;
};

struct HarnackNonlocalResult {
    SweepResult sweep;  // one row per (data, tuple)
    std::vector<HarnackDataSummary> per_data;
    std::vector<HarnackBand> bands;
    double max_c_hat = 0.0;
    double c_hat_spread = 0.0;   // max over data of max C-hat / min over data
    double plain_growth = 0.0;   // last / first per-data max plain ratio
    bool plain_monotone = false;
    std::optional<double> refined_max_c_hat;
    std::size_t skipped = 0;
    Verdict verdict = Verdict::Fail;
};

HarnackNonlocalResult run_harnack_nonlocal(const HarnackNonlocalConfig& cfg);

enum class LocalCase { TimeFractional_dLtBeta, SpaceFractional_alpha1 };
const char* local_case_name(LocalCase c) noexcept;

struct HarnackLocalConfig {
    LocalCase local_case = LocalCase::TimeFractional_dLtBeta;
    EquationParams params;
    std::vector<InitialDataSpec> data;
    TupleSampler sampler;
    std::size_t n_tuples = 200;
    GridSpec grid;
    MLEvalPolicy policy;
    bool with_time_lag = true;
    double band = 2.0;
    double trend_tolerance = 0.05;
    double poisson_tolerance = 1e-3;
};

struct HarnackLocalResult {
    SweepResult sweep;  // one row per (data, tuple)
    std::vector<HarnackDataSummary> per_data;
    double max_ratio = 0.0;
    double stability = 0.0;  // max / min over data of the per-data max ratio
    std::optional<FitResult> trend_fit;  // log max ratio vs log eps, mollifier families
    std::optional<double> poisson_max_ratio;  // alpha = beta = d = 1 only
    std::optional<double> poisson_rel_error;
    Verdict verdict = Verdict::Fail;
};

/// Throws DomainError on a case/parameter mismatch.
void check_local_case(LocalCase c, const EquationParams& params, bool with_time_lag);
HarnackLocalResult run_harnack_local(const HarnackLocalConfig& cfg);

/// t / (pi (t^2 + x^2)).
double poisson_kernel_1d(double t, double x);

}  // namespace tfd
