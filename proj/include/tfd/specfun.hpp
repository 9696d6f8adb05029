#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tfd {

/// Evaluation strategy for E_alpha(-x).
///
/// The power series is used for x <= series_cutoff as long as its
/// cancellation estimate stays under target_rel_err; large x goes through the
/// algebraic asymptotic expansion when it converges, and everything else
/// through the spectral integral
///   E_a(-x) = sin(a pi)/(a pi) * int_0^1 [exp(-(xv)^(1/a)) + exp(-(x/v)^(1/a))]
///                                 / (v^2 + 2 v cos(a pi) + 1) dv.
struct MLEvalPolicy {
    double series_cutoff = 5.0;
    int series_terms_max = 500;
    std::size_t quad_nodes = 200000;  // evaluation budget of the integral route
    double target_rel_err = 1e-12;

    void validate() const;
};

enum class MLRoute { Exact, Series, Asymptotic, Integral };

struct MLEvaluation {
    double value = 0.0;
    double rel_error = 0.0;  // estimated relative error
    MLRoute route = MLRoute::Exact;
};

/// E_alpha(-x) on the nonnegative half-line for a fixed alpha in (0, 1].
/// Holds precomputed series coefficients; cheap to call repeatedly.
class MittagLefflerNeg {
public:
    explicit MittagLefflerNeg(double alpha, MLEvalPolicy policy = {});

    double alpha() const noexcept { return alpha_; }
    const MLEvalPolicy& policy() const noexcept { return policy_; }

    double operator()(double x) const { return evaluate(x).value; }

    /// Routed evaluation; throws NumericError when no route meets the target.
    MLEvaluation evaluate(double x) const;

    // Individual routes, exposed for cross-checking. They report their error
    // estimate instead of throwing.
    MLEvaluation series(double x) const;
    MLEvaluation integral(double x) const;
    std::optional<MLEvaluation> asymptotic(double x) const;

private:
    double alpha_;
    MLEvalPolicy policy_;
    double sin_pi_a_ = 0.0;
    double cos_pi_a_ = 0.0;
    std::vector<double> log_series_coef_;  // -lgamma(1 + alpha k)
    std::vector<double> asym_log_mag_;     // lgamma(alpha k), k >= 1
    std::vector<double> asym_sin_;         // sin(pi alpha k) / pi
};

/// Principal branch of log Gamma(z). Throws DomainError at the poles.
std::complex<double> log_gamma(std::complex<double> z);

/// log Gamma(z) on the branch that is continuous along vertical lines;
/// differs from log_gamma by multiples of 2 pi i. Suitable for exp().
std::complex<double> log_gamma_unwrapped(std::complex<double> z);

/// E_alpha(-x), alpha in (0, 1], x >= 0.
double mittag_leffler_neg(double alpha, double x, const MLEvalPolicy& policy = {});

/// Uniform partition of [0, t_end] into n_steps intervals.
struct TimeGrid {
    double t_end = 1.0;
    std::size_t n_steps = 1;

    static TimeGrid uniform(double t_end, std::size_t n_steps);

    double step() const noexcept { return t_end / static_cast<double>(n_steps); }
    double node(std::size_t k) const noexcept {
        return k == n_steps ? t_end : static_cast<double>(k) * step();
    }
    std::vector<double> nodes() const;
};

/// Riemann-Liouville integral (g_alpha * f)(t_k) at every node by product
/// trapezoidal integration: f is interpolated piecewise linearly and the
/// kernel moments are integrated exactly. alpha = 0 returns the samples.
///
/// `start_exponents` optionally lists non-integer exponents sigma for which
/// f ~ sum c_sigma t^sigma near t = 0; starting weights on the first samples
/// then make the rule exact for t^sigma, restoring second order for such f.
std::vector<double> fractional_integral(double alpha, std::span<const double> samples,
                                        const TimeGrid& grid,
                                        std::span<const double> start_exponents = {});

/// max_k |y(t_k) - 1 + lambda (J^alpha y)(t_k)| for y(t) = E_alpha(-lambda t^alpha):
/// the discrete residual of one Fourier mode of the equation in Volterra form.
double fourier_mode_residual(double alpha, double lambda, const TimeGrid& grid,
                             const MLEvalPolicy& policy = {});

}  // namespace tfd
