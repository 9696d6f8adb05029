#include "tfd/specfun.hpp"

#include "tfd/errors.hpp"
#include "tfd/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tfd {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

cplx log_gamma_right(cplx z) {
    const cplx zz = z - 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        x += kLanczos[i] / (zz + static_cast<double>(i));
    }
    const cplx t = zz + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (zz + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z), stable for large |Im z| where sin itself overflows.
cplx log_sin_pi(cplx z) {
    const double y = z.imag();
    if (std::abs(y) < 15.0) return std::log(std::sin(kPi * z));
    const cplx i(0.0, 1.0);
    if (y > 0.0) {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
        return cplx(-std::numbers::ln2, 0.5 * kPi) - i * kPi * z +
               std::log(1.0 - std::exp(2.0 * kPi * i * z));
    }
    // sin(pi z) = (-i/2) e^{i pi z} (1 - e^{-2 pi i z})
    return cplx(-std::numbers::ln2, -0.5 * kPi) + i * kPi * z +
           std::log(1.0 - std::exp(-2.0 * kPi * i * z));
}

bool is_pole(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

void check_alpha(double alpha, const char* where) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError(std::string(where) + ": alpha must lie in (0, 1], got " +
                          std::to_string(alpha));
    }
}

// (m+1)^p - 2 m^p + (m-1)^p for m >= 1.
long double second_difference(long double p, std::size_t m) {
    const long double mm = static_cast<long double>(m);
    if (m < 8) {
        return std::pow(mm + 1.0L, p) - 2.0L * std::pow(mm, p) + std::pow(mm - 1.0L, p);
    }
    // 2 m^p sum_{j>=1} C(p, 2j) m^{-2j}
    const long double inv2 = 1.0L / (mm * mm);
    long double term = p * (p - 1.0L) / 2.0L * inv2;
    long double sum = 0.0L;
    for (int k = 2; k < 200; k += 2) {
        sum += term;
        term *= (p - k) * (p - k - 1.0L) / ((k + 1.0L) * (k + 2.0L)) * inv2;
        if (std::abs(term) < 1e-22L * std::abs(sum)) break;
    }
    return 2.0L * std::pow(mm, p) * sum;
}

// (n-1)^p - (n-p) n^{p-1}: weight of the left endpoint sample.
long double first_weight(long double p, std::size_t n) {
    const long double nn = static_cast<long double>(n);
    if (n < 8) return std::pow(nn - 1.0L, p) - (nn - p) * std::pow(nn, p - 1.0L);
    // n^p sum_{j>=2} C(p, j) (-1/n)^j
    const long double x = -1.0L / nn;
    long double term = p * (p - 1.0L) / 2.0L * x * x;
    long double sum = 0.0L;
    for (int j = 2; j < 400; ++j) {
        sum += term;
        term *= (p - j) / (j + 1.0L) * x;
        if (std::abs(term) < 1e-22L * std::abs(sum)) break;
    }
    return std::pow(nn, p) * sum;
}

// Small dense LU with partial pivoting.
struct SmallLu {
    std::size_t n = 0;
    std::vector<long double> a;
    std::vector<std::size_t> piv;

    explicit SmallLu(std::vector<long double> m, std::size_t size) : n(size), a(std::move(m)), piv(size) {
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t best = k;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(a[i * n + k]) > std::abs(a[best * n + k])) best = i;
            }
            piv[k] = best;
            if (best != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[best * n + j]);
            }
            if (a[k * n + k] == 0.0L) throw NumericError("starting weights: singular system", 0.0);
            for (std::size_t i = k + 1; i < n; ++i) {
                const long double f = a[i * n + k] / a[k * n + k];
                a[i * n + k] = f;
                for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            }
        }
    }

    void solve(std::vector<long double>& b) const {
        for (std::size_t k = 0; k < n; ++k) std::swap(b[k], b[piv[k]]);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = k + 1; i < n; ++i) b[i] -= a[i * n + k] * b[k];
        }
        for (std::size_t k = n; k-- > 0;) {
            for (std::size_t j = k + 1; j < n; ++j) b[k] -= a[k * n + j] * b[j];
            b[k] /= a[k * n + k];
        }
    }
};

}  // namespace

void MLEvalPolicy::validate() const {
    if (!(series_cutoff > 0.0)) throw DomainError("MLEvalPolicy: series_cutoff must be positive");
    if (series_terms_max <= 0) throw DomainError("MLEvalPolicy: series_terms_max must be positive");
    if (quad_nodes == 0) throw DomainError("MLEvalPolicy: quad_nodes must be positive");
    if (!(target_rel_err > 0.0 && target_rel_err <= 1e-6)) {
        throw DomainError("MLEvalPolicy: target_rel_err must lie in (0, 1e-6]");
    }
}

cplx log_gamma_unwrapped(cplx z) {
    if (is_pole(z)) {
        throw DomainError("log_gamma: pole at z = " + std::to_string(z.real()));
    }
    if (z.real() < 0.5) {
        return std::log(kPi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
    }
    return log_gamma_right(z);
}

cplx log_gamma(cplx z) {
    const cplx v = log_gamma_unwrapped(z);
    double im = std::remainder(v.imag(), 2.0 * kPi);
    if (im <= -kPi) im += 2.0 * kPi;
    return {v.real(), im};
}

// ---------------------------------------------------------------------------

MittagLefflerNeg::MittagLefflerNeg(double alpha, MLEvalPolicy policy)
    : alpha_(alpha), policy_(policy) {
    check_alpha(alpha, "MittagLefflerNeg");
    policy_.validate();
    sin_pi_a_ = std::sin(kPi * alpha);
    cos_pi_a_ = std::cos(kPi * alpha);
    log_series_coef_.resize(static_cast<std::size_t>(policy_.series_terms_max) + 1);
    for (std::size_t k = 0; k < log_series_coef_.size(); ++k) {
        log_series_coef_[k] = -std::lgamma(1.0 + alpha * static_cast<double>(k));
    }
    if (alpha < 1.0) {
        constexpr std::size_t kAsymTerms = 200;
        asym_log_mag_.resize(kAsymTerms);
        asym_sin_.resize(kAsymTerms);
        for (std::size_t k = 1; k <= kAsymTerms; ++k) {
            const double ak = alpha * static_cast<double>(k);
            asym_log_mag_[k - 1] = std::lgamma(ak);
            asym_sin_[k - 1] = std::sin(kPi * ak) / kPi;
        }
    }
}

MLEvaluation MittagLefflerNeg::series(double x) const {
    if (x == 0.0) return {1.0, 0.0, MLRoute::Series};
    const double lx = std::log(x);
    quad::CompensatedSum sum;
    double abs_sum = 0.0;
    double last = std::numeric_limits<double>::infinity();
    bool done = false;
    for (std::size_t k = 0; k < log_series_coef_.size(); ++k) {
        const double mag = std::exp(static_cast<double>(k) * lx + log_series_coef_[k]);
        sum.add(k % 2 == 0 ? mag : -mag);
        abs_sum += mag;
        if (k > 0 && mag < last && mag <= 0.25 * kEps * std::abs(sum.value())) {
            done = true;
            break;
        }
        last = mag;
    }
    const double v = sum.value();
    double rel = 4.0 * kEps * abs_sum / std::abs(v);
    if (!done || !std::isfinite(rel)) rel = std::numeric_limits<double>::infinity();
    return {v, rel, MLRoute::Series};
}

std::optional<MLEvaluation> MittagLefflerNeg::asymptotic(double x) const {
    if (alpha_ == 1.0 || !(x > 1.0)) return std::nullopt;
    const double lx = std::log(x);
    const double target = policy_.target_rel_err;
    // exponentially small contribution not represented by the algebraic series
    double expo = 0.0;
    if (alpha_ > 2.0 / 3.0) {
        expo = std::exp(std::pow(x, 1.0 / alpha_) * std::cos(kPi / alpha_)) / alpha_;
    }
    quad::CompensatedSum sum;
    double prev_env = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= asym_log_mag_.size(); ++k) {
        const double env = std::exp(asym_log_mag_[k - 1] - static_cast<double>(k) * lx) / kPi;
        if (env > prev_env) return std::nullopt;  // past the optimal truncation point
        const double s = sum.value();
        if (k > 1 && s != 0.0 && env <= 0.1 * target * std::abs(s)) {
            const double rel = (env + expo) / std::abs(s);
            return MLEvaluation{s, rel, MLRoute::Asymptotic};
        }
        const double mag = env * kPi * asym_sin_[k - 1];
        sum.add(k % 2 == 1 ? mag : -mag);
        prev_env = env;
    }
    return std::nullopt;
}

MLEvaluation MittagLefflerNeg::integral(double x) const {
    if (x == 0.0) return {1.0, 0.0, MLRoute::Integral};
    if (alpha_ == 1.0) return {std::exp(-x), 0.0, MLRoute::Integral};
    const double inv_a = 1.0 / alpha_;
    const double c = cos_pi_a_;
    auto f = [&](double v) {
        double num = std::exp(-std::pow(x * v, inv_a));
        if (v > 0.0) num += std::exp(-std::pow(x / v, inv_a));
        return num / (v * v + 2.0 * v * c + 1.0);
    };
    quad::AdaptiveOptions opt;
    opt.rel_tol = 0.25 * policy_.target_rel_err;
    opt.max_evals = policy_.quad_nodes;
    // The first term switches off around v = 1/x and is below e^-50 past
    // v = 50^alpha / x; panels must not straddle that edge or the rule can
    // miss it entirely.
    const std::array<double, 4> cuts = {0.0, std::min(1.0, 1.0 / x),
                                        std::min(1.0, std::pow(50.0, alpha_) / x), 1.0};
    double value = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto part = quad::integrate_adaptive(f, cuts[i], cuts[i + 1], opt);
        value += part.value;
        err += part.error;
    }
    const double pref = sin_pi_a_ / (alpha_ * kPi);
    const double v = pref * value;
    double rel = pref * err / std::abs(v);
    if (!std::isfinite(rel)) rel = std::numeric_limits<double>::infinity();
    return {v, rel, MLRoute::Integral};
}

MLEvaluation MittagLefflerNeg::evaluate(double x) const {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("mittag_leffler_neg: x must be finite and nonnegative");
    }
    if (x == 0.0) return {1.0, 0.0, MLRoute::Exact};
    if (alpha_ == 1.0) return {std::exp(-x), 0.0, MLRoute::Exact};
    const double target = policy_.target_rel_err;
    if (x <= policy_.series_cutoff) {
        auto s = series(x);
        if (s.rel_error <= target) return s;
    } else if (auto a = asymptotic(x); a && a->rel_error <= target) {
        return *a;
    }
    auto q = integral(x);
    if (q.rel_error <= target) return q;
    throw NumericError("mittag_leffler_neg: integral route missed target at x = " + std::to_string(x),
                       q.rel_error);
}

double mittag_leffler_neg(double alpha, double x, const MLEvalPolicy& policy) {
    return MittagLefflerNeg(alpha, policy).evaluate(x).value;
}

// ---------------------------------------------------------------------------

TimeGrid TimeGrid::uniform(double t_end, std::size_t n_steps) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("TimeGrid: t_end must be positive");
    if (n_steps == 0) throw DomainError("TimeGrid: n_steps must be positive");
    return {t_end, n_steps};
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> out(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) out[k] = node(k);
    return out;
}

std::vector<double> fractional_integral(double alpha, std::span<const double> samples,
                                        const TimeGrid& grid,
                                        std::span<const double> start_exponents) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("fractional_integral: alpha must lie in [0, 1]");
    }
    if (!(grid.t_end > 0.0) || grid.n_steps == 0) throw DomainError("fractional_integral: malformed grid");
    const std::size_t n = grid.n_steps;
    if (samples.size() != n + 1) {
        throw DomainError("fractional_integral: expected " + std::to_string(n + 1) + " samples, got " +
                          std::to_string(samples.size()));
    }
    if (alpha == 0.0) return {samples.begin(), samples.end()};

    const long double p = alpha + 1.0L;
    std::vector<long double> a(n + 1, 0.0L);
    std::vector<long double> b0(n + 1, 0.0L);
    for (std::size_t m = 1; m <= n; ++m) {
        a[m] = second_difference(p, m);
        b0[m] = first_weight(p, m);
    }
    // Rule in index units, without the h^alpha / Gamma(alpha+2) factor.
    auto rule = [&](const std::vector<long double>& g) {
        std::vector<long double> out(n + 1, 0.0L);
        for (std::size_t k = 1; k <= n; ++k) {
            long double s = b0[k] * g[0] + g[k];
            for (std::size_t j = 1; j < k; ++j) s += a[k - j] * g[j];
            out[k] = s;
        }
        return out;
    };
    auto acc = rule(std::vector<long double>(samples.begin(), samples.end()));

    if (!start_exponents.empty()) {
        std::vector<double> sig = {0.0, 1.0};
        for (double s : start_exponents) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw DomainError("fractional_integral: start exponents must be positive");
            }
            const bool dup = std::any_of(sig.begin(), sig.end(),
                                         [&](double q) { return std::abs(q - s) < 1e-12; });
            if (!dup) sig.push_back(s);
        }
        const std::size_t m = sig.size();
        if (n < m) throw DomainError("fractional_integral: too few steps for starting weights");

        std::vector<long double> mat(m * m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                mat[i * m + k] = std::pow(static_cast<long double>(k), static_cast<long double>(sig[i]));
            }
        }
        const SmallLu lu(std::move(mat), m);

        // defect of the plain rule on j^sigma, exact value scaled to rule units
        std::vector<std::vector<long double>> defect(m);
        const long double g2 = std::tgamma(p + 1.0L);
        for (std::size_t i = 0; i < m; ++i) {
            const long double s = sig[i];
            std::vector<long double> g(n + 1);
            for (std::size_t j = 0; j <= n; ++j) g[j] = std::pow(static_cast<long double>(j), s);
            const auto r = rule(g);
            const long double c = g2 * std::tgamma(s + 1.0L) / std::tgamma(s + 1.0L + alpha);
            defect[i].resize(n + 1);
            for (std::size_t k = 1; k <= n; ++k) {
                defect[i][k] = c * std::pow(static_cast<long double>(k), s + alpha) - r[k];
            }
        }
        std::vector<long double> w(m);
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t i = 0; i < m; ++i) w[i] = defect[i][k];
            lu.solve(w);
            for (std::size_t j = 0; j < m; ++j) acc[k] += w[j] * samples[j];
        }
    }

    const long double scale = std::pow(static_cast<long double>(grid.step()), alpha) / std::tgamma(p + 1.0L);
    std::vector<double> out(n + 1);
    out[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k) out[k] = static_cast<double>(scale * acc[k]);
    return out;
}

double fourier_mode_residual(double alpha, double lambda, const TimeGrid& grid,
                             const MLEvalPolicy& policy) {
    check_alpha(alpha, "fourier_mode_residual");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("fourier_mode_residual: lambda must be finite and nonnegative");
    }
    if (lambda == 0.0) return 0.0;
    const MittagLefflerNeg ml(alpha, policy);
    const auto t = grid.nodes();
    std::vector<double> y(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) y[k] = ml(lambda * std::pow(t[k], alpha));

    // y = sum_k c_k t^{alpha k}. The plain rule loses order only on powers
    // with sigma + alpha < 2; correcting more of them just worsens conditioning.
    std::vector<double> exps;
    if (alpha < 1.0) {
        for (int k = 1; alpha * k + alpha < 2.0; ++k) {
            const double s = alpha * k;
            if (std::abs(s - 1.0) > 1e-12) exps.push_back(s);
        }
    }
    const auto j = fractional_integral(alpha, y, grid, exps);
    double worst = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        worst = std::max(worst, std::abs(y[k] - 1.0 + lambda * j[k]));
    }
    return worst;
}

}  // namespace tfd
