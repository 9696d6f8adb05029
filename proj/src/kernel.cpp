#include "tfd/kernel.hpp"

#include "tfd/errors.hpp"
#include "tfd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace tfd {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

void check_time(double t, const char* where) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(where) + ": t must be positive");
}

// log H(s) - s log z, with G(-s)/G(-beta s/2) rewritten as
// (beta/2) G(1-s)/G(1-beta s/2) so that s = 0 is a regular point.
cplx log_integrand(const EquationParams& p, cplx s, double log_z) {
    const double a = p.alpha;
    const double b = p.beta;
    cplx v = log_gamma_unwrapped(0.5 * p.dim + 0.5 * b * s);
    if (a < 1.0) v += log_gamma_unwrapped(1.0 + s) - log_gamma_unwrapped(1.0 + a * s);
    if (b < 2.0) {
        v += std::log(0.5 * b) + log_gamma_unwrapped(1.0 - s) - log_gamma_unwrapped(1.0 - 0.5 * b * s);
    }
    return v - s * log_z;
}

double log_integrand_real(const EquationParams& p, double c, double log_z) {
    const double a = p.alpha;
    const double b = p.beta;
    double v = std::lgamma(0.5 * p.dim + 0.5 * b * c);
    if (a < 1.0) v += std::lgamma(1.0 + c) - std::lgamma(1.0 + a * c);
    if (b < 2.0) v += std::log(0.5 * b) + std::lgamma(1.0 - c) - std::lgamma(1.0 - 0.5 * b * c);
    return v - c * log_z;
}

double log_similarity(const EquationParams& p, double t, double r) {
    // log z, z = 2^{-beta} t^{-alpha} r^beta
    return -p.beta * std::numbers::ln2 - p.alpha * std::log(t) + p.beta * std::log(r);
}

}  // namespace

EquationParams EquationParams::make(double alpha, double beta, int dim) {
    EquationParams p{alpha, beta, dim};
    p.validate();
    return p;
}

void EquationParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("EquationParams: alpha must lie in (0, 1]");
    if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("EquationParams: beta must lie in (0, 2]");
    if (dim < 1 || dim > 5) throw DomainError("EquationParams: dim must lie in 1..5");
}

EquationParams EquationParams::shifted(int extra_dims) const {
    return make(alpha, beta, dim + extra_dims);
}

std::string EquationParams::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "alpha=" << alpha << " beta=" << beta << " dim=" << dim;
    return os.str();
}

double fourier_symbol(const EquationParams& p, double rho, double t, const MLEvalPolicy& policy) {
    p.validate();
    check_time(t, "fourier_symbol");
    if (!(rho >= 0.0)) throw DomainError("fourier_symbol: rho must be nonnegative");
    const double x = std::pow(rho, p.beta) * std::pow(t, p.alpha);
    return std::pow(2.0 * kPi, -0.5 * p.dim) * mittag_leffler_neg(p.alpha, x, policy);
}

Field eval_kernel_grid(const EquationParams& p, double t, const GridSpec& grid, const MLEvalPolicy& policy) {
    p.validate();
    check_time(t, "eval_kernel_grid");
    if (grid.dim != p.dim) throw DomainError("eval_kernel_grid: grid dimension differs from params");
    if (p.dim > 3) throw DomainError("eval_kernel_grid: FFT route supports dim <= 3");
    const SpectralPlan plan(grid);
    const MittagLefflerNeg ml(p.alpha, policy);
    const double ta = std::pow(t, p.alpha);

    const double nyq = ml(std::pow(plan.nyquist(), p.beta) * ta);
    if (nyq > 1e-3) {
        std::ostringstream os;
        os << "eval_kernel_grid: symbol at Nyquist is " << nyq
           << " of its peak (> 1e-3); refine the grid (larger N) for t = " << t;
        throw ResolutionError(os.str());
    }
    const auto& keys = plan.keys();
    std::vector<double> mult(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        mult[i] = ml(std::pow(plan.frequency(keys[i]), p.beta) * ta);
    }
    std::vector<cplx> spec(plan.spectrum_size());
    const auto& slot = plan.key_slot();
    const auto& par = plan.parity();
    for (std::size_t e = 0; e < spec.size(); ++e) spec[e] = mult[slot[e]] * static_cast<double>(par[e]);

    Field out(grid);
    plan.inverse(spec, out.values());
    const double scale = 1.0 / grid.cell_volume();
    for (double& v : out.values()) v *= scale;
    return out;
}

ContourStrip contour_strip(const EquationParams& p) {
    const double left = std::max(-static_cast<double>(p.dim) / p.beta, -1.0);
    const double right = p.beta < 2.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return {left, right};
}

ContourSpec default_contour(const EquationParams& p) {
    p.validate();
    ContourSpec c;
    c.abscissa = -0.25 * std::min(1.0, static_cast<double>(p.dim) / p.beta);
    return c;
}

ContourSpec saddle_contour(const EquationParams& p, double t, double r) {
    p.validate();
    check_time(t, "saddle_contour");
    if (!(r > 0.0)) throw DomainError("saddle_contour: r must be positive");
    const auto strip = contour_strip(p);
    const double log_z = log_similarity(p, t, r);
    double lo = strip.left + 0.25;
    double hi;
    if (std::isfinite(strip.right)) {
        hi = strip.right - 0.25;
    } else {
        // the saddle grows like z^{1/(2-alpha)}
        hi = std::min(1e7, 10.0 + 4.0 * std::exp(log_z / (2.0 - p.alpha)));
    }
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = log_integrand_real(p, x1, log_z);
    double f2 = log_integrand_real(p, x2, log_z);
    for (int it = 0; it < 100 && hi - lo > 1e-6; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = log_integrand_real(p, x1, log_z);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = log_integrand_real(p, x2, log_z);
        }
    }
    ContourSpec c;
    c.abscissa = 0.5 * (lo + hi);
    if (p.beta == 2.0 && c.abscissa > 0.0) {
        // second derivative of the log-integrand is about (2 - alpha)/c, so the
        // peak has width sqrt(c / (2 - alpha)) in the imaginary direction
        c.half_height = std::max(c.half_height, 12.0 * std::sqrt(c.abscissa / (2.0 - p.alpha)));
    }
    return c;
}

MellinResult eval_kernel_mellin_detail(const EquationParams& p, double t, double r, const ContourSpec& contour) {
    p.validate();
    check_time(t, "eval_kernel_mellin");
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("eval_kernel_mellin: r must be positive");
    const auto strip = contour_strip(p);
    const double c = contour.abscissa;
    if (!(c > strip.left && c < strip.right)) {
        std::ostringstream os;
        os << "eval_kernel_mellin: abscissa " << c << " does not separate the poles; need " << strip.left
           << " < c < " << strip.right;
        throw ContourError(os.str());
    }
    if (!(contour.half_height > 0.0) || contour.nodes < 512) {
        throw ContourError("eval_kernel_mellin: need half_height > 0 and nodes >= 512");
    }

    const double log_z = log_similarity(p, t, r);
    const double ref = log_integrand_real(p, c, log_z);
    ContourSpec cur = contour;
    double tail = 0.0;
    for (int attempt = 0; attempt < 5; ++attempt) {
        const std::size_t n = cur.nodes;
        const double dt = 2.0 * cur.half_height / static_cast<double>(n);
        cplx full(0.0, 0.0);
        cplx even(0.0, 0.0);
        double abs_sum = 0.0;
        double peak = 0.0;
        double edge = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double tau = -cur.half_height + static_cast<double>(j) * dt;
            const cplx f = std::exp(log_integrand(p, cplx(c, tau), log_z) - ref);
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            full += w * f;
            if (j % 2 == 0) even += w * f;
            const double af = std::abs(f);
            abs_sum += w * af;
            peak = std::max(peak, af);
            if (j == 0 || j == n) edge = std::max(edge, af);
        }
        tail = edge / peak;
        if (tail > 1e-14) {
            cur.half_height *= 2.0;
            cur.nodes *= 2;
            continue;
        }
        if (std::abs(full.imag()) > 1e-10 * abs_sum) {
            throw NumericError("eval_kernel_mellin: imaginary residue above 1e-10",
                               std::abs(full.imag()) / abs_sum);
        }
        // even-node sum has weights doubled; same endpoints since n is even
        const double s_full = full.real() * dt;
        const double s_half = even.real() * 2.0 * dt;
        if (!(s_full > 0.0)) {
            throw NumericError("eval_kernel_mellin: non-positive quadrature value (cancellation)",
                               std::abs(s_full - s_half) / (abs_sum * dt));
        }
        // Trapezoidal error decays like exp(-2 pi a / dtau): the full sum's
        // error is roughly the square of the half sum's relative deviation.
        const double dev = std::abs(s_full - s_half) / s_full;
        const double disc = dev * dev;
        if (dev > 1e-5) {
            if (attempt == 4) {
                throw NumericError("eval_kernel_mellin: trapezoidal sum not converged", disc);
            }
            cur.nodes *= 2;
            continue;
        }
        MellinResult out;
        out.log_value = -0.5 * p.dim * std::log(kPi) - p.dim * std::log(r) + ref +
                        std::log(s_full / (2.0 * kPi));
        out.discretization = disc;
        out.tail = tail;
        out.used = cur;
        return out;
    }
    throw TruncationError("eval_kernel_mellin: integrand has not decayed at the truncation height", tail);
}

double eval_kernel_mellin(const EquationParams& p, double t, double r, const ContourSpec& contour) {
    return std::exp(eval_kernel_mellin_detail(p, t, r, contour).log_value);
}

double eval_kernel_mellin(const EquationParams& p, double t, double r) {
    return eval_kernel_mellin(p, t, r, saddle_contour(p, t, r));
}

double log_kernel_mellin(const EquationParams& p, double t, double r) {
    return eval_kernel_mellin_detail(p, t, r, saddle_contour(p, t, r)).log_value;
}

const char* regime_name(Regime r) noexcept {
    switch (r) {
        case Regime::NearField_dLtBeta: return "NearField_dLtBeta";
        case Regime::NearField_dEqBeta: return "NearField_dEqBeta";
        case Regime::NearField_dGtBeta: return "NearField_dGtBeta";
        case Regime::NearField_alpha1: return "NearField_alpha1";
        case Regime::FarField_stable: return "FarField_stable";
        case Regime::FarField_gaussian: return "FarField_gaussian";
    }
    return "unknown";
}

bool is_near_field(Regime r) noexcept {
    return r != Regime::FarField_stable && r != Regime::FarField_gaussian;
}

RegimeReport classify_regime(const EquationParams& p, double t, double r) {
    p.validate();
    check_time(t, "classify_regime");
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("classify_regime: r must be nonnegative");
    const double a = p.alpha;
    const double b = p.beta;
    const double d = p.dim;
    RegimeReport rep;
    rep.similarity_r = std::pow(2.0, -b) * std::pow(r, b) * std::pow(t, -a);
    const double inf = std::numeric_limits<double>::infinity();
    if (rep.similarity_r <= 1.0) {
        if (a == 1.0) {
            rep.regime = Regime::NearField_alpha1;
            rep.envelope = std::pow(t, -d / b);
        } else if (d < b) {
            rep.regime = Regime::NearField_dLtBeta;
            rep.envelope = std::pow(t, -a * d / b);
        } else if (d == b) {
            rep.regime = Regime::NearField_dEqBeta;
            if (r == 0.0) {
                rep.envelope = inf;
                rep.singular = true;
            } else {
                rep.envelope = std::pow(t, -a) * (std::abs(std::log(std::pow(r, b) * std::pow(t, -a))) + 1.0);
            }
        } else {
            rep.regime = Regime::NearField_dGtBeta;
            if (r == 0.0) {
                rep.envelope = inf;
                rep.singular = true;
            } else {
                rep.envelope = std::pow(t, -a) * std::pow(r, b - d);
            }
        }
    } else if (b < 2.0) {
        rep.regime = Regime::FarField_stable;
        rep.envelope = std::pow(t, a) * std::pow(r, -d - b);
    } else {
        rep.regime = Regime::FarField_gaussian;
        const double R = rep.similarity_r;
        rep.sigma = (2.0 - a) * std::pow(std::pow(a, a) / 4.0, 1.0 / (2.0 - a));
        rep.envelope = std::pow(t, -a * d / 2.0) * std::pow(R, d * (a - 1.0) / (2.0 * (2.0 - a))) *
                       std::exp(-rep.sigma * std::pow(R, 1.0 / (2.0 - a)));
    }
    return rep;
}

double radial_derivative_via_shift(const EquationParams& p, double t, double r, const ContourSpec& contour) {
    p.validate();
    if (p.dim + 2 > 5) throw DomainError("radial_derivative_via_shift: dim + 2 must not exceed 5");
    const auto q = p.shifted(2);
    return -2.0 * kPi * r * eval_kernel_mellin(q, t, r, contour);
}

double radial_derivative_via_shift(const EquationParams& p, double t, double r) {
    p.validate();
    if (p.dim + 2 > 5) throw DomainError("radial_derivative_via_shift: dim + 2 must not exceed 5");
    const auto q = p.shifted(2);
    return -2.0 * kPi * r * eval_kernel_mellin(q, t, r);
}

}  // namespace tfd
