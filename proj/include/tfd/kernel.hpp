#pragma once

#include "tfd/field.hpp"
#include "tfd/specfun.hpp"

#include <cstddef>
#include <string>

namespace tfd {

/// (alpha, beta, d) of the equation d_t^alpha (u - u0) + (-Delta)^{beta/2} u = 0.
struct EquationParams {
    double alpha = 0.5;
    double beta = 1.0;
    int dim = 1;

    static EquationParams make(double alpha, double beta, int dim);
    void validate() const;
    EquationParams shifted(int extra_dims) const;
    std::string describe() const;
};

/// Symbol of Z(t, .): (2 pi)^{-d/2} E_alpha(-rho^beta t^alpha).
double fourier_symbol(const EquationParams& p, double rho, double t, const MLEvalPolicy& policy = {});

/// Z(t, .) sampled on the grid by inverse FFT of the symbol. The continuous
/// normalization makes the discrete mass exactly 1 (the zero mode); for
/// beta < 2 the algebraic tail is periodized onto [-L, L)^d.
/// Throws ResolutionError when the symbol at the axis Nyquist frequency
/// exceeds 1e-3 of its peak.
Field eval_kernel_grid(const EquationParams& p, double t, const GridSpec& grid,
                       const MLEvalPolicy& policy = {});

/// Vertical line Re s = abscissa, truncated to |Im s| <= half_height.
struct ContourSpec {
    double abscissa = -0.25;
    double half_height = 200.0;
    std::size_t nodes = 8192;
};

/// Open interval of admissible abscissae: (max(-d/beta, -1), 1), and
/// unbounded on the right for beta = 2.
struct ContourStrip {
    double left;
    double right;
};
ContourStrip contour_strip(const EquationParams& p);

/// c = -min(1, d/beta) / 4.
ContourSpec default_contour(const EquationParams& p);

/// Abscissa minimizing |H(c) z^{-c}| on the real axis, kept 0.25 away from
/// the poles; the integrand then has no large oscillating cancellation.
ContourSpec saddle_contour(const EquationParams& p, double t, double r);

struct MellinResult {
    double log_value;      // log Z(t, r)
    double discretization; // estimated relative error of the trapezoidal sum
    double tail;           // integrand magnitude at +-half_height relative to peak
    ContourSpec used;      // after any automatic enlargement
};

/// Z(t, r) by trapezoidal quadrature of the Mellin-Barnes integral
///   pi^{-d/2} r^{-d} (1/2pi) int H(c + i tau) z^{-(c + i tau)} d tau,
///   z = 2^{-beta} t^{-alpha} r^beta,
///   H(s) = G(d/2 + beta s/2) G(1 + s) G(-s) / (G(1 + alpha s) G(-beta s/2)).
/// Height and nodes are doubled (up to 4 times) until the tail has decayed
/// below 1e-14 of the peak.
MellinResult eval_kernel_mellin_detail(const EquationParams& p, double t, double r,
                                       const ContourSpec& contour);
double eval_kernel_mellin(const EquationParams& p, double t, double r, const ContourSpec& contour);
/// Same, on the saddle contour.
double eval_kernel_mellin(const EquationParams& p, double t, double r);
/// log Z(t, r) on the saddle contour; usable far beyond double range of Z.
double log_kernel_mellin(const EquationParams& p, double t, double r);

enum class Regime {
    NearField_dLtBeta,
    NearField_dEqBeta,
    NearField_dGtBeta,
    NearField_alpha1,
    FarField_stable,
    FarField_gaussian,
};
const char* regime_name(Regime r) noexcept;

struct RegimeReport {
    double similarity_r = 0.0;  // R = 2^{-beta} r^beta t^{-alpha}
    Regime regime = Regime::NearField_dLtBeta;
    double envelope = 0.0;      // case formula with constant 1
    double sigma = 0.0;         // only for FarField_gaussian
    bool singular = false;      // envelope is +inf at r = 0
};

bool is_near_field(Regime r) noexcept;

/// Selects the asymptotic case of the kernel at (t, r).
RegimeReport classify_regime(const EquationParams& p, double t, double r);

/// -2 pi r Z_{d+2}(t, r), which equals dZ_d/dr.
double radial_derivative_via_shift(const EquationParams& p, double t, double r, const ContourSpec& contour);
double radial_derivative_via_shift(const EquationParams& p, double t, double r);

}  // namespace tfd
