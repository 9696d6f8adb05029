#pragma once

#include "tfd/field.hpp"
#include "tfd/kernel.hpp"

#include <cstddef>

namespace tfd {

/// Admissible space-time tuple; r_i = 2 t_i^{alpha/beta}.
struct HarnackTuple {
    double t1 = 1.0;
    double t2 = 2.0;
    Point x1{0.0, 0.0, 0.0};
    Point x2{0.0, 0.0, 0.0};
    double r = 0.5;
    double r1 = 0.0;
    double r2 = 0.0;

    static HarnackTuple make(const EquationParams& p, double t1, double t2, const Point& x1,
                             const Point& x2, double r);
};

/// Unit: |x|^{beta-d} (d > beta) or log|x| (d = beta).
/// NormalizedLog: for d = beta, log|x| / c(d, beta) with c(d, beta) = -(d pi)^{d/2}.
enum class RieszNormalization { Unit, NormalizedLog };

double riesz_log_constant(int d);  // -(d pi)^{d/2}

double riesz_kernel(int d, double beta, double dist, RieszNormalization norm = RieszNormalization::Unit);
double riesz_kernel(int d, double beta, const Point& x, RieszNormalization norm = RieszNormalization::Unit);

struct PotentialOptions {
    RieszNormalization normalization = RieszNormalization::Unit;
    double kernel_scale = 1.0;          // extra positive constant multiplying G
    std::size_t angular_nodes = 256;    // d = 2: trapezoid in theta; d = 3: per angle
    std::size_t gauss_points = 8;       // per ray segment between grid planes
};

struct PotentialResult {
    double value = 0.0;
    bool near_boundary = false;  // eval point within h of the sphere: ill-conditioned
};

/// int_{B_radius(center)} G(eval_at - y) u0(y) dy in polar coordinates
/// around eval_at. Rays are split where they cross grid planes (the
/// multilinear interpolant of u0 is polynomial in between) and the first
/// segment uses rho = rho_1 u^k so the r^{beta-1} (or log) weight becomes
/// smooth.
PotentialResult riesz_potential_ball_detail(int d, double beta, const Field& u0, const Point& center,
                                            double radius, const Point& eval_at,
                                            const PotentialOptions& opt = {});
double riesz_potential_ball(int d, double beta, const Field& u0, const Point& center, double radius,
                            const Point& eval_at, const PotentialOptions& opt = {});

/// int_{B_radius(center)} u0.
double ball_mass(const Field& u0, const Point& center, double radius, const PotentialOptions& opt = {});

/// d > beta: 1 + P1/P2 with P_i the ball potential over B_{r_i}(x_i) at x_i.
/// d = beta: 1 + Q1/Q2, Q_i = int_{B_{r_i}(x_i)} [1 + beta log 2 + alpha log t_i
///   + beta c(d,beta) G(x_i - y)] u0(y) dy with G the NormalizedLog kernel.
/// The kernel normalization cancels before the ratio is formed.
double harnack_bound_factor(const EquationParams& p, const Field& u0, const HarnackTuple& tuple, double T,
                            const PotentialOptions& opt = {});

/// grid sup of u0 over B_{r1}(x1) divided by grid inf over B_{r2}(x2).
double initial_harnack_ratio(const Field& u0, const Point& x1, double r1, const Point& x2, double r2);

/// (2r)^{beta/alpha} <= t1 < t2 <= t1 + (2r)^{beta/alpha} <= T.
bool admissible_window(double r, const EquationParams& p, double t1, double t2, double T);

}  // namespace tfd
