#include "tfd/potential.hpp"

#include "tfd/errors.hpp"
#include "tfd/quadrature.hpp"
#include "tfd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace tfd {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Weight { Power, Log, One };

// Total radial weight w(rho) = G(rho) rho^{d-1}.
struct RadialWeight {
    Weight kind;
    int dim;
    double beta;

    double operator()(double rho) const {
        switch (kind) {
            case Weight::Power: return std::pow(rho, beta - 1.0);
            case Weight::Log: return std::pow(rho, dim - 1) * std::log(rho);
            case Weight::One: return std::pow(rho, dim - 1);
        }
        return 0.0;
    }

    // Exponent k of rho = rho_1 u^k on the segment touching 0.
    int substitution() const {
        switch (kind) {
            case Weight::One: return 1;
            case Weight::Log: return 4;
            case Weight::Power: {
                for (int k = 1; k <= 8; ++k) {
                    const double kb = k * beta;
                    if (std::abs(kb - std::round(kb)) < 1e-9) return k;
                }
                return static_cast<int>(std::ceil(2.0 / beta));
            }
        }
        return 1;
    }
};

void require_inside(const GridSpec& g, const Point& center, double radius, const char* who) {
    for (int a = 0; a < g.dim; ++a) {
        const double c = center[static_cast<std::size_t>(a)];
        if (!(c - radius >= -g.half_extent && c + radius < g.half_extent)) {
            std::ostringstream os;
            os << who << ": ball of radius " << radius << " around axis-" << a << " coordinate " << c
               << " leaves the grid domain [-" << g.half_extent << ", " << g.half_extent << ")";
            throw DomainError(os.str());
        }
    }
}

struct Direction {
    Point omega;
    double weight;  // measure on S^{d-1}
};

std::vector<Direction> sphere_rule(int d, std::size_t m) {
    std::vector<Direction> out;
    if (d == 1) {
        out.push_back({{1.0, 0.0, 0.0}, 1.0});
        out.push_back({{-1.0, 0.0, 0.0}, 1.0});
        return out;
    }
    m = std::max<std::size_t>(m, 8);
    const double dphi = 2.0 * kPi / static_cast<double>(m);
    if (d == 2) {
        for (std::size_t j = 0; j < m; ++j) {
            const double th = (static_cast<double>(j) + 0.5) * dphi;
            out.push_back({{std::cos(th), std::sin(th), 0.0}, dphi});
        }
        return out;
    }
    const auto gl = quad::gauss_legendre(m / 2);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double mu = gl.nodes[i];
        const double s = std::sqrt(1.0 - mu * mu);
        for (std::size_t j = 0; j < m; ++j) {
            const double ph = (static_cast<double>(j) + 0.5) * dphi;
            out.push_back({{s * std::cos(ph), s * std::sin(ph), mu}, gl.weights[i] * dphi});
        }
    }
    return out;
}

class BallIntegrator {
public:
    BallIntegrator(const Field& u0, const PotentialOptions& opt)
        : u0_(u0),
          d_(u0.grid().dim),
          rule_(quad::gauss_legendre(std::max<std::size_t>(opt.gauss_points, 2))),
          first_(quad::gauss_legendre(16)),
          dirs_(sphere_rule(d_, opt.angular_nodes)) {}

    PotentialResult integrate(const Point& center, double radius, const Point& x, const RadialWeight& w) const {
        const GridSpec& g = u0_.grid();
        PotentialResult res;
        Point v{0.0, 0.0, 0.0};
        for (int a = 0; a < d_; ++a) {
            v[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
        }
        const double vv = norm(v, d_) * norm(v, d_);
        res.near_boundary = std::abs(std::sqrt(vv) - radius) < g.spacing();
        quad::CompensatedSum total;
        for (const auto& dir : dirs_) {
            double vo = 0.0;
            for (int a = 0; a < d_; ++a) {
                vo += v[static_cast<std::size_t>(a)] * dir.omega[static_cast<std::size_t>(a)];
            }
            const double disc = vo * vo - vv + radius * radius;
            if (disc <= 0.0) continue;
            const double sq = std::sqrt(disc);
            const double hi = -vo + sq;
            const double lo = std::max(0.0, -vo - sq);
            if (!(hi > lo)) continue;
            total.add(dir.weight * ray(x, dir.omega, lo, hi, w));
        }
        res.value = total.value();
        return res;
    }

private:
    double sample(const Point& x, const Point& omega, double rho) const {
        Point y{0.0, 0.0, 0.0};
        for (int a = 0; a < d_; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            y[ua] = x[ua] + rho * omega[ua];
        }
        return point_value(u0_, y);
    }

    double ray(const Point& x, const Point& omega, double lo, double hi, const RadialWeight& w) const {
        const GridSpec& g = u0_.grid();
        const double h = g.spacing();
        const double L = g.half_extent;
        std::vector<double> cuts{lo, hi};
        for (int a = 0; a < d_; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const double o = omega[ua];
            if (std::abs(o) < 1e-14) continue;
            const double p0 = x[ua] + lo * o;
            const double p1 = x[ua] + hi * o;
            const auto m0 = static_cast<long long>(std::ceil((std::min(p0, p1) + L) / h));
            const auto m1 = static_cast<long long>(std::floor((std::max(p0, p1) + L) / h));
            for (long long m = m0; m <= m1; ++m) {
                const double rho = (-L + static_cast<double>(m) * h - x[ua]) / o;
                if (rho > lo && rho < hi) cuts.push_back(rho);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        quad::CompensatedSum acc;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double a = cuts[s];
            const double b = cuts[s + 1];
            if (!(b > a)) continue;
            if (a == 0.0) {
                // rho = b u^k, d rho = k b u^{k-1} du
                const int k = w.substitution();
                double part = 0.0;
                for (std::size_t i = 0; i < first_.nodes.size(); ++i) {
                    const double u = 0.5 * (first_.nodes[i] + 1.0);
                    const double uk1 = std::pow(u, k - 1);
                    const double rho = b * uk1 * u;
                    part += 0.5 * first_.weights[i] * w(rho) * k * b * uk1 * sample(x, omega, rho);
                }
                acc.add(part);
                continue;
            }
            const double c = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            double part = 0.0;
            for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
                const double rho = c + half * rule_.nodes[i];
                part += rule_.weights[i] * w(rho) * sample(x, omega, rho);
            }
            acc.add(half * part);
        }
        return acc.value();
    }

    const Field& u0_;
    int d_;
    quad::GaussRule rule_;
    quad::GaussRule first_;
    std::vector<Direction> dirs_;
};

void require_kernel_domain(int d, double beta) {
    if (d < 1) throw DomainError("riesz kernel: dimension must be positive");
    if (!(beta > 0.0) || !(beta <= 2.0)) throw DomainError("riesz kernel: beta must lie in (0, 2]");
    if (static_cast<double>(d) < beta) {
        std::ostringstream os;
        os << "riesz kernel: undefined for d = " << d << " < beta = " << beta;
        throw DomainError(os.str());
    }
}

}  // namespace

HarnackTuple HarnackTuple::make(const EquationParams& p, double t1, double t2, const Point& x1, const Point& x2,
                                double r) {
    p.validate();
    if (!(t1 > 0.0) || !(t2 > 0.0) || !(r > 0.0)) throw DomainError("HarnackTuple: t1, t2, r must be positive");
    HarnackTuple h;
    h.t1 = t1;
    h.t2 = t2;
    h.x1 = x1;
    h.x2 = x2;
    h.r = r;
    h.r1 = 2.0 * std::pow(t1, p.alpha / p.beta);
    h.r2 = 2.0 * std::pow(t2, p.alpha / p.beta);
    return h;
}

double riesz_log_constant(int d) { return -std::pow(d * kPi, 0.5 * d); }

double riesz_kernel(int d, double beta, double dist, RieszNormalization norm) {
    require_kernel_domain(d, beta);
    if (!(dist > 0.0)) throw DomainError("riesz_kernel: singular at x = 0");
    if (static_cast<double>(d) > beta) return std::pow(dist, beta - d);
    const double lg = std::log(dist);
    return norm == RieszNormalization::NormalizedLog ? lg / riesz_log_constant(d) : lg;
}

double riesz_kernel(int d, double beta, const Point& x, RieszNormalization norm) {
    return riesz_kernel(d, beta, tfd::norm(x, d), norm);
}

PotentialResult riesz_potential_ball_detail(int d, double beta, const Field& u0, const Point& center,
                                            double radius, const Point& eval_at, const PotentialOptions& opt) {
    require_kernel_domain(d, beta);
    if (u0.grid().dim != d) throw DomainError("riesz_potential_ball: field dimension differs from d");
    if (!(radius > 0.0)) throw DomainError("riesz_potential_ball: radius must be positive");
    if (!(opt.kernel_scale > 0.0)) throw DomainError("riesz_potential_ball: kernel scale must be positive");
    require_inside(u0.grid(), center, radius, "riesz_potential_ball");
    const bool log_kernel = static_cast<double>(d) == beta;
    const RadialWeight w{log_kernel ? Weight::Log : Weight::Power, d, beta};
    auto res = BallIntegrator(u0, opt).integrate(center, radius, eval_at, w);
    double scale = opt.kernel_scale;
    if (log_kernel && opt.normalization == RieszNormalization::NormalizedLog) scale /= riesz_log_constant(d);
    res.value *= scale;
    return res;
}

double riesz_potential_ball(int d, double beta, const Field& u0, const Point& center, double radius,
                            const Point& eval_at, const PotentialOptions& opt) {
    return riesz_potential_ball_detail(d, beta, u0, center, radius, eval_at, opt).value;
}

double ball_mass(const Field& u0, const Point& center, double radius, const PotentialOptions& opt) {
    if (!(radius > 0.0)) throw DomainError("ball_mass: radius must be positive");
    require_inside(u0.grid(), center, radius, "ball_mass");
    const int d = u0.grid().dim;
    return BallIntegrator(u0, opt).integrate(center, radius, center, RadialWeight{Weight::One, d, 1.0}).value;
}

double harnack_bound_factor(const EquationParams& p, const Field& u0, const HarnackTuple& tuple, double T,
                            const PotentialOptions& opt) {
    p.validate();
    const int d = p.dim;
    require_kernel_domain(d, p.beta);
    if (u0.grid().dim != d) throw DomainError("harnack_bound_factor: field dimension differs from params");
    if (!admissible_window(tuple.r, p, tuple.t1, tuple.t2, T)) {
        std::ostringstream os;
        os << "harnack_bound_factor: tuple (t1 = " << tuple.t1 << ", t2 = " << tuple.t2 << ", r = " << tuple.r
           << ", T = " << T << ") violates (2r)^{beta/alpha} <= t1 < t2 <= t1 + (2r)^{beta/alpha} <= T";
        throw AdmissibilityError(os.str());
    }
    if (!(norm(tuple.x1, d) < tuple.r) || !(norm(tuple.x2, d) < tuple.r)) {
        throw AdmissibilityError("harnack_bound_factor: x1 and x2 must lie in B_r(0)");
    }
    const HarnackTuple ref = HarnackTuple::make(p, tuple.t1, tuple.t2, tuple.x1, tuple.x2, tuple.r);
    const BallIntegrator integ(u0, opt);
    require_inside(u0.grid(), tuple.x1, ref.r1, "harnack_bound_factor");
    require_inside(u0.grid(), tuple.x2, ref.r2, "harnack_bound_factor");

    double num = 0.0;
    double den = 0.0;
    if (static_cast<double>(d) > p.beta) {
        // Raw |x|^{beta-d} potentials: any kernel normalization cancels here.
        const RadialWeight w{Weight::Power, d, p.beta};
        num = integ.integrate(tuple.x1, ref.r1, tuple.x1, w).value;
        den = integ.integrate(tuple.x2, ref.r2, tuple.x2, w).value;
    } else {
        // beta c(d,beta) G = beta log|x| with the log normalization.
        const RadialWeight wl{Weight::Log, d, p.beta};
        const RadialWeight w1{Weight::One, d, p.beta};
        const double c = 1.0 + p.beta * std::log(2.0);
        auto q = [&](double t, const Point& x, double r) {
            const double m = integ.integrate(x, r, x, w1).value;
            const double l = integ.integrate(x, r, x, wl).value;
            return (c + p.alpha * std::log(t)) * m + p.beta * l;
        };
        num = q(tuple.t1, tuple.x1, ref.r1);
        den = q(tuple.t2, tuple.x2, ref.r2);
    }
    if (den == 0.0) {
        throw DegenerateDataError("harnack_bound_factor: denominator potential vanishes (u0 = 0 on B_{r2}(x2))");
    }
    return 1.0 + num / den;
}

double initial_harnack_ratio(const Field& u0, const Point& x1, double r1, const Point& x2, double r2) {
    const GridSpec& g = u0.grid();
    const int d = g.dim;
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("initial_harnack_ratio: radii must be positive");
    require_inside(g, x1, r1, "initial_harnack_ratio");
    require_inside(g, x2, r2, "initial_harnack_ratio");
    double sup = -std::numeric_limits<double>::infinity();
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u0.size(); ++i) {
        const Point y = u0.node(i);
        if (distance(y, x1, d) <= r1) sup = std::max(sup, u0[i]);
        if (distance(y, x2, d) <= r2) inf = std::min(inf, u0[i]);
    }
    if (std::isinf(sup) || std::isinf(inf)) throw DomainError("initial_harnack_ratio: a ball contains no grid node");
    if (sup == 0.0 && inf == 0.0) throw DegenerateDataError("initial_harnack_ratio: sup and inf both vanish");
    if (inf == 0.0) return std::numeric_limits<double>::infinity();
    return sup / inf;
}

bool admissible_window(double r, const EquationParams& p, double t1, double t2, double T) {
    const double tau = std::pow(2.0 * r, p.beta / p.alpha);
    return tau <= t1 && t1 < t2 && t2 <= t1 + tau && t1 + tau <= T;
}

}  // namespace tfd
