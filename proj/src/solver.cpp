#include "tfd/solver.hpp"

#include "tfd/errors.hpp"
#include "tfd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace tfd {

namespace {

constexpr double kPi = std::numbers::pi;

double sphere_area(int dim) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

void require_resolved(double diameter, const GridSpec& grid, const char* what) {
    if (diameter < 8.0 * grid.spacing()) {
        std::ostringstream os;
        os << "sample_initial_data: " << what << " support of diameter " << diameter << " spans fewer than 8 cells (h = "
           << grid.spacing() << ")";
        throw ResolutionError(os.str());
    }
}

}  // namespace

InitialDataSpec InitialDataSpec::mollifier(double epsilon, Point center) {
    InitialDataSpec s;
    s.kind = Kind::Mollifier;
    s.epsilon = epsilon;
    s.center = center;
    s.validate();
    return s;
}

InitialDataSpec InitialDataSpec::scaled_gaussian(double n, double p, Point center) {
    InitialDataSpec s;
    s.kind = Kind::ScaledGaussian;
    s.n = n;
    s.p = p;
    s.center = center;
    s.validate();
    return s;
}

InitialDataSpec InitialDataSpec::plain_gaussian(Point center) {
    InitialDataSpec s;
    s.kind = Kind::PlainGaussian;
    s.center = center;
    return s;
}

InitialDataSpec InitialDataSpec::sampled(Field f) {
    InitialDataSpec s;
    s.kind = Kind::Sampled;
    s.field = std::make_shared<const Field>(std::move(f));
    return s;
}

void InitialDataSpec::validate() const {
    switch (kind) {
        case Kind::Mollifier:
            if (!(epsilon > 0.0)) throw DomainError("InitialDataSpec: mollifier epsilon must be positive");
            break;
        case Kind::ScaledGaussian:
            if (!(n >= 1.0)) throw DomainError("InitialDataSpec: scaled Gaussian needs n >= 1");
            if (!(p >= 1.0)) throw DomainError("InitialDataSpec: scaled Gaussian needs p >= 1");
            break;
        case Kind::Sampled:
            if (!field) throw DomainError("InitialDataSpec: sampled data without a field");
            break;
        case Kind::PlainGaussian:
            break;
    }
}

std::string InitialDataSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::Mollifier: os << "mollifier:" << epsilon; break;
        case Kind::ScaledGaussian: os << "gauss-n:" << n << "," << p; break;
        case Kind::PlainGaussian: os << "gauss"; break;
        case Kind::Sampled: os << "sampled"; break;
    }
    return os.str();
}

double bump_profile(double rho) noexcept {
    if (rho >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - rho * rho));
}

double mollifier_constant(int dim) {
    if (dim < 1 || dim > 5) throw DomainError("mollifier_constant: dim must lie in 1..5");
    static const std::array<double, 5> table = [] {
        std::array<double, 5> c{};
        for (int d = 1; d <= 5; ++d) {
            quad::AdaptiveOptions opt;
            opt.rel_tol = 1e-14;
            const auto r = quad::integrate_adaptive(
                [d](double rho) { return std::pow(rho, d - 1) * bump_profile(rho); }, 0.0, 1.0, opt);
            c[static_cast<std::size_t>(d - 1)] = 1.0 / (sphere_area(d) * r.value);
        }
        return c;
    }();
    return table[static_cast<std::size_t>(dim - 1)];
}

Field sample_initial_data(const InitialDataSpec& spec, const GridSpec& grid) {
    spec.validate();
    grid.validate();
    const int d = grid.dim;
    if (spec.kind == InitialDataSpec::Kind::Sampled) {
        if (!(spec.field->grid() == grid)) throw DomainError("sample_initial_data: sampled field lives on another grid");
        return *spec.field;
    }
    Field out(grid);
    const Point& c = spec.center;
    switch (spec.kind) {
        case InitialDataSpec::Kind::Mollifier: {
            const double eps = spec.epsilon;
            if (eps > grid.half_extent / 4.0) {
                throw DomainError("sample_initial_data: mollifier epsilon exceeds L/4");
            }
            require_resolved(2.0 * eps, grid, "mollifier");
            const double scale = mollifier_constant(d) * std::pow(eps, -d);
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] = scale * bump_profile(distance(out.node(i), c, d) / eps);
            }
            break;
        }
        case InitialDataSpec::Kind::ScaledGaussian: {
            const double n = spec.n;
            require_resolved(2.0 / n, grid, "scaled Gaussian");
            const double amp = std::pow(n, d / spec.p);
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double r = n * distance(out.node(i), c, d);
                out[i] = amp * std::exp(-r * r);
            }
            break;
        }
        case InitialDataSpec::Kind::PlainGaussian: {
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double r = distance(out.node(i), c, d);
                out[i] = std::exp(-r * r);
            }
            break;
        }
        case InitialDataSpec::Kind::Sampled:
            break;
    }
    return out;
}

MildPropagator::MildPropagator(const EquationParams& params, const GridSpec& grid, double t,
                               const MLEvalPolicy& policy)
    : params_(params), t_(t) {
    params_.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("mild_solve: t must be positive");
    if (grid.dim != params.dim) throw DomainError("mild_solve: grid dimension differs from params");
    plan_ = std::make_shared<SpectralPlan>(grid);
    const MittagLefflerNeg ml(params.alpha, policy);
    const double ta = std::pow(t, params.alpha);
    const auto& keys = plan_->keys();
    mult_.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        mult_[i] = ml(std::pow(plan_->frequency(keys[i]), params.beta) * ta);
    }
}

Field MildPropagator::apply(const Field& u0) const {
    if (!(u0.grid() == plan_->grid())) throw DomainError("mild_solve: data lives on another grid");
    std::vector<std::complex<double>> spec;
    plan_->forward(u0.values(), spec);
    const auto& slot = plan_->key_slot();
    const auto& shell = plan_->on_nyquist_shell();
    const double zero_mode = std::abs(spec[0]);
    double worst = 0.0;
    for (std::size_t e = 0; e < spec.size(); ++e) {
        spec[e] *= mult_[slot[e]];
        if (shell[e]) worst = std::max(worst, std::abs(spec[e]));
    }
    if (worst > 1e-3 * zero_mode) {
        std::ostringstream os;
        os << "mild_solve: solution spectrum at Nyquist is " << worst / zero_mode
           << " of the zero mode (> 1e-3); increase N";
        throw ResolutionError(os.str());
    }
    Field out(plan_->grid());
    plan_->inverse(spec, out.values());
    const double mx = out.max_value();
    const double mn = out.min_value();
    if (mn < -1e-9 * std::abs(mx)) {
        std::ostringstream os;
        os << "mild_solve: undershoot " << mn << " below -1e-9 * max (" << mx
           << "); increase L or N";
        throw AliasingError(os.str());
    }
    return out;
}

Field mild_solve(const EquationParams& params, const Field& u0, double t, const MLEvalPolicy& policy) {
    return MildPropagator(params, u0.grid(), t, policy).apply(u0);
}

double lp_norm(const Field& field, double p) {
    if (std::isinf(p) && p > 0.0) {
        double m = 0.0;
        for (double v : field.values()) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1 or infinity");
    quad::CompensatedSum s;
    for (double v : field.values()) s.add(std::pow(std::abs(v), p));
    return std::pow(field.grid().cell_volume() * s.value(), 1.0 / p);
}

double point_value(const Field& field, const Point& x) {
    const GridSpec& g = field.grid();
    const int d = g.dim;
    const std::size_t n = g.points_per_axis;
    const double h = g.spacing();
    std::array<std::size_t, 3> lo{0, 0, 0};
    std::array<double, 3> frac{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const double xa = x[ua];
        if (!(xa >= -g.half_extent && xa < g.half_extent)) {
            std::ostringstream os;
            os << "point_value: coordinate " << xa << " outside [-L, L)";
            throw DomainError(os.str());
        }
        const double s = (xa + g.half_extent) / h;
        auto i = static_cast<std::size_t>(std::floor(s));
        if (i >= n) i = n - 1;
        lo[ua] = i;
        frac[ua] = s - static_cast<double>(i);
    }
    double acc = 0.0;
    const std::size_t corners = std::size_t{1} << d;
    for (std::size_t m = 0; m < corners; ++m) {
        double w = 1.0;
        std::array<std::size_t, 3> idx{0, 0, 0};
        for (int a = 0; a < d; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const bool up = (m >> a) & 1U;
            w *= up ? frac[ua] : 1.0 - frac[ua];
            idx[ua] = up ? (lo[ua] + 1) % n : lo[ua];
        }
        if (w != 0.0) acc += w * field[field.flatten(idx)];
    }
    return acc;
}

}  // namespace tfd
