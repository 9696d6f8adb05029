#pragma once

#include "tfd/field.hpp"
#include "tfd/kernel.hpp"
#include "tfd/spectral.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tfd {

struct InitialDataSpec {
    enum class Kind { Mollifier, ScaledGaussian, PlainGaussian, Sampled };

    Kind kind = Kind::PlainGaussian;
    double epsilon = 1.0;  // Mollifier
    double n = 1.0;        // ScaledGaussian
    double p = 1.0;        // ScaledGaussian
    std::shared_ptr<const Field> field;  // Sampled
    Point center{0.0, 0.0, 0.0};

    static InitialDataSpec mollifier(double epsilon, Point center = {});
    static InitialDataSpec scaled_gaussian(double n, double p, Point center = {});
    static InitialDataSpec plain_gaussian(Point center = {});
    static InitialDataSpec sampled(Field f);

    void validate() const;
    std::string describe() const;
};

/// exp(-1 / (1 - rho^2)) for rho < 1, else 0.
double bump_profile(double rho) noexcept;

/// c_d making c_d * bump_profile(|x|) a unit-mass density on R^d.
double mollifier_constant(int dim);

/// Samples the initial datum. Throws ResolutionError when the support
/// (diameter 2 eps, or 2/n for the scaled Gaussian) spans fewer than 8 cells.
Field sample_initial_data(const InitialDataSpec& spec, const GridSpec& grid);

/// u0 -> u(t) for one (params, grid, t). Holds the multiplier
/// E_alpha(-|xi|^beta t^alpha) so repeated solves at the same time are cheap.
class MildPropagator {
public:
    MildPropagator(const EquationParams& params, const GridSpec& grid, double t,
                   const MLEvalPolicy& policy = {});

    double time() const noexcept { return t_; }
    const EquationParams& params() const noexcept { return params_; }
    const GridSpec& grid() const noexcept { return plan_->grid(); }

    /// Throws ResolutionError if |u0^(xi)| E(..) on the Nyquist shell exceeds
    /// 1e-3 |u0^(0)|, AliasingError if the output dips below -1e-9 max.
    Field apply(const Field& u0) const;

private:
    EquationParams params_;
    double t_;
    std::shared_ptr<SpectralPlan> plan_;
    std::vector<double> mult_;  // per distinct key
};

Field mild_solve(const EquationParams& params, const Field& u0, double t, const MLEvalPolicy& policy = {});

/// (h^d sum |v|^p)^{1/p}; p = infinity gives max |v|.
double lp_norm(const Field& field, double p);

/// Multilinear interpolation, periodic across the upper face; exact at nodes.
double point_value(const Field& field, const Point& x);

}  // namespace tfd
