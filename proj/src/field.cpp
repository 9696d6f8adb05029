#include "tfd/field.hpp"

#include "tfd/errors.hpp"
#include "tfd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tfd {

GridSpec GridSpec::make(int dim, double half_extent, std::size_t points_per_axis) {
    GridSpec g{dim, half_extent, points_per_axis};
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (dim < 1 || dim > 3) throw DomainError("GridSpec: dim must be 1, 2 or 3");
    if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
        throw DomainError("GridSpec: half_extent must be positive");
    }
    const std::size_t n = points_per_axis;
    if (n < 64 || (n & (n - 1)) != 0) {
        throw DomainError("GridSpec: points_per_axis must be a power of two >= 64, got " +
                          std::to_string(n));
    }
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) {
        if (total > kMaxPoints / n) throw DomainError("GridSpec: more than 2^24 points");
        total *= n;
    }
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), dim); }

std::size_t GridSpec::total_points() const noexcept {
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= points_per_axis;
    return total;
}

bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.dim == b.dim && a.half_extent == b.half_extent && a.points_per_axis == b.points_per_axis;
}

Field::Field(GridSpec grid) : grid_(grid) {
    grid_.validate();
    values_.assign(grid_.total_points(), 0.0);
}

Field::Field(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.total_points()) {
        throw DomainError("Field: expected " + std::to_string(grid_.total_points()) + " values, got " +
                          std::to_string(values_.size()));
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("Field: non-finite value");
    }
}

std::array<std::size_t, 3> Field::unflatten(std::size_t flat) const noexcept {
    std::array<std::size_t, 3> idx{0, 0, 0};
    const std::size_t n = grid_.points_per_axis;
    for (int a = grid_.dim - 1; a >= 0; --a) {
        idx[static_cast<std::size_t>(a)] = flat % n;
        flat /= n;
    }
    return idx;
}

std::size_t Field::flatten(const std::array<std::size_t, 3>& idx) const noexcept {
    std::size_t flat = 0;
    for (int a = 0; a < grid_.dim; ++a) flat = flat * grid_.points_per_axis + idx[static_cast<std::size_t>(a)];
    return flat;
}

Point Field::node(std::size_t flat) const noexcept {
    const auto idx = unflatten(flat);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < grid_.dim; ++a) x[static_cast<std::size_t>(a)] = grid_.coordinate(idx[static_cast<std::size_t>(a)]);
    return x;
}

double Field::mass() const {
    quad::CompensatedSum s;
    for (double v : values_) s.add(v);
    return grid_.cell_volume() * s.value();
}

double Field::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double Field::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double norm(const Point& x, int dim) noexcept {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
    return std::sqrt(s);
}

double distance(const Point& a, const Point& b, int dim) noexcept {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace tfd
