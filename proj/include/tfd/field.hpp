#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tfd {

/// Points in R^d for d <= 3; unused trailing coordinates are ignored.
using Point = std::array<double, 3>;

/// Uniform periodic grid on [-L, L)^d with N points per axis.
struct GridSpec {
    int dim = 1;
    double half_extent = 1.0;
    std::size_t points_per_axis = 64;

    static constexpr std::size_t kMaxPoints = std::size_t{1} << 24;

    static GridSpec make(int dim, double half_extent, std::size_t points_per_axis);
    void validate() const;

    double spacing() const noexcept { return 2.0 * half_extent / static_cast<double>(points_per_axis); }
    double cell_volume() const noexcept;
    std::size_t total_points() const noexcept;
    double coordinate(std::size_t i) const noexcept {
        return -half_extent + static_cast<double>(i) * spacing();
    }
};

bool operator==(const GridSpec& a, const GridSpec& b) noexcept;

/// Real samples on a GridSpec, row-major with axis 0 slowest.
class Field {
public:
    explicit Field(GridSpec grid);
    Field(GridSpec grid, std::vector<double> values);

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Coordinates of the node with flat index `flat`.
    Point node(std::size_t flat) const noexcept;
    /// Multi-index of a flat index.
    std::array<std::size_t, 3> unflatten(std::size_t flat) const noexcept;
    std::size_t flatten(const std::array<std::size_t, 3>& idx) const noexcept;

    /// h^d * sum of values.
    double mass() const;
    double max_value() const;
    double min_value() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// Euclidean norm over the first `dim` coordinates.
double norm(const Point& x, int dim) noexcept;
double distance(const Point& a, const Point& b, int dim) noexcept;

}  // namespace tfd
