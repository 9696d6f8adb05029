#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace tfd::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    std::size_t evals = 0;
    bool converged = false;
};

struct AdaptiveOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-12;
    std::size_t max_evals = 200000;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

// Kronrod 15-point abscissae on [0, 1] (symmetric), Kronrod and embedded
// Gauss 7-point weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kron += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval.
/// Never throws on non-convergence; callers inspect `converged`.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opts = {}) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<detail::Panel> heap;
    auto first = detail::gk15(f, a, b);
    heap.push(first);
    out.evals = 15;
    double total = first.value;
    double err = first.error;
    while (true) {
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
        if (err <= tol) {
            out.converged = true;
            break;
        }
        if (out.evals + 30 > opts.max_evals) break;
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // panel at floating-point resolution; cannot refine further
            heap.push(worst);
            break;
        }
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        out.evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum from panels to shed the drift of the incremental updates.
    CompensatedSum sum;
    double esum = 0.0;
    while (!heap.empty()) {
        sum.add(heap.top().value);
        esum += heap.top().error;
        heap.pop();
    }
    out.value = sum.value();
    out.error = esum;
    if (!out.converged) {
        out.converged = esum <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
    }
    return out;
}

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n);

}  // namespace tfd::quad
