#include "tfd/spectral.hpp"

#include "tfd/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace tfd {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct SpectralPlan::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t n_real = 0;
    std::size_t n_spec = 0;

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
};

SpectralPlan::SpectralPlan(const GridSpec& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
    grid_.validate();
    const int d = grid_.dim;
    const std::size_t n = grid_.points_per_axis;
    const std::size_t half = n / 2 + 1;
    std::size_t n_spec = half;
    for (int a = 0; a + 1 < d; ++a) n_spec *= n;

    impl_->n_real = grid_.total_points();
    impl_->n_spec = n_spec;
    impl_->real = fftw_alloc_real(impl_->n_real);
    impl_->spec = fftw_alloc_complex(n_spec);
    if (!impl_->real || !impl_->spec) throw Error("SpectralPlan: allocation failed");

    std::array<int, 3> dims{};
    for (int a = 0; a < d; ++a) dims[static_cast<std::size_t>(a)] = static_cast<int>(n);
    {
        std::lock_guard lock(planner_mutex());
        impl_->fwd = fftw_plan_dft_r2c(d, dims.data(), impl_->real, impl_->spec, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_c2r(d, dims.data(), impl_->spec, impl_->real, FFTW_ESTIMATE);
    }
    if (!impl_->fwd || !impl_->bwd) throw Error("SpectralPlan: FFTW planning failed");

    // wave-number bookkeeping
    std::vector<std::uint64_t> raw(n_spec);
    parity_.resize(n_spec);
    nyquist_shell_.assign(n_spec, false);
    const auto signed_k = [n](std::size_t k) {
        return k <= n / 2 ? static_cast<std::int64_t>(k) : static_cast<std::int64_t>(k) - static_cast<std::int64_t>(n);
    };
    for (std::size_t e = 0; e < n_spec; ++e) {
        std::size_t rest = e;
        std::uint64_t key = 0;
        std::size_t ksum = 0;
        bool shell = false;
        for (int a = d - 1; a >= 0; --a) {
            const std::size_t len = (a == d - 1) ? half : n;
            const std::size_t k = rest % len;
            rest /= len;
            const std::int64_t ks = signed_k(k);
            key += static_cast<std::uint64_t>(ks * ks);
            ksum += k;
            if (k == n / 2) shell = true;
        }
        raw[e] = key;
        parity_[e] = (ksum % 2 == 0) ? 1 : -1;
        nyquist_shell_[e] = shell;
    }
    keys_ = raw;
    std::sort(keys_.begin(), keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
    key_slot_.resize(n_spec);
    for (std::size_t e = 0; e < n_spec; ++e) {
        key_slot_[e] = static_cast<std::uint32_t>(
            std::lower_bound(keys_.begin(), keys_.end(), raw[e]) - keys_.begin());
    }
}

SpectralPlan::~SpectralPlan() = default;

double SpectralPlan::frequency(std::uint64_t key) const noexcept {
    return std::numbers::pi * std::sqrt(static_cast<double>(key)) / grid_.half_extent;
}

double SpectralPlan::nyquist() const noexcept { return std::numbers::pi / grid_.spacing(); }

void SpectralPlan::forward(std::span<const double> in, std::vector<std::complex<double>>& out) const {
    if (in.size() != impl_->n_real) throw DomainError("SpectralPlan::forward: size mismatch");
    std::memcpy(impl_->real, in.data(), in.size() * sizeof(double));
    fftw_execute(impl_->fwd);
    out.resize(impl_->n_spec);
    std::memcpy(static_cast<void*>(out.data()), impl_->spec, impl_->n_spec * sizeof(fftw_complex));
}

void SpectralPlan::inverse(std::vector<std::complex<double>>& spec, std::span<double> out) const {
    if (spec.size() != impl_->n_spec || out.size() != impl_->n_real) {
        throw DomainError("SpectralPlan::inverse: size mismatch");
    }
    std::memcpy(impl_->spec, static_cast<const void*>(spec.data()), impl_->n_spec * sizeof(fftw_complex));
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(impl_->n_real);
    for (std::size_t i = 0; i < impl_->n_real; ++i) out[i] = impl_->real[i] * scale;
}

}  // namespace tfd
