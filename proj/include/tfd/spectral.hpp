#pragma once

#include "tfd/field.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace tfd {

/// Real-to-complex transform pair on a GridSpec, backed by FFTW.
///
/// Spectral entries are indexed in FFTW's r2c layout (last axis halved).
/// Each entry carries an integer key sum_i k_i^2 over its signed wave
/// numbers, so radial multipliers are evaluated once per distinct |xi|.
class SpectralPlan {
public:
    explicit SpectralPlan(const GridSpec& grid);
    ~SpectralPlan();
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t spectrum_size() const noexcept { return key_slot_.size(); }

    /// Sorted distinct values of sum k_i^2.
    const std::vector<std::uint64_t>& keys() const noexcept { return keys_; }
    /// For every spectral entry, its position in keys().
    const std::vector<std::uint32_t>& key_slot() const noexcept { return key_slot_; }
    /// (-1)^{sum k_i} per spectral entry.
    const std::vector<std::int8_t>& parity() const noexcept { return parity_; }

    /// |xi| for a key: pi sqrt(key) / L.
    double frequency(std::uint64_t key) const noexcept;
    /// Axis Nyquist frequency pi / h.
    double nyquist() const noexcept;
    /// True for entries lying on the Nyquist shell (some |k_i| = N/2).
    const std::vector<bool>& on_nyquist_shell() const noexcept { return nyquist_shell_; }

    /// Unnormalized forward DFT.
    void forward(std::span<const double> in, std::vector<std::complex<double>>& out) const;
    /// Inverse DFT including the 1/N^d factor. `spec` is left unspecified.
    void inverse(std::vector<std::complex<double>>& spec, std::span<double> out) const;

private:
    GridSpec grid_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> key_slot_;
    std::vector<std::int8_t> parity_;
    std::vector<bool> nyquist_shell_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tfd
