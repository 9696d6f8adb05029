#pragma once

#include "tfd/field.hpp"
#include "tfd/kernel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tfd {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Verdict { Pass, Inconclusive, Fail };
const char* verdict_name(Verdict v) noexcept;
/// Worst of the two: Fail > Inconclusive > Pass.
Verdict combine(Verdict a, Verdict b) noexcept;

struct SweepRow {
    double sweep_param = 0.0;
    std::vector<double> values;  // aligned with SweepResult::observables
};

/// Table of observables against one swept parameter plus what produced it.
struct SweepResult {
    std::string label;
    std::string sweep_name = "sweep_param";
    std::vector<std::string> observables;
    std::vector<SweepRow> rows;

    EquationParams params;
    std::optional<GridSpec> grid;
    std::vector<double> times;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> notes;

    void add_row(double sweep_param, std::vector<double> values);
    /// Stable sort by sweep_param.
    void sort_rows();
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    std::vector<double> sweep_values() const;
    /// Number of rows carrying a non-finite observable.
    std::size_t flagged_rows() const;
};

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// Writes `path` (header `sweep_param,<observables>`, rows sorted by
/// sweep_param) and `path.meta`. Throws IoError naming the path.
void emit_csv(const SweepResult& result, const std::string& path);

/// The CSV text emit_csv writes.
std::string to_csv(const SweepResult& result);
std::string to_meta(const SweepResult& result);

}  // namespace tfd
