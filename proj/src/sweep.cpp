#include "tfd/sweep.hpp"

#include "tfd/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tfd {

const char* verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Fail: return "fail";
    }
    return "?";
}

Verdict combine(Verdict a, Verdict b) noexcept {
    return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

void SweepResult::add_row(double sweep_param, std::vector<double> values) {
    if (values.size() != observables.size()) {
        throw DomainError("SweepResult::add_row: expected " + std::to_string(observables.size()) + " values, got " +
                          std::to_string(values.size()));
    }
    rows.push_back({sweep_param, std::move(values)});
}

void SweepResult::sort_rows() {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.sweep_param < b.sweep_param; });
}

std::size_t SweepResult::column_index(const std::string& name) const {
    const auto it = std::find(observables.begin(), observables.end(), name);
    if (it == observables.end()) throw DomainError("SweepResult: no observable named '" + name + "'");
    return static_cast<std::size_t>(it - observables.begin());
}

std::vector<double> SweepResult::column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.values[c]);
    return out;
}

std::vector<double> SweepResult::sweep_values() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.sweep_param);
    return out;
}

std::size_t SweepResult::flagged_rows() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) {
        return !std::isfinite(r.sweep_param) ||
               std::any_of(r.values.begin(), r.values.end(), [](double v) { return !std::isfinite(v); });
    }));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const SweepResult& result) {
    SweepResult sorted = result;
    sorted.sort_rows();
    std::string out = "sweep_param";
    for (const auto& name : sorted.observables) out += "," + name;
    out += "\n";
    for (const auto& row : sorted.rows) {
        out += format_double(row.sweep_param);
        for (double v : row.values) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

std::string to_meta(const SweepResult& result) {
    std::ostringstream os;
    os << "label=" << result.label << "\n";
    os << "sweep=" << result.sweep_name << "\n";
    os << "params=" << result.params.describe() << "\n";
    if (result.grid) {
        os << "grid=dim:" << result.grid->dim << ",L:" << format_double(result.grid->half_extent)
           << ",N:" << result.grid->points_per_axis << "\n";
    } else {
        os << "grid=none\n";
    }
    os << "times=";
    for (std::size_t i = 0; i < result.times.size(); ++i) os << (i ? "," : "") << format_double(result.times[i]);
    os << "\n";
    os << "seed=";
    if (result.seed) {
        os << "0x" << std::hex << *result.seed << std::dec;
    } else {
        os << "none";
    }
    os << "\n";
    os << "tool_version=" << kToolVersion << "\n";
    os << "flagged_rows=" << result.flagged_rows() << "\n";
    for (const auto& n : result.notes) os << "note=" << n << "\n";
    return os.str();
}

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("emit_csv: cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("emit_csv: write to '" + path + "' failed");
}

}  // namespace

void emit_csv(const SweepResult& result, const std::string& path) {
    write_file(path, to_csv(result));
    write_file(path + ".meta", to_meta(result));
}

}  // namespace tfd
