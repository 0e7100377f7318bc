#pragma once

#include "symblicit/check/check.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace symblicit::check {

/// One manifest row. Paths are relative to the manifest file.
struct BenchInstance {
    std::string name;
    std::string model;
    lang::ConstantOverrides constants;
    std::string property;
    Engine engine = Engine::Symblicit;
    BackendSpec arith = BackendSpec::f64();
    std::string expected; // decimal, fraction or "inf"; empty for no expectation
    double tolerance = 0; // relative
};

struct BenchRow {
    BenchInstance instance;
    std::optional<CheckResult> result;
    std::string error;
    bool deviation = false;
    double relative_error = 0;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Manifest format: {"instances": [{"name", "model", "constants": {..},
/// "property", "engine", "arith", "expected", "tolerance"}]}.
inline std::vector<BenchInstance> parse_manifest(const std::filesystem::path& path) {
    const auto j = nlohmann::json::parse(read_file(path));
    std::vector<BenchInstance> out;
    const auto base = path.parent_path();
    for (const auto& row : j.value("instances", nlohmann::json::array())) {
        BenchInstance b;
        b.name = row.value("name", "");
        b.model = (base / row.at("model").get<std::string>()).string();
        const auto constants = row.value("constants", nlohmann::json::object());
        for (const auto& [k, v] : constants.items()) {
            b.constants[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
        b.property = row.at("property").get<std::string>();
        b.engine = parse_engine(row.value("engine", "symblicit"));
        b.arith = BackendSpec::parse(row.value("arith", "f64"));
        b.expected = row.value("expected", "");
        b.tolerance = row.value("tolerance", 0.0);
        if (b.name.empty()) {
            b.name = std::filesystem::path(b.model).stem().string();
        }
        out.push_back(std::move(b));
    }
    return out;
}

/// Runs every instance; failures are recorded per row.
inline std::vector<BenchRow> run_bench(const std::vector<BenchInstance>& instances, std::ostream* diagnostics = nullptr) {
    std::vector<BenchRow> rows;
    for (const auto& inst : instances) {
        BenchRow row{inst, std::nullopt, {}, false, 0};
        try {
            CheckOptions opt;
            opt.engine = inst.engine;
            opt.arith = inst.arith;
            opt.diagnostics = diagnostics;
            row.result = run_check(read_file(inst.model), inst.property, inst.constants, opt);
            if (!inst.expected.empty()) {
                if (inst.expected == "inf") {
                    row.deviation = !row.result->infinite;
                } else if (row.result->infinite) {
                    row.deviation = true;
                } else {
                    const auto q = arith::parse_rational(inst.expected);
                    if (!q) {
                        throw UsageError("invalid expected value '" + inst.expected + "'");
                    }
                    const double want = arith::rational_to_double(*q);
                    const double got = row.result->value.to_double();
                    row.relative_error = want == 0 ? std::fabs(got) : std::fabs(got - want) / std::fabs(want);
                    row.deviation = row.relative_error > inst.tolerance;
                }
            }
        } catch (const std::exception& e) {
            row.error = e.what();
            row.deviation = true;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void print_bench(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << std::left << std::setw(24) << "instance" << std::setw(16) << "value" << std::setw(12) << "expected"
       << std::right << std::setw(12) << "states" << std::setw(10) << "peak st" << std::setw(10) << "peak tr"
       << std::setw(12) << "time ms" << "  status\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(24) << r.instance.name;
        if (!r.result) {
            os << "error: " << r.error << "\n";
            continue;
        }
        std::ostringstream v;
        if (r.result->infinite) {
            v << "inf";
        } else {
            v << std::setprecision(6) << r.result->value.to_double();
        }
        const auto& s = r.result->stats;
        os << std::setw(16) << v.str() << std::setw(12) << (r.instance.expected.empty() ? "-" : r.instance.expected)
           << std::right << std::setw(12) << s.states_total << std::setw(10) << s.peak_states << std::setw(10)
           << s.peak_transitions << std::setw(12) << std::fixed << std::setprecision(1)
           << (s.time_explore_ms + s.time_eliminate_ms) << std::defaultfloat << "  "
           << (r.deviation ? "DEVIATION" : "ok") << "\n";
    }
}

} // namespace symblicit::check
