#pragma once

#include "symblicit/check/check.hpp"

#include "json.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace symblicit::check {

/// Identifies a run in the machine-readable record.
struct RunInfo {
    std::string model;
    lang::ConstantOverrides constants;
    std::string property;
};

/// One JSON object per run. Keys other than the timings and peak_mem_mb are
/// a pure function of the inputs.
inline nlohmann::ordered_json to_json(const RunInfo& info, const CheckResult& r) {
    nlohmann::ordered_json j;
    j["model"] = info.model;
    nlohmann::ordered_json consts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : info.constants) {
        consts[k] = v;
    }
    j["constants"] = consts;
    j["property"] = info.property;
    j["engine"] = to_string(r.engine);
    j["arith"] = r.arith.name();
    j["value"] = r.value_string();
    j["infinite"] = r.infinite;
    j["states_total"] = r.stats.states_total;
    j["peak_states"] = r.stats.peak_states;
    j["peak_transitions"] = r.stats.peak_transitions;
    j["dd_nodes_peak"] = r.stats.dd_nodes_peak;
    j["time_explore_ms"] = r.stats.time_explore_ms;
    j["time_eliminate_ms"] = r.stats.time_eliminate_ms;
    if (r.stats.peak_mem_mb) {
        j["peak_mem_mb"] = *r.stats.peak_mem_mb;
    } else {
        j["peak_mem_mb"] = nullptr;
    }
    return j;
}

inline void print_human(std::ostream& os, const CheckResult& r) {
    os << "value = " << r.value_string() << "\n";
    if (!r.infinite && r.arith.kind != Backend::Float64) {
        std::ostringstream approx;
        approx << std::setprecision(17) << r.value.to_double();
        os << "        (" << approx.str() << ")\n";
    }
    os << "engine:            " << to_string(r.engine) << " / " << r.arith.name() << "\n";
    os << "states:            " << r.stats.states_total << "\n";
    os << "peak states:       " << r.stats.peak_states << "\n";
    os << "peak transitions:  " << r.stats.peak_transitions << "\n";
    os << "dd nodes peak:     " << r.stats.dd_nodes_peak << "\n";
    os << std::fixed << std::setprecision(1);
    os << "explore time:      " << r.stats.time_explore_ms << " ms\n";
    os << "eliminate time:    " << r.stats.time_eliminate_ms << " ms\n";
    if (r.stats.peak_mem_mb) {
        os << "peak memory:       " << *r.stats.peak_mem_mb << " MB\n";
    }
    os << std::defaultfloat;
}

} // namespace symblicit::check
