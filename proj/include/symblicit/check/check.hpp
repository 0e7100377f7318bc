#pragma once

#include "symblicit/arith/scalar.hpp"
#include "symblicit/dd/mtbdd.hpp"
#include "symblicit/elim/explore_eliminate.hpp"
#include "symblicit/elim/readoff.hpp"
#include "symblicit/explore/explore.hpp"
#include "symblicit/model/analysis_model.hpp"
#include "symblicit/oracles/linear_solve.hpp"
#include "symblicit/oracles/lra_solve.hpp"
#include "symblicit/oracles/value_iteration.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace symblicit::check {

using arith::Backend;
using arith::BackendSpec;
using arith::Scalar;
using lang::PropertyKind;

enum class Engine { Symblicit, ValueIteration, Linear };

/// Invalid combination of options.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Engine parse_engine(std::string_view text) {
    if (text == "symblicit") {
        return Engine::Symblicit;
    }
    if (text == "vi") {
        return Engine::ValueIteration;
    }
    if (text == "linear") {
        return Engine::Linear;
    }
    throw UsageError("unknown engine '" + std::string(text) + "' (expected symblicit, vi or linear)");
}

inline std::string to_string(Engine e) {
    switch (e) {
    case Engine::Symblicit: return "symblicit";
    case Engine::ValueIteration: return "vi";
    case Engine::Linear: return "linear";
    }
    return "?";
}

struct CheckOptions {
    Engine engine = Engine::Symblicit;
    BackendSpec arith = BackendSpec::f64();
    double epsilon = 1e-10;
    std::uint64_t max_states = std::uint64_t{1} << 40;
    std::uint64_t explicit_cap = 5'000'000; // vi and linear engines
    std::size_t dd_node_budget = std::size_t{1} << 22;
    bool debug_checks = false;
    std::ostream* trace = nullptr;
    std::ostream* diagnostics = nullptr; // warnings and progress
};

struct CheckStats {
    std::uint64_t states_total = 0;
    std::uint64_t peak_states = 0;
    std::uint64_t peak_transitions = 0;
    std::uint64_t dd_nodes_peak = 0;
    std::uint64_t deadlocks = 0;
    double time_explore_ms = 0;
    double time_eliminate_ms = 0;
    std::optional<double> peak_mem_mb;
};

struct CheckResult {
    Scalar value;
    bool infinite = false;
    Engine engine = Engine::Symblicit;
    BackendSpec arith;
    CheckStats stats;

    std::string value_string() const { return infinite ? "inf" : value.to_string(); }
};

/// Peak resident set size of this process in megabytes, where available.
inline std::optional<double> peak_memory_mb() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            try {
                return std::stod(line.substr(6)) / 1024.0;
            } catch (const std::exception&) {
                return std::nullopt;
            }
        }
    }
    return std::nullopt;
}

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <class Num>
CheckResult run_symblicit(const model::AnalysisModel<Num>& m, const CheckOptions& opt) {
    CheckResult res;
    dd::MtbddManager dd(m.width());
    explore::ExploreOptions eo;
    eo.max_states = opt.max_states;
    eo.node_budget = opt.dd_node_budget;
    eo.progress = opt.diagnostics;
    const auto er = explore::explore(m, dd, eo);
    res.stats.deadlocks = m.deadlocks_seen();
    res.stats.states_total = er.states;
    res.stats.dd_nodes_peak = dd.peak_arena_size();
    res.stats.time_explore_ms = er.time_ms;

    elim::EliminateOptions el;
    el.debug_checks = opt.debug_checks;
    el.trace = opt.trace;
    el.max_states = opt.max_states;
    el.expected_states = er.states - er.goal_states;
    el.rescale_rewards = m.kind() == PropertyKind::LongRunAvg;
    elim::EliminateStats st;
    auto chain = elim::explore_eliminate(m, dd, er.pre, el, &st);
    const auto t0 = std::chrono::steady_clock::now();
    switch (m.kind()) {
    case PropertyKind::ReachProb: res.value = Scalar(elim::read_reach_prob(chain)); break;
    case PropertyKind::ExpReward: {
        const auto v = elim::read_exp_reward(chain);
        res.value = Scalar(v.value);
        res.infinite = v.infinite;
        break;
    }
    case PropertyKind::LongRunAvg: res.value = Scalar(elim::read_lra(chain)); break;
    }
    if constexpr (std::is_same_v<Num, double>) {
        if (!res.infinite && !std::isfinite(res.value.to_double())) {
            throw arith::ArithError("binary64 overflow in accumulated rewards; rerun with --arith bigfloat");
        }
    }
    res.stats.peak_states = st.peak_states;
    res.stats.peak_transitions = st.peak_transitions;
    res.stats.time_eliminate_ms = st.time_ms + ms_since(t0);
    return res;
}

template <class Num>
CheckResult run_oracle(const model::AnalysisModel<Num>& m, const CheckOptions& opt) {
    CheckResult res;
    auto t0 = std::chrono::steady_clock::now();
    const auto chain = oracles::build_explicit(m, std::min(opt.explicit_cap, opt.max_states));
    res.stats.deadlocks = m.deadlocks_seen();
    res.stats.states_total = chain.size();
    res.stats.peak_states = chain.size();
    res.stats.peak_transitions = chain.transitions();
    res.stats.time_explore_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    model::Value<Num> v;
    if (m.kind() == PropertyKind::LongRunAvg) {
        if (opt.engine == Engine::ValueIteration) {
            throw UsageError("value iteration handles reachability and expected rewards; use --engine linear");
        }
        v = model::Value<Num>::finite(oracles::lra_solve(chain));
    } else if (opt.engine == Engine::Linear) {
        v = oracles::linear_solve(chain, m.kind());
    } else {
        oracles::ViOptions vo;
        vo.epsilon = opt.epsilon;
        v = oracles::value_iteration(chain, m.kind(), vo);
    }
    res.stats.time_eliminate_ms = ms_since(t0);
    res.value = Scalar(v.value);
    res.infinite = v.infinite;
    return res;
}

template <class Num>
CheckResult run_typed(std::string_view model_text, std::string_view property_text,
                      const lang::ConstantOverrides& constants, const CheckOptions& opt) {
    if (opt.engine == Engine::ValueIteration && arith::NumTraits<Num>::exact) {
        throw UsageError("value iteration needs a floating-point backend (f64 or bigfloat)");
    }
    const auto loaded = model::load<Num>(model_text, property_text, constants);
    CheckResult res = opt.engine == Engine::Symblicit ? run_symblicit(*loaded.analysis, opt)
                                                      : run_oracle(*loaded.analysis, opt);
    if (res.stats.deadlocks != 0 && opt.diagnostics) {
        *opt.diagnostics << "warning: " << res.stats.deadlocks << " deadlock state(s) treated as absorbing\n";
    }
    return res;
}

} // namespace detail

/// Parses, compiles and checks one model/property pair with the selected
/// engine and arithmetic.
inline CheckResult run_check(std::string_view model_text, std::string_view property_text,
                             const lang::ConstantOverrides& constants, const CheckOptions& opt) {
    CheckResult res;
    switch (opt.arith.kind) {
    case Backend::Float64: res = detail::run_typed<double>(model_text, property_text, constants, opt); break;
    case Backend::Rational:
        res = detail::run_typed<arith::Rational>(model_text, property_text, constants, opt);
        break;
    case Backend::BigFloat: {
        arith::BigFloat::PrecisionScope scope(static_cast<mpfr_prec_t>(opt.arith.precision));
        res = detail::run_typed<arith::BigFloat>(model_text, property_text, constants, opt);
        break;
    }
    }
    res.engine = opt.engine;
    res.arith = opt.arith;
    res.stats.peak_mem_mb = peak_memory_mb();
    return res;
}

} // namespace symblicit::check
