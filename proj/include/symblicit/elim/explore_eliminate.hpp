#pragma once

#include "symblicit/dd/mtbdd.hpp"
#include "symblicit/elim/partial_chain.hpp"
#include "symblicit/explore/explore.hpp"
#include "symblicit/model/analysis_model.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <optional>
#include <type_traits>
#include <ostream>
#include <vector>

namespace symblicit::elim {

struct EliminateOptions {
    bool debug_checks = false;     // conservation, predecessor sweep and tombstones after every step
    double conservation_tolerance = 1e-6;
    std::ostream* trace = nullptr; // dump of the live chain after each elimination
    std::size_t trace_limit = 50;  // only for chains with at most this many live states
    std::uint64_t max_states = std::uint64_t{1} << 40;
    std::uint64_t expected_states = 0; // phase-one count of non-goal states; 0 skips the check
    bool rescale_rewards = false;      // binary64 long-run averages: keep u and l in range by a common power of two
};

struct EliminateStats {
    std::uint64_t states = 0; // non-goal states inserted in the explicit pass
    std::size_t peak_states = 0;
    std::size_t peak_transitions = 0;
    std::uint64_t eliminations = 0;
    double time_ms = 0;
};

/// Second, explicit breadth-first pass. After a state is fully explored,
/// it and its successors are eliminated as soon as all of their original
/// predecessors are fully explored, judged by the phase-one counts in `pre`.
/// All goal states share one record: they are absorbing with reward 0, so
/// only the total mass entering the goal matters.
template <class Num>
PartialChain<Num> explore_eliminate(const model::AnalysisModel<Num>& m, const dd::MtbddManager& dd, dd::NodeRef pre,
                                    const EliminateOptions& opt = {}, EliminateStats* stats = nullptr) {
    using Traits = arith::NumTraits<Num>;
    const auto t0 = std::chrono::steady_clock::now();
    PartialChain<Num> chain;
    chain.track_tombstones(opt.debug_checks);
    const Slot init = chain.add_state(m.initial());
    chain.set_initial(init);
    std::deque<Slot> agenda{init};
    std::uint64_t records = 1;
    std::uint64_t inserted = 0; // non-goal states
    std::optional<Slot> goal_rep;
    if (m.is_goal(m.initial())) {
        goal_rep = init;
    } else {
        inserted = 1;
    }
    model::Expansion<Num> x;
    std::vector<Slot> candidates;

    auto full_count = [&](const StateCode& c) -> std::uint32_t {
        const dd::Count n = dd.lookup(pre, c);
        if (!n) {
            throw ChainError("state reached in the explicit pass was not seen by the symbolic pass: " + m.describe(c));
        }
        return *n;
    };
    auto check = [&](const char* where) {
        if (!opt.debug_checks) {
            return;
        }
        if (auto err = chain.check_conservation(opt.conservation_tolerance); !err.empty()) {
            throw ChainError(std::string(where) + ": " + err);
        }
        if (auto err = chain.check_predecessors(); !err.empty()) {
            throw ChainError(std::string(where) + ": " + err);
        }
    };
    auto name = [&](const StateCode& c) { return m.describe(c); };

    // Only the ratios u/l enter the long-run average, so all live rewards
    // may share a scale 2^-shift. Terms that underflow are below rounding.
    int shift = 0;
    constexpr int kStep = 600;
    auto rescale = [&] {
        if constexpr (std::is_same_v<Num, double>) {
            if (!opt.rescale_rewards) {
                return;
            }
            double peak = 0;
            chain.for_each_live([&](Slot, const auto& r) {
                peak = std::max({peak, std::fabs(r.reward_u), std::fabs(r.reward_l)});
            });
            if (peak > std::ldexp(1.0, kStep)) {
                shift += kStep;
                chain.for_each_live([&](Slot t, const auto&) {
                    auto& r = chain.at(t);
                    r.reward_u = std::ldexp(r.reward_u, -kStep);
                    r.reward_l = std::ldexp(r.reward_l, -kStep);
                });
            }
        }
    };
    auto scaled = [&](const Num& v) -> Num {
        if constexpr (std::is_same_v<Num, double>) {
            return shift == 0 ? v : std::ldexp(v, -shift);
        } else {
            return v;
        }
    };

    while (!agenda.empty()) {
        const Slot s = agenda.front();
        agenda.pop_front();
        const StateCode code = chain.at(s).code;
        m.expand(code, x, true);
        candidates.clear();
        for (const auto& e : x.succ) {
            Slot t;
            const bool goal = m.is_goal(e.target);
            if (goal && goal_rep) {
                t = *goal_rep;
            } else if (auto found = chain.find(e.target)) {
                t = *found;
            } else {
                if (++records > opt.max_states) {
                    throw explore::ResourceError("state space exceeds the limit of " + std::to_string(opt.max_states) +
                                                 " states");
                }
                t = chain.add_state(e.target);
                agenda.push_back(t);
                if (goal) {
                    goal_rep = t;
                } else {
                    ++inserted;
                }
            }
            chain.add_edge(s, t, e.prob);
            if (t != s) {
                ++chain.at(t).explored_preds;
                candidates.push_back(t);
            }
        }
        {
            auto& r = chain.at(s);
            r.reward_u = scaled(x.reward_u);
            r.reward_l = scaled(x.reward_l);
            r.goal = x.goal;
            r.done = true;
        }
        candidates.push_back(s);
        for (Slot c : candidates) {
            auto& r = chain.at(c);
            if (!r.live || !r.done || (c != goal_rep && r.explored_preds != full_count(r.code))) {
                continue;
            }
            if (chain.is_absorbing(c) && Traits::is_one(chain.at(c).out.front().p)) {
                continue; // nothing to redistribute or redirect
            }
            const StateCode eliminated = r.code;
            chain.eliminate(c, c == chain.initial());
            rescale();
            check("after elimination");
            if (opt.trace && chain.live_states() <= opt.trace_limit) {
                *opt.trace << "eliminated " << name(eliminated) << "\n";
                chain.print(*opt.trace, name);
            }
        }
    }
    if (records != chain.removals() + chain.live_states()) {
        throw ChainError("state bookkeeping out of sync");
    }
    if (opt.expected_states != 0 && inserted != opt.expected_states) {
        throw ChainError("explicit pass reached " + std::to_string(inserted) + " states, symbolic pass " +
                         std::to_string(opt.expected_states));
    }
    if (stats) {
        stats->states = inserted;
        stats->peak_states = chain.peak_states();
        stats->peak_transitions = chain.peak_transitions();
        stats->eliminations = chain.eliminations();
        stats->time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    return chain;
}

} // namespace symblicit::elim
