#pragma once

#include "symblicit/dd/mtbdd.hpp"
#include "symblicit/model/analysis_model.hpp"

#include <chrono>
#include <cstdint>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>

namespace symblicit::explore {

using dd::MtbddManager;
using dd::NodeRef;
using lang::StateCode;

/// A configured safety limit was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExploreOptions {
    std::uint64_t max_states = std::uint64_t{1} << 40;
    std::size_t node_budget = std::size_t{1} << 22; // arena size that triggers a collection
    std::ostream* progress = nullptr;
    std::uint64_t progress_interval = 1'000'000;
};

struct ExploreResult {
    NodeRef pre = dd::kUnseen;
    std::uint64_t states = 0;
    std::uint64_t goal_states = 0;
    std::uint64_t transitions = 0; // non-self edges
    std::size_t dd_nodes = 0;
    std::size_t dd_nodes_peak = 0;
    double time_ms = 0;
};

/// Breadth-first search from the initial state that records, for every
/// reachable state, its number of distinct non-self predecessors. Seen-set
/// and counts share one diagram: Unseen means not yet reached.
template <class Num>
ExploreResult explore(const model::AnalysisModel<Num>& m, MtbddManager& dd, const ExploreOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    ExploreResult res;
    NodeRef pre = dd.set_count(MtbddManager::empty(), m.initial(), 0);
    std::deque<StateCode> agenda{m.initial()};
    res.states = 1;
    res.goal_states = m.is_goal(m.initial()) ? 1 : 0;
    std::size_t budget = opt.node_budget;
    model::Expansion<Num> x;
    std::uint64_t expanded = 0;
    while (!agenda.empty()) {
        const StateCode s = agenda.front();
        agenda.pop_front();
        m.expand(s, x, false);
        for (const auto& e : x.succ) {
            if (e.target == s) {
                continue;
            }
            const dd::Count c = dd.lookup(pre, e.target);
            if (!c) {
                if (++res.states > opt.max_states) {
                    throw ResourceError("state space exceeds the limit of " + std::to_string(opt.max_states) + " states");
                }
                agenda.push_back(e.target);
                pre = dd.set_count(pre, e.target, 1);
                if (m.is_goal(e.target)) {
                    ++res.goal_states;
                }
            } else {
                pre = dd.set_count(pre, e.target, *c + 1);
            }
            ++res.transitions;
        }
        if (dd.arena_size() > budget) {
            dd.collect(std::span<NodeRef>(&pre, 1));
            res.dd_nodes_peak = std::max(res.dd_nodes_peak, dd.arena_size());
            // Keep collections amortized when the live diagram itself is large.
            if (dd.arena_size() * 2 > budget) {
                budget = dd.arena_size() * 2;
            }
        }
        ++expanded;
        if (opt.progress && expanded % opt.progress_interval == 0) {
            *opt.progress << "explore: " << expanded << " states expanded, " << agenda.size() << " queued, "
                          << dd.arena_size() << " dd nodes\n";
        }
    }
    res.pre = pre;
    res.dd_nodes = dd.node_count(pre);
    res.dd_nodes_peak = std::max(res.dd_nodes_peak, res.dd_nodes);
    res.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace symblicit::explore
