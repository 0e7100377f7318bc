#pragma once

#include "symblicit/explore/explore.hpp"
#include "symblicit/model/analysis_model.hpp"

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace symblicit::oracles {

using lang::StateCode;
using StateIndex = std::uint32_t;

/// Fully built reachable chain. State 0 is the initial state; indices
/// follow breadth-first discovery order.
template <class Num>
struct ExplicitChain {
    struct Entry {
        StateIndex to;
        Num p;
    };
    std::vector<StateCode> codes;
    std::unordered_map<StateCode, StateIndex, lang::StateCodeHash> index;
    std::vector<std::vector<Entry>> rows;
    std::vector<Num> reward_u;
    std::vector<Num> reward_l;
    std::vector<bool> goal;

    std::size_t size() const { return codes.size(); }

    std::size_t transitions() const {
        std::size_t n = 0;
        for (const auto& r : rows) {
            n += r.size();
        }
        return n;
    }
};

template <class Num>
ExplicitChain<Num> build_explicit(const model::AnalysisModel<Num>& m, std::uint64_t max_states = 5'000'000) {
    ExplicitChain<Num> c;
    auto intern = [&](const StateCode& s) -> StateIndex {
        auto [it, fresh] = c.index.try_emplace(s, static_cast<StateIndex>(c.codes.size()));
        if (fresh) {
            if (c.codes.size() >= max_states) {
                throw explore::ResourceError("explicit state space exceeds the limit of " +
                                             std::to_string(max_states) + " states");
            }
            c.codes.push_back(s);
        }
        return it->second;
    };
    intern(m.initial());
    model::Expansion<Num> x;
    for (StateIndex i = 0; i < c.codes.size(); ++i) {
        m.expand(c.codes[i], x, true);
        std::vector<typename ExplicitChain<Num>::Entry> row;
        row.reserve(x.succ.size());
        for (const auto& e : x.succ) {
            row.push_back({intern(e.target), e.prob});
        }
        c.rows.push_back(std::move(row));
        c.reward_u.push_back(x.reward_u);
        c.reward_l.push_back(x.reward_l);
        c.goal.push_back(x.goal);
    }
    return c;
}

/// Reverse adjacency without self-loops.
template <class Num>
std::vector<std::vector<StateIndex>> predecessors(const ExplicitChain<Num>& c) {
    std::vector<std::vector<StateIndex>> pre(c.size());
    for (StateIndex s = 0; s < c.size(); ++s) {
        for (const auto& e : c.rows[s]) {
            if (e.to != s) {
                pre[e.to].push_back(s);
            }
        }
    }
    return pre;
}

/// States from which `target` is reachable, optionally only through states
/// outside `avoid`.
template <class Num>
std::vector<bool> backward_reach(const ExplicitChain<Num>& c, const std::vector<bool>& target,
                                 const std::vector<bool>* avoid = nullptr) {
    const auto pre = predecessors(c);
    std::vector<bool> seen(target);
    std::deque<StateIndex> queue;
    for (StateIndex s = 0; s < c.size(); ++s) {
        if (target[s]) {
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const StateIndex s = queue.front();
        queue.pop_front();
        for (StateIndex q : pre[s]) {
            if (!seen[q] && !(avoid && (*avoid)[q])) {
                seen[q] = true;
                queue.push_back(q);
            }
        }
    }
    return seen;
}

/// States with reachability probability 0 (Prob0).
template <class Num>
std::vector<bool> prob0(const ExplicitChain<Num>& c) {
    auto can = backward_reach(c, c.goal);
    for (std::size_t i = 0; i < can.size(); ++i) {
        can[i] = !can[i];
    }
    return can;
}

/// States with reachability probability 1 (Prob1): those that cannot reach
/// a Prob0 state while avoiding the goal.
template <class Num>
std::vector<bool> prob1(const ExplicitChain<Num>& c) {
    const auto zero = prob0(c);
    auto bad = backward_reach(c, zero, &c.goal);
    for (std::size_t i = 0; i < bad.size(); ++i) {
        bad[i] = !bad[i];
    }
    return bad;
}

} // namespace symblicit::oracles
