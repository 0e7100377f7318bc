#pragma once

#include "symblicit/model/value.hpp"
#include "symblicit/oracles/explicit.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace symblicit::oracles {

using model::Value;

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sparse row of a linear system: (column, coefficient).
template <class Num>
using SparseRow = std::vector<std::pair<StateIndex, Num>>;

/// Solves A x = b by row-wise Doolittle elimination without pivoting.
/// Intended for nonsingular M-matrices such as I - Q with Q substochastic.
template <class Num>
std::vector<Num> sparse_solve(const std::vector<SparseRow<Num>>& a, std::vector<Num> b) {
    using Traits = arith::NumTraits<Num>;
    const std::size_t n = a.size();
    std::vector<std::map<StateIndex, Num>> u(n); // upper factor, diagonal included
    std::map<StateIndex, Num> acc;
    for (StateIndex i = 0; i < n; ++i) {
        acc.clear();
        for (const auto& [j, v] : a[i]) {
            auto [it, fresh] = acc.try_emplace(j, v);
            if (!fresh) {
                it->second += v;
            }
        }
        for (auto it = acc.begin(); it != acc.end() && it->first < i;) {
            const StateIndex k = it->first;
            const Num& pivot = u[k].begin()->second;
            const Num factor = it->second / pivot;
            if (!Traits::is_zero(factor)) {
                for (auto jt = std::next(u[k].begin()); jt != u[k].end(); ++jt) {
                    auto [slot, fresh] = acc.try_emplace(jt->first, Num(-(factor * jt->second)));
                    if (!fresh) {
                        slot->second -= Num(factor * jt->second);
                    }
                }
                b[i] -= Num(factor * b[k]);
            }
            it = acc.erase(it);
        }
        if (acc.empty() || acc.begin()->first != i || Traits::is_zero(acc.begin()->second)) {
            throw SolveError("singular linear system");
        }
        for (auto& [j, v] : acc) {
            if (!Traits::is_zero(v)) {
                u[i].emplace(j, std::move(v));
            }
        }
    }
    std::vector<Num> x(n, Traits::zero());
    for (std::size_t i = n; i-- > 0;) {
        Num sum = b[i];
        auto it = u[i].begin();
        const Num pivot = it->second;
        for (++it; it != u[i].end(); ++it) {
            sum -= Num(it->second * x[it->first]);
        }
        x[i] = Num(sum / pivot);
    }
    return x;
}

/// Reachability probability of every state.
template <class Num>
std::vector<Num> solve_reach_prob(const ExplicitChain<Num>& c) {
    using Traits = arith::NumTraits<Num>;
    const auto zero = prob0(c);
    std::vector<Num> x(c.size(), Traits::zero());
    std::vector<StateIndex> local(c.size(), 0);
    std::vector<StateIndex> unknown;
    for (StateIndex s = 0; s < c.size(); ++s) {
        if (c.goal[s]) {
            x[s] = Traits::one();
        } else if (!zero[s]) {
            local[s] = static_cast<StateIndex>(unknown.size());
            unknown.push_back(s);
        }
    }
    std::vector<SparseRow<Num>> a(unknown.size());
    std::vector<Num> b(unknown.size(), Traits::zero());
    for (StateIndex i = 0; i < unknown.size(); ++i) {
        const StateIndex s = unknown[i];
        a[i].push_back({i, Traits::one()});
        for (const auto& e : c.rows[s]) {
            if (c.goal[e.to]) {
                b[i] += e.p;
            } else if (!zero[e.to]) {
                a[i].push_back({local[e.to], Num(-e.p)});
            }
        }
    }
    const auto y = sparse_solve(a, std::move(b));
    for (StateIndex i = 0; i < unknown.size(); ++i) {
        x[unknown[i]] = y[i];
    }
    return x;
}

/// Expected reward until the goal for every state; infinite where the goal
/// is missed with positive probability.
template <class Num>
std::vector<Value<Num>> solve_exp_reward(const ExplicitChain<Num>& c) {
    using Traits = arith::NumTraits<Num>;
    const auto one = prob1(c);
    std::vector<Value<Num>> x(c.size(), Value<Num>::finite(Traits::zero()));
    std::vector<StateIndex> local(c.size(), 0);
    std::vector<StateIndex> unknown;
    for (StateIndex s = 0; s < c.size(); ++s) {
        if (!one[s]) {
            x[s] = Value<Num>::inf();
        } else if (!c.goal[s]) {
            local[s] = static_cast<StateIndex>(unknown.size());
            unknown.push_back(s);
        }
    }
    std::vector<SparseRow<Num>> a(unknown.size());
    std::vector<Num> b(unknown.size(), Traits::zero());
    for (StateIndex i = 0; i < unknown.size(); ++i) {
        const StateIndex s = unknown[i];
        a[i].push_back({i, Traits::one()});
        b[i] = c.reward_u[s];
        for (const auto& e : c.rows[s]) {
            if (!c.goal[e.to]) {
                a[i].push_back({local[e.to], Num(-e.p)});
            }
        }
    }
    const auto y = sparse_solve(a, std::move(b));
    for (StateIndex i = 0; i < unknown.size(); ++i) {
        x[unknown[i]] = Value<Num>::finite(y[i]);
    }
    return x;
}

/// Exact (Rational) or direct (floating) solution at the initial state.
template <class Num>
Value<Num> linear_solve(const ExplicitChain<Num>& c, lang::PropertyKind kind) {
    if (kind == lang::PropertyKind::ReachProb) {
        return Value<Num>::finite(solve_reach_prob(c)[0]);
    }
    if (kind == lang::PropertyKind::ExpReward) {
        return solve_exp_reward(c)[0];
    }
    throw SolveError("linear_solve handles reachability and expected rewards; use lra_solve");
}

} // namespace symblicit::oracles
