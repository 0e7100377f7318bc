#pragma once

#include "symblicit/oracles/linear_solve.hpp"

#include <algorithm>
#include <vector>

namespace symblicit::oracles {

/// Strongly connected components (iterative Tarjan). Returns the component
/// id of every state; ids are assigned in reverse topological order.
template <class Num>
std::vector<std::uint32_t> scc_ids(const ExplicitChain<Num>& c, std::uint32_t* count = nullptr) {
    constexpr std::uint32_t kNone = 0xFFFFFFFFU;
    const std::size_t n = c.size();
    std::vector<std::uint32_t> index(n, kNone), low(n, 0), comp(n, kNone);
    std::vector<bool> on_stack(n, false);
    std::vector<StateIndex> stack;
    std::vector<std::pair<StateIndex, std::size_t>> call;
    std::uint32_t next = 0;
    std::uint32_t ncomp = 0;
    for (StateIndex root = 0; root < n; ++root) {
        if (index[root] != kNone) {
            continue;
        }
        call.push_back({root, 0});
        index[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < c.rows[v].size()) {
                const StateIndex w = c.rows[v][pos++].to;
                if (index[w] == kNone) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const StateIndex done = v;
            call.pop_back();
            if (!call.empty()) {
                const StateIndex parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                StateIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                } while (w != done);
                ++ncomp;
            }
        }
    }
    if (count) {
        *count = ncomp;
    }
    return comp;
}

/// Long-run average reward u/l at the initial state: per bottom component
/// steady state, then reachability-weighted over the transient part.
template <class Num>
Num lra_solve(const ExplicitChain<Num>& c) {
    using Traits = arith::NumTraits<Num>;
    std::uint32_t ncomp = 0;
    const auto comp = scc_ids(c, &ncomp);
    std::vector<bool> bottom(ncomp, true);
    std::vector<std::vector<StateIndex>> members(ncomp);
    for (StateIndex s = 0; s < c.size(); ++s) {
        members[comp[s]].push_back(s);
        for (const auto& e : c.rows[s]) {
            if (comp[e.to] != comp[s]) {
                bottom[comp[s]] = false;
            }
        }
    }
    std::vector<Num> x(c.size(), Traits::zero());
    std::vector<bool> in_bottom(c.size(), false);
    std::vector<StateIndex> local(c.size(), 0);
    for (std::uint32_t k = 0; k < ncomp; ++k) {
        if (!bottom[k]) {
            continue;
        }
        const auto& b = members[k];
        for (StateIndex i = 0; i < b.size(); ++i) {
            local[b[i]] = i;
            in_bottom[b[i]] = true;
        }
        // pi_ref = 1; for j != ref: pi_j - sum_{i != ref} pi_i P(i,j) = P(ref,j).
        const std::size_t m = b.size() - 1;
        std::vector<SparseRow<Num>> a(m);
        std::vector<Num> rhs(m, Traits::zero());
        for (std::size_t j = 0; j < m; ++j) {
            a[j].push_back({static_cast<StateIndex>(j), Traits::one()});
        }
        for (StateIndex i = 0; i < b.size(); ++i) {
            for (const auto& e : c.rows[b[i]]) {
                const StateIndex j = local[e.to];
                if (j == 0) {
                    continue;
                }
                if (i == 0) {
                    rhs[j - 1] += e.p;
                } else {
                    a[j - 1].push_back({static_cast<StateIndex>(i - 1), Num(-e.p)});
                }
            }
        }
        std::vector<Num> pi{Traits::one()};
        for (auto& v : sparse_solve(a, std::move(rhs))) {
            pi.push_back(std::move(v));
        }
        Num u = Traits::zero();
        Num l = Traits::zero();
        for (StateIndex i = 0; i < b.size(); ++i) {
            u += Num(pi[i] * c.reward_u[b[i]]);
            l += Num(pi[i] * c.reward_l[b[i]]);
        }
        if (Traits::is_zero(l)) {
            throw SolveError("zero expected recurrence time in a bottom component");
        }
        const Num value = u / l;
        for (StateIndex s : b) {
            x[s] = value;
        }
    }
    if (in_bottom[0]) {
        return x[0];
    }
    // Transient part: x(s) = sum_t P(s,t) x(t).
    std::vector<StateIndex> unknown;
    for (StateIndex s = 0; s < c.size(); ++s) {
        if (!in_bottom[s]) {
            local[s] = static_cast<StateIndex>(unknown.size());
            unknown.push_back(s);
        }
    }
    std::vector<SparseRow<Num>> a(unknown.size());
    std::vector<Num> rhs(unknown.size(), Traits::zero());
    for (StateIndex i = 0; i < unknown.size(); ++i) {
        a[i].push_back({i, Traits::one()});
        for (const auto& e : c.rows[unknown[i]]) {
            if (in_bottom[e.to]) {
                rhs[i] += Num(e.p * x[e.to]);
            } else {
                a[i].push_back({local[e.to], Num(-e.p)});
            }
        }
    }
    return sparse_solve(a, std::move(rhs))[local[0]];
}

} // namespace symblicit::oracles
