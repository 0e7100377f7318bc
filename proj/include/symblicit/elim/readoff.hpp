#pragma once

#include "symblicit/elim/partial_chain.hpp"
#include "symblicit/model/value.hpp"

namespace symblicit::elim {

using model::Value;

/// Folds a residual self-loop of s_I into its other edges, so that s_I is
/// either loop-only or loop-free.
template <class Num>
void normalize_initial(PartialChain<Num>& chain) {
    chain.drop_self_loop(chain.initial());
}

/// Sum of s_I's probabilities into goal states; 1 if s_I is a goal.
template <class Num>
Num read_reach_prob(PartialChain<Num>& chain) {
    using Traits = arith::NumTraits<Num>;
    normalize_initial(chain);
    const auto& init = chain.at(chain.initial());
    if (init.goal) {
        return Traits::one();
    }
    Num sum = Traits::zero();
    for (const auto& e : init.out) {
        if (e.to != chain.initial() && chain.at(e.to).goal) {
            sum += e.p;
        }
    }
    return sum;
}

/// R(s_I) plus goal-weighted goal rewards, or infinity if some non-goal
/// mass survives next to s_I.
template <class Num>
Value<Num> read_exp_reward(PartialChain<Num>& chain) {
    using Traits = arith::NumTraits<Num>;
    normalize_initial(chain);
    const Slot s = chain.initial();
    const auto& init = chain.at(s);
    if (init.goal) {
        return Value<Num>::finite(Traits::zero());
    }
    Num total = init.reward_u;
    for (const auto& e : init.out) {
        if (e.to == s) {
            return Value<Num>::inf(); // loop-only, goal never reached
        }
        const auto& t = chain.at(e.to);
        if (!t.goal) {
            return Value<Num>::inf();
        }
        total += Num(e.p * t.reward_u);
    }
    return Value<Num>::finite(total);
}

/// Long-run average: u/l of a loop-only s_I, otherwise the probability
/// weighted ratios of the surviving loop-only successors.
template <class Num>
Num read_lra(PartialChain<Num>& chain) {
    using Traits = arith::NumTraits<Num>;
    normalize_initial(chain);
    const Slot s = chain.initial();
    auto ratio = [&](Slot t) {
        const auto& r = chain.at(t);
        if (Traits::is_zero(r.reward_l)) {
            throw ChainError("zero expected recurrence time in a bottom component");
        }
        return Num(r.reward_u / r.reward_l);
    };
    if (chain.is_absorbing(s)) {
        return ratio(s);
    }
    Num total = Traits::zero();
    for (const auto& e : chain.at(s).out) {
        if (!chain.is_absorbing(e.to)) {
            throw ChainError("surviving successor of the initial state is not a collapsed bottom component");
        }
        total += Num(e.p * ratio(e.to));
    }
    return total;
}

} // namespace symblicit::elim
