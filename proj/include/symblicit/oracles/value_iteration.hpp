#pragma once

#include "symblicit/model/value.hpp"
#include "symblicit/oracles/explicit.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace symblicit::oracles {

using model::Value;

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Sweep { GaussSeidel, Jacobi };

struct ViOptions {
    double epsilon = 1e-10;
    bool relative = true; // threshold epsilon * min(1, |x|) instead of epsilon
    Sweep sweep = Sweep::GaussSeidel;
    std::uint64_t max_iterations = 10'000'000;
};

namespace detail {

template <class Num>
Num abs_diff(const Num& a, const Num& b) {
    Num d = a - b;
    if (d < arith::NumTraits<Num>::zero()) {
        d = -d;
    }
    return d;
}

// Iterates x = base + P x over the states flagged `active`; others keep
// their initial value. Gauss-Seidel visits states in reverse index order.
template <class Num>
std::vector<Num> iterate(const ExplicitChain<Num>& c, const std::vector<bool>& active, std::vector<Num> x,
                         const std::vector<Num>& base, const ViOptions& opt, std::uint64_t fixed_sweeps = 0) {
    using Traits = arith::NumTraits<Num>;
    const Num eps = Traits::from_rational(arith::Rational(opt.epsilon));
    std::vector<Num> next = x;
    for (std::uint64_t it = 0;; ++it) {
        if (fixed_sweeps == 0 && it >= opt.max_iterations) {
            throw ConvergenceError("value iteration did not converge within " + std::to_string(opt.max_iterations) +
                                   " iterations");
        }
        if (fixed_sweeps != 0 && it == fixed_sweeps) {
            return x;
        }
        bool converged = true;
        std::vector<Num>& target = opt.sweep == Sweep::Jacobi ? next : x;
        for (std::size_t k = c.size(); k-- > 0;) {
            if (!active[k]) {
                continue;
            }
            Num v = base[k];
            for (const auto& e : c.rows[k]) {
                v += Num(e.p * x[e.to]);
            }
            if (converged) {
                const Num d = abs_diff(v, x[k]);
                Num scale = Traits::one();
                if (opt.relative) {
                    const Num mag = abs_diff(v, Traits::zero());
                    if (mag < scale) {
                        scale = mag;
                    }
                }
                if (d > Num(eps * scale)) {
                    converged = false;
                }
            }
            target[k] = std::move(v);
        }
        if (opt.sweep == Sweep::Jacobi) {
            std::swap(x, next);
            next = x;
        }
        if (fixed_sweeps == 0 && converged) {
            return x;
        }
    }
}

} // namespace detail

/// The reachability vector after exactly `sweeps` iterations from goal = 1,
/// others 0, without graph precomputation.
template <class Num>
std::vector<Num> reach_prob_sweeps(const ExplicitChain<Num>& c, std::uint64_t sweeps, Sweep sweep) {
    using Traits = arith::NumTraits<Num>;
    std::vector<bool> active(c.size());
    std::vector<Num> x(c.size(), Traits::zero());
    for (std::size_t s = 0; s < c.size(); ++s) {
        active[s] = !c.goal[s];
        if (c.goal[s]) {
            x[s] = Traits::one();
        }
    }
    ViOptions opt;
    opt.sweep = sweep;
    return detail::iterate(c, active, std::move(x), std::vector<Num>(c.size(), Traits::zero()), opt, sweeps);
}

/// Value iteration at the initial state for reachability probabilities and
/// expected rewards, with Prob0/Prob1 graph precomputation.
template <class Num>
Value<Num> value_iteration(const ExplicitChain<Num>& c, lang::PropertyKind kind, const ViOptions& opt = {}) {
    using Traits = arith::NumTraits<Num>;
    std::vector<bool> active(c.size());
    std::vector<Num> x(c.size(), Traits::zero());
    std::vector<Num> base(c.size(), Traits::zero());
    if (kind == lang::PropertyKind::ReachProb) {
        const auto zero = prob0(c);
        const auto one = prob1(c);
        for (std::size_t s = 0; s < c.size(); ++s) {
            if (one[s]) {
                x[s] = Traits::one();
            }
            active[s] = !one[s] && !zero[s];
        }
    } else if (kind == lang::PropertyKind::ExpReward) {
        const auto one = prob1(c);
        if (!one[0]) {
            return Value<Num>::inf();
        }
        for (std::size_t s = 0; s < c.size(); ++s) {
            active[s] = one[s] && !c.goal[s];
            if (active[s]) {
                base[s] = c.reward_u[s];
            }
        }
    } else {
        throw ConvergenceError("value iteration handles reachability and expected rewards only");
    }
    if (!active[0]) {
        return Value<Num>::finite(x[0]);
    }
    return Value<Num>::finite(detail::iterate(c, active, std::move(x), base, opt)[0]);
}

} // namespace symblicit::oracles
