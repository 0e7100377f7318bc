#pragma once

#include "symblicit/arith/num_traits.hpp"

#include <string>
#include <utility>

namespace symblicit::model {

/// A property value: finite, or infinite for expected rewards of goals
/// reached with probability < 1.
template <class Num>
struct Value {
    Num value{};
    bool infinite = false;

    static Value finite(Num v) { return {std::move(v), false}; }
    static Value inf() { return {arith::NumTraits<Num>::zero(), true}; }

    std::string to_string() const { return infinite ? "inf" : arith::NumTraits<Num>::to_string(value); }
};

} // namespace symblicit::model
