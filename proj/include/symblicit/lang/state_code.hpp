#pragma once

#include <array>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace symblicit::lang {

/// Fixed-width bit vector of up to 256 bits. Bit 0 is the most significant
/// bit of the encoding and the root level of the decision diagrams.
struct StateCode {
    static constexpr unsigned kMaxBits = 256;

    std::array<std::uint64_t, 4> words{};

    bool bit(unsigned k) const {
        assert(k < kMaxBits);
        return (words[k >> 6] >> (63 - (k & 63))) & 1U;
    }

    void set_bit(unsigned k, bool v) {
        const std::uint64_t m = std::uint64_t{1} << (63 - (k & 63));
        if (v) {
            words[k >> 6] |= m;
        } else {
            words[k >> 6] &= ~m;
        }
    }

    /// Reads the `width`-bit field starting at bit `offset`, most significant bit first.
    std::uint64_t field(unsigned offset, unsigned width) const {
        if (width == 0) {
            return 0;
        }
        const unsigned w = offset >> 6;
        const unsigned o = offset & 63;
        if (o + width <= 64) {
            const std::uint64_t x = words[w] >> (64 - o - width);
            return width == 64 ? x : x & ((std::uint64_t{1} << width) - 1);
        }
        const unsigned first = 64 - o;
        const unsigned rest = width - first;
        const std::uint64_t hi = words[w] & ((std::uint64_t{1} << first) - 1);
        const std::uint64_t lo = words[w + 1] >> (64 - rest);
        return (hi << rest) | lo;
    }

    void set_field(unsigned offset, unsigned width, std::uint64_t value) {
        if (width == 0) {
            return;
        }
        const unsigned w = offset >> 6;
        const unsigned o = offset & 63;
        if (o + width <= 64) {
            const unsigned shift = 64 - o - width;
            const std::uint64_t mask = (width == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1)) << shift;
            words[w] = (words[w] & ~mask) | ((value << shift) & mask);
            return;
        }
        const unsigned first = 64 - o;
        const unsigned rest = width - first;
        const std::uint64_t hi_mask = (std::uint64_t{1} << first) - 1;
        words[w] = (words[w] & ~hi_mask) | ((value >> rest) & hi_mask);
        const std::uint64_t lo_mask = ~std::uint64_t{0} << (64 - rest);
        words[w + 1] = (words[w + 1] & ~lo_mask) | (value << (64 - rest));
    }

    /// The code whose first `width` bits spell `index` in binary.
    static StateCode from_index(std::uint64_t index, unsigned width) {
        StateCode c;
        c.set_field(0, width, index);
        return c;
    }

    std::uint64_t to_index(unsigned width) const { return field(0, width); }

    std::string bits(unsigned width) const {
        std::string s;
        for (unsigned k = 0; k < width; ++k) {
            s += bit(k) ? '1' : '0';
        }
        return s;
    }

    friend bool operator==(const StateCode&, const StateCode&) = default;
    friend auto operator<=>(const StateCode&, const StateCode&) = default;
};

struct StateCodeHash {
    std::size_t operator()(const StateCode& c) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t w : c.words) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= h >> 31;
            h *= 0xbf58476d1ce4e5b9ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace symblicit::lang

template <>
struct std::hash<symblicit::lang::StateCode> : symblicit::lang::StateCodeHash {};
