#pragma once

#include "symblicit/arith/bigfloat.hpp"
#include "symblicit/arith/rational.hpp"

#include <charconv>
#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace symblicit::arith {

// ── NumTraits ───────────────────────────────────────────────────────────────
// Compile-time description of a numeric backend. The engines are templates
// over the value type; everything backend-specific goes through here.

template <class T>
struct NumTraits;

template <>
struct NumTraits<double> {
    static constexpr std::string_view name = "f64";
    static constexpr bool exact = false;

    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(std::int64_t v) { return static_cast<double>(v); }
    static double from_rational(const Rational& q) { return rational_to_double(q); }
    static double to_double(double x) { return x; }

    // Bit test against the canonical constants, no epsilon.
    static bool is_zero(double x) { return x == 0.0; }
    static bool is_one(double x) { return x == 1.0; }

    static bool near(double a, double b, double tolerance) { return std::fabs(a - b) <= tolerance; }
    static std::int64_t floor(double x) { return static_cast<std::int64_t>(std::floor(x)); }
    static std::int64_t ceil(double x) { return static_cast<std::int64_t>(std::ceil(x)); }

    static std::string to_string(double x) {
        if (std::isinf(x)) {
            return x > 0 ? "inf" : "-inf";
        }
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    }

    static std::optional<double> parse(std::string_view text) {
        if (text.find('/') != std::string_view::npos) {
            auto q = parse_rational(text);
            if (!q) {
                return std::nullopt;
            }
            return from_rational(*q);
        }
        double out = 0.0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), out);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
            return std::nullopt;
        }
        return out;
    }
};

template <>
struct NumTraits<Rational> {
    static constexpr std::string_view name = "rational";
    static constexpr bool exact = true;

    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(std::int64_t v) { return Rational(static_cast<long>(v)); }
    static Rational from_rational(const Rational& q) { return q; }
    static double to_double(const Rational& x) { return rational_to_double(x); }

    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static bool is_one(const Rational& x) { return x == 1; }

    static bool near(const Rational& a, const Rational& b, double) { return a == b; }
    static std::int64_t floor(const Rational& x) {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        return r.get_si();
    }
    static std::int64_t ceil(const Rational& x) {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        return r.get_si();
    }

    static std::string to_string(const Rational& x) { return arith::to_string(x); }
    static std::optional<Rational> parse(std::string_view text) { return parse_rational(text); }
};

template <>
struct NumTraits<BigFloat> {
    static constexpr std::string_view name = "bigfloat";
    static constexpr bool exact = false;

    static BigFloat zero() { return BigFloat(0L); }
    static BigFloat one() { return BigFloat(1L); }
    static BigFloat from_int(std::int64_t v) { return BigFloat(static_cast<long>(v)); }
    static BigFloat from_rational(const Rational& q) { return BigFloat(q); }
    static double to_double(const BigFloat& x) { return x.to_double(); }

    static bool is_zero(const BigFloat& x) { return x.is_zero(); }
    static bool is_one(const BigFloat& x) { return x.is_one(); }

    static bool near(const BigFloat& a, const BigFloat& b, double tolerance) {
        BigFloat diff = a - b;
        if (diff.sign() < 0) {
            diff = -diff;
        }
        return diff <= BigFloat(tolerance);
    }

    static std::int64_t floor(const BigFloat& x) { return mpfr_get_si(x.get(), MPFR_RNDD); }
    static std::int64_t ceil(const BigFloat& x) { return mpfr_get_si(x.get(), MPFR_RNDU); }

    static std::string to_string(const BigFloat& x) { return x.to_string(); }

    static std::optional<BigFloat> parse(std::string_view text) {
        if (text.find('/') != std::string_view::npos) {
            auto q = parse_rational(text);
            if (!q) {
                return std::nullopt;
            }
            return BigFloat(*q);
        }
        return BigFloat::parse_decimal(text);
    }
};

/// A value type usable by the checking engines.
template <class T>
concept Numeric = requires(const T& a, const T& b) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { a / b } -> std::convertible_to<T>;
    { a < b } -> std::convertible_to<bool>;
    { NumTraits<T>::zero() } -> std::convertible_to<T>;
    { NumTraits<T>::is_zero(a) } -> std::convertible_to<bool>;
};

template <Numeric T>
bool is_zero(const T& x) {
    return NumTraits<T>::is_zero(x);
}

template <Numeric T>
bool is_one(const T& x) {
    return NumTraits<T>::is_one(x);
}

} // namespace symblicit::arith
