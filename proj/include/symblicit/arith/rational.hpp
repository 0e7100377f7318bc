#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace symblicit::arith {

/// Exact rational number: a reduced fraction of arbitrary-precision integers.
using Rational = mpq_class;

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

inline mpz_class pow10(unsigned long n) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, n);
    return r;
}

} // namespace detail

/// Parses "3", "-0.125", "1.5e-3", "2E+2" or "1/8" into an exact rational.
inline std::optional<Rational> parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        return std::nullopt;
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_rational(text.substr(0, slash));
        auto den = parse_rational(text.substr(slash + 1));
        if (!num || !den || *den == 0) {
            return std::nullopt;
        }
        Rational q = *num / *den;
        q.canonicalize();
        return q;
    }
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = text.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!detail::all_digits(exp_text) || exp_text.size() > 9) {
            return std::nullopt;
        }
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) {
            exponent = -exponent;
        }
        text = text.substr(0, e);
    }
    std::string digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if ((!whole.empty() && !detail::all_digits(whole)) || (!frac.empty() && !detail::all_digits(frac)) ||
            (whole.empty() && frac.empty())) {
            return std::nullopt;
        }
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!detail::all_digits(text)) {
            return std::nullopt;
        }
        digits = std::string(text);
    }
    Rational q{mpz_class(digits, 10)};
    if (exponent > 0) {
        q *= detail::pow10(static_cast<unsigned long>(exponent));
    } else if (exponent < 0) {
        q /= detail::pow10(static_cast<unsigned long>(-exponent));
    }
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

/// Canonical rendering: "num/den", or "num" for integers.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

/// Nearest binary64 value (round-to-nearest-even, unlike mpq_get_d which truncates).
inline double rational_to_double(const Rational& q) {
    mpfr_t tmp;
    mpfr_init2(tmp, 53);
    mpfr_set_q(tmp, q.get_mpq_t(), MPFR_RNDN);
    const double out = mpfr_get_d(tmp, MPFR_RNDN);
    mpfr_clear(tmp);
    return out;
}

/// Renders as a terminating decimal when the denominator allows it ("1.1"),
/// otherwise falls back to "num/den".
inline std::string to_decimal_string(const Rational& q) {
    mpz_class den = q.get_den();
    unsigned long twos = 0;
    unsigned long fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1) {
        return to_string(q);
    }
    const unsigned long places = std::max(twos, fives);
    mpz_class scaled = q.get_num() * detail::pow10(places) / q.get_den();
    const bool negative = scaled < 0;
    if (negative) {
        scaled = -scaled;
    }
    std::string s = scaled.get_str(10);
    if (places > 0) {
        if (s.size() <= places) {
            s = std::string(places - s.size() + 1, '0') + s;
        }
        s.insert(s.size() - places, ".");
    }
    return negative ? "-" + s : s;
}

} // namespace symblicit::arith
