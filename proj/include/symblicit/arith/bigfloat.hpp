#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace symblicit::arith {

/// Arbitrary-precision binary floating point backed by MPFR.
///
/// Every value carries its own mantissa precision. Binary operations round
/// to nearest at the larger of the two operand precisions. Values created
/// without an explicit precision use the calling thread's default, which is
/// 256 bits unless changed through `PrecisionScope`.
class BigFloat {
public:
    static constexpr mpfr_prec_t kDefaultPrecision = 256;

    static mpfr_prec_t default_precision() { return thread_default(); }

    /// Sets the thread's default precision for the lifetime of the scope.
    class PrecisionScope {
    public:
        explicit PrecisionScope(mpfr_prec_t bits) : saved_(thread_default()) {
            if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
                throw std::invalid_argument("BigFloat precision out of range: " + std::to_string(bits));
            }
            thread_default() = bits;
        }
        ~PrecisionScope() { thread_default() = saved_; }
        PrecisionScope(const PrecisionScope&) = delete;
        PrecisionScope& operator=(const PrecisionScope&) = delete;

    private:
        mpfr_prec_t saved_;
    };

    BigFloat() : BigFloat(0L) {}

    explicit BigFloat(long value, mpfr_prec_t precision = default_precision()) {
        mpfr_init2(value_, precision);
        mpfr_set_si(value_, value, MPFR_RNDN);
    }

    explicit BigFloat(double value, mpfr_prec_t precision = default_precision()) {
        mpfr_init2(value_, precision);
        mpfr_set_d(value_, value, MPFR_RNDN);
    }

    explicit BigFloat(const mpq_class& value, mpfr_prec_t precision = default_precision()) {
        mpfr_init2(value_, precision);
        mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
    }

    BigFloat(const BigFloat& other) {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }

    BigFloat(BigFloat&& other) noexcept {
        mpfr_init2(value_, MPFR_PREC_MIN);
        mpfr_swap(value_, other.value_);
    }

    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) {
            mpfr_set_prec(value_, mpfr_get_prec(other.value_));
            mpfr_set(value_, other.value_, MPFR_RNDN);
        }
        return *this;
    }

    BigFloat& operator=(BigFloat&& other) noexcept {
        mpfr_swap(value_, other.value_);
        return *this;
    }

    ~BigFloat() { mpfr_clear(value_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
    mpfr_srcptr get() const { return value_; }

    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    bool is_one() const { return mpfr_cmp_ui(value_, 1) == 0; }
    bool is_finite() const { return mpfr_number_p(value_) != 0; }
    int sign() const { return mpfr_sgn(value_); }

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

    BigFloat& operator+=(const BigFloat& rhs) { return apply(rhs, mpfr_add); }
    BigFloat& operator-=(const BigFloat& rhs) { return apply(rhs, mpfr_sub); }
    BigFloat& operator*=(const BigFloat& rhs) { return apply(rhs, mpfr_mul); }
    BigFloat& operator/=(const BigFloat& rhs) { return apply(rhs, mpfr_div); }

    friend BigFloat operator+(BigFloat lhs, const BigFloat& rhs) { return lhs += rhs; }
    friend BigFloat operator-(BigFloat lhs, const BigFloat& rhs) { return lhs -= rhs; }
    friend BigFloat operator*(BigFloat lhs, const BigFloat& rhs) { return lhs *= rhs; }
    friend BigFloat operator/(BigFloat lhs, const BigFloat& rhs) { return lhs /= rhs; }

    friend BigFloat operator-(BigFloat x) {
        mpfr_neg(x.value_, x.value_, MPFR_RNDN);
        return x;
    }

    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
    friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
        if (mpfr_unordered_p(a.value_, b.value_)) {
            return std::partial_ordering::unordered;
        }
        const int c = mpfr_cmp(a.value_, b.value_);
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }

    /// Parses a decimal literal ("0.125", "-1e-3") at the given precision.
    static std::optional<BigFloat> parse_decimal(std::string_view text, mpfr_prec_t precision = default_precision()) {
        const std::string buf(text);
        if (buf.empty()) {
            return std::nullopt;
        }
        BigFloat out(0L, precision);
        char* end = nullptr;
        mpfr_strtofr(out.value_, buf.c_str(), &end, 10, MPFR_RNDN);
        if (end != buf.c_str() + buf.size()) {
            return std::nullopt;
        }
        return out;
    }

    /// Shortest decimal string that reads back to the same value at this precision.
    std::string to_string() const {
        if (mpfr_nan_p(value_)) {
            return "nan";
        }
        if (mpfr_inf_p(value_)) {
            return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
        }
        if (mpfr_zero_p(value_)) {
            return "0";
        }
        const mpfr_prec_t prec = precision();
        BigFloat probe(0L, prec);
        for (std::size_t digits = 1;; ++digits) {
            mpfr_exp_t exp10 = 0;
            char* raw = mpfr_get_str(nullptr, &exp10, 10, digits, value_, MPFR_RNDN);
            std::string mantissa(raw);
            mpfr_free_str(raw);
            const std::string candidate = format_scientific(mantissa, exp10);
            mpfr_strtofr(probe.value_, candidate.c_str(), nullptr, 10, MPFR_RNDN);
            if (mpfr_equal_p(probe.value_, value_) != 0) {
                return format_decimal(mantissa, exp10);
            }
        }
    }

    friend std::ostream& operator<<(std::ostream& os, const BigFloat& x) { return os << x.to_string(); }

private:
    static mpfr_prec_t& thread_default() {
        thread_local mpfr_prec_t precision = kDefaultPrecision;
        return precision;
    }

    template <class Op>
    BigFloat& apply(const BigFloat& rhs, Op op) {
        const mpfr_prec_t target = std::max(precision(), rhs.precision());
        if (target != precision()) {
            mpfr_prec_round(value_, target, MPFR_RNDN);
        }
        op(value_, value_, rhs.value_, MPFR_RNDN);
        return *this;
    }

    // mpfr_get_str yields digits d1 d2 ... with value 0.d1d2... * 10^exp10.
    static std::pair<bool, std::string> split_sign(std::string mantissa) {
        bool negative = !mantissa.empty() && mantissa.front() == '-';
        if (negative) {
            mantissa.erase(0, 1);
        }
        while (mantissa.size() > 1 && mantissa.back() == '0') {
            mantissa.pop_back();
        }
        return {negative, mantissa};
    }

    static std::string format_scientific(const std::string& raw, mpfr_exp_t exp10) {
        auto [negative, digits] = split_sign(raw);
        std::string out = negative ? "-" : "";
        out += "0.";
        out += digits;
        out += "e" + std::to_string(exp10);
        return out;
    }

    static std::string format_decimal(const std::string& raw, mpfr_exp_t exp10) {
        auto [negative, digits] = split_sign(raw);
        std::string out = negative ? "-" : "";
        // Scientific exponent of the leading digit.
        const long sci = static_cast<long>(exp10) - 1;
        if (sci >= -5 && sci < 21) {
            if (exp10 <= 0) {
                out += "0." + std::string(static_cast<std::size_t>(-exp10), '0') + digits;
            } else if (static_cast<std::size_t>(exp10) >= digits.size()) {
                out += digits + std::string(static_cast<std::size_t>(exp10) - digits.size(), '0');
            } else {
                out += digits.substr(0, static_cast<std::size_t>(exp10)) + "." +
                       digits.substr(static_cast<std::size_t>(exp10));
            }
            return out;
        }
        out += digits.substr(0, 1);
        if (digits.size() > 1) {
            out += "." + digits.substr(1);
        }
        out += (sci < 0 ? "e-" : "e+");
        const std::string e = std::to_string(sci < 0 ? -sci : sci);
        out += (e.size() < 2 ? "0" + e : e);
        return out;
    }

    mpfr_t value_;
};

} // namespace symblicit::arith
