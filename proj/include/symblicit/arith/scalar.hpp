#pragma once

#include "symblicit/arith/num_traits.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace symblicit::arith {

class ArithError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BackendMismatch : public ArithError {
public:
    using ArithError::ArithError;
};

class DivisionByZero : public ArithError {
public:
    DivisionByZero() : ArithError("division by zero") {}
};

enum class Backend { Float64, Rational, BigFloat };

/// Backend selection as given on the command line: "f64", "rational" or "bigfloat:<bits>".
struct BackendSpec {
    Backend kind = Backend::Float64;
    unsigned precision = 0; // mantissa bits, BigFloat only

    static BackendSpec f64() { return {Backend::Float64, 0}; }
    static BackendSpec rational() { return {Backend::Rational, 0}; }
    static BackendSpec bigfloat(unsigned bits = BigFloat::kDefaultPrecision) { return {Backend::BigFloat, bits}; }

    static BackendSpec parse(std::string_view text) {
        if (text == "f64" || text == "float64" || text == "double") {
            return f64();
        }
        if (text == "rational" || text == "exact") {
            return rational();
        }
        if (text == "bigfloat") {
            return bigfloat();
        }
        if (text.starts_with("bigfloat:")) {
            const std::string bits(text.substr(9));
            std::size_t used = 0;
            unsigned long value = 0;
            try {
                value = std::stoul(bits, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != bits.size() || value < 2 || value > (1UL << 24)) {
                throw ArithError("invalid bigfloat precision '" + bits + "'");
            }
            return bigfloat(static_cast<unsigned>(value));
        }
        throw ArithError("unknown arithmetic backend '" + std::string(text) + "'");
    }

    std::string name() const {
        switch (kind) {
        case Backend::Float64: return "f64";
        case Backend::Rational: return "rational";
        case Backend::BigFloat: return "bigfloat:" + std::to_string(precision);
        }
        return "?";
    }

    friend bool operator==(const BackendSpec&, const BackendSpec&) = default;
};

/// Runtime-tagged numeric value for API boundaries (CLI values, manifests,
/// results). The engines themselves are instantiated per backend type.
class Scalar {
public:
    Scalar() : value_(0.0) {}
    explicit Scalar(double v) : value_(v) {}
    explicit Scalar(Rational v) : value_(std::move(v)) {}
    explicit Scalar(BigFloat v) : value_(std::move(v)) {}

    static Scalar zero(BackendSpec backend) { return from_rational(Rational(0), backend); }
    static Scalar one(BackendSpec backend) { return from_rational(Rational(1), backend); }

    static Scalar from_rational(const Rational& q, BackendSpec backend) {
        switch (backend.kind) {
        case Backend::Float64: return Scalar(rational_to_double(q));
        case Backend::Rational: return Scalar(q);
        case Backend::BigFloat: return Scalar(BigFloat(q, static_cast<mpfr_prec_t>(backend.precision)));
        }
        throw ArithError("unknown backend");
    }

    /// Parses "0.125" or "1/8" into the given backend.
    static Scalar parse(std::string_view text, BackendSpec backend) {
        switch (backend.kind) {
        case Backend::Float64:
            if (auto v = NumTraits<double>::parse(text)) {
                return Scalar(*v);
            }
            break;
        case Backend::Rational:
            if (auto v = parse_rational(text)) {
                return Scalar(*v);
            }
            break;
        case Backend::BigFloat: {
            const auto prec = static_cast<mpfr_prec_t>(backend.precision);
            if (text.find('/') != std::string_view::npos) {
                if (auto q = parse_rational(text)) {
                    return Scalar(BigFloat(*q, prec));
                }
            } else if (auto v = BigFloat::parse_decimal(text, prec)) {
                return Scalar(*v);
            }
            break;
        }
        }
        throw ArithError("cannot parse number '" + std::string(text) + "'");
    }

    BackendSpec backend() const {
        if (std::holds_alternative<double>(value_)) {
            return BackendSpec::f64();
        }
        if (std::holds_alternative<Rational>(value_)) {
            return BackendSpec::rational();
        }
        return BackendSpec::bigfloat(static_cast<unsigned>(std::get<BigFloat>(value_).precision()));
    }

    template <class T>
    const T& as() const {
        if (const T* p = std::get_if<T>(&value_)) {
            return *p;
        }
        throw BackendMismatch("scalar is not of backend " + std::string(NumTraits<T>::name));
    }

    bool is_zero() const {
        return std::visit([](const auto& v) { return NumTraits<std::decay_t<decltype(v)>>::is_zero(v); }, value_);
    }
    bool is_one() const {
        return std::visit([](const auto& v) { return NumTraits<std::decay_t<decltype(v)>>::is_one(v); }, value_);
    }
    double to_double() const {
        return std::visit([](const auto& v) { return NumTraits<std::decay_t<decltype(v)>>::to_double(v); }, value_);
    }
    std::string to_string() const {
        return std::visit([](const auto& v) { return NumTraits<std::decay_t<decltype(v)>>::to_string(v); }, value_);
    }

    friend Scalar add(const Scalar& a, const Scalar& b) {
        return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
    }
    friend Scalar sub(const Scalar& a, const Scalar& b) {
        return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
    }
    friend Scalar mul(const Scalar& a, const Scalar& b) {
        return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
    }
    friend Scalar div(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) {
            throw DivisionByZero();
        }
        return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
    }

    /// Exact equality within one backend; mismatched backends compare unequal.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.backend() == b.backend() && a.value_ == b.value_;
    }

private:
    template <class Op>
    static Scalar combine(const Scalar& a, const Scalar& b, Op op) {
        if (!(a.backend() == b.backend())) {
            throw BackendMismatch("arithmetic between " + a.backend().name() + " and " + b.backend().name());
        }
        return std::visit(
            [&](const auto& x) -> Scalar {
                using T = std::decay_t<decltype(x)>;
                return Scalar(T(op(x, std::get<T>(b.value_))));
            },
            a.value_);
    }

    std::variant<double, Rational, BigFloat> value_;
};

} // namespace symblicit::arith
