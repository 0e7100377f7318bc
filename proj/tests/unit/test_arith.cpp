#include "symblicit/arith/scalar.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace symblicit::arith;

namespace {

Scalar q(const char* text) { return Scalar::parse(text, BackendSpec::rational()); }
Scalar f(const char* text) { return Scalar::parse(text, BackendSpec::f64()); }

} // namespace

TEST(Arith, RationalDivisionIsExact) {
    const Scalar r = div(q("1"), q("876"));
    EXPECT_EQ(r.to_string(), "1/876");
    EXPECT_EQ(r.as<Rational>(), Rational(1, 876));
}

TEST(Arith, AddZeroIsIdentity) {
    for (auto backend : {BackendSpec::f64(), BackendSpec::rational(), BackendSpec::bigfloat()}) {
        const Scalar x = Scalar::parse("3/7", backend);
        EXPECT_EQ(add(x, Scalar::zero(backend)), x) << backend.name();
    }
}

TEST(Arith, Float64DivisionWithinOneUlp) {
    const double got = div(f("0.8"), f("0.876")).to_double();
    // Exact quotient of the two binary64 inputs, rounded once.
    const Rational exact = Rational(0.8) / Rational(0.876);
    const double want = rational_to_double(exact);
    EXPECT_LE(std::fabs(got - want), std::nextafter(want, 2.0) - want);
    EXPECT_NEAR(got, 0.91324200913, 1e-11);
}

TEST(Arith, IsOneAndIsZero) {
    EXPECT_TRUE(add(q("875/876"), q("1/876")).is_one());
    EXPECT_FALSE(q("1/1095").is_zero());
    EXPECT_TRUE(sub(q("1/1095"), q("1/1095")).is_zero());
    // binary64: (0.3 + 0.3) + 0.4 rounds to exactly 1.0.
    const Scalar s = add(add(f("0.3"), f("0.3")), f("0.4"));
    EXPECT_TRUE(s.is_one());
    EXPECT_TRUE(NumTraits<double>::is_one((0.3 + 0.3) + 0.4));
    // Whereas 0.1 + 0.2 is not bit-equal to 0.3.
    EXPECT_FALSE(NumTraits<double>::is_zero((0.1 + 0.2) - 0.3));
}

TEST(Arith, RationalFieldLaws) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 40);
    for (int i = 0; i < 2000; ++i) {
        const Rational a(num(rng), den(rng));
        const Rational b(num(rng), den(rng));
        const Rational c(num(rng), den(rng));
        Rational a1 = a, b1 = b, c1 = c;
        a1.canonicalize();
        b1.canonicalize();
        c1.canonicalize();
        EXPECT_EQ(Rational((a1 + b1) + c1), Rational(a1 + (b1 + c1)));
        EXPECT_EQ(Rational(a1 * (b1 + c1)), Rational(a1 * b1 + a1 * c1));
        EXPECT_EQ(Rational(a1 * b1), Rational(b1 * a1));
    }
}

TEST(Arith, DecimalRoundTrip) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(-100000, 100000);
    std::uniform_int_distribution<int> e2(0, 20);
    std::uniform_int_distribution<int> e5(0, 12);
    for (int i = 0; i < 500; ++i) {
        Rational x(num(rng));
        mpz_class d = 1;
        mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), e2(rng));
        mpz_class p5;
        mpz_ui_pow_ui(p5.get_mpz_t(), 5, e5(rng));
        x /= Rational(d * p5);
        const std::string text = to_decimal_string(x);
        ASSERT_EQ(text.find('/'), std::string::npos) << text;
        const auto back = parse_rational(text);
        ASSERT_TRUE(back.has_value()) << text;
        EXPECT_EQ(*back, x) << text;
    }
    EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
    EXPECT_EQ(parse_rational("1/8"), Rational(1, 8));
    EXPECT_EQ(parse_rational("2.5e-3"), Rational(1, 400));
}

TEST(Arith, FloatStringsRoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng);
        const Scalar s(x);
        EXPECT_EQ(f(s.to_string().c_str()).to_double(), x);
    }
    const Scalar b = Scalar::parse("1/3", BackendSpec::bigfloat(200));
    const Scalar back = Scalar::parse(b.to_string(), BackendSpec::bigfloat(200));
    EXPECT_EQ(back, b);
    EXPECT_EQ(b.as<BigFloat>().precision(), 200);
}

TEST(Arith, Errors) {
    EXPECT_THROW(div(q("1"), q("0")), DivisionByZero);
    EXPECT_THROW(div(f("1"), f("0")), DivisionByZero);
    EXPECT_THROW(add(q("1"), f("1")), BackendMismatch);
    EXPECT_THROW(q("1").as<double>(), BackendMismatch);
    EXPECT_THROW(Scalar::parse("1/0", BackendSpec::rational()), ArithError);
    EXPECT_THROW(Scalar::parse("abc", BackendSpec::f64()), ArithError);
    EXPECT_FALSE(q("1") == f("1"));
}

TEST(Arith, BackendSpecParse) {
    EXPECT_EQ(BackendSpec::parse("f64").kind, Backend::Float64);
    EXPECT_EQ(BackendSpec::parse("rational").kind, Backend::Rational);
    EXPECT_EQ(BackendSpec::parse("bigfloat").precision, 256u);
    const auto b = BackendSpec::parse("bigfloat:512");
    EXPECT_EQ(b.kind, Backend::BigFloat);
    EXPECT_EQ(b.precision, 512u);
    EXPECT_THROW(BackendSpec::parse("bigfloat:x"), ArithError);
    EXPECT_THROW(BackendSpec::parse("bigfloat:1"), ArithError);
    EXPECT_THROW(BackendSpec::parse("float"), ArithError);
}
