#include "support/support.hpp"

#include <gtest/gtest.h>

using namespace symblicit;
using arith::Rational;
using symblicit::support::read_model;

namespace {

using Exp = model::Expansion<Rational>;

std::map<std::string, Rational> by_name(const model::AnalysisModel<Rational>& m, const Exp& x) {
    std::map<std::string, Rational> out;
    for (const auto& e : x.succ) {
        out[m.describe(e.target)] = e.prob;
    }
    return out;
}

check::CheckResult run_rational(const std::string& model, const std::string& prop) {
    check::CheckOptions opt;
    opt.arith = arith::BackendSpec::rational();
    opt.debug_checks = true;
    return check::run_check(model, prop, {}, opt);
}

const char* kTwoRates = R"(ctmc
module m
  x : [0..2] init 0;
  [] x=0 -> 2 : (x'=1) + 6 : (x'=2);
  [] x>0 -> 1 : (x'=0);
endmodule
rewards "r"
  x=0 : 4;
endrewards
)";

} // namespace

TEST(Model, AbsorbGoalsZeroconf) {
    const auto loaded = model::load<Rational>(read_model("zeroconf.pm"), R"(R{"tries"}=? [ F "ok" ])");
    const auto& m = *loaded.analysis;
    std::int64_t ok_val = 6;
    const auto ok = loaded.compiled->encode(&ok_val);
    Exp x;
    m.expand(ok, x);
    EXPECT_TRUE(x.goal);
    ASSERT_EQ(x.succ.size(), 1u);
    EXPECT_EQ(x.succ[0].target, ok);
    EXPECT_EQ(x.succ[0].prob, 1);
    EXPECT_EQ(x.reward_u, 0);
    // A goal with a nonzero model reward is zeroed.
    const auto i_goal = model::absorb_goals(m, [&](const lang::StateCode& s) { return s == m.initial(); });
    i_goal.expand(m.initial(), x);
    EXPECT_TRUE(x.goal);
    EXPECT_EQ(x.reward_u, 0);
    // The non-goal state i keeps its distribution and reward.
    m.expand(m.initial(), x);
    EXPECT_FALSE(x.goal);
    EXPECT_EQ(x.reward_u, 1);
    EXPECT_EQ(by_name(m, x).at("(s=6)"), Rational(7, 8));
}

TEST(Model, AbsorbGoalsIsIdempotent) {
    const auto loaded = model::load<Rational>(read_model("zeroconf.pm"), R"(R{"tries"}=? [ F "ok" | "bad" ])");
    const auto& once = *loaded.analysis;
    const auto twice = model::absorb_goals(once, once.goal());
    const auto chain = oracles::build_explicit(once);
    Exp a, b;
    for (const auto& s : chain.codes) {
        once.expand(s, a);
        twice.expand(s, b);
        EXPECT_EQ(a.goal, b.goal);
        EXPECT_EQ(a.reward_u, b.reward_u);
        EXPECT_EQ(by_name(once, a), by_name(twice, b));
    }
}

TEST(Model, GoalEverywhereAndNowhere) {
    const std::string zc = read_model("zeroconf.pm");
    EXPECT_EQ(run_rational(zc, "P=? [ F true ]").value_string(), "1");
    EXPECT_EQ(run_rational(zc, "P=? [ F false ]").value_string(), "0");
    // Empty goal leaves every distribution unchanged.
    const auto loaded = model::load<Rational>(zc, "P=? [ F false ]");
    const auto chain = oracles::build_explicit(*loaded.analysis);
    EXPECT_EQ(chain.size(), 7u);
    Exp x;
    std::vector<lang::CompiledModel<Rational>::Successor> raw;
    for (const auto& s : chain.codes) {
        loaded.analysis->expand(s, x);
        loaded.compiled->successors(s, raw);
        ASSERT_EQ(x.succ.size(), raw.size());
        for (std::size_t k = 0; k < raw.size(); ++k) {
            EXPECT_EQ(x.succ[k].target, raw[k].target);
            EXPECT_EQ(x.succ[k].prob, raw[k].weight);
        }
    }
}

TEST(Model, EmbedCtmcRatesAndRewards) {
    const auto loaded = model::load<Rational>(kTwoRates, "R=? [ S ]");
    const auto& m = *loaded.analysis;
    EXPECT_TRUE(m.embedded());
    Exp x;
    m.expand(m.initial(), x);
    const auto succ = by_name(m, x);
    EXPECT_EQ(succ.at("(x=1)"), Rational(1, 4));
    EXPECT_EQ(succ.at("(x=2)"), Rational(3, 4));
    EXPECT_EQ(x.reward_u, Rational(1, 2));
    EXPECT_EQ(x.reward_l, Rational(1, 8));
    // embed_ctmc on an already embedded view changes nothing.
    const auto again = model::embed_ctmc(m);
    Exp y;
    again.expand(m.initial(), y);
    EXPECT_EQ(by_name(again, y), succ);
    EXPECT_EQ(y.reward_l, x.reward_l);
}

TEST(Model, EmbedCtmcSingleLoop) {
    const char* text = R"(ctmc
module m
  b : bool init false;
  [] true -> 5 : (b'=b);
endmodule
rewards "r"
  true : 5;
endrewards
)";
    const auto loaded = model::load<Rational>(text, "R=? [ S ]");
    Exp x;
    loaded.analysis->expand(loaded.analysis->initial(), x);
    EXPECT_EQ(x.reward_u, 1);
    EXPECT_EQ(x.reward_l, Rational(1, 5));
    EXPECT_EQ(run_rational(text, "R=? [ S ]").value_string(), "5");
}

TEST(Model, DtmcIsNotRescaled) {
    const auto loaded = model::load<Rational>(read_model("zeroconf.pm"), R"(R{"tries"}=? [ S ])");
    const auto& m = *loaded.analysis;
    EXPECT_FALSE(m.embedded());
    const auto same = model::embed_ctmc(m);
    EXPECT_FALSE(same.embedded());
    Exp x;
    m.expand(m.initial(), x);
    EXPECT_EQ(x.reward_u, 1);
    EXPECT_EQ(x.reward_l, 1);
    EXPECT_EQ(by_name(m, x).at("(s=4)"), Rational(1, 8));
}

TEST(Model, CtmcDeadlockBecomesAbsorbing) {
    const char* text = R"(ctmc
module m
  x : [0..1] init 0;
  [] x=0 -> 3 : (x'=1);
endmodule
rewards "r"
  x=1 : 2;
endrewards
)";
    const auto loaded = model::load<Rational>(text, "R=? [ S ]");
    std::int64_t one = 1;
    const auto s1 = loaded.compiled->encode(&one);
    Exp x;
    loaded.analysis->expand(s1, x);
    EXPECT_TRUE(x.deadlock);
    ASSERT_EQ(x.succ.size(), 1u);
    EXPECT_EQ(x.succ[0].prob, 1);
    EXPECT_EQ(x.reward_l, 1);
    EXPECT_EQ(loaded.analysis->deadlocks_seen(), 1u);
    EXPECT_EQ(run_rational(text, "R=? [ S ]").value_string(), "2");
}

TEST(Model, EmbeddedDistributionsSumToOne) {
    const auto loaded =
        model::load<Rational>(read_model("embedded.sm"), R"(R{"danger"}=? [ F "down" ])", {{"MAX_COUNT", "4"}});
    const auto chain = oracles::build_explicit(*loaded.analysis);
    for (const auto& row : chain.rows) {
        Rational sum = 0;
        for (const auto& e : row) {
            sum += e.p;
        }
        ASSERT_EQ(sum, 1);
    }
}
