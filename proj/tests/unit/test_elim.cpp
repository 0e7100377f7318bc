#include "support/support.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <sstream>

using namespace symblicit;
using arith::Rational;
using elim::PartialChain;
using elim::Slot;
using symblicit::support::read_model;

namespace {

lang::StateCode zc(std::uint64_t s) { return lang::StateCode::from_index(s, 3); }

Rational r(const char* text) { return *arith::parse_rational(text); }

void finish(PartialChain<Rational>& c, Slot s, Rational reward = 0) {
    c.at(s).reward_u = reward;
    c.at(s).reward_l = 1;
    c.at(s).done = true;
}

check::CheckResult run(const std::string& model, const std::string& prop, arith::BackendSpec backend,
                       const lang::ConstantOverrides& consts = {}, bool debug = true) {
    check::CheckOptions opt;
    opt.arith = backend;
    opt.debug_checks = debug;
    return check::run_check(model, prop, consts, opt);
}

} // namespace

TEST(Elim, EliminateFirstProbe) {
    PartialChain<Rational> c;
    const Slot i = c.add_state(zc(5));
    const Slot s4 = c.add_state(zc(4));
    const Slot ok = c.add_state(zc(6));
    const Slot s3 = c.add_state(zc(3));
    c.set_initial(i);
    c.add_edge(i, ok, r("0.875"));
    c.add_edge(i, s4, r("0.125"));
    c.add_edge(s4, s3, r("0.2"));
    c.add_edge(s4, i, r("0.8"));
    finish(c, i, 1);
    finish(c, s4);
    c.eliminate(s4, false);
    EXPECT_FALSE(c.contains(zc(4)));
    EXPECT_EQ(c.edge(i, s3), r("0.025"));
    EXPECT_EQ(c.edge(i, i), r("0.1"));
    EXPECT_EQ(c.edge(i, ok), r("0.875"));
    EXPECT_EQ(c.at(i).reward_u, 1);
    EXPECT_EQ(c.check_conservation(), "");
    EXPECT_EQ(c.check_predecessors(), "");
    EXPECT_EQ(c.live_states(), 3u);
}

TEST(Elim, EliminateInitialWithLoop) {
    PartialChain<Rational> c;
    const Slot i = c.add_state(zc(5));
    const Slot ok = c.add_state(zc(6));
    const Slot s1 = c.add_state(zc(1));
    const Slot bot = c.add_state(zc(7));
    c.set_initial(i);
    c.add_edge(i, ok, r("0.875"));
    c.add_edge(i, s1, r("0.001"));
    c.add_edge(i, i, r("0.124"));
    c.add_edge(s1, bot, r("0.2"));
    c.add_edge(s1, i, r("0.8"));
    c.add_edge(ok, ok, 1);
    c.add_edge(bot, bot, 1);
    finish(c, i, 1);
    finish(c, s1);
    finish(c, ok);
    finish(c, bot);
    c.eliminate(i, true);
    EXPECT_TRUE(c.contains(zc(5)));
    EXPECT_EQ(c.edge(i, ok), r("875/876"));
    EXPECT_EQ(c.edge(i, s1), r("1/876"));
    EXPECT_FALSE(c.edge(i, i).has_value());
    EXPECT_EQ(c.at(i).reward_u, r("250/219"));
    EXPECT_EQ(c.edge(s1, ok), r("175/219"));
    EXPECT_EQ(c.edge(s1, s1), r("1/1095"));
    EXPECT_EQ(c.edge(s1, bot), r("0.2"));
    EXPECT_FALSE(c.edge(s1, i).has_value());
    EXPECT_EQ(c.at(s1).reward_u, r("200/219"));
    EXPECT_EQ(c.check_conservation(), "");
    EXPECT_EQ(c.check_predecessors(), "");
}

TEST(Elim, AbsorbingStateIsNoOp) {
    PartialChain<Rational> c;
    const Slot a = c.add_state(zc(1));
    c.set_initial(a);
    c.add_edge(a, a, 1);
    finish(c, a, 3);
    c.eliminate(a, false);
    EXPECT_TRUE(c.contains(zc(1)));
    EXPECT_EQ(c.edge(a, a), 1);
    EXPECT_EQ(c.at(a).reward_u, 3);
    EXPECT_EQ(c.live_states(), 1u);
}

TEST(Elim, PreconditionsAndTombstones) {
    PartialChain<Rational> c;
    c.track_tombstones(true);
    const Slot a = c.add_state(zc(1));
    const Slot b = c.add_state(zc(2));
    const Slot g = c.add_state(zc(3));
    c.set_initial(a);
    c.add_edge(a, b, 1);
    c.add_edge(b, g, 1);
    c.add_edge(g, g, 1);
    finish(c, b);
    // a is not yet explored.
    EXPECT_THROW(c.eliminate(b, false), elim::ChainError);
    finish(c, a);
    c.eliminate(b, false);
    EXPECT_EQ(c.edge(a, g), 1);
    EXPECT_THROW(c.add_state(zc(2)), elim::ChainError);
    EXPECT_THROW(c.add_state(zc(1)), elim::ChainError);
    EXPECT_EQ(c.removals(), 1u);
}

TEST(Elim, ZeroconfTerminalChain) {
    // Goal {ok} with rewards: bottom survives as a non-goal absorbing state.
    const auto loaded = model::load<Rational>(read_model("zeroconf.pm"), R"(R{"tries"}=? [ F "ok" ])");
    const auto& m = *loaded.analysis;
    dd::MtbddManager mgr(m.width());
    const auto er = explore::explore(m, mgr);
    elim::EliminateOptions opt;
    opt.debug_checks = true;
    opt.expected_states = er.states - er.goal_states;
    std::ostringstream trace;
    opt.trace = &trace;
    elim::EliminateStats st;
    auto chain = elim::explore_eliminate(m, mgr, er.pre, opt, &st);
    elim::normalize_initial(chain);
    EXPECT_EQ(chain.live_states(), 3u);
    const Slot i = chain.initial();
    const Slot ok = *chain.find(zc(6));
    const Slot bot = *chain.find(zc(7));
    EXPECT_EQ(chain.edge(i, ok), r("4375/4376"));
    EXPECT_EQ(chain.edge(i, bot), r("1/4376"));
    EXPECT_TRUE(chain.is_absorbing(ok));
    EXPECT_TRUE(chain.is_absorbing(bot));
    // Expected tries until ok or bottom; see README on the printed reference value.
    EXPECT_EQ(chain.at(i).reward_u, r("625/547"));
    EXPECT_EQ(elim::read_reach_prob(chain), r("4375/4376"));
    EXPECT_TRUE(elim::read_exp_reward(chain).infinite);
    EXPECT_LE(st.peak_states, 5u);
    EXPECT_EQ(st.states, 6u);
    EXPECT_NE(trace.str().find("eliminated (s=4)"), std::string::npos);
    EXPECT_NE(trace.str().find("875/876"), std::string::npos);
}

TEST(Elim, ZeroconfPeakStatesForLargeN) {
    for (const char* n : {"4", "100", "10000"}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = run(read_model("zeroconf.pm"), R"(P=? [ F "ok" ])", arith::BackendSpec::rational(), {{"n", n}},
                             false);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        EXPECT_LE(res.stats.peak_states, 5u) << n;
        EXPECT_LT(s, 10.0) << n;
    }
}

TEST(Elim, ReadOffTrivialCases) {
    const std::string one_goal = "dtmc\nmodule m\n  b : bool init true;\n  [] true -> (b'=b);\nendmodule\n"
                                 "rewards \"r\"\n  true : 7;\nendrewards\nlabel \"g\" = b;\n";
    EXPECT_EQ(run(one_goal, R"(P=? [ F "g" ])", arith::BackendSpec::rational()).value_string(), "1");
    EXPECT_EQ(run(one_goal, R"(R{"r"}=? [ F "g" ])", arith::BackendSpec::rational()).value_string(), "0");
    EXPECT_EQ(run(one_goal, R"(R{"r"}=? [ S ])", arith::BackendSpec::rational()).value_string(), "7");
    EXPECT_EQ(run(one_goal, "P=? [ F false ]", arith::BackendSpec::rational()).value_string(), "0");
    EXPECT_EQ(run(one_goal, R"(R{"r"}=? [ F false ])", arith::BackendSpec::rational()).value_string(), "inf");
    const std::string zc_text = read_model("zeroconf.pm");
    EXPECT_EQ(run(zc_text, R"(R{"tries"}=? [ F "ok" ])", arith::BackendSpec::rational()).value_string(), "inf");
    EXPECT_EQ(run(zc_text, R"(R{"tries"}=? [ F "ok" | "bad" ])", arith::BackendSpec::rational()).value_string(),
              "625/547");
}

TEST(Elim, LongRunAverageShapes) {
    PartialChain<Rational> c;
    const Slot s = c.add_state(zc(1));
    const Slot a = c.add_state(zc(2));
    const Slot b = c.add_state(zc(3));
    c.set_initial(s);
    c.add_edge(s, a, r("1/2"));
    c.add_edge(s, b, r("1/2"));
    c.add_edge(a, a, 1);
    c.add_edge(b, b, 1);
    c.at(a).reward_u = 4;
    c.at(a).reward_l = 2;
    c.at(b).reward_u = 6;
    c.at(b).reward_l = 3;
    EXPECT_EQ(elim::read_lra(c), 2);

    PartialChain<Rational> one;
    const Slot x = one.add_state(zc(1));
    one.set_initial(x);
    one.add_edge(x, x, 1);
    one.at(x).reward_u = 7;
    one.at(x).reward_l = 1;
    EXPECT_EQ(elim::read_lra(one), 7);

    one.at(x).reward_l = 0;
    EXPECT_THROW(elim::read_lra(one), elim::ChainError);
}

TEST(Elim, InitialResidualLoopIsRedistributed) {
    PartialChain<Rational> c;
    const Slot s = c.add_state(zc(1));
    const Slot g = c.add_state(zc(2));
    c.set_initial(s);
    c.add_edge(s, s, r("3/4"));
    c.add_edge(s, g, r("1/4"));
    c.add_edge(g, g, 1);
    c.at(s).reward_u = 1;
    c.at(g).goal = true;
    const auto v = elim::read_exp_reward(c);
    EXPECT_FALSE(v.infinite);
    EXPECT_EQ(v.value, 4);
    EXPECT_EQ(elim::read_reach_prob(c), 1);
}

TEST(Elim, ConservationOnCorpus) {
    for (const auto& inst : symblicit::support::small_corpus()) {
        for (auto backend : {arith::BackendSpec::f64(), arith::BackendSpec::rational()}) {
            EXPECT_NO_THROW(run(read_model(inst.file), inst.property, backend, inst.constants, true))
                << inst.name << " " << backend.name();
        }
    }
}

TEST(Elim, GoalStatesShareOneRecord) {
    const auto res = run(read_model("embedded.sm"), R"(R{"danger"}=? [ F "down" ])", arith::BackendSpec::f64(),
                         {{"MAX_COUNT", "16"}});
    EXPECT_LT(res.stats.peak_states, 600u);
}

TEST(Elim, LongRunRewardsRescaleInBinary64) {
    // Unscaled u and l exceed the binary64 range long before N=10000.
    for (const char* n : {"1000", "10000"}) {
        const auto f = run(read_model("cell.sm"), R"(R{"calls"}=? [ S ])", arith::BackendSpec::f64(), {{"N", n}}, false);
        const auto b =
            run(read_model("cell.sm"), R"(R{"calls"}=? [ S ])", arith::BackendSpec::bigfloat(), {{"N", n}}, false);
        EXPECT_NEAR(f.value.to_double(), b.value.to_double(), 1e-10 * b.value.to_double()) << n;
        EXPECT_NEAR(b.value.to_double(), 70.0, 0.07) << n;
    }
}
