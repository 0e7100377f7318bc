#pragma once

#include "symblicit/check/check.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace symblicit::support {

inline std::string read_model(const std::string& name) {
    std::ifstream in(std::string(SYMBLICIT_MODELS_DIR) + "/" + name);
    if (!in) {
        throw std::runtime_error("cannot open model " + name);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CorpusInstance {
    std::string name;
    std::string file;
    lang::ConstantOverrides constants;
    std::string property;
};

/// Corpus instances small enough for the explicit oracles.
inline std::vector<CorpusInstance> small_corpus() {
    return {
        {"zeroconf P", "zeroconf.pm", {}, R"(P=? [ F "ok" ])"},
        {"zeroconf E", "zeroconf.pm", {}, R"(R{"tries"}=? [ F "ok" | "bad" ])"},
        {"zeroconf E inf", "zeroconf.pm", {}, R"(R{"tries"}=? [ F "ok" ])"},
        {"zeroconf n=20", "zeroconf.pm", {{"n", "20"}}, R"(R{"tries"}=? [ F s>=22 ])"},
        {"brp 64/5", "brp.pm", {}, R"(P=? [ F s=5 ])"},
        {"brp 16/2", "brp.pm", {{"N", "16"}, {"MAX", "2"}}, R"(P=? [ F "failed" ])"},
        {"chem 10", "nacl.sm", {}, R"(R=? [ S ])"},
        {"chem 100", "nacl.sm", {{"N1", "100"}, {"N2", "100"}}, R"(R=? [ S ])"},
        {"cell 50", "cell.sm", {{"N", "50"}}, R"(R{"calls"}=? [ S ])"},
        {"embedded 2", "embedded.sm", {{"MAX_COUNT", "2"}}, R"(R{"danger"}=? [ F "down" ])"},
        {"embedded 2 P", "embedded.sm", {{"MAX_COUNT", "2"}}, R"(P=? [ F "danger" ])"},
    };
}

struct RandomModelOptions {
    int min_states = 1;
    int max_states = 200;
    int max_out = 4;
    double absorbing = 0.08;  // chance of a self-loop-only state
    double self_loop = 0.2;   // chance of an extra self-loop alternative
    double goal = 0.1;        // chance of a state being a goal
    bool include_initial_goal = false;
};

/// Single-variable DTMC text over x in [0..n-1] with fraction weights, a
/// "goal" label and a reward structure "r".
inline std::string random_dtmc(std::mt19937_64& rng, const RandomModelOptions& opt = {}) {
    std::uniform_int_distribution<int> size_dist(opt.min_states, opt.max_states);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int n = size_dist(rng);
    std::ostringstream os;
    os << "dtmc\n\nmodule random\n  x : [0.." << std::max(n - 1, 1) << "] init 0;\n\n";
    std::vector<int> goals;
    for (int k = 0; k < n; ++k) {
        if (u01(rng) < opt.goal && (k != 0 || opt.include_initial_goal)) {
            goals.push_back(k);
        }
        if (u01(rng) < opt.absorbing) {
            os << "  [] x=" << k << " -> 1 : (x'=" << k << ");\n";
            continue;
        }
        std::uniform_int_distribution<int> out_dist(1, opt.max_out);
        const int outs = out_dist(rng);
        std::vector<int> targets;
        for (int j = 0; j < outs; ++j) {
            // Mostly forward and local, sometimes anywhere.
            int t;
            if (u01(rng) < 0.7) {
                std::uniform_int_distribution<int> near(k + 1, k + 4);
                t = std::min(near(rng), n - 1);
            } else {
                std::uniform_int_distribution<int> any(0, n - 1);
                t = any(rng);
            }
            targets.push_back(t);
        }
        if (u01(rng) < opt.self_loop) {
            targets.push_back(k);
        }
        std::uniform_int_distribution<int> wdist(1, 9);
        std::vector<int> w;
        int total = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            w.push_back(wdist(rng));
            total += w.back();
        }
        os << "  [] x=" << k << " -> ";
        for (std::size_t j = 0; j < targets.size(); ++j) {
            os << (j ? " + " : "") << w[j] << "/" << total << " : (x'=" << targets[j] << ")";
        }
        os << ";\n";
    }
    os << "endmodule\n\nrewards \"r\"\n";
    std::uniform_int_distribution<int> rdist(0, 6);
    for (int k = 0; k < n; ++k) {
        const int r = rdist(rng);
        if (r > 0) {
            os << "  x=" << k << " : " << r << (r % 2 ? "/2" : "") << ";\n";
        }
    }
    os << "endrewards\n\nlabel \"goal\" = ";
    if (goals.empty()) {
        os << "false";
    }
    for (std::size_t j = 0; j < goals.size(); ++j) {
        os << (j ? " | " : "") << "x=" << goals[j];
    }
    os << ";\n";
    return os.str();
}

/// Fully explored PartialChain with the same states, edges and rewards.
template <class Num>
elim::PartialChain<Num> to_partial(const oracles::ExplicitChain<Num>& c) {
    elim::PartialChain<Num> p;
    for (std::size_t s = 0; s < c.size(); ++s) {
        p.add_state(c.codes[s]);
    }
    for (std::size_t s = 0; s < c.size(); ++s) {
        auto& r = p.at(static_cast<elim::Slot>(s));
        r.reward_u = c.reward_u[s];
        r.reward_l = c.reward_l[s];
        r.goal = c.goal[s];
        r.done = true;
        for (const auto& e : c.rows[s]) {
            p.add_edge(static_cast<elim::Slot>(s), e.to, e.p);
        }
    }
    p.set_initial(0);
    return p;
}

/// Live part of a PartialChain as an ExplicitChain, initial state first.
template <class Num>
oracles::ExplicitChain<Num> to_explicit(const elim::PartialChain<Num>& p) {
    oracles::ExplicitChain<Num> c;
    std::vector<elim::Slot> slots{p.initial()};
    p.for_each_live([&](elim::Slot s, const auto&) {
        if (s != p.initial()) {
            slots.push_back(s);
        }
    });
    std::unordered_map<elim::Slot, oracles::StateIndex> idx;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        idx[slots[i]] = static_cast<oracles::StateIndex>(i);
        c.codes.push_back(p.at(slots[i]).code);
        c.index[p.at(slots[i]).code] = static_cast<oracles::StateIndex>(i);
    }
    for (elim::Slot s : slots) {
        const auto& r = p.at(s);
        std::vector<typename oracles::ExplicitChain<Num>::Entry> row;
        for (const auto& e : r.out) {
            row.push_back({idx.at(e.to), e.p});
        }
        c.rows.push_back(std::move(row));
        c.reward_u.push_back(r.reward_u);
        c.reward_l.push_back(r.reward_l);
        c.goal.push_back(r.goal);
    }
    return c;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0 ? 0 : std::fabs(a - b) / scale;
}

} // namespace symblicit::support
