#include "symblicit/check/bench.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SYMBLICIT_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {-1, {}};
    }
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string model(const char* name) { return std::string(SYMBLICIT_MODELS_DIR) + "/" + name; }

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("symblicit_cli_" + name); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

} // namespace

TEST(Cli, ZeroconfRational) {
    const auto r = run("check " + model("zeroconf.pm") + " --prop 'P=? [ F \"ok\" ]' --engine symblicit --arith rational");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "value = 4375/4376");
    EXPECT_NE(r.out.find("peak states:"), std::string::npos);
}

TEST(Cli, ValueIterationEngine) {
    const auto r = run("check " + model("zeroconf.pm") + " --prop 'P=? [ F \"ok\" ]' --engine vi --epsilon 1e-10");
    ASSERT_EQ(r.code, 0);
    const double v = std::stod(first_line(r.out).substr(8));
    EXPECT_NEAR(v, 4375.0 / 4376.0, 1e-9);
}

TEST(Cli, BrpDefault) {
    const auto r = run("check " + model("brp.pm") + " --prop 'P=? [ F s=5 ]'");
    ASSERT_EQ(r.code, 0);
    const double v = std::stod(first_line(r.out).substr(8));
    EXPECT_NEAR(v, 4.48e-08, 4.48e-10);
}

TEST(Cli, ConstantsAndPropFile) {
    const auto pf = temp_file("prop.txt");
    std::ofstream(pf) << "R{\"tries\"}=? [ F \"ok\" | \"bad\" ]\n";
    const auto r = run("check " + model("zeroconf.pm") + " --prop-file " + pf.string() +
                       " --const n=4 --const p=0.2 --arith rational --engine linear");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "value = 625/547");
    fs::remove(pf);
}

TEST(Cli, ExitCodes) {
    const std::string zc = model("zeroconf.pm");
    // Usage errors.
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("check " + zc).code, 1);
    EXPECT_EQ(run("check " + zc + " --prop 'P=? [ F \"ok\" ]' --engine magic").code, 1);
    EXPECT_EQ(run("check " + zc + " --prop 'P=? [ F \"ok\" ]' --arith float").code, 1);
    EXPECT_EQ(run("check " + zc + " --prop 'P=? [ F \"ok\" ]' --const n").code, 1);
    EXPECT_EQ(run("check " + zc + " --prop 'P=? [ F \"ok\" ]' --engine vi --arith rational").code, 1);
    EXPECT_EQ(run("check " + zc + " --prop 'R=? [ S ]' --engine vi").code, 1);
    // Model and property errors.
    EXPECT_EQ(run("check " + zc + " --prop 'P=? [ F \"nope\" ]'").code, 2);
    EXPECT_EQ(run("check " + zc + " --prop 'P=? [ F \"ok\" ]' --const undefined_name=3").code, 2);
    const auto bad = temp_file("bad.pm");
    std::ofstream(bad) << "dtmc\nmodule m\n  x : [0..1] init 0;\n  [] x=0 -> 0.5 : (x'=1);\nendmodule\n";
    EXPECT_EQ(run("check " + bad.string() + " --prop 'P=? [ F x=1 ]'").code, 2);
    fs::remove(bad);
    // Resource cap.
    EXPECT_EQ(run("check " + model("brp.pm") + " --prop 'P=? [ F s=5 ]' --max-states 100").code, 3);
    EXPECT_EQ(run("check " + model("brp.pm") + " --prop 'P=? [ F s=5 ]' --max-states 100 --engine linear").code, 3);
}

TEST(Cli, StatsJsonKeysAndStability) {
    const auto a = temp_file("a.json");
    const auto b = temp_file("b.json");
    const std::string args =
        "check " + model("zeroconf.pm") + " --prop 'P=? [ F \"ok\" ]' --arith rational --const n=6 --stats-json ";
    ASSERT_EQ(run(args + a.string()).code, 0);
    ASSERT_EQ(run(args + b.string()).code, 0);
    auto ja = read_json(a);
    auto jb = read_json(b);
    std::vector<std::string> keys;
    for (auto it = ja.begin(); it != ja.end(); ++it) {
        keys.push_back(it.key());
    }
    std::vector<std::string> want{"arith",         "constants",        "dd_nodes_peak",     "engine",
                                  "infinite",      "model",            "peak_mem_mb",       "peak_states",
                                  "peak_transitions", "property",      "states_total",      "time_eliminate_ms",
                                  "time_explore_ms",  "value"};
    std::sort(keys.begin(), keys.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(keys, want);
    EXPECT_EQ(ja["value"], "109375/109376");
    EXPECT_EQ(ja["infinite"], false);
    EXPECT_EQ(ja["constants"]["n"], "6");
    EXPECT_EQ(ja["engine"], "symblicit");
    EXPECT_EQ(ja["arith"], "rational");
    for (const char* k : {"time_explore_ms", "time_eliminate_ms", "peak_mem_mb"}) {
        ja.erase(k);
        jb.erase(k);
    }
    EXPECT_EQ(ja.dump(), jb.dump());
    fs::remove(a);
    fs::remove(b);
}

TEST(Cli, InfiniteValue) {
    const auto r = run("check " + model("zeroconf.pm") + " --prop 'R{\"tries\"}=? [ F \"ok\" ]'");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "value = inf");
}

TEST(Cli, TraceOutput) {
    const auto r = run("check " + model("zeroconf.pm") + " --prop 'P=? [ F \"ok\" ]' --arith rational --trace");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("eliminated (s=5)"), std::string::npos);
    EXPECT_NE(r.out.find("1/876"), std::string::npos);
}

TEST(Cli, BenchEmptyManifest) {
    const auto m = temp_file("empty.json");
    std::ofstream(m) << R"({"instances": []})";
    const auto r = run("bench " + m.string());
    EXPECT_EQ(r.code, 0);
    fs::remove(m);
}

TEST(Cli, BenchRowsAndDeviation) {
    const auto m = temp_file("bench.json");
    std::ofstream(m) << R"({"instances": [
      {"name": "zc", "model": ")" << model("zeroconf.pm") << R"(", "property": "P=? [ F \"ok\" ]",
       "arith": "rational", "expected": "4375/4376", "tolerance": 0},
      {"name": "zc-wrong", "model": ")" << model("zeroconf.pm") << R"(", "property": "P=? [ F \"ok\" ]",
       "expected": "0.5", "tolerance": 0.01},
      {"name": "broken", "model": ")" << model("zeroconf.pm") << R"(", "property": "P=? [ F \"nope\" ]",
       "expected": "1", "tolerance": 0.01}
    ]})";
    const auto r = run("bench " + m.string());
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.out.find("zc-wrong"), std::string::npos);
    EXPECT_NE(r.out.find("broken"), std::string::npos);
    fs::remove(m);
}

TEST(Cli, BenchConstants) {
    const auto m = temp_file("consts.json");
    std::ofstream(m) << R"({"instances": [
      {"name": "zc6", "model": ")" << model("zeroconf.pm") << R"(", "constants": {"n": 6},
       "property": "P=? [ F \"ok\" ]", "arith": "rational", "expected": "109375/109376"}
    ]})";
    const auto r = run("bench " + m.string());
    EXPECT_EQ(r.code, 0) << r.out;
    fs::remove(m);
}

TEST(Cli, BundledManifestParses) {
    const auto rows = symblicit::check::parse_manifest(fs::path(SYMBLICIT_MODELS_DIR) / "manifest.json");
    ASSERT_GE(rows.size(), 10u);
    for (const auto& b : rows) {
        EXPECT_TRUE(fs::exists(b.model)) << b.name;
        EXPECT_FALSE(b.expected.empty() && b.name != "zeroconf n=10000") << b.name;
    }
    EXPECT_EQ(rows[4].constants.at("N"), "512");
    EXPECT_EQ(rows[4].arith.name(), "bigfloat:256");
}
