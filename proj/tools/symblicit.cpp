// Command-line driver: `symblicit check` and `symblicit bench`.

#include "symblicit/check/bench.hpp"
#include "symblicit/check/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace symblicit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kModel = 2, kResource = 3, kDeviation = 4 };

struct CheckArgs {
    std::string model;
    std::string prop;
    std::string prop_file;
    std::vector<std::string> consts;
    std::string engine = "symblicit";
    std::string arith = "f64";
    double epsilon = 1e-10;
    std::string stats_json;
    bool trace = false;
    bool debug_checks = false;
    std::uint64_t max_states = std::uint64_t{1} << 40;
    std::size_t dd_node_budget = std::size_t{1} << 22;
};

lang::ConstantOverrides parse_consts(const std::vector<std::string>& items) {
    lang::ConstantOverrides out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw check::UsageError("--const expects NAME=VALUE, got '" + item + "'");
        }
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

int run_check(const CheckArgs& a) {
    check::CheckOptions opt;
    std::string prop;
    std::string model_text;
    lang::ConstantOverrides consts;
    try {
        opt.engine = check::parse_engine(a.engine);
        opt.arith = arith::BackendSpec::parse(a.arith);
        if (a.prop.empty() == a.prop_file.empty()) {
            throw check::UsageError("give exactly one of --prop and --prop-file");
        }
        prop = a.prop.empty() ? check::read_file(a.prop_file) : a.prop;
        consts = parse_consts(a.consts);
        model_text = check::read_file(a.model);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    opt.epsilon = a.epsilon;
    opt.max_states = a.max_states;
    opt.dd_node_budget = a.dd_node_budget;
    opt.debug_checks = a.debug_checks;
    opt.trace = a.trace ? &std::cout : nullptr;
    opt.diagnostics = &std::cerr;
    check::CheckResult res;
    try {
        res = check::run_check(model_text, prop, consts, opt);
    } catch (const check::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const lang::ModelError& e) {
        std::cerr << a.model << ":" << e.what() << "\n";
        return kModel;
    } catch (const explore::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const oracles::ConvergenceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource limit: out of memory\n";
        return kResource;
    } catch (const arith::ArithError& e) {
        std::cerr << "arithmetic error: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kModel;
    }
    check::print_human(std::cout, res);
    if (!a.stats_json.empty()) {
        std::ofstream out(a.stats_json);
        if (!out) {
            std::cerr << "error: cannot write " << a.stats_json << "\n";
            return kUsage;
        }
        out << check::to_json({a.model, consts, prop}, res).dump() << "\n";
    }
    return kOk;
}

int run_bench(const std::string& manifest) {
    std::vector<check::BenchInstance> instances;
    try {
        instances = check::parse_manifest(manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    const auto rows = check::run_bench(instances, &std::cerr);
    check::print_bench(std::cout, rows);
    for (const auto& r : rows) {
        if (r.deviation) {
            return kDeviation;
        }
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symblicit probabilistic model checker"};
    app.require_subcommand(1);

    CheckArgs a;
    auto* chk = app.add_subcommand("check", "Check one property of a model");
    chk->add_option("model", a.model, "Model file")->required();
    chk->add_option("--prop", a.prop, "Property text");
    chk->add_option("--prop-file", a.prop_file, "File holding the property");
    chk->add_option("--const", a.consts, "Constant override NAME=VALUE (repeatable)");
    chk->add_option("--engine", a.engine, "symblicit | vi | linear")->capture_default_str();
    chk->add_option("--arith", a.arith, "f64 | rational | bigfloat[:bits]")->capture_default_str();
    chk->add_option("--epsilon", a.epsilon, "Value iteration stopping threshold")->capture_default_str();
    chk->add_option("--stats-json", a.stats_json, "Write a JSON record of the run");
    chk->add_flag("--trace", a.trace, "Print the partial chain after each elimination");
    chk->add_flag("--debug-checks", a.debug_checks, "Check conservation and bookkeeping after each elimination");
    chk->add_option("--max-states", a.max_states, "Reachable state limit")->capture_default_str();
    chk->add_option("--dd-node-budget", a.dd_node_budget, "Diagram arena size that triggers collection")
        ->capture_default_str();

    std::string manifest;
    auto* bench = app.add_subcommand("bench", "Run a benchmark manifest");
    bench->add_option("manifest", manifest, "Manifest JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    if (chk->parsed()) {
        return run_check(a);
    }
    return run_bench(manifest);
}
