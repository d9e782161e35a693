#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "golden.h"
#include "lobsim/config.h"
#include "lobsim/csv.h"
#include "lobsim/experiments.h"
#include "lobsim/imbalance.h"

namespace {

using namespace lobsim;

void print_summary(std::ostream& out, const Summary& s) {
    out << s.type_a << " mean " << s.ci_a.mean << " [" << s.ci_a.low << ", "
        << s.ci_a.high << "]\n";
    out << s.type_b << " mean " << s.ci_b.mean << " [" << s.ci_b.low << ", "
        << s.ci_b.high << "]\n";
    out << "diff mean " << s.ci_diff.mean << " [" << s.ci_diff.low << ", "
        << s.ci_diff.high << "], median " << s.box_diff.median << '\n';
    out << "U " << s.test.u << ", p " << s.test.p << " ("
        << (s.test.exact ? "exact" : "normal") << ")\n";
}

int run_golden() {
    int failures = 0;
    for (const auto& c : tools::golden_cases()) {
        const auto flows = level_flows(c.before, c.after, 3);
        bool ok = true;
        std::cout << c.name << ": (";
        for (int m = 0; m < 3; ++m) {
            std::cout << (m ? "," : "") << flows[m].e;
            ok = ok && flows[m].e == c.expected[m];
        }
        std::cout << ") " << (ok ? "PASS" : "FAIL") << '\n';
        failures += ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limit order book market simulator with imbalance-aware traders"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> parallel;
    auto* run = app.add_subcommand("run", "Run an A:B experiment");
    run->add_option("--config", config_path, "Experiment YAML")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--trials", trials, "Number of trials");
    run->add_option("--parallel", parallel, "Worker threads");

    std::string in_dir;
    auto* stats = app.add_subcommand("stats", "Summarize an existing trials.csv");
    stats->add_option("--in", in_dir, "Directory holding trials.csv")->required();

    auto* golden = app.add_subcommand("golden", "Check the reference MLOFI transitions");

    std::string trace_config;
    std::string trace_out;
    int trace_trial = 0;
    auto* trace = app.add_subcommand("trace", "Run one trial and write its event log, imbalance trace and profits");
    trace->add_option("--config", trace_config, "Experiment YAML")->required()->check(CLI::ExistingFile);
    trace->add_option("--out", trace_out, "Output directory")->required();
    trace->add_option("--trial", trace_trial, "Trial index");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto design = load_design(config_path);
            if (seed) design.master_seed = *seed;
            if (trials) design.trials = *trials;
            if (parallel) design.parallel = *parallel;
            const auto results = run_ab(design);
            const auto summary = summarize(results, design.type_a, design.type_b);
            emit(out_dir, results, summary);
            print_summary(std::cout, summary);
        } else if (*stats) {
            std::ifstream f(std::filesystem::path(in_dir) / "trials.csv");
            if (!f) throw std::runtime_error("cannot read trials.csv in " + in_dir);
            const auto results = read_trials_csv(f);
            std::string type_a = "A";
            std::string type_b = "B";
            std::ifstream sf(std::filesystem::path(in_dir) / "summary.csv");
            for (std::string line; std::getline(sf, line);) {
                if (line.rfind("type_a,", 0) == 0) type_a = line.substr(7);
                if (line.rfind("type_b,", 0) == 0) type_b = line.substr(7);
            }
            print_summary(std::cout, summarize(results, type_a, type_b));
        } else if (*golden) {
            return run_golden();
        } else if (*trace) {
            const auto design = load_design(trace_config);
            auto cfg = design.trial_config(trace_trial);
            cfg.record_events = true;
            const auto result = run_session(cfg);
            const std::filesystem::path dir(trace_out);
            std::filesystem::create_directories(dir);
            std::ofstream events(dir / "events.csv");
            write_event_csv(events, result);
            std::ofstream profits(dir / "profits.csv");
            write_profit_csv(profits, result);
            std::ofstream tape(dir / "tape.csv");
            write_tape_csv(tape, result.tape);
            std::ofstream imb(dir / "imbalance.csv");
            ImbalanceTracer tracer(imb, cfg.params.impact.imbalance);
            for (std::size_t i = 1; i < result.snapshots.size(); ++i) {
                tracer.observe(result.snapshots[i - 1], result.snapshots[i]);
            }
            if (!events || !profits || !tape || !imb) throw std::runtime_error("cannot write trace output");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
