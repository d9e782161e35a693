#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lobsim/session.h"
#include "lobsim/stats.h"

namespace lobsim {

/// Balanced two-strategy market: N buyers and N sellers of each type per trial.
struct AbDesign {
    std::string type_a = "ZZIZIP";
    std::string type_b = "ZIP";
    int n = 10;
    int trials = 100;
    std::uint64_t master_seed = 1;
    int parallel = 1;
    /// Template for every trial; its roster and seed are overwritten. Carries one
    /// default demand-side block.
    SessionConfig base = default_base();

    static SessionConfig default_base() {
        SessionConfig c;
        c.blocks = {BlockEvent{}};
        return c;
    }

    void validate() const;
    /// Session config of one trial.
    SessionConfig trial_config(int trial) const;
};

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    double mean_a = 0.0;  // mean profit per type-A trader
    double mean_b = 0.0;
    double diff = 0.0;  // mean_a - mean_b
    double buyers_mean = 0.0;  // all traders of the role, both types
    double sellers_mean = 0.0;

    friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

TrialResult summarize_trial(int trial, std::uint64_t seed, const SessionResult& r, const AbDesign& d);

/// Runs every trial on up to `design.parallel` threads. Results are ordered by trial
/// and do not depend on the thread count. A failing session aborts the run with an
/// error naming the trial.
std::vector<TrialResult> run_ab(const AbDesign& design);

struct Summary {
    std::string type_a;
    std::string type_b;
    BoxSummary box_a;
    BoxSummary box_b;
    BoxSummary box_diff;
    MeanCi ci_a;
    MeanCi ci_b;
    MeanCi ci_diff;
    MannWhitney test;  // mean_a sample against mean_b sample
};

/// Throws std::invalid_argument with fewer than two results.
Summary summarize(const std::vector<TrialResult>& results, std::string type_a = "A", std::string type_b = "B");

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& results);
std::vector<TrialResult> read_trials_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const Summary& s);
void write_boxdata_csv(std::ostream& out, const Summary& s);

/// Writes trials.csv, summary.csv and boxdata.csv into `dir`, creating it if needed.
/// Throws std::runtime_error when a file cannot be written.
void emit(const std::filesystem::path& dir, const std::vector<TrialResult>& results, const Summary& s);

}  // namespace lobsim
