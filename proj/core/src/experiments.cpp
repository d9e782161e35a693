#include "lobsim/experiments.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "lobsim/csv.h"

namespace lobsim {

void AbDesign::validate() const {
    if (!is_strategy(type_a)) throw ConfigError("experiment: unknown strategy '" + type_a + "'");
    if (!is_strategy(type_b)) throw ConfigError("experiment: unknown strategy '" + type_b + "'");
    if (n < 1) throw ConfigError("experiment: n must be >= 1");
    if (trials < 1) throw ConfigError("experiment: trials must be >= 1");
    if (parallel < 1) throw ConfigError("experiment: parallel must be >= 1");
    trial_config(0).validate();
}

SessionConfig AbDesign::trial_config(int trial) const {
    SessionConfig c = base;
    c.roster = {
        {type_a, n, Role::buyer},
        {type_b, n, Role::buyer},
        {type_a, n, Role::seller},
        {type_b, n, Role::seller},
    };
    c.seed = derive_seed(master_seed, static_cast<std::uint64_t>(trial));
    return c;
}

TrialResult summarize_trial(int trial, std::uint64_t seed, const SessionResult& r, const AbDesign& d) {
    double sum[2] = {0.0, 0.0};
    int count[2] = {0, 0};
    double role_sum[2] = {0.0, 0.0};
    int role_count[2] = {0, 0};
    // Roster order is A buyers, B buyers, A sellers, B sellers.
    for (std::size_t i = 0; i < r.traders.size(); ++i) {
        const auto& t = r.traders[i];
        const int type = (i / static_cast<std::size_t>(d.n)) % 2;
        sum[type] += t.profit;
        ++count[type];
        const int role = t.role == Role::buyer ? 0 : 1;
        role_sum[role] += t.profit;
        ++role_count[role];
    }
    TrialResult out;
    out.trial = trial;
    out.seed = seed;
    out.mean_a = sum[0] / count[0];
    out.mean_b = sum[1] / count[1];
    out.diff = out.mean_a - out.mean_b;
    out.buyers_mean = role_sum[0] / role_count[0];
    out.sellers_mean = role_sum[1] / role_count[1];
    return out;
}

std::vector<TrialResult> run_ab(const AbDesign& design) {
    design.validate();
    std::vector<TrialResult> results(static_cast<std::size_t>(design.trials));
    std::atomic<int> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    int failed_trial = -1;

    auto worker = [&] {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= design.trials) return;
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            try {
                const auto cfg = design.trial_config(k);
                results[static_cast<std::size_t>(k)] = summarize_trial(k, cfg.seed, run_session(cfg), design);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure || k < failed_trial) {
                    failure = std::current_exception();
                    failed_trial = k;
                }
            }
        }
    };

    const int threads = std::min(design.parallel, design.trials);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            throw std::runtime_error("trial " + std::to_string(failed_trial) + " failed: " + e.what());
        }
    }
    return results;
}

Summary summarize(const std::vector<TrialResult>& results, std::string type_a, std::string type_b) {
    if (results.size() < 2) throw std::invalid_argument("summarize: need at least two trials");
    std::vector<double> a, b, d;
    for (const auto& r : results) {
        a.push_back(r.mean_a);
        b.push_back(r.mean_b);
        d.push_back(r.diff);
    }
    Summary s;
    s.type_a = std::move(type_a);
    s.type_b = std::move(type_b);
    s.box_a = box_summary(a);
    s.box_b = box_summary(b);
    s.box_diff = box_summary(d);
    s.ci_a = mean_ci(a);
    s.ci_b = mean_ci(b);
    s.ci_diff = mean_ci(d);
    s.test = mann_whitney_u(a, b);
    return s;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& results) {
    out << "trial,seed,mean_a,mean_b,diff,buyers_mean,sellers_mean\n";
    for (const auto& r : results) {
        out << r.trial << ',' << r.seed << ',' << format_double(r.mean_a) << ',' << format_double(r.mean_b) << ','
            << format_double(r.diff) << ',' << format_double(r.buyers_mean) << ','
            << format_double(r.sellers_mean) << '\n';
    }
}

std::vector<TrialResult> read_trials_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "trial,seed,mean_a,mean_b,diff,buyers_mean,sellers_mean") {
        throw std::runtime_error("trials.csv: unexpected header");
    }
    std::vector<TrialResult> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 7) throw std::runtime_error("trials.csv: bad row '" + line + "'");
        TrialResult r;
        r.trial = static_cast<int>(parse_int(f[0]));
        r.seed = std::stoull(std::string(f[1]));
        r.mean_a = parse_double(f[2]);
        r.mean_b = parse_double(f[3]);
        r.diff = parse_double(f[4]);
        r.buyers_mean = parse_double(f[5]);
        r.sellers_mean = parse_double(f[6]);
        out.push_back(r);
    }
    return out;
}

void write_summary_csv(std::ostream& out, const Summary& s) {
    auto row = [&](std::string_view k, double v) { out << k << ',' << format_double(v) << '\n'; };
    out << "key,value\n";
    out << "type_a," << s.type_a << '\n';
    out << "type_b," << s.type_b << '\n';
    row("trials", static_cast<double>(s.box_diff.n));
    row("mean_a", s.ci_a.mean);
    row("ci_a_low", s.ci_a.low);
    row("ci_a_high", s.ci_a.high);
    row("mean_b", s.ci_b.mean);
    row("ci_b_low", s.ci_b.low);
    row("ci_b_high", s.ci_b.high);
    row("mean_diff", s.ci_diff.mean);
    row("ci_diff_low", s.ci_diff.low);
    row("ci_diff_high", s.ci_diff.high);
    row("median_diff", s.box_diff.median);
    row("u", s.test.u);
    row("p", s.test.p);
    out << "p_method," << (s.test.exact ? "exact" : "normal") << '\n';
}

void write_boxdata_csv(std::ostream& out, const Summary& s) {
    out << "series,label,n,whisker_low,q1,median,q3,whisker_high,outliers\n";
    auto row = [&](std::string_view series, std::string_view label, const BoxSummary& b) {
        out << series << ',' << label << ',' << b.n << ',' << format_double(b.whisker_low) << ','
            << format_double(b.q1) << ',' << format_double(b.median) << ',' << format_double(b.q3) << ','
            << format_double(b.whisker_high) << ',';
        for (std::size_t i = 0; i < b.outliers.size(); ++i) {
            if (i) out << ';';
            out << format_double(b.outliers[i]);
        }
        out << '\n';
    };
    row("a", s.type_a, s.box_a);
    row("b", s.type_b, s.box_b);
    row("diff", s.type_a + "-" + s.type_b, s.box_diff);
}

void emit(const std::filesystem::path& dir, const std::vector<TrialResult>& results, const Summary& s) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    auto write = [&](const char* name, auto&& fn) {
        const auto path = dir / name;
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        fn(f);
        if (!f) throw std::runtime_error("write failed: " + path.string());
    };
    write("trials.csv", [&](std::ostream& o) { write_trials_csv(o, results); });
    write("summary.csv", [&](std::ostream& o) { write_summary_csv(o, s); });
    write("boxdata.csv", [&](std::ostream& o) { write_boxdata_csv(o, s); });
}

}  // namespace lobsim
