#include "lobsim/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace lobsim {

namespace {

void check_keys(const YAML::Node& node, std::string_view section, std::initializer_list<std::string_view> allowed) {
    if (!node) return;
    if (!node.IsMap()) throw ConfigError(std::string(section) + ": expected a mapping");
    const std::set<std::string_view> ok(allowed);
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.contains(key)) throw ConfigError(std::string(section) + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, std::string_view section) {
    const auto v = node[key];
    if (!v) return;
    try {
        out = v.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(std::string(section) + "." + key + ": bad value");
    }
}

void read_schedule(const YAML::Node& node, Schedule& s, std::string_view section) {
    if (!node) return;
    check_keys(node, section, {"limits", "low", "high", "values", "interval", "mode"});
    std::string kind;
    read(node, "limits", kind, section);
    if (!kind.empty()) {
        if (kind == "stepped") s.limits.kind = LimitSchedule::Kind::stepped;
        else if (kind == "uniform") s.limits.kind = LimitSchedule::Kind::uniform;
        else if (kind == "fixed") s.limits.kind = LimitSchedule::Kind::fixed;
        else throw ConfigError(std::string(section) + ".limits: expected stepped, uniform or fixed");
    }
    read(node, "low", s.limits.low, section);
    read(node, "high", s.limits.high, section);
    read(node, "values", s.limits.values, section);
    read(node, "interval", s.interval, section);
    std::string mode;
    read(node, "mode", mode, section);
    if (!mode.empty()) {
        if (mode == "periodic") s.mode = ReplenishMode::periodic;
        else if (mode == "drip") s.mode = ReplenishMode::drip;
        else throw ConfigError(std::string(section) + ".mode: expected periodic or drip");
    }
}

void read_session(const YAML::Node& node, SessionConfig& c) {
    if (!node) return;
    check_keys(node, "session",
               {"duration", "poll_interval", "price_min", "price_max", "demand", "supply", "blocks"});
    read(node, "duration", c.duration, "session");
    read(node, "poll_interval", c.poll_interval, "session");
    read(node, "price_min", c.range.min.ticks, "session");
    read(node, "price_max", c.range.max.ticks, "session");
    read_schedule(node["demand"], c.demand, "session.demand");
    read_schedule(node["supply"], c.supply, "session.supply");
    if (const auto blocks = node["blocks"]) {
        if (!blocks.IsSequence()) throw ConfigError("session.blocks: expected a list");
        c.blocks.clear();
        for (const auto& b : blocks) {
            check_keys(b, "session.blocks[]", {"time", "side", "level_offset", "quantity"});
            BlockEvent e;
            read(b, "time", e.time, "block");
            std::string side;
            read(b, "side", side, "block");
            if (!side.empty()) {
                try {
                    e.side = parse_side(side);
                } catch (const std::exception&) {
                    throw ConfigError("block.side: expected bid or ask");
                }
            }
            read(b, "level_offset", e.level_offset, "block");
            read(b, "quantity", e.quantity, "block");
            c.blocks.push_back(e);
        }
    }
}

void read_strategies(const YAML::Node& node, StrategyParams& p) {
    if (!node) return;
    check_keys(node, "strategies", {"ishv", "zip", "aa"});
    if (const auto n = node["ishv"]) {
        check_keys(n, "strategies.ishv", {"C", "M", "threshold"});
        read(n, "C", p.ishv.C, "ishv");
        read(n, "M", p.ishv.M, "ishv");
        read(n, "threshold", p.ishv.threshold, "ishv");
    }
    if (const auto n = node["zip"]) {
        check_keys(n, "strategies.zip",
                   {"beta_min", "beta_max", "momentum_min", "momentum_max", "margin_min", "margin_max", "ca", "cr"});
        auto& z = p.zip;
        read(n, "beta_min", z.beta_min, "zip");
        read(n, "beta_max", z.beta_max, "zip");
        read(n, "momentum_min", z.momentum_min, "zip");
        read(n, "momentum_max", z.momentum_max, "zip");
        read(n, "margin_min", z.margin_min, "zip");
        read(n, "margin_max", z.margin_max, "zip");
        read(n, "ca", z.ca, "zip");
        read(n, "cr", z.cr, "zip");
    }
    if (const auto n = node["aa"]) {
        check_keys(n, "strategies.aa",
                   {"lambda_r", "lambda_a", "beta1_min", "beta1_max", "beta2_min", "beta2_max", "eta", "gamma",
                    "theta_init", "theta_min", "theta_max", "window", "rho", "initial_aggressiveness_max",
                    "initial_margin"});
        auto& a = p.aa;
        read(n, "lambda_r", a.lambda_r, "aa");
        read(n, "lambda_a", a.lambda_a, "aa");
        read(n, "beta1_min", a.beta1_min, "aa");
        read(n, "beta1_max", a.beta1_max, "aa");
        read(n, "beta2_min", a.beta2_min, "aa");
        read(n, "beta2_max", a.beta2_max, "aa");
        read(n, "eta", a.eta, "aa");
        read(n, "gamma", a.gamma, "aa");
        read(n, "theta_init", a.theta_init, "aa");
        read(n, "theta_min", a.theta_min, "aa");
        read(n, "theta_max", a.theta_max, "aa");
        read(n, "window", a.window, "aa");
        read(n, "rho", a.rho, "aa");
        read(n, "initial_aggressiveness_max", a.initial_aggressiveness_max, "aa");
        read(n, "initial_margin", a.initial_margin, "aa");
    }
}

void read_impact(const YAML::Node& node, ImpactParams& p) {
    if (!node) return;
    check_keys(node, "impact", {"c", "alpha", "levels", "window", "beta"});
    read(node, "c", p.imbalance.c, "impact");
    read(node, "alpha", p.imbalance.alpha, "impact");
    read(node, "levels", p.imbalance.levels, "impact");
    read(node, "window", p.imbalance.window, "impact");
    read(node, "beta", p.beta, "impact");
}

}  // namespace

AbDesign parse_design(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    AbDesign d;
    if (root.IsNull()) {
        d.validate();
        return d;
    }
    check_keys(root, "config", {"experiment", "session", "strategies", "impact"});
    if (const auto e = root["experiment"]) {
        check_keys(e, "experiment", {"type_a", "type_b", "n", "trials", "seed", "parallel"});
        read(e, "type_a", d.type_a, "experiment");
        read(e, "type_b", d.type_b, "experiment");
        read(e, "n", d.n, "experiment");
        read(e, "trials", d.trials, "experiment");
        read(e, "seed", d.master_seed, "experiment");
        read(e, "parallel", d.parallel, "experiment");
    }
    read_session(root["session"], d.base);
    read_strategies(root["strategies"], d.base.params);
    read_impact(root["impact"], d.base.params.impact);
    d.validate();
    return d;
}

AbDesign load_design(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_design(ss.str());
}

}  // namespace lobsim
