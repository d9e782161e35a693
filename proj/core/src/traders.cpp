#include "lobsim/traders.h"

#include <algorithm>
#include <array>
#include <cmath>

namespace lobsim {

void IshvParams::validate() const {
    if (!(C >= 1.0)) throw ConfigError("ishv: C must be >= 1");
    if (!(M >= 0.0)) throw ConfigError("ishv: M must be >= 0");
    if (!(threshold >= 0.0)) throw ConfigError("ishv: threshold must be >= 0");
}

void ImpactParams::validate() const {
    imbalance.validate();
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("impact: beta must be in [0, 1]");
}

void StrategyParams::validate() const {
    ishv.validate();
    zip.validate();
    aa.validate();
    impact.validate();
}

Price shvr_quote(Role role, Price limit, const LobSnapshot& s) {
    if (role == Role::buyer) {
        auto b = best_bid(s);
        if (!b) return limit;
        return std::min(b->price + 1, limit);
    }
    auto a = best_ask(s);
    if (!a) return limit;
    return std::max(a->price - 1, limit);
}

Price ishv_quote(Role role, Price limit, const LobSnapshot& s, const IshvParams& p) {
    const auto dm = delta_m(s);
    if (!dm) return limit;
    const bool adverse = role == Role::buyer ? *dm > p.threshold : *dm < -p.threshold;
    if (!adverse) return shvr_quote(role, limit, s);
    const auto shave = static_cast<std::int32_t>(std::ceil(p.C + p.M * std::abs(*dm) - 1e-9));
    if (role == Role::buyer) return std::min(best_bid(s)->price + shave, limit);
    return std::max(best_ask(s)->price - shave, limit);
}

double impact_adjust(double underlying, const LobSnapshot& s, double offset, double beta) {
    const double benchmark = mid_price(s).value_or(underlying);
    const double target = benchmark + offset;
    return underlying + beta * (target - underlying);
}

Price legal_price(Role role, Price limit, Price p, PriceRange range) {
    if (role == Role::buyer && p > limit) p = limit;
    if (role == Role::seller && p < limit) p = limit;
    return range.clamp(p);
}

void Trader::assign(Price limit) {
    limit_ = limit;
    on_assign(limit);
}

void Trader::retire_assignment() {
    limit_.reset();
    on_retire();
}

std::optional<Price> Trader::quote(const LobSnapshot& s) {
    if (!limit_) return std::nullopt;
    auto q = compute_quote(s);
    if (!q) return std::nullopt;
    return legal_price(role_, *limit_, *q, range_);
}

std::optional<Price> ShvrTrader::compute_quote(const LobSnapshot& s) {
    return shvr_quote(role(), *limit(), s);
}

std::optional<Price> IshvTrader::compute_quote(const LobSnapshot& s) {
    return ishv_quote(role(), *limit(), s, params_);
}

namespace {

bool own_resting_shout(const MarketUpdate& u, TraderId self) {
    return u.event.trades.empty() && u.event.order && u.event.order->trader == self;
}

}  // namespace

ZipTrader::ZipTrader(TraderId id, Role role, PriceRange range, const ZipParams& p, Rng rng)
    : Trader(id, role, range), engine_(role, p, std::move(rng)) {}

std::optional<Price> ZipTrader::compute_quote(const LobSnapshot&) { return engine_.quote(); }

void ZipTrader::observe(const MarketUpdate& update) {
    if (own_resting_shout(update, id())) return;
    engine_.respond(update.event.snapshot, update.event);
}

AaTrader::AaTrader(TraderId id, Role role, PriceRange range, const AaParams& p, Rng rng)
    : Trader(id, role, range), engine_(role, p, range, std::move(rng)) {}

std::optional<Price> AaTrader::compute_quote(const LobSnapshot& s) { return engine_.quote(s); }

void AaTrader::observe(const MarketUpdate& update) {
    if (own_resting_shout(update, id())) return;
    engine_.respond(update.event);
}

void ImpactSensor::observe(std::span<const LevelDelta> flows) {
    if (flows.empty()) return;
    if (!zero_flow_) {
        window_.push(flows);
        return;
    }
    scratch_.assign(flows.begin(), flows.end());
    for (auto& d : scratch_) d.dW = d.dV = d.e = 0;
    window_.push(scratch_);
}

double ImpactSensor::offset() const { return lobsim::offset(window_, params_).value_or(0.0); }

ImpactSensitiveTrader::ImpactSensitiveTrader(std::unique_ptr<Trader> base, const ImpactParams& p)
    : Trader(base->id(), base->role(), base->range()),
      base_(std::move(base)),
      params_(p),
      sensor_(p.imbalance),
      name_("ZZI" + std::string(base_->strategy())) {}

void ImpactSensitiveTrader::observe(const MarketUpdate& update) {
    base_->observe(update);
    sensor_.observe(update.flows);
}

void ImpactSensitiveTrader::on_retire() { base_->retire_assignment(); }

std::optional<Price> ImpactSensitiveTrader::compute_quote(const LobSnapshot& s) {
    const auto base_quote = base_->quote(s);
    if (!base_quote) return std::nullopt;
    const double off = sensor_.offset();
    if (off == 0.0) return base_quote;
    const double adjusted = impact_adjust(base_quote->ticks, s, off, params_.beta);
    Price p{static_cast<std::int32_t>(std::lround(adjusted))};
    // Pressure against the trader never makes it more aggressive.
    if (role() == Role::seller && off > 0.0) p = std::max(p, *base_quote);
    if (role() == Role::buyer && off < 0.0) p = std::min(p, *base_quote);
    return p;
}

std::optional<Price> ZzishvTrader::compute_quote(const LobSnapshot& s) {
    const double off = sensor_.offset();
    const auto shift = static_cast<std::int32_t>(std::lround(off));
    if (role() == Role::seller && off > 0.0) {
        if (auto a = best_ask(s)) return a->price + shift;
    }
    if (role() == Role::buyer && off < 0.0) {
        if (auto b = best_bid(s)) return b->price + shift;
    }
    return shvr_quote(role(), *limit(), s);
}

namespace {

constexpr std::array<std::string_view, 7> kStrategies = {"SHVR", "ISHV", "ZIP", "AA", "ZZISHV", "ZZIZIP", "ZZIAA"};

}  // namespace

std::span<const std::string_view> strategy_names() { return kStrategies; }

bool is_strategy(std::string_view name) {
    return std::find(kStrategies.begin(), kStrategies.end(), name) != kStrategies.end();
}

bool is_impact_sensitive(std::string_view name) { return name.substr(0, 3) == "ZZI"; }

std::unique_ptr<Trader> make_trader(std::string_view strategy, TraderId id, Role role,
                                    PriceRange range, const StrategyParams& params, Rng rng) {
    if (strategy == "SHVR") return std::make_unique<ShvrTrader>(id, role, range);
    if (strategy == "ISHV") return std::make_unique<IshvTrader>(id, role, range, params.ishv);
    if (strategy == "ZIP") return std::make_unique<ZipTrader>(id, role, range, params.zip, std::move(rng));
    if (strategy == "AA") return std::make_unique<AaTrader>(id, role, range, params.aa, std::move(rng));
    if (strategy == "ZZISHV") return std::make_unique<ZzishvTrader>(id, role, range, params.impact);
    if (strategy == "ZZIZIP" || strategy == "ZZIAA") {
        auto base = make_trader(strategy.substr(3), id, role, range, params, std::move(rng));
        return std::make_unique<ImpactSensitiveTrader>(std::move(base), params.impact);
    }
    throw ConfigError("unknown strategy: " + std::string(strategy));
}

}  // namespace lobsim
