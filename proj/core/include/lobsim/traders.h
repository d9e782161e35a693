#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobsim/aa.h"
#include "lobsim/exchange.h"
#include "lobsim/imbalance.h"
#include "lobsim/rng.h"
#include "lobsim/zip.h"

namespace lobsim {

struct IshvParams {
    double C = 2.0;
    double M = 1.0;
    /// |delta_m| must exceed this for the imbalance to count as significant.
    double threshold = 0.0;

    void validate() const;
};

/// Knobs shared by every impact-sensitive variant.
struct ImpactParams {
    ImbalanceParams imbalance;
    double beta = 0.5;  // Widrow-Hoff rate toward the impact target

    void validate() const;
};

struct StrategyParams {
    IshvParams ishv;
    ZipParams zip;
    AaParams aa;
    ImpactParams impact;

    void validate() const;
};

/// What a trader sees after each book event.
struct MarketUpdate {
    const LobSnapshot& prev;
    const BookEvent& event;
    /// Level flows for levels 1..impact.levels; empty when nobody needs them.
    std::span<const LevelDelta> flows;
};

/// Shaver: one tick inside the best quote on the trader's own side, held at the limit.
/// An empty reference side yields the limit itself.
Price shvr_quote(Role role, Price limit, const LobSnapshot& s);

/// Imbalance shaver. Adverse imbalance (buyer: delta_m > 0, seller: delta_m < 0)
/// widens the shave to C + M*|delta_m| ticks, rounded up; otherwise behaves as SHVR.
/// Without a defined delta_m the quote is the limit.
Price ishv_quote(Role role, Price limit, const LobSnapshot& s, const IshvParams& p);

/// Widrow-Hoff step of an underlying quote toward (benchmark + offset), where the
/// benchmark is the mid-price when it exists and the underlying quote otherwise.
double impact_adjust(double underlying, const LobSnapshot& s, double offset, double beta);

/// Clamps a price onto the legal side of a limit and into the exchange range.
Price legal_price(Role role, Price limit, Price p, PriceRange range);

class ImpactSensor;

class Trader {
public:
    Trader(TraderId id, Role role, PriceRange range) : id_(id), role_(role), range_(range) {}
    virtual ~Trader() = default;

    Trader(const Trader&) = delete;
    Trader& operator=(const Trader&) = delete;

    TraderId id() const { return id_; }
    Role role() const { return role_; }
    virtual std::string_view strategy() const = 0;

    void assign(Price limit);
    void retire_assignment();
    std::optional<Price> limit() const { return limit_; }
    bool active() const { return limit_.has_value(); }

    /// Quote for the current book, always on the legal side of the limit.
    /// Nothing without a live assignment.
    std::optional<Price> quote(const LobSnapshot& s);

    virtual void observe(const MarketUpdate& update) { (void)update; }

    /// The MLOFI sensor of impact-sensitive strategies, null otherwise.
    virtual ImpactSensor* impact_sensor() { return nullptr; }

    PriceRange range() const { return range_; }

    double profit() const { return profit_; }
    int trades() const { return trades_; }
    void record_fill(double profit) {
        profit_ += profit;
        ++trades_;
    }

protected:
    virtual std::optional<Price> compute_quote(const LobSnapshot& s) = 0;
    virtual void on_assign(Price limit) { (void)limit; }
    virtual void on_retire() {}

private:
    TraderId id_;
    Role role_;
    PriceRange range_;
    std::optional<Price> limit_;
    double profit_ = 0.0;
    int trades_ = 0;
};

class ShvrTrader final : public Trader {
public:
    using Trader::Trader;
    std::string_view strategy() const override { return "SHVR"; }

protected:
    std::optional<Price> compute_quote(const LobSnapshot& s) override;
};

class IshvTrader final : public Trader {
public:
    IshvTrader(TraderId id, Role role, PriceRange range, IshvParams p)
        : Trader(id, role, range), params_(p) {}
    std::string_view strategy() const override { return "ISHV"; }

protected:
    std::optional<Price> compute_quote(const LobSnapshot& s) override;

private:
    IshvParams params_;
};

class ZipTrader final : public Trader {
public:
    ZipTrader(TraderId id, Role role, PriceRange range, const ZipParams& p, Rng rng);
    std::string_view strategy() const override { return "ZIP"; }
    void observe(const MarketUpdate& update) override;
    const ZipEngine& engine() const { return engine_; }

protected:
    std::optional<Price> compute_quote(const LobSnapshot& s) override;
    void on_assign(Price limit) override { engine_.set_limit(limit); }
    void on_retire() override { engine_.clear_limit(); }

private:
    ZipEngine engine_;
};

class AaTrader final : public Trader {
public:
    AaTrader(TraderId id, Role role, PriceRange range, const AaParams& p, Rng rng);
    std::string_view strategy() const override { return "AA"; }
    void observe(const MarketUpdate& update) override;
    const AaEngine& engine() const { return engine_; }

protected:
    std::optional<Price> compute_quote(const LobSnapshot& s) override;
    void on_assign(Price limit) override { engine_.set_limit(limit); }
    void on_retire() override { engine_.clear_limit(); }

private:
    AaEngine engine_;
};

/// Per-trader MLOFI window and the offset derived from it.
class ImpactSensor {
public:
    explicit ImpactSensor(const ImbalanceParams& p) : params_(p), window_(p) {}

    void observe(std::span<const LevelDelta> flows);

    /// Offset of the current window; 0 before any event has been seen.
    double offset() const;

    /// Feeds zero flow into the window from now on (depth samples are kept).
    void force_zero_flow(bool on) { zero_flow_ = on; }

    const MlofiWindow& window() const { return window_; }

private:
    ImbalanceParams params_;
    MlofiWindow window_;
    bool zero_flow_ = false;
    std::vector<LevelDelta> scratch_;
};

/// Wraps any base trader with the MLOFI impact adjustment. With zero offset the
/// base quote passes through untouched.
class ImpactSensitiveTrader final : public Trader {
public:
    ImpactSensitiveTrader(std::unique_ptr<Trader> base, const ImpactParams& p);

    std::string_view strategy() const override { return name_; }
    void observe(const MarketUpdate& update) override;

    ImpactSensor* impact_sensor() override { return &sensor_; }
    const Trader& base() const { return *base_; }

protected:
    std::optional<Price> compute_quote(const LobSnapshot& s) override;
    void on_assign(Price limit) override { base_->assign(limit); }
    void on_retire() override;

private:
    std::unique_ptr<Trader> base_;
    ImpactParams params_;
    ImpactSensor sensor_;
    std::string name_;
};

/// Shaver whose adverse-side response is driven by the MLOFI offset: a seller
/// facing positive offset quotes best ask + offset, a buyer facing negative offset
/// quotes best bid + offset. Otherwise it shaves like SHVR.
class ZzishvTrader final : public Trader {
public:
    ZzishvTrader(TraderId id, Role role, PriceRange range, const ImpactParams& p)
        : Trader(id, role, range), sensor_(p.imbalance) {}
    std::string_view strategy() const override { return "ZZISHV"; }
    void observe(const MarketUpdate& update) override { sensor_.observe(update.flows); }

    ImpactSensor* impact_sensor() override { return &sensor_; }

protected:
    std::optional<Price> compute_quote(const LobSnapshot& s) override;

private:
    ImpactSensor sensor_;
};

/// Names accepted by make_trader.
std::span<const std::string_view> strategy_names();
bool is_strategy(std::string_view name);
bool is_impact_sensitive(std::string_view name);

/// Strategy registry. Throws ConfigError on an unknown name.
std::unique_ptr<Trader> make_trader(std::string_view strategy, TraderId id, Role role,
                                    PriceRange range, const StrategyParams& params, Rng rng);

}  // namespace lobsim
