#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lobsim/exchange.h"
#include "lobsim/traders.h"

namespace lobsim {

/// How limit prices are issued to the traders of one role.
struct LimitSchedule {
    /// stepped: evenly spaced over [low, high], one step per trader;
    /// uniform: independent integer draws from [low, high];
    /// fixed: an explicit list, cycled when shorter than the role.
    enum class Kind : std::uint8_t { stepped, uniform, fixed } kind = Kind::stepped;
    std::int32_t low = 60;
    std::int32_t high = 140;
    std::vector<std::int32_t> values;

    /// Limit for position `slot` of a full issue to `count` traders. Uniform
    /// schedules ignore the slot and draw from `rng`.
    Price draw(Rng& rng, std::size_t slot, std::size_t count) const;
};

enum class ReplenishMode : std::uint8_t { periodic, drip };

/// Assignment issuance for one role. Each trader is dealt a schedule slot at
/// session start and keeps it; consecutive slots are spread over the roster
/// entries of the role in random order, so each entry sees the same range of limits. Periodic: at every multiple of `interval` each
/// trader of the role gets a fresh assignment; an order resting on the old one is
/// cancelled when the limit changes. Drip: a trader whose assignment has been used up gets a
/// new one after an exponential delay with mean `interval`.
struct Schedule {
    LimitSchedule limits;
    double interval = 30.0;
    ReplenishMode mode = ReplenishMode::periodic;
};

/// A large order injected at `time`, `level_offset` ticks behind the current best
/// quote on `side`. It never crosses the opposite best at fire time.
struct BlockEvent {
    SimTime time = 300.0;
    Side side = Side::bid;
    std::int32_t level_offset = 1;
    Quantity quantity = 100;
};

struct RosterEntry {
    std::string strategy;
    int count = 0;
    Role role = Role::buyer;
};

struct SessionConfig {
    SimTime duration = 600.0;
    /// Every trader is polled once per interval, in a fresh random order.
    double poll_interval = 1.0;
    PriceRange range;
    std::vector<RosterEntry> roster;
    Schedule demand;
    Schedule supply;
    std::vector<BlockEvent> blocks;
    std::uint64_t seed = 1;
    StrategyParams params;

    /// Feed zero flow to every impact-sensitive trader's window.
    bool neutralize_impact = false;
    bool record_events = false;
    bool record_quotes = false;

    /// Throws ConfigError describing the first problem found.
    void validate() const;
};

struct TraderOutcome {
    TraderId id = 0;
    std::string strategy;
    Role role = Role::buyer;
    int trades = 0;
    double profit = 0.0;
};

struct QuoteRecord {
    SimTime time = 0.0;
    TraderId trader = 0;
    Price price;

    friend bool operator==(const QuoteRecord&, const QuoteRecord&) = default;
};

/// A trade with the limit prices that were live when it executed.
struct Settlement {
    Trade trade;
    Price buyer_limit;
    Price seller_limit;
    bool block_buyer = false;
    bool block_seller = false;
};

struct SessionResult {
    std::vector<TraderOutcome> traders;  // ordered by id
    std::vector<Trade> tape;
    std::vector<Settlement> settlements;
    std::vector<BookEvent> events;      // when record_events
    std::vector<LobSnapshot> snapshots;  // snapshot before the first event, then one per event, when record_events
    std::vector<QuoteRecord> quotes;    // when record_quotes
    std::vector<Command> journal;
    std::vector<TraderId> block_traders;
    LobSnapshot final_book;
    std::size_t event_count = 0;
};

SessionResult run_session(const SessionConfig& config);

/// Competitive equilibrium of the configured schedules: the midpoint of the price
/// interval where the issued demand and supply steps cross, or where the expected
/// curves cross for uniform draws.
double competitive_equilibrium(const LimitSchedule& demand, int buyers, const LimitSchedule& supply, int sellers);
double competitive_equilibrium(const SessionConfig& config);

/// `trader,strategy,role,trades,profit`
void write_profit_csv(std::ostream& out, const SessionResult& r);
/// `seq,time,kind,trader,side,price,quantity,trades,best_bid,best_ask`
void write_event_csv(std::ostream& out, const SessionResult& r);

}  // namespace lobsim
