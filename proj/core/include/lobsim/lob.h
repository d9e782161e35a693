#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lobsim/types.h"

namespace lobsim {

/// Aggregated view of one price level.
struct LevelView {
    Price price;
    Quantity quantity = 0;

    friend bool operator==(const LevelView&, const LevelView&) = default;
};

/// Immutable picture of the book after an event. Bids are best-first
/// (descending), asks best-first (ascending).
struct LobSnapshot {
    std::vector<LevelView> bids;
    std::vector<LevelView> asks;
    EventSeq event_seq = 0;
    SimTime time = 0.0;

    const std::vector<LevelView>& side(Side s) const { return s == Side::bid ? bids : asks; }

    friend bool operator==(const LobSnapshot&, const LobSnapshot&) = default;
};

std::optional<LevelView> best_bid(const LobSnapshot& s);
std::optional<LevelView> best_ask(const LobSnapshot& s);

/// The m-th best level (1-based) on a side, or nothing if the side is shallower than m.
std::optional<LevelView> level(const LobSnapshot& s, Side side, int m);

std::optional<double> mid_price(const LobSnapshot& s);

/// Quantity-weighted top-of-book price: (q_b * p_a + q_a * p_b) / (q_b + q_a).
/// Heavy bid quantity pulls the estimate toward the ask.
std::optional<double> micro_price(const LobSnapshot& s);

Quantity total_quantity(const LobSnapshot& s, Side side);

/// `time;seq;BID p1:q1 p2:q2;ASK p1:q1 ...`
std::string to_record(const LobSnapshot& s);
LobSnapshot parse_record(std::string_view line);

/// Price-ordered, FIFO-within-level book of resting orders. Holds no matching
/// logic; the exchange drives it.
class OrderBook {
public:
    struct Level {
        Quantity quantity = 0;
        std::vector<Order> fifo;  // ordered by (submit_time, id)
    };

    /// Rests an order. Throws ContractViolation on duplicate id or non-positive quantity.
    void insert(const Order& order);

    /// Removes the whole order; returns it, or nothing if it is not resting.
    std::optional<Order> remove(OrderId id);

    /// Reduces a resting order by `by` units, removing it when it reaches zero.
    /// Returns the quantity actually removed (0 if not resting).
    Quantity reduce(OrderId id, Quantity by);

    const Order* find(OrderId id) const;

    /// Oldest order at the best price on `side`, or null if the side is empty.
    const Order* front(Side side) const;

    std::optional<LevelView> best(Side side) const;

    bool empty(Side side) const;
    std::size_t depth(Side side) const;
    std::size_t order_count() const { return index_.size(); }

    LobSnapshot snapshot(EventSeq seq, SimTime time) const;

    /// Per-level detail, best-first, including FIFO queues.
    std::vector<std::pair<Price, const Level*>> levels(Side side) const;

private:
    using BidMap = std::map<Price, Level, std::greater<>>;
    using AskMap = std::map<Price, Level, std::less<>>;

    template <typename Fn>
    decltype(auto) with_side(Side side, Fn&& fn);
    template <typename Fn>
    decltype(auto) with_side(Side side, Fn&& fn) const;

    BidMap bids_;
    AskMap asks_;
    struct Locator {
        Side side;
        Price price;
    };
    std::unordered_map<OrderId, Locator> index_;
};

}  // namespace lobsim
