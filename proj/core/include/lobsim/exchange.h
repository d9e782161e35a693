#pragma once

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lobsim/lob.h"

namespace lobsim {

struct Trade {
    SimTime time = 0.0;
    Price price;
    Quantity quantity = 0;
    TraderId buyer = 0;
    TraderId seller = 0;
    Side aggressor = Side::bid;
    OrderId buy_order = 0;
    OrderId sell_order = 0;

    friend bool operator==(const Trade&, const Trade&) = default;
};

enum class EventKind : std::uint8_t { new_order, cancel, trade, partial_fill };

std::string_view to_string(EventKind k);

/// One change to the book. `order` is the incoming or cancelled order.
struct BookEvent {
    EventKind kind = EventKind::new_order;
    LobSnapshot snapshot;
    std::optional<Order> order;
    std::vector<Trade> trades;
};

enum class SubmitStatus : std::uint8_t {
    accepted,
    invalid_price,
    invalid_quantity,
    unknown_trader,
    duplicate_order,
};

struct SubmitResult {
    SubmitStatus status = SubmitStatus::accepted;
    std::vector<Trade> trades;
    std::optional<BookEvent> event;
    /// The trader's previous resting order, if the submission replaced one.
    std::optional<Order> replaced;

    bool accepted() const { return status == SubmitStatus::accepted; }
};

enum class CancelStatus : std::uint8_t { cancelled, not_found };

struct CancelResult {
    CancelStatus status = CancelStatus::not_found;
    Quantity removed = 0;
    std::optional<BookEvent> event;

    bool cancelled() const { return status == CancelStatus::cancelled; }
};

/// Journal entry; replaying a journal into a fresh exchange reproduces its state.
struct Command {
    enum class Kind : std::uint8_t { submit, cancel } kind = Kind::submit;
    Order order;  // submit: the order; cancel: trader, id and time
    std::optional<Quantity> cancel_quantity;
};

/// Price-time priority matching engine over a single book. Each trader may
/// hold at most one resting order; a new submission cancels the old one.
class Exchange {
public:
    explicit Exchange(PriceRange range = {});

    void register_trader(TraderId id);
    bool knows(TraderId id) const { return traders_.contains(id); }

    SubmitResult submit(const Order& order);

    /// Cancels `quantity` units of a resting order (all of it when absent).
    CancelResult cancel(TraderId trader, OrderId id, SimTime time,
                        std::optional<Quantity> quantity = std::nullopt);

    const LobSnapshot& snapshot() const { return snapshot_; }
    const OrderBook& book() const { return book_; }
    const std::vector<Trade>& tape() const { return tape_; }
    const std::vector<Command>& journal() const { return journal_; }
    PriceRange price_range() const { return range_; }

    std::optional<OrderId> resting_order(TraderId trader) const;

    static Exchange replay(PriceRange range, const std::vector<Command>& journal);

private:
    BookEvent publish(EventKind kind, SimTime time, std::optional<Order> order,
                      std::vector<Trade> trades);

    PriceRange range_;
    OrderBook book_;
    LobSnapshot snapshot_;
    EventSeq seq_ = 0;
    std::vector<Trade> tape_;
    std::vector<Command> journal_;
    std::unordered_set<TraderId> traders_;
    std::unordered_map<TraderId, OrderId> live_;
};

/// `time,price,quantity,buyer,seller,aggressor`
void write_tape_csv(std::ostream& out, const std::vector<Trade>& tape);

}  // namespace lobsim
