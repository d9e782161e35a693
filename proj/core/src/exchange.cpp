#include "lobsim/exchange.h"

#include <ostream>

#include "lobsim/csv.h"

namespace lobsim {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::new_order: return "new_order";
        case EventKind::cancel: return "cancel";
        case EventKind::trade: return "trade";
        case EventKind::partial_fill: return "partial_fill";
    }
    return "unknown";
}

Exchange::Exchange(PriceRange range) : range_(range) { snapshot_ = book_.snapshot(0, 0.0); }

void Exchange::register_trader(TraderId id) { traders_.insert(id); }

std::optional<OrderId> Exchange::resting_order(TraderId trader) const {
    auto it = live_.find(trader);
    if (it == live_.end()) return std::nullopt;
    return it->second;
}

BookEvent Exchange::publish(EventKind kind, SimTime time, std::optional<Order> order,
                            std::vector<Trade> trades) {
    ++seq_;
    snapshot_ = book_.snapshot(seq_, time);
    return BookEvent{kind, snapshot_, std::move(order), std::move(trades)};
}

SubmitResult Exchange::submit(const Order& order) {
    SubmitResult result;
    if (!traders_.contains(order.trader)) {
        result.status = SubmitStatus::unknown_trader;
        return result;
    }
    if (!range_.contains(order.price)) {
        result.status = SubmitStatus::invalid_price;
        return result;
    }
    if (order.quantity < 1) {
        result.status = SubmitStatus::invalid_quantity;
        return result;
    }
    if (book_.find(order.id) != nullptr) {
        result.status = SubmitStatus::duplicate_order;
        return result;
    }
    journal_.push_back({Command::Kind::submit, order, std::nullopt});

    if (auto prev = live_.find(order.trader); prev != live_.end()) {
        result.replaced = book_.remove(prev->second);
        live_.erase(prev);
    }

    Order incoming = order;
    const Side contra = opposite(order.side);
    auto crosses = [&](Price resting) {
        return order.side == Side::bid ? resting <= order.price : resting >= order.price;
    };
    while (incoming.quantity > 0) {
        const Order* head = book_.front(contra);
        if (head == nullptr || !crosses(head->price)) break;
        const Order resting = *head;
        const Quantity q = std::min(incoming.quantity, resting.quantity);
        Trade t;
        t.time = order.submit_time;
        t.price = resting.price;
        t.quantity = q;
        t.aggressor = order.side;
        if (order.side == Side::bid) {
            t.buyer = order.trader;
            t.seller = resting.trader;
            t.buy_order = order.id;
            t.sell_order = resting.id;
        } else {
            t.buyer = resting.trader;
            t.seller = order.trader;
            t.buy_order = resting.id;
            t.sell_order = order.id;
        }
        book_.reduce(resting.id, q);
        if (book_.find(resting.id) == nullptr) live_.erase(resting.trader);
        incoming.quantity -= q;
        result.trades.push_back(t);
        tape_.push_back(t);
    }

    EventKind kind = EventKind::new_order;
    if (incoming.quantity > 0) {
        book_.insert(incoming);
        live_[order.trader] = order.id;
        if (!result.trades.empty()) kind = EventKind::partial_fill;
    } else {
        kind = EventKind::trade;
    }
    result.event = publish(kind, order.submit_time, order, result.trades);
    return result;
}

CancelResult Exchange::cancel(TraderId trader, OrderId id, SimTime time,
                              std::optional<Quantity> quantity) {
    CancelResult result;
    const Order* resting = book_.find(id);
    if (resting == nullptr || resting->trader != trader) return result;
    Order cancelled = *resting;
    journal_.push_back({Command::Kind::cancel, Order{id, trader, cancelled.side, cancelled.price, 0, time},
                        quantity});
    if (quantity && *quantity < cancelled.quantity) {
        result.removed = book_.reduce(id, *quantity);
    } else {
        result.removed = cancelled.quantity;
        book_.remove(id);
        live_.erase(trader);
    }
    cancelled.quantity = result.removed;
    result.status = CancelStatus::cancelled;
    result.event = publish(EventKind::cancel, time, cancelled, {});
    return result;
}

Exchange Exchange::replay(PriceRange range, const std::vector<Command>& journal) {
    Exchange ex(range);
    for (const auto& cmd : journal) {
        ex.register_trader(cmd.order.trader);
        if (cmd.kind == Command::Kind::submit) {
            ex.submit(cmd.order);
        } else {
            ex.cancel(cmd.order.trader, cmd.order.id, cmd.order.submit_time, cmd.cancel_quantity);
        }
    }
    return ex;
}

void write_tape_csv(std::ostream& out, const std::vector<Trade>& tape) {
    out << "time,price,quantity,buyer,seller,aggressor\n";
    for (const auto& t : tape) {
        out << format_double(t.time) << ',' << t.price.ticks << ',' << t.quantity << ','
            << t.buyer << ',' << t.seller << ',' << to_string(t.aggressor) << '\n';
    }
}

}  // namespace lobsim
