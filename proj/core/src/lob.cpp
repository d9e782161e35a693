#include "lobsim/lob.h"

#include <algorithm>
#include <charconv>

#include "lobsim/csv.h"

namespace lobsim {

std::string_view to_string(Side s) { return s == Side::bid ? "bid" : "ask"; }
std::string_view to_string(Role r) { return r == Role::buyer ? "buyer" : "seller"; }

Side parse_side(std::string_view text) {
    if (text == "bid" || text == "buy" || text == "BID") return Side::bid;
    if (text == "ask" || text == "sell" || text == "ASK") return Side::ask;
    throw ConfigError("unknown side: " + std::string(text));
}

Role parse_role(std::string_view text) {
    if (text == "buyer") return Role::buyer;
    if (text == "seller") return Role::seller;
    throw ConfigError("unknown role: " + std::string(text));
}

std::optional<LevelView> best_bid(const LobSnapshot& s) { return level(s, Side::bid, 1); }
std::optional<LevelView> best_ask(const LobSnapshot& s) { return level(s, Side::ask, 1); }

std::optional<LevelView> level(const LobSnapshot& s, Side side, int m) {
    if (m < 1) throw ContractViolation("level index must be >= 1");
    const auto& levels = s.side(side);
    if (static_cast<std::size_t>(m) > levels.size()) return std::nullopt;
    return levels[static_cast<std::size_t>(m - 1)];
}

std::optional<double> mid_price(const LobSnapshot& s) {
    auto b = best_bid(s);
    auto a = best_ask(s);
    if (!b || !a) return std::nullopt;
    return (static_cast<double>(b->price.ticks) + static_cast<double>(a->price.ticks)) / 2.0;
}

std::optional<double> micro_price(const LobSnapshot& s) {
    auto b = best_bid(s);
    auto a = best_ask(s);
    if (!b || !a) return std::nullopt;
    const auto qb = static_cast<double>(b->quantity);
    const auto qa = static_cast<double>(a->quantity);
    const auto pb = static_cast<double>(b->price.ticks);
    const auto pa = static_cast<double>(a->price.ticks);
    return (qb * pa + qa * pb) / (qb + qa);
}

Quantity total_quantity(const LobSnapshot& s, Side side) {
    Quantity total = 0;
    for (const auto& l : s.side(side)) total += l.quantity;
    return total;
}

namespace {

void append_levels(std::string& out, const std::vector<LevelView>& levels) {
    for (const auto& l : levels) {
        out += ' ';
        out += std::to_string(l.price.ticks);
        out += ':';
        out += std::to_string(l.quantity);
    }
}

template <typename T>
T parse_number(std::string_view text) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad number in LOB record: '" + std::string(text) + "'");
    }
    return value;
}

std::vector<LevelView> parse_levels(std::string_view field, std::string_view tag) {
    if (field.substr(0, tag.size()) != tag) {
        throw std::invalid_argument("LOB record field must start with " + std::string(tag));
    }
    field.remove_prefix(tag.size());
    std::vector<LevelView> out;
    while (!field.empty()) {
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        if (field.empty()) break;
        auto end = field.find(' ');
        auto token = field.substr(0, end);
        auto colon = token.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument("LOB level missing ':'");
        out.push_back({Price{parse_number<std::int32_t>(token.substr(0, colon))},
                       parse_number<Quantity>(token.substr(colon + 1))});
        field.remove_prefix(end == std::string_view::npos ? field.size() : end);
    }
    return out;
}

}  // namespace

std::string to_record(const LobSnapshot& s) {
    std::string out = format_double(s.time);
    out += ';';
    out += std::to_string(s.event_seq);
    out += ";BID";
    append_levels(out, s.bids);
    out += ";ASK";
    append_levels(out, s.asks);
    return out;
}

LobSnapshot parse_record(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        auto pos = line.find(';');
        fields.push_back(line.substr(0, pos));
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    if (fields.size() != 4) throw std::invalid_argument("LOB record needs 4 ';'-separated fields");
    LobSnapshot s;
    s.time = parse_number<double>(fields[0]);
    s.event_seq = parse_number<EventSeq>(fields[1]);
    s.bids = parse_levels(fields[2], "BID");
    s.asks = parse_levels(fields[3], "ASK");
    return s;
}

template <typename Fn>
decltype(auto) OrderBook::with_side(Side side, Fn&& fn) {
    return side == Side::bid ? fn(bids_) : fn(asks_);
}

template <typename Fn>
decltype(auto) OrderBook::with_side(Side side, Fn&& fn) const {
    return side == Side::bid ? fn(bids_) : fn(asks_);
}

void OrderBook::insert(const Order& order) {
    if (order.quantity < 1) throw ContractViolation("resting order quantity must be >= 1");
    if (index_.contains(order.id)) throw ContractViolation("duplicate order id");
    auto place = [&](auto& map) {
        auto& lvl = map[order.price];
        auto key = [](const Order& o) { return std::pair{o.submit_time, o.id}; };
        auto pos = std::upper_bound(lvl.fifo.begin(), lvl.fifo.end(), order,
                                    [&](const Order& a, const Order& b) { return key(a) < key(b); });
        lvl.fifo.insert(pos, order);
        lvl.quantity += order.quantity;
    };
    if (order.side == Side::bid) place(bids_); else place(asks_);
    index_.emplace(order.id, Locator{order.side, order.price});
}

std::optional<Order> OrderBook::remove(OrderId id) {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    const Locator loc = it->second;
    index_.erase(it);
    auto take = [&](auto& map) -> Order {
        auto lvl_it = map.find(loc.price);
        auto& lvl = lvl_it->second;
        auto pos = std::find_if(lvl.fifo.begin(), lvl.fifo.end(),
                                [&](const Order& o) { return o.id == id; });
        Order out = *pos;
        lvl.quantity -= out.quantity;
        lvl.fifo.erase(pos);
        if (lvl.fifo.empty()) map.erase(lvl_it);
        return out;
    };
    return loc.side == Side::bid ? take(bids_) : take(asks_);
}

Quantity OrderBook::reduce(OrderId id, Quantity by) {
    auto it = index_.find(id);
    if (it == index_.end() || by <= 0) return 0;
    const Locator loc = it->second;
    auto shrink = [&](auto& map) -> Quantity {
        auto& lvl = map.find(loc.price)->second;
        auto pos = std::find_if(lvl.fifo.begin(), lvl.fifo.end(),
                                [&](const Order& o) { return o.id == id; });
        const Quantity taken = std::min(by, pos->quantity);
        pos->quantity -= taken;
        lvl.quantity -= taken;
        return taken;
    };
    const Quantity taken = loc.side == Side::bid ? shrink(bids_) : shrink(asks_);
    const Order* o = find(id);
    if (o != nullptr && o->quantity == 0) remove(id);
    return taken;
}

const Order* OrderBook::find(OrderId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    const Locator loc = it->second;
    return with_side(loc.side, [&](const auto& map) -> const Order* {
        const auto& fifo = map.find(loc.price)->second.fifo;
        auto pos = std::find_if(fifo.begin(), fifo.end(), [&](const Order& o) { return o.id == id; });
        return &*pos;
    });
}

const Order* OrderBook::front(Side side) const {
    return with_side(side, [](const auto& map) -> const Order* {
        if (map.empty()) return nullptr;
        return &map.begin()->second.fifo.front();
    });
}

std::optional<LevelView> OrderBook::best(Side side) const {
    return with_side(side, [](const auto& map) -> std::optional<LevelView> {
        if (map.empty()) return std::nullopt;
        return LevelView{map.begin()->first, map.begin()->second.quantity};
    });
}

bool OrderBook::empty(Side side) const {
    return with_side(side, [](const auto& map) { return map.empty(); });
}

std::size_t OrderBook::depth(Side side) const {
    return with_side(side, [](const auto& map) { return map.size(); });
}

LobSnapshot OrderBook::snapshot(EventSeq seq, SimTime time) const {
    LobSnapshot s;
    s.event_seq = seq;
    s.time = time;
    s.bids.reserve(bids_.size());
    for (const auto& [p, lvl] : bids_) s.bids.push_back({p, lvl.quantity});
    s.asks.reserve(asks_.size());
    for (const auto& [p, lvl] : asks_) s.asks.push_back({p, lvl.quantity});
    return s;
}

std::vector<std::pair<Price, const OrderBook::Level*>> OrderBook::levels(Side side) const {
    return with_side(side, [](const auto& map) {
        std::vector<std::pair<Price, const Level*>> out;
        out.reserve(map.size());
        for (const auto& [p, lvl] : map) out.emplace_back(p, &lvl);
        return out;
    });
}

}  // namespace lobsim
