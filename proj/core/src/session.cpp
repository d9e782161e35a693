#include "lobsim/session.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "lobsim/csv.h"

namespace lobsim {

Price LimitSchedule::draw(Rng& rng, std::size_t slot, std::size_t count) const {
    switch (kind) {
        case Kind::fixed:
            return Price{values[slot % values.size()]};
        case Kind::uniform:
            return Price{std::uniform_int_distribution<std::int32_t>(low, high)(rng)};
        case Kind::stepped:
            break;
    }
    if (count <= 1) return Price{static_cast<std::int32_t>(std::lround((low + high) / 2.0))};
    const double step = static_cast<double>(high - low) / static_cast<double>(count - 1);
    return Price{static_cast<std::int32_t>(std::lround(low + step * static_cast<double>(slot)))};
}

namespace {

void validate_schedule(const Schedule& s, const PriceRange& range, std::string_view what) {
    const std::string name(what);
    if (!(s.interval > 0.0)) throw ConfigError(name + ": replenishment interval must be > 0");
    const auto& l = s.limits;
    if (l.kind != LimitSchedule::Kind::fixed) {
        if (l.low > l.high) throw ConfigError(name + ": limit range low > high");
        if (!range.contains(Price{l.low}) || !range.contains(Price{l.high})) {
            throw ConfigError(name + ": limit range outside the exchange price range");
        }
    } else {
        if (l.values.empty()) throw ConfigError(name + ": fixed limit list is empty");
        for (auto v : l.values) {
            if (!range.contains(Price{v})) throw ConfigError(name + ": fixed limit outside the price range");
        }
    }
}

}  // namespace

void SessionConfig::validate() const {
    if (!(duration > 0.0)) throw ConfigError("session: duration must be > 0");
    if (!(poll_interval > 0.0)) throw ConfigError("session: poll interval must be > 0");
    if (range.min.ticks < 1 || range.min > range.max) throw ConfigError("session: bad price range");
    if (roster.empty()) throw ConfigError("session: roster is empty");
    for (const auto& e : roster) {
        if (!is_strategy(e.strategy)) throw ConfigError("session: unknown strategy '" + e.strategy + "'");
        if (e.count < 0) throw ConfigError("session: negative trader count for " + e.strategy);
    }
    validate_schedule(demand, range, "demand schedule");
    validate_schedule(supply, range, "supply schedule");
    for (const auto& b : blocks) {
        if (b.time < 0.0 || b.time >= duration) throw ConfigError("block: fire time outside the session");
        if (b.quantity < 1) throw ConfigError("block: quantity must be >= 1");
        if (b.level_offset < 0) throw ConfigError("block: level offset must be >= 0");
    }
    params.validate();
}

namespace {

class SessionRunner {
public:
    explicit SessionRunner(const SessionConfig& cfg)
        : cfg_(cfg),
          exchange_(cfg.range),
          poll_rng_(derive_seed(cfg.seed, 0)),
          limit_rng_(derive_seed(cfg.seed, 1)) {}

    SessionResult run();

private:
    struct Slot {
        std::unique_ptr<Trader> trader;
        std::size_t group = 0;  // roster entry
        std::size_t slot = 0;  // position in the role's limit schedule, fixed for the session
        SimTime due = 0.0;  // drip replenishment time
        bool waiting = false;
    };

    const Schedule& schedule(Role r) const { return r == Role::buyer ? cfg_.demand : cfg_.supply; }
    Slot* slot(TraderId id) {
        return id >= 1 && id <= slots_.size() ? &slots_[id - 1] : nullptr;
    }

    void build_roster();
    void deal_slots();
    void issue(Role r, SimTime now);
    void replenish(SimTime now);
    void fire_block(const BlockEvent& b, SimTime now);
    void settle(const Trade& t, SimTime now);
    void process(const BookEvent& ev, const LobSnapshot& prev, SimTime now);

    const SessionConfig& cfg_;
    Exchange exchange_;
    Rng poll_rng_;
    Rng limit_rng_;
    std::vector<Slot> slots_;
    std::vector<TraderId> block_ids_;
    std::vector<LevelDelta> flows_;
    bool need_flows_ = false;
    OrderId next_order_ = 1;
    SimTime next_periodic_[2] = {0.0, 0.0};
    std::size_t role_count_[2] = {0, 0};
    SessionResult result_;
};

void SessionRunner::build_roster() {
    TraderId id = 1;
    for (std::size_t g = 0; g < cfg_.roster.size(); ++g) {
        const auto& e = cfg_.roster[g];
        for (int i = 0; i < e.count; ++i, ++id) {
            Slot s;
            s.group = g;
            s.trader = make_trader(e.strategy, id, e.role, cfg_.range, cfg_.params,
                                   Rng(derive_seed(derive_seed(cfg_.seed, 2), id)));
            ++role_count_[static_cast<int>(e.role)];
            if (auto* sensor = s.trader->impact_sensor()) {
                need_flows_ = true;
                sensor->force_zero_flow(cfg_.neutralize_impact);
            }
            exchange_.register_trader(id);
            slots_.push_back(std::move(s));
        }
    }
}

void SessionRunner::deal_slots() {
    for (Role r : {Role::buyer, Role::seller}) {
        // Roster groups of this role, each with its traders in random order.
        std::vector<std::vector<Slot*>> groups;
        for (std::size_t g = 0; g < cfg_.roster.size(); ++g) {
            if (cfg_.roster[g].role != r) continue;
            std::vector<Slot*> members;
            for (auto& s : slots_) {
                if (s.group == g) members.push_back(&s);
            }
            std::shuffle(members.begin(), members.end(), limit_rng_);
            if (!members.empty()) groups.push_back(std::move(members));
        }
        // Consecutive slots go round-robin over the groups, in a fresh random
        // group order per round, so every group sees the same spread of limits.
        std::size_t slot = 0;
        std::vector<std::size_t> taken(groups.size(), 0);
        for (;;) {
            std::vector<std::size_t> round;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                if (taken[g] < groups[g].size()) round.push_back(g);
            }
            if (round.empty()) break;
            std::shuffle(round.begin(), round.end(), limit_rng_);
            for (auto g : round) groups[g][taken[g]++]->slot = slot++;
        }
    }
}

void SessionRunner::issue(Role r, SimTime now) {
    for (auto& s : slots_) {
        if (s.trader->role() != r) continue;
        const auto n = role_count_[static_cast<int>(r)];
        const Price limit = schedule(r).limits.draw(limit_rng_, s.slot, n);
        if (s.trader->limit() != limit) {
            if (auto resting = exchange_.resting_order(s.trader->id())) {
                // The old quote is priced against the outgoing limit.
                const LobSnapshot prev = exchange_.snapshot();
                auto res = exchange_.cancel(s.trader->id(), *resting, now);
                process(*res.event, prev, now);
            }
        }
        if (s.trader->active()) s.trader->retire_assignment();
        s.trader->assign(limit);
        s.waiting = false;
    }
}

void SessionRunner::replenish(SimTime now) {
    for (Role r : {Role::buyer, Role::seller}) {
        const auto& sch = schedule(r);
        if (sch.mode != ReplenishMode::periodic) continue;
        auto& next = next_periodic_[static_cast<int>(r)];
        if (now < next) continue;
        while (next <= now) next += sch.interval;
        issue(r, now);
    }
    for (auto& s : slots_) {
        if (!s.waiting || schedule(s.trader->role()).mode != ReplenishMode::drip || s.due > now) continue;
        const auto n = role_count_[static_cast<int>(s.trader->role())];
        s.trader->assign(schedule(s.trader->role()).limits.draw(limit_rng_, s.slot, n));
        s.waiting = false;
    }
}

void SessionRunner::fire_block(const BlockEvent& b, SimTime now) {
    const auto& snap = exchange_.snapshot();
    const auto same = level(snap, b.side, 1);
    const auto contra = level(snap, opposite(b.side), 1);
    const std::int32_t dir = b.side == Side::bid ? -1 : 1;  // "behind" the best
    Price price;
    if (same) {
        price = same->price + dir * b.level_offset;
    } else if (contra) {
        price = contra->price + dir * (b.level_offset + 1);
    } else {
        price = Price{static_cast<std::int32_t>(std::lround(competitive_equilibrium(cfg_)))};
    }
    if (contra) {
        // Never cross on arrival.
        if (b.side == Side::bid) price = std::min(price, contra->price - 1);
        else price = std::max(price, contra->price + 1);
    }
    price = cfg_.range.clamp(price);
    if (contra && (b.side == Side::bid ? price >= contra->price : price <= contra->price)) return;

    const auto id = static_cast<TraderId>(slots_.size() + 1 + block_ids_.size());
    block_ids_.push_back(id);
    exchange_.register_trader(id);
    const LobSnapshot prev = snap;
    auto res = exchange_.submit(Order{next_order_++, id, b.side, price, b.quantity, now});
    process(*res.event, prev, now);
}

void SessionRunner::settle(const Trade& t, SimTime now) {
    Settlement st;
    st.trade = t;
    Slot* buyer = slot(t.buyer);
    Slot* seller = slot(t.seller);
    st.block_buyer = buyer == nullptr;
    st.block_seller = seller == nullptr;
    // Block orders carry no private value; their limit is the execution price.
    st.buyer_limit = buyer ? *buyer->trader->limit() : t.price;
    st.seller_limit = seller ? *seller->trader->limit() : t.price;
    for (Slot* s : {buyer, seller}) {
        if (s == nullptr) continue;
        const Price lim = *s->trader->limit();
        const double profit = s->trader->role() == Role::buyer ? lim.ticks - t.price.ticks
                                                               : t.price.ticks - lim.ticks;
        s->trader->record_fill(profit * static_cast<double>(t.quantity));
        s->trader->retire_assignment();
        const auto& sch = schedule(s->trader->role());
        if (sch.mode == ReplenishMode::drip) {
            s->waiting = true;
            s->due = now + std::exponential_distribution<double>(1.0 / sch.interval)(limit_rng_);
        }
    }
    result_.settlements.push_back(st);
}

void SessionRunner::process(const BookEvent& ev, const LobSnapshot& prev, SimTime now) {
    ++result_.event_count;
    for (const auto& t : ev.trades) settle(t, now);
    if (cfg_.record_events) {
        result_.events.push_back(ev);
        result_.snapshots.push_back(ev.snapshot);
    }
    std::span<const LevelDelta> flows;
    if (need_flows_) {
        flows_ = level_flows(prev, ev.snapshot, cfg_.params.impact.imbalance.levels);
        flows = flows_;
    }
    const MarketUpdate update{prev, ev, flows};
    for (auto& s : slots_) s.trader->observe(update);
}

SessionResult SessionRunner::run() {
    build_roster();
    if (cfg_.record_events) result_.snapshots.push_back(exchange_.snapshot());
    deal_slots();
    issue(Role::buyer, 0.0);
    issue(Role::seller, 0.0);
    for (Role r : {Role::buyer, Role::seller}) next_periodic_[static_cast<int>(r)] = schedule(r).interval;

    auto blocks = cfg_.blocks;
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const BlockEvent& a, const BlockEvent& b) { return a.time < b.time; });
    std::size_t next_block = 0;

    std::vector<std::size_t> order(slots_.size());
    std::iota(order.begin(), order.end(), 0);
    const double step = slots_.empty() ? 0.0 : cfg_.poll_interval / static_cast<double>(slots_.size());

    for (long round = 0;; ++round) {
        const SimTime t0 = static_cast<double>(round) * cfg_.poll_interval;
        if (t0 >= cfg_.duration) break;
        replenish(t0);
        while (next_block < blocks.size() && blocks[next_block].time <= t0) {
            fire_block(blocks[next_block++], t0);
        }
        std::shuffle(order.begin(), order.end(), poll_rng_);
        for (std::size_t k = 0; k < order.size(); ++k) {
            const SimTime now = t0 + static_cast<double>(k) * step;
            Trader& tr = *slots_[order[k]].trader;
            const auto q = tr.quote(exchange_.snapshot());
            if (!q) continue;
            if (cfg_.record_quotes) result_.quotes.push_back({now, tr.id(), *q});
            if (auto resting = exchange_.resting_order(tr.id())) {
                if (exchange_.book().find(*resting)->price == *q) continue;
            }
            const LobSnapshot prev = exchange_.snapshot();
            auto res = exchange_.submit(Order{next_order_++, tr.id(), side_of(tr.role()), *q, 1, now});
            process(*res.event, prev, now);
        }
    }

    for (const auto& s : slots_) {
        result_.traders.push_back({s.trader->id(), std::string(s.trader->strategy()), s.trader->role(),
                                   s.trader->trades(), s.trader->profit()});
    }
    result_.tape = exchange_.tape();
    result_.journal = exchange_.journal();
    result_.block_traders = block_ids_;
    result_.final_book = exchange_.snapshot();
    return std::move(result_);
}

// Expected fraction of a role's traders willing to trade at p under uniform draws.
double willing_fraction(const LimitSchedule& s, double p, bool demand) {
    const double lo = s.low;
    const double hi = s.high;
    if (hi == lo) return demand ? (p <= lo ? 1.0 : 0.0) : (p >= lo ? 1.0 : 0.0);
    const double above = std::clamp((hi - p) / (hi - lo), 0.0, 1.0);
    return demand ? above : 1.0 - above;
}

std::vector<double> issued(const LimitSchedule& s, int count) {
    Rng unused;
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(s.draw(unused, static_cast<std::size_t>(i), static_cast<std::size_t>(count)).ticks);
    }
    return out;
}

// Midpoint of the price interval clearing k units, where k is the largest
// count with the k-th highest bid limit at or above the k-th lowest ask limit.
double step_equilibrium(std::vector<double> d, std::vector<double> s) {
    std::sort(d.begin(), d.end(), std::greater<>());
    std::sort(s.begin(), s.end());
    std::size_t k = 0;
    while (k < d.size() && k < s.size() && d[k] >= s[k]) ++k;
    if (k == 0) return 0.5 * (d.front() + s.front());
    double lo = s[k - 1];
    double hi = d[k - 1];
    if (k < d.size()) lo = std::max(lo, d[k]);
    if (k < s.size()) hi = std::min(hi, s[k]);
    return 0.5 * (lo + hi);
}

double expected_equilibrium(const LimitSchedule& demand, int buyers, const LimitSchedule& supply, int sellers) {
    auto excess = [&](double p) {
        return buyers * willing_fraction(demand, p, true) - sellers * willing_fraction(supply, p, false);
    };
    const double lo0 = std::min(demand.low, supply.low);
    const double hi0 = std::max(demand.high, supply.high);
    // Excess demand is non-increasing in p; bisect both ends of its zero set.
    auto bisect = [&](auto pred) {
        double a = lo0;
        double b = hi0;
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (a + b);
            if (pred(m)) b = m; else a = m;
        }
        return 0.5 * (a + b);
    };
    const double upper = bisect([&](double p) { return excess(p) < 0.0; });
    const double lower = bisect([&](double p) { return excess(p) <= 0.0; });
    return 0.5 * (lower + upper);
}

}  // namespace

SessionResult run_session(const SessionConfig& config) {
    config.validate();
    return SessionRunner(config).run();
}

double competitive_equilibrium(const LimitSchedule& demand, int buyers, const LimitSchedule& supply, int sellers) {
    if (buyers < 1 || sellers < 1) throw ConfigError("equilibrium needs buyers and sellers");
    using Kind = LimitSchedule::Kind;
    if (demand.kind == Kind::uniform && supply.kind == Kind::uniform) {
        return expected_equilibrium(demand, buyers, supply, sellers);
    }
    if (demand.kind == Kind::uniform || supply.kind == Kind::uniform) {
        throw ConfigError("equilibrium of mixed random and deterministic schedules is not defined");
    }
    return step_equilibrium(issued(demand, buyers), issued(supply, sellers));
}

double competitive_equilibrium(const SessionConfig& config) {
    int buyers = 0;
    int sellers = 0;
    for (const auto& e : config.roster) (e.role == Role::buyer ? buyers : sellers) += e.count;
    return competitive_equilibrium(config.demand.limits, buyers, config.supply.limits, sellers);
}

void write_profit_csv(std::ostream& out, const SessionResult& r) {
    out << "trader,strategy,role,trades,profit\n";
    for (const auto& t : r.traders) {
        out << t.id << ',' << t.strategy << ',' << to_string(t.role) << ',' << t.trades << ','
            << format_double(t.profit) << '\n';
    }
}

void write_event_csv(std::ostream& out, const SessionResult& r) {
    out << "seq,time,kind,trader,side,price,quantity,trades,best_bid,best_ask\n";
    for (const auto& ev : r.events) {
        const auto bb = best_bid(ev.snapshot);
        const auto ba = best_ask(ev.snapshot);
        out << ev.snapshot.event_seq << ',' << format_double(ev.snapshot.time) << ',' << to_string(ev.kind) << ',';
        if (ev.order) {
            out << ev.order->trader << ',' << to_string(ev.order->side) << ',' << ev.order->price.ticks << ','
                << ev.order->quantity;
        } else {
            out << ",,,";
        }
        out << ',' << ev.trades.size() << ',';
        if (bb) out << bb->price.ticks;
        out << ',';
        if (ba) out << ba->price.ticks;
        out << '\n';
    }
}

}  // namespace lobsim
