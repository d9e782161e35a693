#include "lobsim/imbalance.h"

#include <cmath>
#include <limits>
#include <ostream>

#include "lobsim/csv.h"

namespace lobsim {

void ImbalanceParams::validate() const {
    if (!(c > 0.0)) throw ConfigError("imbalance: c must be > 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("imbalance: alpha must be in (0, 1]");
    if (levels < 1) throw ConfigError("imbalance: levels must be >= 1");
    if (window < 1) throw ConfigError("imbalance: window must be >= 1");
}

std::optional<double> delta_m(const LobSnapshot& s) {
    auto micro = micro_price(s);
    auto mid = mid_price(s);
    if (!micro || !mid) return std::nullopt;
    return *micro - *mid;
}

namespace {

struct Quote {
    std::int64_t price;
    std::int64_t qty;
};

// Missing levels compare strictly worse than any real price.
constexpr std::int64_t kNoBid = std::numeric_limits<std::int32_t>::min();
constexpr std::int64_t kNoAsk = std::numeric_limits<std::int32_t>::max();

Quote quote_at(const LobSnapshot& s, Side side, int m) {
    const auto& levels = s.side(side);
    if (static_cast<std::size_t>(m) > levels.size()) {
        return {side == Side::bid ? kNoBid : kNoAsk, 0};
    }
    const auto& l = levels[static_cast<std::size_t>(m - 1)];
    return {l.price.ticks, l.quantity};
}

std::int64_t bid_flow(Quote before, Quote after) {
    if (after.price > before.price) return after.qty;
    if (after.price == before.price) return after.qty - before.qty;
    return -before.qty;
}

std::int64_t ask_flow(Quote before, Quote after) {
    if (after.price > before.price) return -before.qty;
    if (after.price == before.price) return after.qty - before.qty;
    return after.qty;
}

}  // namespace

LevelDelta level_flow(const LobSnapshot& prev, const LobSnapshot& next, int m) {
    if (m < 1) throw ContractViolation("level index must be >= 1");
    if (next.event_seq != prev.event_seq + 1) {
        throw ContractViolation("level_flow needs consecutive snapshots");
    }
    const Quote b0 = quote_at(prev, Side::bid, m);
    const Quote b1 = quote_at(next, Side::bid, m);
    const Quote a0 = quote_at(prev, Side::ask, m);
    const Quote a1 = quote_at(next, Side::ask, m);
    LevelDelta d;
    d.level = m;
    d.dW = bid_flow(b0, b1);
    d.dV = ask_flow(a0, a1);
    d.e = d.dW - d.dV;
    d.depth_sample = static_cast<double>(a1.qty + b1.qty) / 2.0;
    return d;
}

std::vector<LevelDelta> level_flows(const LobSnapshot& prev, const LobSnapshot& next, int levels) {
    std::vector<LevelDelta> out;
    out.reserve(static_cast<std::size_t>(levels));
    for (int m = 1; m <= levels; ++m) out.push_back(level_flow(prev, next, m));
    return out;
}

std::int64_t ofi_increment(const LobSnapshot& prev, const LobSnapshot& next) {
    const Quote b0 = quote_at(prev, Side::bid, 1);
    const Quote b1 = quote_at(next, Side::bid, 1);
    const Quote a0 = quote_at(prev, Side::ask, 1);
    const Quote a1 = quote_at(next, Side::ask, 1);
    std::int64_t e = 0;
    if (b1.price >= b0.price) e += b1.qty;
    if (b1.price <= b0.price) e -= b0.qty;
    if (a1.price <= a0.price) e -= a1.qty;
    if (a1.price >= a0.price) e += a0.qty;
    return e;
}

MlofiWindow::MlofiWindow(int levels, int window)
    : levels_(levels), capacity_(window) {
    if (levels < 1 || window < 1) throw ContractViolation("window needs levels >= 1 and length >= 1");
    e_.assign(static_cast<std::size_t>(levels * window), 0);
    depth_.assign(static_cast<std::size_t>(levels * window), 0.0);
    sums_.assign(static_cast<std::size_t>(levels), 0);
}

void MlofiWindow::push(const LobSnapshot& prev, const LobSnapshot& next) {
    auto flows = level_flows(prev, next, levels_);
    push(flows);
}

void MlofiWindow::push(std::span<const LevelDelta> flows) {
    if (static_cast<int>(flows.size()) != levels_) {
        throw ContractViolation("flow vector length must match window levels");
    }
    const auto base = static_cast<std::size_t>(head_ * levels_);
    for (int m = 0; m < levels_; ++m) {
        const auto slot = base + static_cast<std::size_t>(m);
        if (count_ == capacity_) sums_[static_cast<std::size_t>(m)] -= e_[slot];
        e_[slot] = flows[static_cast<std::size_t>(m)].e;
        depth_[slot] = flows[static_cast<std::size_t>(m)].depth_sample;
        sums_[static_cast<std::size_t>(m)] += e_[slot];
    }
    head_ = (head_ + 1) % capacity_;
    if (count_ < capacity_) ++count_;
}

void MlofiWindow::clear() {
    head_ = 0;
    count_ = 0;
    std::fill(sums_.begin(), sums_.end(), 0);
}

std::vector<std::int64_t> MlofiWindow::mlofi() const { return sums_; }

bool MlofiWindow::all_zero() const {
    for (auto s : sums_) {
        if (s != 0) return false;
    }
    return true;
}

std::vector<double> MlofiWindow::average_depth() const {
    if (count_ == 0) throw ContractViolation("average depth of an empty window");
    std::vector<double> ad(static_cast<std::size_t>(levels_), 0.0);
    // Slots [0, count_) are live whether or not the buffer has wrapped.
    for (int slot = 0; slot < count_; ++slot) {
        for (int m = 0; m < levels_; ++m) {
            ad[static_cast<std::size_t>(m)] += depth_[static_cast<std::size_t>(slot * levels_ + m)];
        }
    }
    for (auto& v : ad) v /= static_cast<double>(count_);
    return ad;
}

double offset(std::span<const std::int64_t> mlofi, std::span<const double> ad, double c, double alpha) {
    if (mlofi.size() != ad.size()) throw ContractViolation("mlofi and depth vectors differ in length");
    double total = 0.0;
    double decay = 1.0;
    for (std::size_t i = 0; i < mlofi.size(); ++i) {
        if (ad[i] != 0.0) total += decay * c * static_cast<double>(mlofi[i]) / ad[i];
        decay *= alpha;
    }
    return total;
}

std::optional<double> offset(const MlofiWindow& window, const ImbalanceParams& params) {
    if (window.empty()) return std::nullopt;
    if (window.all_zero()) return 0.0;
    const auto m = window.mlofi();
    const auto ad = window.average_depth();
    return offset(m, ad, params.c, params.alpha);
}

ImbalanceTracer::ImbalanceTracer(std::ostream& out, ImbalanceParams params)
    : out_(out), params_(params), window_(params) {
    out_ << "seq,time,m,dW,dV,e,MLOFI_m,AD_m,offset\n";
}

void ImbalanceTracer::observe(const LobSnapshot& prev, const LobSnapshot& next) {
    auto flows = level_flows(prev, next, params_.levels);
    window_.push(flows);
    const auto m = window_.mlofi();
    const auto ad = window_.average_depth();
    const double off = offset(m, ad, params_.c, params_.alpha);
    for (std::size_t i = 0; i < flows.size(); ++i) {
        out_ << next.event_seq << ',' << format_double(next.time) << ',' << flows[i].level << ','
             << flows[i].dW << ',' << flows[i].dV << ',' << flows[i].e << ',' << m[i] << ','
             << format_double(ad[i]) << ',' << format_double(off) << '\n';
    }
}

}  // namespace lobsim
