#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lobsim/lob.h"

namespace lobsim {

/// Signed order flow at one book level between two consecutive snapshots.
struct LevelDelta {
    int level = 1;
    std::int64_t dW = 0;  // bid-side flow
    std::int64_t dV = 0;  // ask-side flow
    std::int64_t e = 0;   // dW - dV
    double depth_sample = 0.0;  // (q_a + q_b) / 2 at this level after the event

    friend bool operator==(const LevelDelta&, const LevelDelta&) = default;
};

struct ImbalanceParams {
    double c = 5.0;
    double alpha = 0.8;  // per-level decay
    int levels = 5;
    int window = 10;  // events

    /// Throws ConfigError if any field is out of range.
    void validate() const;
};

/// Micro-price minus mid-price. Positive when demand outweighs supply at the top of book.
std::optional<double> delta_m(const LobSnapshot& s);

/// Level-m flow between consecutive snapshots. A level missing on either side
/// has quantity 0 and a price worse than any real price on that side.
/// Throws ContractViolation unless next.event_seq == prev.event_seq + 1.
LevelDelta level_flow(const LobSnapshot& prev, const LobSnapshot& next, int m);

/// level_flow for m = 1..levels.
std::vector<LevelDelta> level_flows(const LobSnapshot& prev, const LobSnapshot& next, int levels);

/// Top-of-book OFI increment, computed from the indicator form over best bid/ask.
std::int64_t ofi_increment(const LobSnapshot& prev, const LobSnapshot& next);

/// Ring buffer of the last N per-event level-flow vectors.
class MlofiWindow {
public:
    MlofiWindow(int levels, int window);
    explicit MlofiWindow(const ImbalanceParams& p) : MlofiWindow(p.levels, p.window) {}

    void push(const LobSnapshot& prev, const LobSnapshot& next);
    /// Pushes precomputed flows; `flows.size()` must equal levels().
    void push(std::span<const LevelDelta> flows);
    void clear();

    int levels() const { return levels_; }
    int capacity() const { return capacity_; }
    int size() const { return count_; }
    bool empty() const { return count_ == 0; }

    /// Sum of e over the window, per level.
    std::vector<std::int64_t> mlofi() const;
    bool all_zero() const;

    /// Mean of the per-event depth samples, per level. Throws ContractViolation on an empty window.
    std::vector<double> average_depth() const;

private:
    int levels_;
    int capacity_;
    int head_ = 0;  // next write slot
    int count_ = 0;
    std::vector<std::int64_t> e_;
    std::vector<double> depth_;
    std::vector<std::int64_t> sums_;
};

/// sum_i alpha^i * c * mlofi[i] / ad[i]; levels with ad[i] == 0 are skipped.
double offset(std::span<const std::int64_t> mlofi, std::span<const double> ad, double c, double alpha);

/// Offset of a window; nothing when the window is empty.
std::optional<double> offset(const MlofiWindow& window, const ImbalanceParams& params);

/// Writes per-event rows `seq,time,m,dW,dV,e,MLOFI_m,AD_m,offset` for a stream of snapshots.
class ImbalanceTracer {
public:
    ImbalanceTracer(std::ostream& out, ImbalanceParams params);

    void observe(const LobSnapshot& prev, const LobSnapshot& next);

private:
    std::ostream& out_;
    ImbalanceParams params_;
    MlofiWindow window_;
};

}  // namespace lobsim
