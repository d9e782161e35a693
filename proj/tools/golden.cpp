#include "golden.h"

namespace lobsim::tools {

namespace {

LobSnapshot book(std::vector<LevelView> bids, std::vector<LevelView> asks, EventSeq seq) {
    return LobSnapshot{std::move(bids), std::move(asks), seq, static_cast<double>(seq)};
}

LevelView lv(int p, Quantity q) { return {Price{p}, q}; }

}  // namespace

std::vector<GoldenCase> golden_cases() {
    const std::vector<LevelView> asks = {lv(95, 3), lv(98, 5), lv(100, 1), lv(105, 2)};
    const std::vector<LevelView> bids = {lv(90, 5), lv(87, 2), lv(82, 4)};
    std::vector<GoldenCase> out;
    // The first transition's printed vector needs 7 resting at 90.
    out.push_back({"new best bid 93x5",
                   book({lv(90, 7), lv(87, 2), lv(82, 4)}, asks, 0),
                   book({lv(93, 5), lv(90, 7), lv(87, 2)}, asks, 1),
                   {5, 7, 2}});
    out.push_back({"best bid 90 cut to 2", book(bids, asks, 0),
                   book({lv(90, 2), lv(87, 2), lv(82, 4)}, asks, 1), {-3, 0, 0}});
    out.push_back({"best ask 95 removed", book(bids, asks, 0),
                   book(bids, {lv(98, 5), lv(100, 1), lv(105, 2)}, 1), {3, 5, 1}});
    out.push_back({"block bid 89x100", book(bids, asks, 0),
                   book({lv(90, 5), lv(89, 100), lv(87, 2), lv(82, 4)}, asks, 1), {0, 100, 2}});
    return out;
}

}  // namespace lobsim::tools
