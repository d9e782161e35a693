#include <gtest/gtest.h>

#include "lobsim/lob.h"

using namespace lobsim;

namespace {

Order order(OrderId id, Side side, int price, Quantity q, double t = 0.0) {
    return Order{id, static_cast<TraderId>(id), side, Price{price}, q, t};
}

}  // namespace

TEST(OrderBook, LevelsAreBestFirstAndAggregated) {
    OrderBook b;
    b.insert(order(1, Side::bid, 90, 5));
    b.insert(order(2, Side::bid, 87, 2));
    b.insert(order(3, Side::bid, 90, 1));
    b.insert(order(4, Side::ask, 98, 5));
    b.insert(order(5, Side::ask, 95, 3));
    const auto s = b.snapshot(7, 1.5);
    ASSERT_EQ(s.bids.size(), 2u);
    EXPECT_EQ(s.bids[0], (LevelView{Price{90}, 6}));
    EXPECT_EQ(s.bids[1], (LevelView{Price{87}, 2}));
    EXPECT_EQ(s.asks[0], (LevelView{Price{95}, 3}));
    EXPECT_EQ(s.event_seq, 7u);
    EXPECT_EQ(*level(s, Side::ask, 2), (LevelView{Price{98}, 5}));
    EXPECT_FALSE(level(s, Side::ask, 3));
    EXPECT_THROW(level(s, Side::bid, 0), ContractViolation);
}

TEST(OrderBook, FifoWithinLevel) {
    OrderBook b;
    b.insert(order(2, Side::ask, 100, 1, 2.0));
    b.insert(order(1, Side::ask, 100, 1, 1.0));
    b.insert(order(3, Side::ask, 100, 1, 1.0));
    EXPECT_EQ(b.front(Side::ask)->id, 1u);
    b.remove(1);
    EXPECT_EQ(b.front(Side::ask)->id, 3u);
}

TEST(OrderBook, ReduceAndRemove) {
    OrderBook b;
    b.insert(order(1, Side::bid, 50, 4));
    EXPECT_EQ(b.reduce(1, 3), 3);
    EXPECT_EQ(b.best(Side::bid)->quantity, 1);
    EXPECT_EQ(b.reduce(1, 5), 1);
    EXPECT_TRUE(b.empty(Side::bid));
    EXPECT_EQ(b.reduce(1, 1), 0);
    EXPECT_FALSE(b.remove(1));
}

TEST(OrderBook, RejectsBadOrders) {
    OrderBook b;
    b.insert(order(1, Side::bid, 50, 4));
    EXPECT_THROW(b.insert(order(1, Side::bid, 51, 1)), ContractViolation);
    EXPECT_THROW(b.insert(order(2, Side::bid, 51, 0)), ContractViolation);
}

TEST(Snapshot, MidAndMicroPrice) {
    LobSnapshot s{{{Price{10}, 200}}, {{Price{20}, 1}}, 0, 0.0};
    EXPECT_DOUBLE_EQ(*mid_price(s), 15.0);
    // (200 * 20 + 1 * 10) / 201
    EXPECT_DOUBLE_EQ(*micro_price(s), 4010.0 / 201.0);
    s.asks.clear();
    EXPECT_FALSE(mid_price(s));
    EXPECT_FALSE(micro_price(s));
}

TEST(Snapshot, RecordRoundTrip) {
    LobSnapshot s{{{Price{90}, 5}, {Price{87}, 2}}, {{Price{95}, 3}}, 12, 3.25};
    EXPECT_EQ(parse_record(to_record(s)), s);
    LobSnapshot empty{{}, {}, 1, 0.1};
    EXPECT_EQ(parse_record(to_record(empty)), empty);
    EXPECT_THROW(parse_record("garbage"), std::invalid_argument);
}
