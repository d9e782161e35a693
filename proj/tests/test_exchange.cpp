#include <gtest/gtest.h>

#include <sstream>

#include "lobsim/exchange.h"

using namespace lobsim;

namespace {

class ExchangeTest : public ::testing::Test {
protected:
    void SetUp() override {
        for (TraderId t = 1; t <= 6; ++t) ex.register_trader(t);
    }
    SubmitResult submit(OrderId id, TraderId t, Side s, int price, Quantity q, double time = 0.0) {
        return ex.submit(Order{id, t, s, Price{price}, q, time});
    }
    Exchange ex{PriceRange{Price{1}, Price{200}}};
};

}  // namespace

TEST_F(ExchangeTest, RestingOrderPublishesNewOrderEvent) {
    const auto r = submit(1, 1, Side::bid, 100, 2);
    ASSERT_TRUE(r.accepted());
    EXPECT_EQ(r.event->kind, EventKind::new_order);
    EXPECT_EQ(r.event->snapshot.event_seq, 1u);
    EXPECT_EQ(best_bid(ex.snapshot())->price, Price{100});
}

TEST_F(ExchangeTest, CrossingTradesAtRestingPriceInTimePriority) {
    submit(1, 1, Side::ask, 101, 1, 0.0);
    submit(2, 2, Side::ask, 101, 1, 1.0);
    submit(3, 3, Side::ask, 100, 1, 2.0);
    const auto r = submit(4, 4, Side::bid, 105, 2, 3.0);
    ASSERT_EQ(r.trades.size(), 2u);
    EXPECT_EQ(r.trades[0].price, Price{100});
    EXPECT_EQ(r.trades[0].seller, 3u);
    EXPECT_EQ(r.trades[1].price, Price{101});
    EXPECT_EQ(r.trades[1].seller, 1u);
    EXPECT_EQ(r.event->kind, EventKind::trade);
    EXPECT_EQ(best_ask(ex.snapshot())->quantity, 1);
    EXPECT_EQ(ex.tape().size(), 2u);
}

TEST_F(ExchangeTest, PartialFillRestsRemainder) {
    submit(1, 1, Side::ask, 100, 1);
    const auto r = submit(2, 2, Side::bid, 100, 3);
    EXPECT_EQ(r.event->kind, EventKind::partial_fill);
    EXPECT_EQ(*best_bid(ex.snapshot()), (LevelView{Price{100}, 2}));
}

TEST_F(ExchangeTest, NewOrderReplacesTradersPreviousOrder) {
    submit(1, 1, Side::bid, 90, 1);
    const auto r = submit(2, 1, Side::bid, 95, 1);
    ASSERT_TRUE(r.replaced);
    EXPECT_EQ(r.replaced->id, 1u);
    EXPECT_EQ(ex.snapshot().bids.size(), 1u);
    EXPECT_EQ(ex.resting_order(1), OrderId{2});
}

TEST_F(ExchangeTest, RejectsInvalidSubmissions) {
    EXPECT_EQ(submit(1, 1, Side::bid, 0, 1).status, SubmitStatus::invalid_price);
    EXPECT_EQ(submit(1, 1, Side::bid, 201, 1).status, SubmitStatus::invalid_price);
    EXPECT_EQ(submit(1, 1, Side::bid, 50, 0).status, SubmitStatus::invalid_quantity);
    EXPECT_EQ(submit(1, 99, Side::bid, 50, 1).status, SubmitStatus::unknown_trader);
    submit(1, 1, Side::bid, 50, 1);
    EXPECT_EQ(submit(1, 2, Side::bid, 50, 1).status, SubmitStatus::duplicate_order);
    EXPECT_EQ(ex.snapshot().event_seq, 1u);
}

TEST_F(ExchangeTest, CancelWholeAndPartial) {
    submit(1, 1, Side::ask, 120, 5);
    auto c = ex.cancel(1, 1, 1.0, 2);
    ASSERT_TRUE(c.cancelled());
    EXPECT_EQ(c.removed, 2);
    EXPECT_EQ(best_ask(ex.snapshot())->quantity, 3);
    EXPECT_FALSE(ex.cancel(2, 1, 1.0).cancelled());  // not the owner
    c = ex.cancel(1, 1, 2.0);
    EXPECT_EQ(c.removed, 3);
    EXPECT_EQ(c.event->kind, EventKind::cancel);
    EXPECT_TRUE(ex.snapshot().asks.empty());
    EXPECT_FALSE(ex.resting_order(1));
}

TEST_F(ExchangeTest, ReplayReproducesState) {
    submit(1, 1, Side::ask, 101, 3, 0.0);
    submit(2, 2, Side::bid, 99, 2, 1.0);
    submit(3, 3, Side::bid, 102, 1, 2.0);
    ex.cancel(2, 2, 3.0, 1);
    submit(4, 4, Side::ask, 98, 4, 4.0);
    const auto copy = Exchange::replay(ex.price_range(), ex.journal());
    EXPECT_EQ(copy.snapshot(), ex.snapshot());
    EXPECT_EQ(copy.tape(), ex.tape());
}

TEST_F(ExchangeTest, TapeCsv) {
    submit(1, 1, Side::ask, 101, 1, 0.0);
    submit(2, 2, Side::bid, 101, 1, 0.5);
    std::ostringstream out;
    write_tape_csv(out, ex.tape());
    EXPECT_EQ(out.str(), "time,price,quantity,buyer,seller,aggressor\n0.5,101,1,2,1,bid\n");
}
