#include <benchmark/benchmark.h>

#include <vector>

#include "lobsim/exchange.h"
#include "lobsim/imbalance.h"
#include "lobsim/session.h"

using namespace lobsim;

namespace {

// Snapshot stream from a random order flow on a small price grid.
std::vector<LobSnapshot> snapshot_stream(std::size_t events) {
    Exchange ex(PriceRange{Price{1}, Price{200}});
    for (TraderId t = 1; t <= 20; ++t) ex.register_trader(t);
    Rng rng{5};
    std::vector<LobSnapshot> out{ex.snapshot()};
    OrderId id = 1;
    while (out.size() <= events) {
        const auto t = static_cast<TraderId>(1 + rng() % 20);
        const Side side = rng() % 2 ? Side::bid : Side::ask;
        const int price = side == Side::bid ? 90 + static_cast<int>(rng() % 12) : 99 + static_cast<int>(rng() % 12);
        const auto r = ex.submit(Order{id++, t, side, Price{price}, 1 + static_cast<Quantity>(rng() % 5), 0.0});
        if (r.event) out.push_back(r.event->snapshot);
    }
    return out;
}

void BM_LevelFlows(benchmark::State& state) {
    const auto snaps = snapshot_stream(4096);
    const int levels = static_cast<int>(state.range(0));
    std::size_t i = 1;
    for (auto _ : state) {
        auto f = level_flows(snaps[i - 1], snaps[i], levels);
        benchmark::DoNotOptimize(f);
        if (++i == snaps.size()) i = 1;
    }
}
BENCHMARK(BM_LevelFlows)->Arg(1)->Arg(5)->Arg(10);

void BM_WindowOffset(benchmark::State& state) {
    const auto snaps = snapshot_stream(4096);
    ImbalanceParams p;
    MlofiWindow w(p);
    std::size_t i = 1;
    for (auto _ : state) {
        w.push(snaps[i - 1], snaps[i]);
        benchmark::DoNotOptimize(offset(w, p));
        if (++i == snaps.size()) i = 1;
    }
}
BENCHMARK(BM_WindowOffset);

void BM_Session(benchmark::State& state) {
    SessionConfig c;
    const auto n = static_cast<int>(state.range(0));
    c.roster = {{"ZZIZIP", n, Role::buyer}, {"ZIP", n, Role::buyer}, {"ZZIZIP", n, Role::seller}, {"ZIP", n, Role::seller}};
    c.blocks = {BlockEvent{}};
    std::uint64_t seed = 1;
    std::size_t events = 0;
    for (auto _ : state) {
        c.seed = seed++;
        const auto r = run_session(c);
        events += r.event_count;
    }
    state.counters["events"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Session)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
