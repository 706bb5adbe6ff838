#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "hawkes_lob/lob_events.hpp"
#include "hawkes_lob/rng.hpp"

using namespace hawkes_lob;

namespace {

BookState book(double bid, double bid_vol, double ask, double ask_vol) {
    BookState b;
    b.best_bid = bid;
    b.bid_volume = bid_vol;
    b.best_ask = ask;
    b.ask_volume = ask_vol;
    b.has_bid = b.has_ask = true;
    return b;
}

TickRecord trade(double t, double p, double v) { return {t, TickKind::trade, p, v}; }
TickRecord bid(double t, double p, double v = 100.0) { return {t, TickKind::bid_quote, p, v}; }
TickRecord ask(double t, double p, double v = 100.0) { return {t, TickKind::ask_quote, p, v}; }

}  // namespace

TEST_CASE("parse_ticks") {
    SUBCASE("well-formed rows") {
        std::istringstream in("timestamp,kind,price,volume\n1.5,trade,100.0,200\n");
        auto r = parse_ticks(in);
        REQUIRE(r.ticks.size() == 1);
        CHECK(r.ticks[0].timestamp == doctest::Approx(1.5));
        CHECK(r.ticks[0].kind == TickKind::trade);
        CHECK(r.ticks[0].price == doctest::Approx(100.0));
        CHECK(r.ticks[0].volume == doctest::Approx(200.0));
        CHECK(r.rejects.empty());
    }
    SUBCASE("ISO time-of-day timestamps") {
        std::istringstream in(
            "timestamp,kind,price,volume\n09:00:01.5,bid_quote,99.5,100\n"
            "2013-09-02T09:00:02,ask_quote,100.5,50\n");
        auto r = parse_ticks(in);
        REQUIRE(r.ticks.size() == 2);
        CHECK(r.ticks[0].timestamp == doctest::Approx(9 * 3600 + 1.5));
        CHECK(r.ticks[1].timestamp == doctest::Approx(9 * 3600 + 2.0));
    }
    SUBCASE("per-row rejects are collected, not dropped") {
        std::istringstream in(
            "timestamp,kind,price,volume\n"
            "1.0,trade,100.0,0\n"
            "2.0,trade,100.0,50\n"
            "1.5,trade,100.0,50\n"
            "3.0,unknown,100.0,50\n");
        auto r = parse_ticks(in);
        CHECK(r.ticks.size() == 1);
        REQUIRE(r.rejects.size() == 3);
        CHECK(r.rejects[0].reason == "nonpositive volume");
        CHECK(r.rejects[1].reason == "time regression");
        CHECK(r.rejects[2].reason == "unknown kind");
    }
    SUBCASE("bad header is fatal") {
        std::istringstream in("time,price\n1,2\n");
        CHECK_THROWS_AS(parse_ticks(in), std::runtime_error);
    }
}

TEST_CASE("classify_event taxonomy") {
    BookState b = book(99.0, 100.0, 100.0, 100.0);
    SUBCASE("aggressive buy: price above the offer") {
        CHECK(classify_event(trade(0, 101.0, 50.0), b).event_type == 1);
    }
    SUBCASE("aggressive buy: at the offer with volume >= displayed") {
        CHECK(classify_event(trade(0, 100.0, 100.0), b).event_type == 1);
        CHECK(classify_event(trade(0, 100.0, 150.0), b).event_type == 1);
    }
    SUBCASE("passive buy: at the offer with volume below displayed") {
        CHECK(classify_event(trade(0, 100.0, 40.0), b).event_type == 5);
    }
    SUBCASE("aggressive sell cases") {
        CHECK(classify_event(trade(0, 98.0, 10.0), b).event_type == 2);
        CHECK(classify_event(trade(0, 99.0, 100.0), b).event_type == 2);
        CHECK(classify_event(trade(0, 99.0, 99.0), b).event_type == 6);
    }
    SUBCASE("quotes") {
        CHECK(classify_event(bid(0, 99.5), b).event_type == 3);
        CHECK(classify_event(bid(0, 98.0), b).event_type == 7);
        CHECK(classify_event(ask(0, 99.5), b).event_type == 4);
        CHECK(classify_event(ask(0, 101.0), b).event_type == 8);
        // quote exactly at the touch fires nothing
        CHECK(classify_event(bid(0, 99.0), b).event_type == 0);
        CHECK(classify_event(ask(0, 100.0), b).event_type == 0);
    }
    SUBCASE("marketable bid is not a resiliency event under strict mode") {
        CHECK(classify_event(bid(0, 100.5), b).event_type == 0);
        ClassifyOptions loose;
        loose.strict_between_quotes = false;
        CHECK(classify_event(bid(0, 100.5), b, loose).event_type == 3);
    }
    SUBCASE("trade strictly inside the spread matches no predicate") {
        CHECK(classify_event(trade(0, 99.5, 10.0), b).event_type == 0);
    }
    SUBCASE("invalid book defers classification") {
        BookState empty;
        auto ev = classify_event(trade(0, 100.0, 10.0), empty);
        CHECK(ev.event_type == 0);
        CHECK(ev.reason == "book not valid");
    }
}

TEST_CASE("classification is exclusive over randomized grid inputs") {
    Rng rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
        double bid_px = 90.0 + 0.01 * static_cast<double>(rng.next_u64() % 1000);
        double ask_px = bid_px + 0.01 * static_cast<double>(1 + rng.next_u64() % 20);
        BookState b = book(bid_px, 10.0 + double(rng.next_u64() % 500),
                           ask_px, 10.0 + double(rng.next_u64() % 500));
        double px = bid_px + 0.01 * (static_cast<double>(rng.next_u64() % 41) - 10.0);
        if (px <= 0) continue;
        double vol = 1.0 + double(rng.next_u64() % 600);
        TickKind kind = static_cast<TickKind>(rng.next_u64() % 3);
        auto ev = classify_event({0.0, kind, px, vol}, b);

        // Independent predicate evaluation: exactly one must agree.
        const double eps = 0.005;
        int matches = 0;
        auto hit = [&](bool c, int type) {
            if (c) {
                ++matches;
                CHECK(ev.event_type == type);
            }
        };
        if (kind == TickKind::trade) {
            bool eqA = std::fabs(px - b.best_ask) <= eps;
            bool eqB = std::fabs(px - b.best_bid) <= eps;
            hit(px - b.best_ask > eps || (eqA && vol >= b.ask_volume), 1);
            hit(b.best_bid - px > eps || (eqB && vol >= b.bid_volume), 2);
            hit(eqA && vol < b.ask_volume, 5);
            hit(eqB && vol < b.bid_volume, 6);
        } else if (kind == TickKind::bid_quote) {
            hit(px - b.best_bid > eps && b.best_ask - px > eps, 3);
            hit(b.best_bid - px > eps, 7);
        } else {
            hit(b.best_ask - px > eps && px - b.best_bid > eps, 4);
            hit(px - b.best_ask > eps, 8);
        }
        CHECK(matches <= 1);
        if (matches == 0) CHECK(ev.event_type == 0);
    }
}

TEST_CASE("build_event_log") {
    SUBCASE("single aggressive buy") {
        std::vector<TickRecord> ticks{bid(1.0, 99.0), ask(2.0, 100.0), trade(3.0, 101.0, 50.0)};
        auto r = build_event_log(ticks);
        CHECK(r.log.events[0].size() == 1);
        CHECK(r.log.events[1].empty());
    }
    SUBCASE("coincident timestamps perturbed by one microsecond") {
        std::vector<TickRecord> ticks{bid(1.0, 99.0), ask(2.0, 100.0), trade(3.0, 101.0, 50.0),
                                      trade(3.0, 101.0, 50.0)};
        auto r = build_event_log(ticks);
        REQUIRE(r.log.events[0].size() == 2);
        CHECK(r.log.events[0][1] == doctest::Approx(3.0 + 1e-6));
        CHECK(r.perturbed_timestamps == 1);
    }
    SUBCASE("eight-tick scenario covers every type once") {
        std::vector<TickRecord> ticks{
            bid(1.0, 99.0), ask(2.0, 101.0),          // book setup, unclassified
            trade(3.0, 102.0, 50.0),                  // 1
            trade(4.0, 98.0, 50.0),                   // 2
            bid(5.0, 100.0),                          // 3
            ask(6.0, 100.5),                          // 4
            trade(7.0, 100.5, 40.0),                  // 5
            trade(8.0, 100.0, 40.0),                  // 6
            bid(9.0, 99.5),                           // 7
            ask(10.0, 101.0),                         // 8
        };
        BuildOptions opts;
        opts.include_passive = true;
        auto r = build_event_log(ticks, opts);
        for (std::size_t t = 0; t < 8; ++t) CHECK(r.log.events[t].size() == 1);
    }
    SUBCASE("session with no valid book yields empty log") {
        std::vector<TickRecord> ticks{trade(1.0, 100.0, 50.0)};
        auto r = build_event_log(ticks);
        CHECK(r.log.total_events() == 0);
        CHECK(r.deferred == 1);
    }
    SUBCASE("determinism: identical replays produce identical logs") {
        std::vector<TickRecord> ticks{bid(1.0, 99.0), ask(2.0, 100.0), bid(2.5, 99.5),
                                      trade(3.0, 101.0, 50.0), trade(3.0, 101.0, 20.0)};
        auto a = build_event_log(ticks);
        auto b = build_event_log(ticks);
        CHECK(a.log.events == b.log.events);
        CHECK(a.perturbed_timestamps == b.perturbed_timestamps);
    }
    SUBCASE("inside-spread quotes strictly narrow the spread") {
        std::vector<TickRecord> ticks{bid(1.0, 99.0), ask(2.0, 101.0), bid(3.0, 99.5),
                                      ask(4.0, 100.4), bid(5.0, 99.9)};
        auto r = build_event_log(ticks);
        double prev_spread = 1e9;
        std::size_t i = 0;
        for (const auto& ev : r.classified) {
            if (ev.event_type == 3 || ev.event_type == 4) {
                const auto& row = r.book_trace[i];
                CHECK(row.ask - row.bid < prev_spread);
            }
            if (ev.tick.kind != TickKind::trade) {
                prev_spread = r.book_trace[i].ask - r.book_trace[i].bid;
                ++i;
            }
        }
    }
    SUBCASE("session window rebases and discards") {
        BuildOptions opts;
        opts.session_open = 2.0;
        opts.session_close = 9.0;
        std::vector<TickRecord> ticks{bid(1.0, 99.0), bid(2.5, 99.0), ask(3.0, 100.0),
                                      trade(4.0, 101.0, 5.0), trade(10.0, 101.0, 5.0)};
        auto r = build_event_log(ticks, opts);
        CHECK(r.discarded_outside_session == 2);
        REQUIRE(r.log.events[0].size() == 1);
        CHECK(r.log.events[0][0] == doctest::Approx(2.0));  // 4.0 - open
        CHECK(r.log.horizon == doctest::Approx(7.0));
    }
}

TEST_CASE("empirical_intensity") {
    EventLog log;
    log.horizon = 300.0;
    log.events = {{10, 20, 30, 40, 50, 60, 70, 80, 90, 100}};
    auto series = empirical_intensity(log, 300.0);
    REQUIRE(series.size() == 1);
    REQUIRE(series[0].size() == 1);
    CHECK(series[0][0] == 10.0);

    EventLog empty;
    empty.horizon = 600.0;
    empty.events = {{}, {}};
    auto z = empirical_intensity(empty, 300.0);
    CHECK(z[0] == std::vector<double>{0.0, 0.0});
}

TEST_CASE("hourly_profile") {
    EventLog day;
    day.horizon = 7200.0;
    day.events = {{100.0, 200.0, 4000.0, 5000.0}};
    SUBCASE("single day has zero dispersion") {
        auto p = hourly_profile({day});
        REQUIRE(p.mean.size() == 2);
        CHECK(p.mean[0] == 2.0);
        CHECK(p.mean[1] == 2.0);
        CHECK(p.stddev[0] == 0.0);
    }
    SUBCASE("two identical days: SD zero each hour") {
        auto p = hourly_profile({day, day});
        CHECK(p.stddev[0] == 0.0);
        CHECK(p.stddev[1] == 0.0);
    }
}

TEST_CASE("session_stats") {
    SUBCASE("five-day totals and means") {
        std::vector<EventLog> days;
        for (std::size_t c : {300, 310, 320, 330, 323}) {
            EventLog d;
            d.horizon = 100.0;
            d.events.resize(1);
            for (std::size_t i = 0; i < c; ++i)
                d.events[0].push_back(static_cast<double>(i) * 100.0 / static_cast<double>(c));
            days.push_back(std::move(d));
        }
        auto s = session_stats(days);
        CHECK(s.total[0] == 1583);
        CHECK(s.mean_per_day[0] == doctest::Approx(316.6));
    }
    SUBCASE("degenerate inputs") {
        EventLog d;
        d.horizon = 10.0;
        d.events = {{1.0, 2.0}};
        auto one = session_stats({d});
        CHECK(one.single_day);
        CHECK(one.sd_per_day[0] == 0.0);
        auto none = session_stats({});
        CHECK(none.empty);
    }
}
