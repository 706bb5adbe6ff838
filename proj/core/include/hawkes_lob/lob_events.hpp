#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hawkes_lob/model.hpp"

namespace hawkes_lob {

enum class TickKind { trade, bid_quote, ask_quote };

struct TickRecord {
    double timestamp = 0.0;  // session-relative seconds
    TickKind kind = TickKind::trade;
    double price = 0.0;
    double volume = 0.0;
};

// Prevailing level-1 state; invalid until both sides have been seen.
struct BookState {
    double best_bid = 0.0;
    double best_ask = 0.0;
    double bid_volume = 0.0;
    double ask_volume = 0.0;
    bool has_bid = false;
    bool has_ask = false;

    bool valid() const { return has_bid && has_ask && best_bid < best_ask; }
};

// Event taxonomy: 1 buy trade moving the offer, 2 sell trade moving the bid,
// 3 bid inside the spread, 4 offer inside the spread, 5/6 passive trades,
// 7/8 passive quotes. 0 means unclassified.
struct ClassifiedEvent {
    double timestamp = 0.0;
    int event_type = 0;  // 1..8, or 0 for none/deferred
    TickRecord tick;
    std::string reason;  // set when classification was deferred
};

struct RejectRecord {
    std::size_t line = 0;
    std::string reason;
    std::string raw;
};

struct ParseResult {
    std::vector<TickRecord> ticks;
    std::vector<RejectRecord> rejects;
};

// CSV with header `timestamp,kind,price,volume`; timestamps are numeric
// seconds or ISO-8601 (date optional). Malformed rows land in the rejects
// report; a bad header throws std::runtime_error.
ParseResult parse_ticks(std::istream& in);

struct ClassifyOptions {
    double tick_size = 0.01;
    // Require inside-the-spread quotes to sit strictly between the touch
    // prices, so marketable quotes are not double-counted with the trade
    // they will print as.
    bool strict_between_quotes = true;
};

ClassifiedEvent classify_event(const TickRecord& tick, const BookState& book,
                               const ClassifyOptions& opts = {});

struct BuildOptions {
    ClassifyOptions classify;
    bool include_passive = false;  // emit types 5..8 as well
    // Ticks outside [session_open, session_close] are discarded; timestamps
    // are re-based to session_open. Defaults to [0, last tick].
    std::optional<double> session_open;
    std::optional<double> session_close;
};

struct BookTraceRow {
    double timestamp = 0.0;
    double bid = 0.0, bid_volume = 0.0;
    double ask = 0.0, ask_volume = 0.0;
};

struct BuildResult {
    EventLog log;
    std::vector<ClassifiedEvent> classified;  // replay order, all ticks
    std::vector<BookTraceRow> book_trace;
    std::size_t perturbed_timestamps = 0;  // +1us collision shifts applied
    std::size_t deferred = 0;              // ticks seen before a valid book
    std::size_t crossed_books = 0;         // quote updates that crossed the book
    std::size_t discarded_outside_session = 0;
};

// Replays ticks through the book, classifies each, and emits per-type
// strictly increasing timestamp sequences.
BuildResult build_event_log(const std::vector<TickRecord>& ticks, const BuildOptions& opts = {});

// Counts per non-overlapping window of `window` seconds, per type.
std::vector<std::vector<double>> empirical_intensity(const EventLog& log, double window = 300.0);

struct HourlyProfile {
    std::vector<double> mean;    // events per hour-of-session slot
    std::vector<double> stddev;  // across days; 0 when only one day
};

HourlyProfile hourly_profile(const std::vector<EventLog>& days);

struct SessionStats {
    std::vector<std::size_t> total;  // per type, over all days
    std::vector<double> mean_per_day;
    std::vector<double> sd_per_day;  // 0 with single_day flag when one day
    bool single_day = false;
    bool empty = false;
};

SessionStats session_stats(const std::vector<EventLog>& days);

const char* to_string(TickKind k);

}  // namespace hawkes_lob
