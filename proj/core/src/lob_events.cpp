#include "hawkes_lob/lob_events.hpp"

#include "hawkes_lob/stats.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hawkes_lob {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    return out;
}

// Numeric seconds, "HH:MM:SS[.frac]", or "YYYY-MM-DD[T ]HH:MM:SS[.frac]";
// ISO forms map to seconds since midnight.
std::optional<double> parse_timestamp(const std::string& s) {
    if (s.empty()) return std::nullopt;
    {
        std::size_t pos = 0;
        try {
            double v = std::stod(s, &pos);
            if (pos == s.size()) return v;
        } catch (...) {
        }
    }
    std::string tod = s;
    auto sep = s.find_first_of("T ");
    if (sep != std::string::npos && s.find('-') != std::string::npos) tod = s.substr(sep + 1);
    int h = 0, m = 0;
    double sec = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream is(tod);
    is >> h >> c1 >> m >> c2 >> sec;
    if (is.fail() || c1 != ':' || c2 != ':') return std::nullopt;
    if (h < 0 || h > 23 || m < 0 || m > 59 || sec < 0.0 || sec >= 61.0) return std::nullopt;
    return 3600.0 * h + 60.0 * m + sec;
}

std::optional<TickKind> parse_kind(const std::string& s) {
    if (s == "trade") return TickKind::trade;
    if (s == "bid_quote" || s == "bid") return TickKind::bid_quote;
    if (s == "ask_quote" || s == "ask") return TickKind::ask_quote;
    return std::nullopt;
}

}  // namespace

const char* to_string(TickKind k) {
    switch (k) {
        case TickKind::trade: return "trade";
        case TickKind::bid_quote: return "bid_quote";
        default: return "ask_quote";
    }
}

ParseResult parse_ticks(std::istream& in) {
    ParseResult out;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_ticks: empty input");
    {
        auto cols = split_csv(line);
        if (cols != std::vector<std::string>{"timestamp", "kind", "price", "volume"})
            throw std::runtime_error("parse_ticks: expected header timestamp,kind,price,volume");
    }
    std::size_t lineno = 1;
    double last_ts = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cols = split_csv(line);
        auto reject = [&](const std::string& why) {
            out.rejects.push_back({lineno, why, line});
        };
        if (cols.size() != 4) {
            reject("wrong field count");
            continue;
        }
        auto ts = parse_timestamp(cols[0]);
        if (!ts) {
            reject("unparseable timestamp");
            continue;
        }
        auto kind = parse_kind(cols[1]);
        if (!kind) {
            reject("unknown kind");
            continue;
        }
        double price = 0.0, volume = 0.0;
        try {
            price = std::stod(cols[2]);
            volume = std::stod(cols[3]);
        } catch (...) {
            reject("unparseable price/volume");
            continue;
        }
        if (!(price > 0.0)) {
            reject("nonpositive price");
            continue;
        }
        if (!(volume > 0.0)) {
            reject("nonpositive volume");
            continue;
        }
        if (*ts < last_ts) {
            reject("time regression");
            continue;
        }
        last_ts = *ts;
        out.ticks.push_back({*ts, *kind, price, volume});
    }
    return out;
}

ClassifiedEvent classify_event(const TickRecord& tick, const BookState& book,
                               const ClassifyOptions& opts) {
    ClassifiedEvent ev;
    ev.timestamp = tick.timestamp;
    ev.tick = tick;
    if (!book.valid()) {
        ev.reason = "book not valid";
        return ev;
    }
    const double eps = 0.5 * opts.tick_size;
    auto eq = [eps](double a, double b) { return std::fabs(a - b) <= eps; };
    auto gt = [eps](double a, double b) { return a - b > eps; };
    auto lt = [eps](double a, double b) { return b - a > eps; };

    const double A = book.best_ask, B = book.best_bid;
    switch (tick.kind) {
        case TickKind::trade: {
            const double P = tick.price, VP = tick.volume;
            if (gt(P, A) || (eq(P, A) && VP >= book.ask_volume)) ev.event_type = 1;
            else if (lt(P, B) || (eq(P, B) && VP >= book.bid_volume)) ev.event_type = 2;
            else if (eq(P, A) && VP < book.ask_volume) ev.event_type = 5;
            else if (eq(P, B) && VP < book.bid_volume) ev.event_type = 6;
            break;
        }
        case TickKind::bid_quote: {
            const double Bq = tick.price;
            if (gt(Bq, B) && (!opts.strict_between_quotes || lt(Bq, A))) ev.event_type = 3;
            else if (lt(Bq, B)) ev.event_type = 7;
            break;
        }
        case TickKind::ask_quote: {
            const double Aq = tick.price;
            if (lt(Aq, A) && (!opts.strict_between_quotes || gt(Aq, B))) ev.event_type = 4;
            else if (gt(Aq, A)) ev.event_type = 8;
            break;
        }
    }
    return ev;
}

BuildResult build_event_log(const std::vector<TickRecord>& ticks, const BuildOptions& opts) {
    BuildResult out;
    const std::size_t num_types = opts.include_passive ? 8 : 4;
    out.log.events.resize(num_types);
    static const char* kLabels[8] = {"aggressive_buy", "aggressive_sell", "aggressive_bid",
                                     "aggressive_ask", "passive_buy",     "passive_sell",
                                     "passive_bid",    "passive_ask"};
    out.log.type_labels.assign(kLabels, kLabels + num_types);

    const double open = opts.session_open.value_or(0.0);
    const double close = opts.session_close.value_or(
        ticks.empty() ? 0.0 : ticks.back().timestamp);

    BookState book;
    double max_ts = 0.0;
    for (const TickRecord& raw : ticks) {
        if (raw.timestamp < open || raw.timestamp > close) {
            ++out.discarded_outside_session;
            continue;
        }
        TickRecord tick = raw;
        tick.timestamp -= open;

        // Trades and quotes are classified against the book prior to the tick.
        ClassifiedEvent ev = classify_event(tick, book, opts.classify);
        if (!book.valid() && tick.kind == TickKind::trade) ++out.deferred;
        out.classified.push_back(ev);

        if (tick.kind == TickKind::bid_quote) {
            book.best_bid = tick.price;
            book.bid_volume = tick.volume;
            book.has_bid = true;
        } else if (tick.kind == TickKind::ask_quote) {
            book.best_ask = tick.price;
            book.ask_volume = tick.volume;
            book.has_ask = true;
        }
        if (tick.kind != TickKind::trade) {
            if (book.has_bid && book.has_ask && book.best_bid >= book.best_ask)
                ++out.crossed_books;
            out.book_trace.push_back({tick.timestamp, book.best_bid, book.bid_volume,
                                      book.best_ask, book.ask_volume});
        }

        int type = ev.event_type;
        if (type >= 1 && static_cast<std::size_t>(type) <= num_types) {
            auto& seq = out.log.events[static_cast<std::size_t>(type - 1)];
            double ts = tick.timestamp;
            if (!seq.empty() && ts <= seq.back()) {
                ts = seq.back() + 1e-6;
                ++out.perturbed_timestamps;
            }
            seq.push_back(ts);
            max_ts = std::max(max_ts, ts);
        }
    }
    out.log.horizon = std::max(close - open, max_ts);
    return out;
}

std::vector<std::vector<double>> empirical_intensity(const EventLog& log, double window) {
    if (!(window > 0.0)) throw std::domain_error("empirical_intensity: window must be > 0");
    const auto n_windows =
        static_cast<std::size_t>(std::max(1.0, std::ceil(log.horizon / window)));
    std::vector<std::vector<double>> out(log.num_types(), std::vector<double>(n_windows, 0.0));
    for (std::size_t r = 0; r < log.num_types(); ++r)
        for (double t : log.events[r]) {
            auto w = static_cast<std::size_t>(t / window);
            if (w >= n_windows) w = n_windows - 1;
            out[r][w] += 1.0;
        }
    return out;
}

HourlyProfile hourly_profile(const std::vector<EventLog>& days) {
    HourlyProfile out;
    if (days.empty()) return out;
    double max_h = 0.0;
    for (const auto& d : days) max_h = std::max(max_h, d.horizon);
    const auto n_hours = static_cast<std::size_t>(std::max(1.0, std::ceil(max_h / 3600.0)));
    std::vector<std::vector<double>> counts(n_hours, std::vector<double>(days.size(), 0.0));
    for (std::size_t d = 0; d < days.size(); ++d)
        for (const auto& seq : days[d].events)
            for (double t : seq) {
                auto h = static_cast<std::size_t>(t / 3600.0);
                if (h >= n_hours) h = n_hours - 1;
                counts[h][d] += 1.0;
            }
    out.mean.resize(n_hours);
    out.stddev.resize(n_hours);
    for (std::size_t h = 0; h < n_hours; ++h) {
        out.mean[h] = stats::mean(counts[h]);
        out.stddev[h] = days.size() > 1 ? stats::sample_stddev(counts[h]) : 0.0;
    }
    return out;
}

SessionStats session_stats(const std::vector<EventLog>& days) {
    SessionStats out;
    if (days.empty()) {
        out.empty = true;
        return out;
    }
    out.single_day = days.size() == 1;
    const std::size_t R = days.front().num_types();
    out.total.assign(R, 0);
    out.mean_per_day.assign(R, 0.0);
    out.sd_per_day.assign(R, 0.0);
    for (std::size_t r = 0; r < R; ++r) {
        std::vector<double> per_day;
        per_day.reserve(days.size());
        for (const auto& d : days) {
            std::size_t c = r < d.num_types() ? d.events[r].size() : 0;
            out.total[r] += c;
            per_day.push_back(static_cast<double>(c));
        }
        out.mean_per_day[r] = stats::mean(per_day);
        out.sd_per_day[r] = out.single_day ? 0.0 : stats::sample_stddev(per_day);
    }
    return out;
}

}  // namespace hawkes_lob
