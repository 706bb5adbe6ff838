#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hawkes_lob/calibrator.hpp"
#include "hawkes_lob/diagnostics.hpp"
#include "hawkes_lob/io.hpp"
#include "hawkes_lob/lob_events.hpp"
#include "hawkes_lob/model.hpp"
#include "hawkes_lob/simulator.hpp"
#include "hawkes_lob/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hawkes_lob;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DependencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json_file(const fs::path& path, bool config_file) {
    if (!fs::exists(path)) {
        if (config_file) throw ConfigError("config_not_found: " + path.string());
        throw InputError("input_not_found: " + path.string());
    }
    std::ifstream in(path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        if (config_file) throw ConfigError("config_parse: " + std::string(e.what()));
        throw InputError("input_parse: " + std::string(e.what()));
    }
    return j;
}

// day -> path map from a config object, alphabetical day order.
std::map<std::string, fs::path> day_map(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_object() || j.at(key).empty())
        throw ConfigError(std::string("config: `") + key + "` must be a non-empty object");
    std::map<std::string, fs::path> out;
    for (auto it = j.at(key).begin(); it != j.at(key).end(); ++it)
        out[it.key()] = it.value().get<std::string>();
    return out;
}

EventLog load_event_log(const fs::path& path) {
    if (!fs::exists(path)) throw InputError("input_not_found: " + path.string());
    std::ifstream in(path);
    try {
        return io::read_event_log_csv(in);
    } catch (const std::exception& e) {
        throw InputError("input_parse: " + path.string() + ": " + e.what());
    }
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(std::string("config: `") + key + "` must be numeric");
    return j.at(key).get<double>();
}

std::vector<std::size_t> m_values_from(const json& j) {
    std::vector<std::size_t> ms{1};
    if (j.contains("m_values")) {
        ms.clear();
        for (const auto& v : j.at("m_values")) {
            auto m = v.get<long long>();
            if (m < 1) throw ConfigError("config: m_values entries must be >= 1");
            ms.push_back(static_cast<std::size_t>(m));
        }
        if (ms.empty()) throw ConfigError("config: m_values must be non-empty");
    }
    return ms;
}

CalibrationOptions calibration_options_from(const json& j) {
    CalibrationOptions opts;
    if (!j.contains("options")) return opts;
    const json& o = j.at("options");
    opts.population_size = static_cast<std::size_t>(get_num(o, "population_size", 60));
    opts.generations = static_cast<std::size_t>(get_num(o, "generations", 80));
    opts.local_max_iters = static_cast<std::size_t>(get_num(o, "local_max_iters", 500));
    opts.local_tolerance = get_num(o, "local_tolerance", 1e-6);
    opts.restarts = static_cast<std::size_t>(get_num(o, "restarts", 3));
    if (o.contains("baseline_knots"))
        opts.baseline_knots = o.at("baseline_knots").get<std::vector<double>>();
    if (o.contains("bounds")) {
        const json& b = o.at("bounds");
        opts.bounds.mu_lo = get_num(b, "mu_lo", opts.bounds.mu_lo);
        opts.bounds.mu_hi = get_num(b, "mu_hi", opts.bounds.mu_hi);
        opts.bounds.alpha_lo = get_num(b, "alpha_lo", opts.bounds.alpha_lo);
        opts.bounds.alpha_hi = get_num(b, "alpha_hi", opts.bounds.alpha_hi);
        opts.bounds.tau_lo = get_num(b, "tau_lo", opts.bounds.tau_lo);
        opts.bounds.tau_hi = get_num(b, "tau_hi", opts.bounds.tau_hi);
    }
    const ParamBounds& pb = opts.bounds;
    if (pb.tau_lo <= 0.0 || pb.tau_hi <= pb.tau_lo || pb.alpha_hi <= 0.0 ||
        pb.alpha_lo < 0.0 || pb.mu_lo < 0.0 || (pb.mu_hi > 0.0 && pb.mu_hi <= pb.mu_lo))
        throw ConfigError("config: malformed parameter bounds");
    if (opts.local_tolerance <= 0.0) throw ConfigError("config: local_tolerance must be > 0");
    return opts;
}

BatteryOptions battery_options_from(const json& j) {
    BatteryOptions opts;
    if (j.contains("levels")) {
        const json& l = j.at("levels");
        opts.ks_level = get_num(l, "ks", opts.ks_level);
        opts.ed_level = get_num(l, "ed", opts.ed_level);
        opts.lbq_level = get_num(l, "lbq", opts.lbq_level);
        opts.kpss_level = get_num(l, "kpss", opts.kpss_level);
        for (double lv : {opts.ks_level, opts.ed_level, opts.lbq_level, opts.kpss_level})
            if (!(lv > 0.0 && lv < 1.0)) throw ConfigError("config: levels must lie in (0, 1)");
    }
    if (j.value("include_leading", false)) opts.residual_options.include_leading = true;
    return opts;
}

struct Cli {
    fs::path config_path;
    bool force = false;
    bool validate_only = false;
    std::size_t jobs = 1;
    std::optional<std::uint64_t> seed;
};

void run_items(std::size_t jobs, std::size_t count, const std::function<void(std::size_t)>& work) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, count); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

fs::path output_dir_from(const json& j) {
    if (!j.contains("output_dir")) throw ConfigError("config: `output_dir` is required");
    return fs::path(j.at("output_dir").get<std::string>());
}

// ---------------------------------------------------------------- extract

BuildOptions build_options_from(const json& j) {
    BuildOptions opts;
    opts.classify.tick_size = get_num(j, "tick_size", 0.01);
    if (opts.classify.tick_size <= 0.0) throw ConfigError("config: tick_size must be > 0");
    opts.classify.strict_between_quotes = j.value("strict_between_quotes", true);
    opts.include_passive = j.value("include_passive", false);
    if (j.contains("session_open")) opts.session_open = j.at("session_open").get<double>();
    if (j.contains("session_close")) opts.session_close = j.at("session_close").get<double>();
    if (opts.session_open && opts.session_close && *opts.session_close <= *opts.session_open)
        throw ConfigError("config: session_close must exceed session_open");
    return opts;
}

int cmd_extract(const json& cfg, const Cli& cli) {
    auto days = day_map(cfg, "ticks");
    auto opts = build_options_from(cfg);
    if (cli.validate_only) return 0;
    fs::path out_dir = output_dir_from(cfg);

    std::vector<EventLog> logs;
    std::vector<std::string> labels;
    for (const auto& [day, path] : days) {
        if (!fs::exists(path)) throw InputError("input_not_found: " + path.string());
        std::ifstream in(path);
        ParseResult parsed;
        try {
            parsed = parse_ticks(in);
        } catch (const std::exception& e) {
            throw InputError("input_parse: " + path.string() + ": " + e.what());
        }
        auto built = build_event_log(parsed.ticks, opts);
        if (built.log.total_events() == 0)
            std::cerr << "warning: day " << day << " produced an empty event log\n";
        labels = built.log.type_labels;

        std::ostringstream ev;
        io::write_event_log_csv(ev, built.log);
        io::atomic_write(out_dir / ("events_" + day + ".csv"), ev.str());
        std::ostringstream rej;
        io::write_rejects_csv(rej, parsed.rejects);
        io::atomic_write(out_dir / ("rejects_" + day + ".csv"), rej.str());
        std::ostringstream trace;
        io::write_book_trace_csv(trace, built.book_trace);
        io::atomic_write(out_dir / ("book_trace_" + day + ".csv"), trace.str());
        logs.push_back(std::move(built.log));
    }
    std::ostringstream stats;
    io::write_session_stats_csv(stats, session_stats(logs), labels);
    io::atomic_write(out_dir / "session_stats.csv", stats.str());
    return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const json& cfg, const Cli& cli) {
    if (!cfg.contains("model")) throw ConfigError("config: `model` is required");
    HawkesModel model;
    try {
        if (cfg.at("model").is_string())
            model = io::model_from_json(load_json_file(cfg.at("model").get<std::string>(), false));
        else
            model = io::model_from_json(cfg.at("model"));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("config: bad model: " + std::string(e.what()));
    }
    SimulationConfig sim_cfg;
    sim_cfg.horizon = get_num(cfg, "horizon", model.horizon);
    if (sim_cfg.horizon <= 0.0) throw ConfigError("config: horizon must be > 0");
    sim_cfg.seed = cli.seed.value_or(static_cast<std::uint64_t>(get_num(cfg, "seed", 0)));
    sim_cfg.max_events = static_cast<std::uint64_t>(get_num(cfg, "max_events", 1e7));
    if (cli.validate_only) return 0;
    fs::path out_dir = output_dir_from(cfg);

    model.horizon = std::max(model.horizon, sim_cfg.horizon);
    for (auto& b : model.baselines)
        if (b.end() < model.horizon) {
            b.knots.push_back(model.horizon);
            b.values.push_back(b.values.back());
        }
    auto result = simulate(model, sim_cfg);
    if (result.truncated)
        std::cerr << "warning: simulation truncated at " << result.log.total_events()
                  << " events; check kernel stability\n";

    std::ostringstream ev;
    io::write_event_log_csv(ev, result.log);
    io::atomic_write(out_dir / "sim_events.csv", ev.str());
    io::atomic_write(out_dir / "sim_metadata.json",
                     io::simulation_metadata(model, result, sim_cfg.seed).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- calibrate

std::uint64_t derive_seed(std::uint64_t base, std::size_t day_idx, std::size_t m) {
    return base * 1000003ULL + static_cast<std::uint64_t>(day_idx) * 131ULL +
           static_cast<std::uint64_t>(m);
}

int cmd_calibrate(const json& cfg, const Cli& cli) {
    auto days = day_map(cfg, "events");
    auto ms = m_values_from(cfg);
    auto base_opts = calibration_options_from(cfg);
    std::uint64_t base_seed =
        cli.seed.value_or(static_cast<std::uint64_t>(get_num(cfg, "seed", 0)));
    if (cli.validate_only) return 0;
    fs::path out_dir = output_dir_from(cfg);

    struct Item {
        std::string day;
        fs::path events;
        std::size_t day_idx;
        std::size_t m;
    };
    std::vector<Item> items;
    std::size_t day_idx = 0;
    for (const auto& [day, path] : days) {
        for (std::size_t m : ms) items.push_back({day, path, day_idx, m});
        ++day_idx;
    }
    run_items(cli.jobs, items.size(), [&](std::size_t i) {
        const Item& item = items[i];
        fs::path out = out_dir / ("fit_" + item.day + "_M" + std::to_string(item.m) + ".json");
        if (!cli.force && fs::exists(out)) return;
        EventLog log = load_event_log(item.events);
        CalibrationOptions opts = base_opts;
        opts.num_exponentials = item.m;
        opts.seed = derive_seed(base_seed, item.day_idx, item.m);
        FitResult fit = calibrate(log, opts);
        fit.wall_time_sec = 0.0;  // keep reruns byte-identical
        io::atomic_write(out, io::fit_result_to_json(fit).dump(2) + "\n");
    });
    return 0;
}

// ---------------------------------------------------------------- diagnose

int cmd_diagnose(const json& cfg, const Cli& cli) {
    auto days = day_map(cfg, "events");
    auto ms = m_values_from(cfg);
    auto battery_opts = battery_options_from(cfg);
    if (!cfg.contains("fits_dir")) throw ConfigError("config: `fits_dir` is required");
    fs::path fits_dir = cfg.at("fits_dir").get<std::string>();
    if (cli.validate_only) return 0;
    fs::path out_dir = output_dir_from(cfg);

    std::vector<std::string> missing;
    for (const auto& [day, path] : days)
        for (std::size_t m : ms) {
            fs::path fit = fits_dir / ("fit_" + day + "_M" + std::to_string(m) + ".json");
            if (!fs::exists(fit)) missing.push_back(fit.string());
        }
    if (!missing.empty()) {
        std::string detail;
        for (const auto& m : missing) detail += m + " ";
        throw DependencyError("missing_fit_results: " + detail);
    }

    std::vector<std::tuple<std::string, std::size_t, std::size_t, TestReport>> rows;
    std::map<std::size_t, std::vector<TestReport>> by_m[4];
    for (const auto& [day, path] : days) {
        EventLog log = load_event_log(path);
        for (std::size_t m : ms) {
            fs::path fit_path = fits_dir / ("fit_" + day + "_M" + std::to_string(m) + ".json");
            FitResult fit = io::fit_result_from_json(load_json_file(fit_path, false));
            auto batteries = battery(fit.model, log, battery_opts);
            for (const auto& tb : batteries) {
                if (tb.skipped) continue;
                for (std::size_t t = 0; t < tb.reports.size(); ++t) {
                    rows.emplace_back(day, tb.target, m, tb.reports[t]);
                    by_m[t][m].push_back(tb.reports[t]);
                }
            }
        }
    }
    std::ostringstream reports;
    io::write_test_reports_csv(reports, rows);
    io::atomic_write(out_dir / "test_reports.csv", reports.str());

    std::vector<StabilityTestRow> summary;
    for (std::size_t m : ms) {
        StabilityTestRow row;
        row.num_exponentials = m;
        auto fill = [&](std::size_t idx, double& h0, double& p) {
            const auto& reps = by_m[idx][m];
            if (reps.empty()) return;
            double acc = 0.0, psum = 0.0;
            for (const auto& r : reps) {
                acc += r.accept_h0 ? 1.0 : 0.0;
                psum += r.p_value.value_or(0.0);
            }
            h0 = acc / static_cast<double>(reps.size());
            p = psum / static_cast<double>(reps.size());
        };
        fill(0, row.ks_h0, row.ks_p);
        fill(1, row.ed_h0, row.ed_p);
        fill(2, row.lbq_h0, row.lbq_p);
        fill(3, row.kpss_h0, row.kpss_p);
        summary.push_back(row);
    }
    std::ostringstream table;
    io::write_summary_table_csv(table, summary);
    io::atomic_write(out_dir / "summary_by_m.csv", table.str());
    return 0;
}

// ---------------------------------------------------------------- stability

int cmd_stability(const json& cfg, const Cli& cli) {
    if (!cfg.contains("events") || !cfg.at("events").is_string())
        throw ConfigError("config: `events` must be a single event log path");
    auto ms = m_values_from(cfg);
    auto base_opts = calibration_options_from(cfg);
    auto battery_opts = battery_options_from(cfg);
    auto repeats = static_cast<std::size_t>(get_num(cfg, "repeats", 0));
    if (repeats < 2) throw ConfigError("config: repeats must be >= 2");
    std::uint64_t base_seed =
        cli.seed.value_or(static_cast<std::uint64_t>(get_num(cfg, "seed", 0)));
    if (cli.validate_only) return 0;
    fs::path out_dir = output_dir_from(cfg);
    EventLog log = load_event_log(cfg.at("events").get<std::string>());

    std::vector<StabilityTestRow> summary;
    std::ostringstream pvals, rates;
    pvals << "M,repeat,target,test,p_value\n";
    rates << "M,test,pass_rate\n";
    for (std::size_t m : ms) {
        CalibrationOptions opts = base_opts;
        opts.num_exponentials = m;
        opts.seed = derive_seed(base_seed, 0, m);
        opts.jobs = cli.jobs;
        auto result = stability_run(log, opts, repeats, battery_opts);
        StabilityTestRow row = result.summary;
        row.num_exponentials = m;
        summary.push_back(row);
        static const char* kTests[] = {"KS", "ED", "LBQ", "KPSS"};
        for (std::size_t rep = 0; rep < result.batteries.size(); ++rep)
            for (const auto& tb : result.batteries[rep]) {
                if (tb.skipped) continue;
                for (std::size_t t = 0; t < tb.reports.size(); ++t)
                    pvals << m << ',' << rep << ',' << (tb.target + 1) << ',' << kTests[t] << ','
                          << io::format_double(tb.reports[t].p_value.value_or(0.0)) << '\n';
            }
        const double h0s[] = {row.ks_h0, row.ed_h0, row.lbq_h0, row.kpss_h0};
        for (std::size_t t = 0; t < 4; ++t)
            rates << m << ',' << kTests[t] << ',' << io::format_double(h0s[t]) << '\n';
    }
    std::ostringstream table;
    io::write_summary_table_csv(table, summary);
    io::atomic_write(out_dir / "stability_summary.csv", table.str());
    io::atomic_write(out_dir / "stability_p_values.csv", pvals.str());
    io::atomic_write(out_dir / "stability_pass_rates.csv", rates.str());
    return 0;
}

// ---------------------------------------------------------------- report

int cmd_report(const json& cfg, const Cli& cli) {
    auto days = day_map(cfg, "events");
    double window = get_num(cfg, "window", 300.0);
    if (window <= 0.0) throw ConfigError("config: window must be > 0");
    bool rolling = cfg.value("rolling", false);
    std::optional<fs::path> fits_dir;
    if (cfg.contains("fits_dir")) fits_dir = fs::path(cfg.at("fits_dir").get<std::string>());
    auto ms = m_values_from(cfg);
    if (cli.validate_only) return 0;
    fs::path out_dir = output_dir_from(cfg);

    std::vector<EventLog> logs;
    for (const auto& [day, path] : days) {
        EventLog log = load_event_log(path);
        std::ostringstream out;
        out << "type_index,window_start_sec,count\n";
        if (rolling) {
            double step = window / 5.0;
            for (std::size_t r = 0; r < log.num_types(); ++r)
                for (double t0 = 0.0; t0 + window <= log.horizon + 1e-9; t0 += step) {
                    std::size_t count = 0;
                    for (double t : log.events[r])
                        if (t >= t0 && t < t0 + window) ++count;
                    out << (r + 1) << ',' << io::format_double(t0) << ',' << count << '\n';
                }
        } else {
            auto series = empirical_intensity(log, window);
            for (std::size_t r = 0; r < series.size(); ++r)
                for (std::size_t w = 0; w < series[r].size(); ++w)
                    out << (r + 1) << ',' << io::format_double(static_cast<double>(w) * window)
                        << ',' << series[r][w] << '\n';
        }
        io::atomic_write(out_dir / ("intensity_" + day + ".csv"), out.str());
        logs.push_back(std::move(log));
    }

    auto profile = hourly_profile(logs);
    std::ostringstream hourly;
    hourly << "hour,mean_events,sd_events\n";
    for (std::size_t h = 0; h < profile.mean.size(); ++h)
        hourly << h << ',' << io::format_double(profile.mean[h]) << ','
               << io::format_double(profile.stddev[h]) << '\n';
    io::atomic_write(out_dir / "hourly_profile.csv", hourly.str());

    if (fits_dir) {
        std::ostringstream baseline, branching, half;
        baseline << "M,target,mean_baseline\n";
        branching << "M,target,median,q1,q3,whisker_lo,whisker_hi,n_outliers\n";
        half << "M,target,median,q1,q3,whisker_lo,whisker_hi,n_outliers\n";
        for (std::size_t m : ms) {
            std::vector<std::vector<double>> br, hl;  // [target][day]
            std::vector<std::vector<double>> mu;      // [target][day]
            std::vector<std::string> missing;
            for (const auto& [day, path] : days) {
                fs::path fit_path = *fits_dir / ("fit_" + day + "_M" + std::to_string(m) + ".json");
                if (!fs::exists(fit_path)) {
                    missing.push_back(fit_path.string());
                    continue;
                }
                FitResult fit = io::fit_result_from_json(load_json_file(fit_path, false));
                std::size_t R = fit.model.num_types();
                br.resize(R);
                hl.resize(R);
                mu.resize(R);
                for (std::size_t t = 0; t < R; ++t) {
                    br[t].push_back(fit.self_branching[t]);
                    hl[t].push_back(fit.self_half_life[t]);
                    double T = fit.model.horizon;
                    mu[t].push_back(baseline_integral(fit.model.baselines[t], 0.0, T) / T);
                }
            }
            if (!missing.empty()) {
                std::string detail;
                for (const auto& s : missing) detail += s + " ";
                throw DependencyError("missing_fit_results: " + detail);
            }
            for (std::size_t t = 0; t < br.size(); ++t) {
                baseline << m << ',' << (t + 1) << ',' << io::format_double(stats::mean(mu[t]))
                         << '\n';
                for (auto* pair : {&branching, &half}) {
                    const auto& data = (pair == &branching) ? br[t] : hl[t];
                    auto bp = stats::box_plot(data);
                    *pair << m << ',' << (t + 1) << ',' << io::format_double(bp.median) << ','
                          << io::format_double(bp.q1) << ',' << io::format_double(bp.q3) << ','
                          << io::format_double(bp.whisker_lo) << ','
                          << io::format_double(bp.whisker_hi) << ',' << bp.outliers.size() << '\n';
                }
            }
        }
        io::atomic_write(out_dir / "baseline_means.csv", baseline.str());
        io::atomic_write(out_dir / "branching_box.csv", branching.str());
        io::atomic_write(out_dir / "half_life_box.csv", half.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hawkes process pipeline for limit order book event streams"};
    app.require_subcommand(1);

    Cli cli;
    if (const char* env_jobs = std::getenv("HAWKES_LOB_JOBS")) {
        try {
            cli.jobs = static_cast<std::size_t>(std::stoul(env_jobs));
        } catch (...) {
        }
    }

    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    const char* names[] = {"extract", "simulate", "calibrate", "diagnose", "stability", "report"};
    for (const char* name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", cli.config_path, "JSON config file")->required();
        sub->add_flag("--force", cli.force, "recompute outputs that already exist");
        sub->add_option("--jobs", cli.jobs, "worker threads");
        sub->add_option("--seed", seed_flag, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_flag("--validate-config", cli.validate_only,
                      "parse and validate the config, then exit");
    }

    CLI11_PARSE(app, argc, argv);
    if (seed_set) cli.seed = seed_flag;
    if (cli.jobs == 0) cli.jobs = 1;
    std::string command = app.get_subcommands().front()->get_name();

    auto fail = [](const char* code, const std::string& what, int exit_code) {
        json err;
        err["error"] = code;
        err["detail"] = what;
        std::cerr << err.dump() << '\n';
        return exit_code;
    };

    try {
        json cfg = load_json_file(cli.config_path, true);
        if (!cfg.is_object()) throw ConfigError("config: top level must be a JSON object");
        if (command == "extract") return cmd_extract(cfg, cli);
        if (command == "simulate") return cmd_simulate(cfg, cli);
        if (command == "calibrate") return cmd_calibrate(cfg, cli);
        if (command == "diagnose") return cmd_diagnose(cfg, cli);
        if (command == "stability") return cmd_stability(cfg, cli);
        if (command == "report") return cmd_report(cfg, cli);
        return fail("unknown_command", command, 3);
    } catch (const ConfigError& e) {
        return fail("config_error", e.what(), 3);
    } catch (const InputError& e) {
        std::string what = e.what();
        const char* code = what.rfind("input_not_found", 0) == 0 ? "input_not_found" : "input_error";
        return fail(code, what, 2);
    } catch (const DependencyError& e) {
        return fail("missing_dependency", e.what(), 4);
    } catch (const std::exception& e) {
        return fail("internal_error", e.what(), 1);
    }
}
