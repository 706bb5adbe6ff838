#include "hawkes_lob/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "hawkes_lob/rng.hpp"

namespace hawkes_lob::io {

using nlohmann::json;

std::string format_double(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

void write_event_log_csv(std::ostream& out, const EventLog& log) {
    out << "type_index,timestamp_sec\n";
    // Row-merged by time so the file reads as a chronological tape.
    std::vector<std::pair<double, std::size_t>> rows;
    for (std::size_t r = 0; r < log.num_types(); ++r)
        for (double t : log.events[r]) rows.emplace_back(t, r + 1);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, r] : rows) out << r << ',' << format_double(t) << '\n';
}

EventLog read_event_log_csv(std::istream& in) {
    EventLog log;
    std::string line;
    if (!std::getline(in, line) || line.rfind("type_index,timestamp_sec", 0) != 0)
        throw std::runtime_error("event log CSV: bad header");
    double max_t = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("event log CSV: bad row");
        auto type = static_cast<std::size_t>(std::stoul(line.substr(0, comma)));
        double t = std::stod(line.substr(comma + 1));
        if (type < 1) throw std::runtime_error("event log CSV: type index must be >= 1");
        if (log.events.size() < type) log.events.resize(type);
        log.events[type - 1].push_back(t);
        max_t = std::max(max_t, t);
    }
    log.horizon = max_t;
    log.validate();
    return log;
}

json model_to_json(const HawkesModel& model) {
    const std::size_t R = model.kernel.num_types;
    const std::size_t M = model.kernel.num_exponentials;
    json j;
    j["R"] = R;
    j["M"] = M;
    j["T"] = model.horizon;
    j["knots"] = model.baselines.empty() ? std::vector<double>{} : model.baselines[0].knots;
    json values = json::array();
    for (const auto& b : model.baselines) values.push_back(b.values);
    j["baseline_values"] = values;
    json alpha = json::array(), tau = json::array();
    for (std::size_t t = 0; t < R; ++t) {
        json at = json::array(), tt = json::array();
        for (std::size_t s = 0; s < R; ++s) {
            json as = json::array(), ts = json::array();
            for (std::size_t i = 0; i < M; ++i) {
                as.push_back(model.kernel.alpha_at(t, s, i));
                ts.push_back(model.kernel.tau_at(t, s, i));
            }
            at.push_back(as);
            tt.push_back(ts);
        }
        alpha.push_back(at);
        tau.push_back(tt);
    }
    j["alpha"] = alpha;
    j["tau"] = tau;
    return j;
}

HawkesModel model_from_json(const json& j) {
    HawkesModel m;
    const auto R = j.at("R").get<std::size_t>();
    const auto M = j.at("M").get<std::size_t>();
    m.horizon = j.at("T").get<double>();
    m.kernel = KernelParams(R, M);
    auto knots = j.at("knots").get<std::vector<double>>();
    const auto& values = j.at("baseline_values");
    for (std::size_t r = 0; r < R; ++r)
        m.baselines.emplace_back(knots, values.at(r).get<std::vector<double>>());
    for (std::size_t t = 0; t < R; ++t)
        for (std::size_t s = 0; s < R; ++s)
            for (std::size_t i = 0; i < M; ++i) {
                m.kernel.alpha_at(t, s, i) = j.at("alpha").at(t).at(s).at(i).get<double>();
                m.kernel.tau_at(t, s, i) = j.at("tau").at(t).at(s).at(i).get<double>();
            }
    m.validate();
    return m;
}

json fit_result_to_json(const FitResult& fit) {
    json j;
    j["model"] = model_to_json(fit.model);
    j["log_likelihood"] = fit.log_likelihood;
    j["per_target_log_likelihood"] = fit.per_target_log_likelihood;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["wall_time_sec"] = fit.wall_time_sec;
    j["self_branching"] = fit.self_branching;
    j["self_half_life"] = fit.self_half_life;
    j["infeasible"] = fit.infeasible;
    j["diagnostic"] = fit.diagnostic;
    return j;
}

FitResult fit_result_from_json(const json& j) {
    FitResult f;
    f.model = model_from_json(j.at("model"));
    f.log_likelihood = j.at("log_likelihood").get<double>();
    f.per_target_log_likelihood = j.at("per_target_log_likelihood").get<std::vector<double>>();
    f.converged = j.at("converged").get<bool>();
    f.iterations = j.at("iterations").get<std::size_t>();
    f.wall_time_sec = j.at("wall_time_sec").get<double>();
    f.self_branching = j.at("self_branching").get<std::vector<double>>();
    f.self_half_life = j.at("self_half_life").get<std::vector<double>>();
    f.infeasible = j.value("infeasible", false);
    f.diagnostic = j.value("diagnostic", "");
    return f;
}

json simulation_metadata(const HawkesModel& model, const SimulationResult& result,
                         std::uint64_t seed) {
    json j;
    j["model"] = model_to_json(model);
    j["seed"] = seed;
    j["generator"] = std::string(Rng::kAlgorithm);
    j["proposals"] = result.proposals;
    j["accepted"] = result.accepted;
    j["acceptance_rate"] = result.acceptance_rate();
    j["truncated"] = result.truncated;
    j["stability"] = to_string(stability_flag(model.kernel));
    return j;
}

void write_rejects_csv(std::ostream& out, const std::vector<RejectRecord>& rejects) {
    out << "line,reason,raw\n";
    for (const auto& r : rejects) {
        std::string quoted = "\"";
        for (char c : r.raw) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        out << r.line << ',' << r.reason << ',' << quoted << '\n';
    }
}

void write_book_trace_csv(std::ostream& out, const std::vector<BookTraceRow>& trace) {
    out << "timestamp,bid,bid_vol,ask,ask_vol\n";
    for (const auto& row : trace)
        out << format_double(row.timestamp) << ',' << format_double(row.bid) << ','
            << format_double(row.bid_volume) << ',' << format_double(row.ask) << ','
            << format_double(row.ask_volume) << '\n';
}

void write_session_stats_csv(std::ostream& out, const SessionStats& stats,
                             const std::vector<std::string>& labels) {
    out << "event_type,total_in_set,mean_per_day,sd_per_day\n";
    for (std::size_t r = 0; r < stats.total.size(); ++r) {
        std::string label = r < labels.size() ? labels[r] : "type" + std::to_string(r + 1);
        out << label << ',' << stats.total[r] << ',' << format_double(stats.mean_per_day[r])
            << ',' << format_double(stats.sd_per_day[r]) << '\n';
    }
}

void write_test_reports_csv(
    std::ostream& out,
    const std::vector<std::tuple<std::string, std::size_t, std::size_t, TestReport>>& rows) {
    out << "day,target,M,test,statistic,p_value,accept\n";
    for (const auto& [day, target, m, r] : rows) {
        out << day << ',' << (target + 1) << ',' << m << ',' << r.name << ','
            << format_double(r.statistic) << ','
            << (r.p_value ? format_double(*r.p_value) : std::string("")) << ','
            << (r.accept_h0 ? 1 : 0) << '\n';
    }
}

void write_summary_table_csv(std::ostream& out, const std::vector<StabilityTestRow>& rows) {
    out << "M,KS_H0,KS_p,ED_H0,ED_p,LBQ_H0,LBQ_p,KPSS_H0,KPSS_p\n";
    for (const auto& r : rows) {
        out << r.num_exponentials << ',' << format_double(r.ks_h0) << ',' << format_double(r.ks_p)
            << ',' << format_double(r.ed_h0) << ',' << format_double(r.ed_p) << ','
            << format_double(r.lbq_h0) << ',' << format_double(r.lbq_p) << ','
            << format_double(r.kpss_h0) << ',' << format_double(r.kpss_p) << '\n';
    }
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hawkes_lob::io
