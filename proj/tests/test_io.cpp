#include <doctest.h>

#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hawkes_lob/io.hpp"
#include "hawkes_lob/simulator.hpp"
#include "test_support.hpp"

using namespace hawkes_lob;

TEST_CASE("event log CSV round trip") {
    EventLog log;
    log.horizon = 10.0;
    log.events = {{1.25, 3.5}, {}, {0.125}};
    std::ostringstream out;
    io::write_event_log_csv(out, log);
    std::string text = out.str();
    CHECK(text.rfind("type_index,timestamp_sec\n", 0) == 0);
    CHECK(text.find("3,0.125000\n") != std::string::npos);

    std::istringstream in(text);
    EventLog back = io::read_event_log_csv(in);
    REQUIRE(back.events.size() == 3);
    CHECK(back.events[0] == log.events[0]);
    CHECK(back.events[1].empty());
    CHECK(back.events[2] == log.events[2]);
}

TEST_CASE("event log CSV rows are chronological across types") {
    EventLog log;
    log.horizon = 5.0;
    log.events = {{2.0, 4.0}, {1.0, 3.0}};
    std::ostringstream out;
    io::write_event_log_csv(out, log);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);  // header
    double prev = -1.0;
    while (std::getline(in, line)) {
        double ts = std::stod(line.substr(line.find(',') + 1));
        CHECK(ts >= prev);
        prev = ts;
    }
}

TEST_CASE("model JSON round trip preserves all parameters") {
    auto inst = testing::random_instance(5, 3, 2, 0, 100.0);
    auto j = io::model_to_json(inst.model);
    CHECK(j["R"] == 3);
    CHECK(j["M"] == 2);
    HawkesModel back = io::model_from_json(j);
    CHECK(back.kernel.alpha == inst.model.kernel.alpha);
    CHECK(back.kernel.tau == inst.model.kernel.tau);
    CHECK(back.horizon == inst.model.horizon);
    REQUIRE(back.baselines.size() == 3);
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(back.baselines[t].knots == inst.model.baselines[t].knots);
        CHECK(back.baselines[t].values == inst.model.baselines[t].values);
    }
}

TEST_CASE("fit result JSON round trip") {
    auto inst = testing::random_instance(8, 2, 1, 0, 50.0);
    FitResult fit;
    fit.model = inst.model;
    fit.log_likelihood = -123.5;
    fit.per_target_log_likelihood = {-100.0, -23.5};
    fit.converged = true;
    fit.iterations = 42;
    fit.self_branching = {0.3, 0.1};
    fit.self_half_life = {0.7, 1.4};
    auto j = io::fit_result_to_json(fit);
    FitResult back = io::fit_result_from_json(j);
    CHECK(back.log_likelihood == fit.log_likelihood);
    CHECK(back.per_target_log_likelihood == fit.per_target_log_likelihood);
    CHECK(back.converged);
    CHECK(back.iterations == 42);
    CHECK(back.self_branching == fit.self_branching);
    CHECK(back.model.kernel.alpha == fit.model.kernel.alpha);
}

TEST_CASE("simulation metadata records seed, generator and counts") {
    HawkesModel m;
    m.kernel = KernelParams(1, 1);
    m.baselines.push_back(PiecewiseLinearBaseline::constant(1.0, 100.0));
    m.horizon = 100.0;
    auto r = simulate(m, {100.0, 99});
    auto j = io::simulation_metadata(m, r, 99);
    CHECK(j["seed"] == 99);
    CHECK(j["generator"] == "splitmix64");
    CHECK(j["proposals"] == r.proposals);
    CHECK(j["accepted"] == r.accepted);
    CHECK(j["truncated"] == false);
    CHECK(j.contains("stability"));
    CHECK(j.contains("model"));
}

TEST_CASE("report CSV emitters") {
    SUBCASE("test reports table") {
        TestReport rep;
        rep.name = "KS";
        rep.statistic = 0.025;
        rep.p_value = 0.5;
        rep.accept_h0 = true;
        std::ostringstream out;
        io::write_test_reports_csv(out, {{"2024-01-02", 0, 1, rep}});
        CHECK(out.str().rfind("day,target,M,test,statistic,p_value,accept\n", 0) == 0);
        CHECK(out.str().find("2024-01-02,1,1,KS,0.025000,0.500000,1\n") != std::string::npos);
    }
    SUBCASE("summary table") {
        StabilityTestRow row;
        row.num_exponentials = 3;
        row.ks_h0 = 0.9;
        row.ks_p = 0.4;
        std::ostringstream out;
        io::write_summary_table_csv(out, {row});
        CHECK(out.str().rfind("M,KS_H0,KS_p,ED_H0,ED_p,LBQ_H0,LBQ_p,KPSS_H0,KPSS_p\n", 0) == 0);
        CHECK(out.str().find("3,0.900000,0.400000,") != std::string::npos);
    }
    SUBCASE("rejects and session stats") {
        std::ostringstream out;
        io::write_rejects_csv(out, {{7, "nonpositive volume", "1.0,trade,100.0,0"}});
        CHECK(out.str().find("7,nonpositive volume,\"1.0,trade,100.0,0\"") != std::string::npos);

        SessionStats stats;
        stats.total = {1583};
        stats.mean_per_day = {316.6};
        stats.sd_per_day = {11.6};
        std::ostringstream out2;
        io::write_session_stats_csv(out2, stats, {"aggressive_buy"});
        CHECK(out2.str().find("aggressive_buy,1583,316.600000,11.600000") != std::string::npos);
    }
}

TEST_CASE("atomic_write then read_file round trips and creates directories") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "hawkes_lob_io_test";
    fs::remove_all(dir);
    fs::path p = dir / "nested" / "out.txt";
    io::atomic_write(p, "hello\nworld\n");
    CHECK(io::read_file(p) == "hello\nworld\n");
    io::atomic_write(p, "second");
    CHECK(io::read_file(p) == "second");
    // no temp files left behind
    std::size_t count = 0;
    for (auto& e : fs::directory_iterator(p.parent_path())) {
        (void)e;
        ++count;
    }
    CHECK(count == 1);
    fs::remove_all(dir);
}

TEST_CASE("event log CSV write is byte-stable") {
    auto inst = testing::random_instance(3, 2, 1, 60, 30.0);
    std::ostringstream a, b;
    io::write_event_log_csv(a, inst.log);
    io::write_event_log_csv(b, inst.log);
    CHECK(a.str() == b.str());
    // round trip again: parse then re-serialize identically
    std::istringstream in(a.str());
    EventLog back = io::read_event_log_csv(in);
    std::ostringstream c;
    io::write_event_log_csv(c, back);
    CHECK(c.str() == a.str());
}
