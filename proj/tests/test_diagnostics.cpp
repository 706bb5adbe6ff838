#include <doctest.h>

#include <cmath>
#include <vector>

#include "hawkes_lob/diagnostics.hpp"
#include "hawkes_lob/rng.hpp"
#include "test_support.hpp"

using namespace hawkes_lob;

namespace {

HawkesModel poisson_model(double mu, double T) {
    HawkesModel m;
    m.kernel = KernelParams(1, 1);
    m.baselines.push_back(PiecewiseLinearBaseline::constant(mu, T));
    m.horizon = T;
    return m;
}

std::vector<double> exp_quantiles(std::size_t n) {
    // exact Exp(1) plug-in sample: quantiles at (i - 0.5) / n
    std::vector<double> q;
    for (std::size_t i = 1; i <= n; ++i)
        q.push_back(-std::log(1.0 - (static_cast<double>(i) - 0.5) / static_cast<double>(n)));
    return q;
}

std::vector<double> exp_sample(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(rng.exponential(1.0));
    return x;
}

}  // namespace

TEST_CASE("residuals of a unit Poisson process are the inter-event gaps") {
    HawkesModel m = poisson_model(1.0, 10.0);
    EventLog log;
    log.events = {{1.5, 2.0}};
    log.horizon = 10.0;
    auto r = residuals(m, log, 0);
    REQUIRE(r.values.size() == 1);
    CHECK(r.values[0] == doctest::Approx(0.5));
    ResidualOptions with_leading;
    with_leading.include_leading = true;
    auto r2 = residuals(m, log, 0, with_leading);
    REQUIRE(r2.values.size() == 2);
    CHECK(r2.values[0] == doctest::Approx(1.5));
    CHECK(r2.values[1] == doctest::Approx(0.5));
}

TEST_CASE("rate-2 Poisson doubles every gap") {
    HawkesModel m = poisson_model(2.0, 10.0);
    EventLog log;
    log.events = {{1.0, 2.0, 3.0}};
    log.horizon = 10.0;
    auto r = residuals(m, log, 0);
    for (double e : r.values) CHECK(e == doctest::Approx(2.0));
}

TEST_CASE("compensator matches quadrature of the intensity") {
    auto inst = testing::random_instance(13, 2, 2, 100, 40.0);
    for (std::size_t target = 0; target < 2; ++target) {
        double quad = 0.0;
        const int n = 400000;
        for (int i = 0; i < n; ++i) {
            double a = 40.0 * i / n, b = 40.0 * (i + 1) / n;
            quad += 0.5 * (intensity_at(inst.model, inst.log, target, a) +
                           intensity_at(inst.model, inst.log, target, b)) * (b - a);
        }
        CHECK(compensator_at(inst.model, inst.log, target, 40.0) ==
              doctest::Approx(quad).epsilon(1e-6));
    }
}

TEST_CASE("residuals telescope to the compensator at the last event") {
    auto inst = testing::random_instance(29, 2, 1, 200, 60.0);
    ResidualOptions opts;
    opts.include_leading = true;
    auto r = residuals(inst.model, inst.log, 0, opts);
    double sum = 0.0;
    for (double e : r.values) sum += e;
    double last = inst.log.events[0].back();
    CHECK(sum == doctest::Approx(compensator_at(inst.model, inst.log, 0, last)).epsilon(1e-10));
}

TEST_CASE("ks_test") {
    SUBCASE("single point has statistic 1/2 at the exponential median") {
        std::vector<double> x{std::log(2.0)};
        auto r = ks_test(x);
        CHECK(r.statistic == doctest::Approx(0.5));
        CHECK(r.name == "KS");
    }
    SUBCASE("exact exponential quantiles are accepted with high p") {
        auto r = ks_test(exp_quantiles(100));
        CHECK(r.accept_h0);
        REQUIRE(r.p_value.has_value());
        CHECK(*r.p_value > 0.99);
    }
    SUBCASE("uniform data are rejected") {
        Rng rng(4);
        std::vector<double> x;
        for (int i = 0; i < 500; ++i) x.push_back(rng.uniform(0.0, 1.0));
        auto r = ks_test(x);
        CHECK_FALSE(r.accept_h0);
        CHECK(*r.p_value < 1e-6);
    }
    SUBCASE("iid exponential draws are accepted") {
        auto r = ks_test(exp_sample(1, 2000));
        CHECK(r.accept_h0);
    }
}

TEST_CASE("excess_dispersion_test") {
    SUBCASE("statistic formula on a tiny sample") {
        // values {0.5, 1.5}: variance about mean 1 is 0.25, z = sqrt(2/8)(0.25-1)
        std::vector<double> x{0.5, 1.5};
        auto r = excess_dispersion_test(x);
        CHECK(r.statistic == doctest::Approx(std::sqrt(0.25) * (0.25 - 1.0)));
        CHECK(r.name == "ED");
    }
    SUBCASE("iid exponential draws are accepted") {
        auto r = excess_dispersion_test(exp_sample(8, 4000));
        CHECK(r.accept_h0);
    }
    SUBCASE("underdispersed data are rejected") {
        std::vector<double> x(400, 1.0);  // variance 0
        auto r = excess_dispersion_test(x);
        CHECK_FALSE(r.accept_h0);
        CHECK(r.statistic < -3.0);
    }
    SUBCASE("overdispersed data are rejected") {
        Rng rng(5);
        std::vector<double> x;
        for (int i = 0; i < 1000; ++i) x.push_back(3.0 * rng.exponential(1.0));
        auto r = excess_dispersion_test(x);
        CHECK_FALSE(r.accept_h0);
        CHECK(r.statistic > 3.0);
    }
}

TEST_CASE("ljung_box_test") {
    CHECK(default_lbq_lags(2000) == 20);
    CHECK(default_lbq_lags(40) == 10);
    SUBCASE("iid draws are accepted") {
        auto r = ljung_box_test(exp_sample(2, 2000), 20);
        CHECK(r.accept_h0);
        CHECK(r.name == "LBQ");
        CHECK(r.p_value.has_value());
    }
    SUBCASE("serially correlated data are rejected") {
        Rng rng(3);
        std::vector<double> x;
        double prev = 1.0;
        for (int i = 0; i < 1000; ++i) {
            prev = 0.8 * prev + 0.2 * rng.exponential(1.0);
            x.push_back(prev);
        }
        auto r = ljung_box_test(x, 20);
        CHECK_FALSE(r.accept_h0);
        CHECK(*r.p_value < 1e-8);
    }
}

TEST_CASE("kpss_test") {
    SUBCASE("stationary iid draws are accepted at the 5% critical value") {
        auto r = kpss_test(exp_sample(6, 2000));
        CHECK(r.accept_h0);
        CHECK(r.statistic < 0.463);
        CHECK(r.name == "KPSS");
        REQUIRE(r.p_value.has_value());
        CHECK(*r.p_value >= 0.01);
        CHECK(*r.p_value <= 0.10);
    }
    SUBCASE("a deterministic trend is rejected") {
        std::vector<double> x;
        for (int i = 0; i < 500; ++i) x.push_back(static_cast<double>(i) / 500.0);
        auto r = kpss_test(x);
        CHECK_FALSE(r.accept_h0);
        CHECK(r.statistic > 0.739);
        CHECK(*r.p_value == doctest::Approx(0.01));
    }
    SUBCASE("a random walk is rejected") {
        Rng rng(9);
        std::vector<double> x;
        double level = 0.0;
        for (int i = 0; i < 1000; ++i) {
            level += rng.normal();
            x.push_back(level);
        }
        auto r = kpss_test(x);
        CHECK_FALSE(r.accept_h0);
    }
}

TEST_CASE("battery") {
    SUBCASE("reports come back in KS, ED, LBQ, KPSS order") {
        auto inst = testing::random_instance(77, 1, 1, 300, 100.0);
        auto b = battery(inst.model, inst.log);
        REQUIRE(b.size() == 1);
        REQUIRE(b[0].reports.size() == 4);
        CHECK(b[0].reports[0].name == "KS");
        CHECK(b[0].reports[1].name == "ED");
        CHECK(b[0].reports[2].name == "LBQ");
        CHECK(b[0].reports[3].name == "KPSS");
        CHECK_FALSE(b[0].skipped);
    }
    SUBCASE("targets with too few residuals are skipped, not crashed") {
        HawkesModel m = poisson_model(1.0, 10.0);
        EventLog log;
        log.events = {{1.0, 2.0}};
        log.horizon = 10.0;
        auto b = battery(m, log);
        REQUIRE(b.size() == 1);
        CHECK(b[0].skipped);
        CHECK_FALSE(b[0].skip_reason.empty());
    }
    SUBCASE("a well-specified Poisson model passes its own diagnostics") {
        HawkesModel m = poisson_model(1.0, 3000.0);
        EventLog log;
        log.horizon = 3000.0;
        log.events.resize(1);
        Rng rng(12);
        double t = 0.0;
        while (true) {
            t += rng.exponential(1.0);
            if (t > 3000.0) break;
            log.events[0].push_back(t);
        }
        auto b = battery(m, log);
        for (const auto& rep : b[0].reports) CHECK(rep.accept_h0);
    }
}
