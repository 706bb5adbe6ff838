#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes_lob/stats.hpp"

using namespace hawkes_lob;

TEST_CASE("regularized incomplete gamma against high-precision values") {
    // Frozen from a 30-digit arbitrary-precision evaluation.
    struct Row {
        double a, x, q;
    };
    const Row rows[] = {
        {0.5, 0.25, 0.47950012218695346},
        {0.5, 2.0, 0.045500263896358414},
        {1.0, 1.0, 0.36787944117144232},
        {2.5, 0.3, 0.98800324279409373},
        {5.0, 5.0, 0.44049328506521241},
        {10.0, 3.0, 0.99889751186988452},
        {10.0, 25.0, 0.00022147663824878358},
        {50.0, 40.0, 0.92966493334060505},
        {0.5, 30.0, 9.4857375710738484e-15},
        {3.0, 0.001, 0.99999999983345828},
    };
    for (const Row& r : rows) {
        CHECK(stats::gamma_q(r.a, r.x) == doctest::Approx(r.q).epsilon(1e-10));
        CHECK(stats::gamma_p(r.a, r.x) == doctest::Approx(1.0 - r.q).epsilon(1e-10));
    }
}

TEST_CASE("kolmogorov survival function") {
    struct Row {
        double lambda, q;
    };
    const Row rows[] = {
        {0.3, 0.99999069419866543}, {0.5, 0.96394524366487509}, {0.8284, 0.4987011812378614},
        {1.0, 0.26999967167735452}, {1.5, 0.022217962616525129}, {2.0, 0.00067092525577969535},
    };
    for (const Row& r : rows)
        CHECK(stats::kolmogorov_sf(r.lambda) == doctest::Approx(r.q).epsilon(1e-10));
    CHECK(stats::kolmogorov_sf(0.0) == 1.0);
}

TEST_CASE("chi-square survival function matches gamma") {
    CHECK(stats::chi_square_sf(1.0, 1.0) == doctest::Approx(0.31731050786291404).epsilon(1e-9));
    CHECK(stats::chi_square_sf(0.0, 5.0) == 1.0);
    // chi-square(2) is Exp(1/2): sf(x) = exp(-x/2)
    CHECK(stats::chi_square_sf(4.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("normal cdf symmetry and known points") {
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(stats::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-10));
    CHECK(stats::normal_sf(2.5758293035489004) == doctest::Approx(0.005).epsilon(1e-8));
    for (double x : {-2.0, -0.5, 0.7, 3.0})
        CHECK(stats::normal_cdf(x) + stats::normal_sf(x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sample moments and autocorrelation") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(stats::mean(x) == doctest::Approx(3.0));
    CHECK(stats::sample_variance(x) == doctest::Approx(2.5));
    auto rho = stats::autocorrelations(x, 2);
    CHECK(rho[0] == doctest::Approx(0.4));  // hand-computed for 1..5
    CHECK_THROWS_AS(stats::autocorrelations(std::vector<double>(5, 1.0), 1), std::domain_error);
}

TEST_CASE("quantiles and box plot") {
    std::vector<double> x;
    for (int i = 1; i <= 100; ++i) x.push_back(static_cast<double>(i));
    x.push_back(1000.0);  // single outlier
    CHECK(stats::quantile(x, 0.0) == 1.0);
    CHECK(stats::quantile(x, 1.0) == 1000.0);
    auto bp = stats::box_plot(x);
    CHECK(bp.median == doctest::Approx(51.0));
    CHECK(bp.outliers.size() == 1);
    CHECK(bp.outliers[0] == 1000.0);
    CHECK(bp.whisker_hi == 100.0);
    CHECK(bp.whisker_lo == 1.0);
    // quartiles match direct percentile computation
    CHECK(bp.q1 == doctest::Approx(stats::quantile(x, 0.25)));
    CHECK(bp.q3 == doctest::Approx(stats::quantile(x, 0.75)));
}
