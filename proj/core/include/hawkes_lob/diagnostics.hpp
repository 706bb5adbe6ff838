#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hawkes_lob/model.hpp"

namespace hawkes_lob {

// Generalized residuals e_i = Lambda(t_{i+1}) - Lambda(t_i) for one target
// type; iid Exp(1) under the true model (random time change).
struct ResidualSeries {
    std::size_t target = 0;
    std::vector<double> values;
};

struct TestReport {
    std::string name;
    double statistic = 0.0;
    // Absent for KPSS, which compares against a critical value; an
    // interpolated table p-value is still exported for report columns.
    std::optional<double> p_value;
    double significance_level = 0.0;
    bool accept_h0 = false;
    std::string note;  // low-power / small-sample warnings
};

struct ResidualOptions {
    // Include the interval [0, t_1] as a leading residual. Off by default:
    // the time-change result is stated for intervals between adjacent events.
    bool include_leading = false;
};

// Target compensator Lambda(t), evaluated in closed form per exponential term.
double compensator_at(const HawkesModel& model, const EventLog& log, std::size_t target,
                      double t);

ResidualSeries residuals(const HawkesModel& model, const EventLog& log, std::size_t target,
                         const ResidualOptions& opts = {});

// One-sample Kolmogorov-Smirnov against Exp(1).
TestReport ks_test(std::span<const double> sample, double level = 0.01);

// Excess dispersion: z = sqrt(n/8) (s^2 - 1), s^2 the variance about mean 1,
// two-sided normal.
TestReport excess_dispersion_test(std::span<const double> sample, double level = 0.01);

// Ljung-Box Q over `lags` autocorrelations vs chi-square(lags).
TestReport ljung_box_test(std::span<const double> sample, std::size_t lags, double level = 0.01);
std::size_t default_lbq_lags(std::size_t n);

// KPSS level-stationarity with Bartlett long-run variance,
// bandwidth floor(4 (n/100)^{1/4}); accept iff statistic < critical value.
TestReport kpss_test(std::span<const double> sample, double level = 0.05);

struct BatteryOptions {
    double ks_level = 0.01;
    double ed_level = 0.01;
    double lbq_level = 0.01;
    double kpss_level = 0.05;
    std::optional<std::size_t> lbq_lags;  // default min(20, n/4)
    ResidualOptions residual_options;
};

struct TargetBattery {
    std::size_t target = 0;
    bool skipped = false;
    std::string skip_reason;
    std::vector<TestReport> reports;  // KS, ED, LBQ, KPSS order
};

// Residuals + all four tests per target at the configured levels.
std::vector<TargetBattery> battery(const HawkesModel& model, const EventLog& log,
                                   const BatteryOptions& opts = {});

}  // namespace hawkes_lob
