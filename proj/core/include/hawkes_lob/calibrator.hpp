#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hawkes_lob/diagnostics.hpp"
#include "hawkes_lob/model.hpp"

namespace hawkes_lob {

struct ParamBounds {
    double mu_lo = 0.0;
    double mu_hi = 0.0;  // <= 0 means auto: 10x the target's empirical mean rate
    double alpha_lo = 0.0;  // clamped to a small positive floor internally
    double alpha_hi = 1e3;
    double tau_lo = 1e-3;
    double tau_hi = 600.0;
};

struct CalibrationOptions {
    std::size_t num_exponentials = 1;  // M
    // Baseline knot positions over [0, T]; empty means 4 evenly spaced knots.
    std::vector<double> baseline_knots;
    ParamBounds bounds;
    std::size_t population_size = 60;
    std::size_t generations = 80;
    std::size_t local_max_iters = 500;
    double local_tolerance = 1e-6;  // relative log-likelihood change
    std::size_t restarts = 3;       // local refinements from the best seeds
    std::uint64_t seed = 0;
    std::size_t jobs = 1;  // worker threads for harness-level fan-out
};

struct FitResult {
    HawkesModel model;
    double log_likelihood = 0.0;  // total over targets
    std::vector<double> per_target_log_likelihood;
    bool converged = false;
    std::size_t iterations = 0;  // local optimizer iterations, all targets
    double wall_time_sec = 0.0;
    std::vector<double> self_branching;  // diagonal of the branching matrix
    std::vector<double> self_half_life;  // sec, per target
    bool infeasible = false;             // likelihood was -inf everywhere tried
    std::string diagnostic;
};

// Maximizes the per-target log-likelihood (targets are separable) via a
// genetic-algorithm global search followed by a monotone derivative-based
// local refinement in transformed box coordinates. With generations == 0 the
// search starts from a deterministic moment-based guess instead.
FitResult calibrate(const EventLog& log, const CalibrationOptions& options);

struct StabilityTestRow {
    std::size_t num_exponentials = 0;
    double ks_h0 = 0.0, ks_p = 0.0;
    double ed_h0 = 0.0, ed_p = 0.0;
    double lbq_h0 = 0.0, lbq_p = 0.0;
    double kpss_h0 = 0.0, kpss_p = 0.0;
};

struct StabilityResult {
    std::vector<FitResult> fits;  // one per repeat, repeat order
    std::vector<std::vector<TargetBattery>> batteries;
    StabilityTestRow summary;  // pooled over repeats and targets
    // Dispersion of the recovered self-branching ratios across repeats.
    std::vector<double> branching_mean;  // per target
    std::vector<double> branching_cv;
};

// Repeated independent calibrations (distinct RNG streams) on identical data.
StabilityResult stability_run(const EventLog& log, const CalibrationOptions& options,
                              std::size_t repeats, const BatteryOptions& battery_opts = {});

struct DayFit {
    std::size_t day = 0;
    std::size_t num_exponentials = 0;
    FitResult fit;
    std::vector<TargetBattery> battery;
};

struct FitReport {
    std::vector<DayFit> day_fits;
    std::vector<StabilityTestRow> summary_by_m;  // pooled over days and targets
    // [m][target] mean/std across days.
    std::vector<std::vector<double>> branching_mean, branching_sd;
    std::vector<std::vector<double>> half_life_mean, half_life_sd;
    std::vector<std::size_t> m_values;
};

// Per-day calibrations for each kernel size in m_values, with the residual
// test battery run on every fit and results pooled per M.
FitReport fit_report(const std::vector<EventLog>& days, const std::vector<std::size_t>& m_values,
                     const CalibrationOptions& base_options,
                     const BatteryOptions& battery_opts = {});

}  // namespace hawkes_lob
