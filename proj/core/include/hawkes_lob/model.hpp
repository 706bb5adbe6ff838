#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

namespace hawkes_lob {

// Amplitudes and timescales for a sum-of-exponentials kernel,
// phi(t) = sum_i alpha_i exp(-t / tau_i), one (alpha, tau) set per
// (target, source) pair of event types.
struct KernelParams {
    std::size_t num_types = 0;      // R
    std::size_t num_exponentials = 0;  // M
    std::vector<double> alpha;      // 1/sec^2, size R*R*M, layout (target, source, i)
    std::vector<double> tau;        // sec, same layout

    KernelParams() = default;
    KernelParams(std::size_t R, std::size_t M)
        : num_types(R), num_exponentials(M), alpha(R * R * M, 0.0), tau(R * R * M, 1.0) {}

    std::size_t index(std::size_t target, std::size_t source, std::size_t i) const {
        return (target * num_types + source) * num_exponentials + i;
    }
    double& alpha_at(std::size_t target, std::size_t source, std::size_t i) {
        return alpha[index(target, source, i)];
    }
    double alpha_at(std::size_t target, std::size_t source, std::size_t i) const {
        return alpha[index(target, source, i)];
    }
    double& tau_at(std::size_t target, std::size_t source, std::size_t i) {
        return tau[index(target, source, i)];
    }
    double tau_at(std::size_t target, std::size_t source, std::size_t i) const {
        return tau[index(target, source, i)];
    }

    // Throws std::invalid_argument on alpha < 0, tau <= 0 or size mismatch.
    void validate() const;
};

// Nonnegative piecewise-linear intensity on [knots.front(), knots.back()].
struct PiecewiseLinearBaseline {
    std::vector<double> knots;   // strictly increasing, seconds since session open
    std::vector<double> values;  // 1/sec, >= 0, one per knot

    PiecewiseLinearBaseline() = default;
    PiecewiseLinearBaseline(std::vector<double> k, std::vector<double> v);

    static PiecewiseLinearBaseline constant(double rate, double horizon);

    void validate() const;

    double start() const { return knots.front(); }
    double end() const { return knots.back(); }

    // Linear interpolation of the bracketing knot values; exact at knots.
    double value_at(double t) const;

    // Closed-form integral over [t0, t1] (sum of trapezoids).
    double integral(double t0, double t1) const;

    // Maximum of the baseline over [t0, t1].
    double max_on(double t0, double t1) const;
};

struct HawkesModel {
    std::vector<PiecewiseLinearBaseline> baselines;  // one per event type
    KernelParams kernel;
    double horizon = 0.0;  // T, sec

    std::size_t num_types() const { return kernel.num_types; }
    void validate() const;
};

// Per-type strictly increasing event timestamp sequences over [0, T].
struct EventLog {
    std::vector<std::vector<double>> events;  // session-relative seconds
    double horizon = 0.0;
    std::vector<std::string> type_labels;

    std::size_t num_types() const { return events.size(); }
    std::size_t total_events() const;
    void validate() const;
};

enum class Stability { subcritical, critical, supercritical };

// mu_target(t) + excitation from all events strictly before t.
double baseline_value(const PiecewiseLinearBaseline& baseline, double t);
double baseline_integral(const PiecewiseLinearBaseline& baseline, double t0, double t1);
double intensity_at(const HawkesModel& model, const EventLog& log, std::size_t target, double t);

// n[target][source] = sum_i alpha * tau, the expected direct children of a
// source event in the target stream.
Eigen::MatrixXd branching_ratio(const KernelParams& kernel);

// Total half-life sum_i tau_i ln 2 for one (target, source) pair.
double half_life(const KernelParams& kernel, std::size_t target, std::size_t source);

// Classifies the spectral radius of the branching matrix against 1 with
// tolerance 1e-9. The per-pair scalar criterion generalizes to the largest
// eigenvalue modulus in the multivariate case.
Stability stability_flag(const KernelParams& kernel);

const char* to_string(Stability s);

}  // namespace hawkes_lob
