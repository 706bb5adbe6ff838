#include "hawkes_lob/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes_lob {

void KernelParams::validate() const {
    if (num_types < 1 || num_exponentials < 1)
        throw std::invalid_argument("KernelParams: R >= 1 and M >= 1 required");
    const std::size_t n = num_types * num_types * num_exponentials;
    if (alpha.size() != n || tau.size() != n)
        throw std::invalid_argument("KernelParams: alpha/tau size must be R*R*M");
    for (double a : alpha)
        if (!(a >= 0.0)) throw std::invalid_argument("KernelParams: alpha must be >= 0");
    for (double t : tau)
        if (!(t > 0.0)) throw std::invalid_argument("KernelParams: tau must be > 0");
}

PiecewiseLinearBaseline::PiecewiseLinearBaseline(std::vector<double> k, std::vector<double> v)
    : knots(std::move(k)), values(std::move(v)) {
    validate();
}

PiecewiseLinearBaseline PiecewiseLinearBaseline::constant(double rate, double horizon) {
    return PiecewiseLinearBaseline({0.0, horizon}, {rate, rate});
}

void PiecewiseLinearBaseline::validate() const {
    if (knots.size() < 2 || knots.size() != values.size())
        throw std::invalid_argument("baseline: need >= 2 knots with matching values");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("baseline: knots must be strictly increasing");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("baseline: values must be >= 0");
}

double PiecewiseLinearBaseline::value_at(double t) const {
    if (t < knots.front() || t > knots.back())
        throw std::domain_error("baseline value_at: t outside [start, end]");
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    if (it == knots.end()) return values.back();
    std::size_t hi = static_cast<std::size_t>(it - knots.begin());
    if (hi == 0) return values.front();
    std::size_t lo = hi - 1;
    double w = (t - knots[lo]) / (knots[hi] - knots[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

double PiecewiseLinearBaseline::integral(double t0, double t1) const {
    if (t0 > t1) throw std::domain_error("baseline integral: reversed bounds");
    if (t0 < knots.front() || t1 > knots.back())
        throw std::domain_error("baseline integral: bounds outside [start, end]");
    if (t0 == t1) return 0.0;
    double total = 0.0;
    for (std::size_t seg = 0; seg + 1 < knots.size(); ++seg) {
        double a = std::max(t0, knots[seg]);
        double b = std::min(t1, knots[seg + 1]);
        if (a >= b) continue;
        total += 0.5 * (value_at(a) + value_at(b)) * (b - a);
    }
    return total;
}

double PiecewiseLinearBaseline::max_on(double t0, double t1) const {
    if (t0 > t1) throw std::domain_error("baseline max_on: reversed bounds");
    double m = std::max(value_at(t0), value_at(t1));
    for (std::size_t i = 0; i < knots.size(); ++i)
        if (knots[i] > t0 && knots[i] < t1) m = std::max(m, values[i]);
    return m;
}

void HawkesModel::validate() const {
    kernel.validate();
    if (baselines.size() != kernel.num_types)
        throw std::invalid_argument("HawkesModel: one baseline per event type required");
    if (!(horizon > 0.0)) throw std::invalid_argument("HawkesModel: horizon must be > 0");
    for (const auto& b : baselines) {
        b.validate();
        if (b.start() != 0.0 || b.end() != horizon)
            throw std::invalid_argument("HawkesModel: baseline must span [0, horizon]");
    }
}

std::size_t EventLog::total_events() const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.size();
    return n;
}

void EventLog::validate() const {
    for (const auto& seq : events) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (seq[i] < 0.0 || seq[i] > horizon)
                throw std::invalid_argument("EventLog: timestamp outside [0, T]");
            if (i > 0 && !(seq[i] > seq[i - 1]))
                throw std::invalid_argument("EventLog: timestamps must be strictly increasing");
        }
    }
}

double baseline_value(const PiecewiseLinearBaseline& baseline, double t) {
    return baseline.value_at(t);
}

double baseline_integral(const PiecewiseLinearBaseline& baseline, double t0, double t1) {
    return baseline.integral(t0, t1);
}

double intensity_at(const HawkesModel& model, const EventLog& log, std::size_t target, double t) {
    if (t < 0.0 || t > model.horizon)
        throw std::domain_error("intensity_at: t outside [0, T]");
    const KernelParams& k = model.kernel;
    double lambda = model.baselines[target].value_at(t);
    for (std::size_t source = 0; source < k.num_types; ++source) {
        const auto& seq = log.events[source];
        for (std::size_t i = 0; i < k.num_exponentials; ++i) {
            double a = k.alpha_at(target, source, i);
            if (a == 0.0) continue;
            double tau = k.tau_at(target, source, i);
            double sum = 0.0;
            // Events exactly at t are excluded (strict causality).
            for (double tk : seq) {
                if (tk >= t) break;
                sum += std::exp(-(t - tk) / tau);
            }
            lambda += a * sum;
        }
    }
    return lambda;
}

Eigen::MatrixXd branching_ratio(const KernelParams& kernel) {
    const auto R = static_cast<Eigen::Index>(kernel.num_types);
    Eigen::MatrixXd n = Eigen::MatrixXd::Zero(R, R);
    for (std::size_t t = 0; t < kernel.num_types; ++t)
        for (std::size_t s = 0; s < kernel.num_types; ++s)
            for (std::size_t i = 0; i < kernel.num_exponentials; ++i)
                n(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) +=
                    kernel.alpha_at(t, s, i) * kernel.tau_at(t, s, i);
    return n;
}

double half_life(const KernelParams& kernel, std::size_t target, std::size_t source) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kernel.num_exponentials; ++i)
        sum += kernel.tau_at(target, source, i);
    return sum * std::log(2.0);
}

Stability stability_flag(const KernelParams& kernel) {
    Eigen::MatrixXd n = branching_ratio(kernel);
    double rho = n.eigenvalues().cwiseAbs().maxCoeff();
    constexpr double tol = 1e-9;
    if (rho < 1.0 - tol) return Stability::subcritical;
    if (rho > 1.0 + tol) return Stability::supercritical;
    return Stability::critical;
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::subcritical: return "subcritical";
        case Stability::critical: return "critical";
        default: return "supercritical";
    }
}

}  // namespace hawkes_lob
