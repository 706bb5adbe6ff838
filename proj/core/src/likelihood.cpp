#include "hawkes_lob/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkes_lob {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Compensator contribution of the kernel: for every source event t_k < T,
// its kernel integrates to alpha tau (1 - exp(-(T - t_k)/tau)).
double kernel_compensator(const HawkesModel& model, const EventLog& log, std::size_t target) {
    const KernelParams& k = model.kernel;
    const double T = model.horizon;
    double total = 0.0;
    for (std::size_t source = 0; source < k.num_types; ++source) {
        for (std::size_t i = 0; i < k.num_exponentials; ++i) {
            double a = k.alpha_at(target, source, i);
            if (a == 0.0) continue;
            double tau = k.tau_at(target, source, i);
            double sum = 0.0;
            for (double tk : log.events[source])
                if (tk < T) sum += 1.0 - std::exp(-(T - tk) / tau);
            total += a * tau * sum;
        }
    }
    return total;
}

}  // namespace

RecursionState advance_recursion(const RecursionState& state, const KernelParams& kernel,
                                 std::size_t target, double prev_target_t, double next_target_t,
                                 std::span<const std::span<const double>> windows) {
    if (!(next_target_t > prev_target_t))
        throw std::domain_error("advance_recursion: next_target_t must exceed prev_target_t");
    if (windows.size() != kernel.num_types)
        throw std::invalid_argument("advance_recursion: one window per source type required");
    RecursionState next(state.num_types, state.num_exponentials);
    next.last_target_time = next_target_t;
    const double dt = next_target_t - prev_target_t;
    for (std::size_t source = 0; source < kernel.num_types; ++source) {
        for (std::size_t i = 0; i < kernel.num_exponentials; ++i) {
            double tau = kernel.tau_at(target, source, i);
            double r = std::exp(-dt / tau) * state.at(source, i);
            for (double tk : windows[source]) {
                if (tk < prev_target_t || tk >= next_target_t)
                    throw std::domain_error("advance_recursion: window event outside [prev, next)");
                r += std::exp(-(next_target_t - tk) / tau);
            }
            next.at(source, i) = r;
        }
    }
    return next;
}

LogLikelihoodResult log_likelihood(const HawkesModel& model, const EventLog& log,
                                   std::size_t target) {
    const KernelParams& k = model.kernel;
    const std::size_t R = k.num_types;
    const std::size_t M = k.num_exponentials;
    const auto& targets = log.events[target];

    LogLikelihoodResult out;
    out.value = -model.baselines[target].integral(0.0, model.horizon)
                - kernel_compensator(model, log, target);

    // Excitation recursion swept along the target events; cursor[r] tracks the
    // next unconsumed source-r event.
    std::vector<double> rvals(R * M, 0.0);
    std::vector<std::size_t> cursor(R, 0);
    double prev_t = 0.0;
    double log_sum = 0.0;
    for (double tj : targets) {
        const double dt = tj - prev_t;
        double lambda = model.baselines[target].value_at(tj);
        for (std::size_t source = 0; source < R; ++source) {
            const auto& seq = log.events[source];
            std::size_t begin = cursor[source];
            std::size_t end = begin;
            while (end < seq.size() && seq[end] < tj) ++end;
            for (std::size_t i = 0; i < M; ++i) {
                double tau = k.tau_at(target, source, i);
                double r = std::exp(-dt / tau) * rvals[source * M + i];
                for (std::size_t e = begin; e < end; ++e)
                    r += std::exp(-(tj - seq[e]) / tau);
                rvals[source * M + i] = r;
                lambda += k.alpha_at(target, source, i) * r;
            }
            cursor[source] = end;
        }
        if (!(lambda > 0.0)) {
            ++out.zero_intensity_events;
        } else {
            log_sum += std::log(lambda);
        }
        prev_t = tj;
    }
    if (out.zero_intensity_events > 0) {
        out.finite = false;
        out.value = kNegInf;
        return out;
    }
    out.value += log_sum;
    return out;
}

LogLikelihoodResult log_likelihood_direct(const HawkesModel& model, const EventLog& log,
                                          std::size_t target) {
    const KernelParams& k = model.kernel;
    LogLikelihoodResult out;
    out.value = -model.baselines[target].integral(0.0, model.horizon)
                - kernel_compensator(model, log, target);
    double log_sum = 0.0;
    for (double tj : log.events[target]) {
        double lambda = model.baselines[target].value_at(tj);
        for (std::size_t source = 0; source < k.num_types; ++source) {
            for (std::size_t i = 0; i < k.num_exponentials; ++i) {
                double a = k.alpha_at(target, source, i);
                if (a == 0.0) continue;
                double tau = k.tau_at(target, source, i);
                double sum = 0.0;
                for (double tk : log.events[source]) {
                    if (tk >= tj) break;
                    sum += std::exp(-(tj - tk) / tau);
                }
                lambda += a * sum;
            }
        }
        if (!(lambda > 0.0)) {
            ++out.zero_intensity_events;
        } else {
            log_sum += std::log(lambda);
        }
    }
    if (out.zero_intensity_events > 0) {
        out.finite = false;
        out.value = kNegInf;
        return out;
    }
    out.value += log_sum;
    return out;
}

LogLikelihoodResult total_log_likelihood(const HawkesModel& model, const EventLog& log) {
    LogLikelihoodResult out;
    for (std::size_t target = 0; target < model.num_types(); ++target) {
        LogLikelihoodResult r = log_likelihood(model, log, target);
        out.zero_intensity_events += r.zero_intensity_events;
        if (!r.finite) out.finite = false;
        if (out.finite) out.value += r.value;
    }
    if (!out.finite) out.value = kNegInf;
    return out;
}

}  // namespace hawkes_lob
