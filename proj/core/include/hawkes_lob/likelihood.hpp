#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hawkes_lob/model.hpp"

namespace hawkes_lob {

// Decayed excitation sums R_{r,i}(j) for one target stream, evaluated at the
// current target event. Layout (source r, exponential i).
struct RecursionState {
    std::size_t num_types = 0;
    std::size_t num_exponentials = 0;
    std::vector<double> values;  // size R*M
    double last_target_time = 0.0;

    RecursionState(std::size_t R, std::size_t M)
        : num_types(R), num_exponentials(M), values(R * M, 0.0) {}

    double& at(std::size_t source, std::size_t i) {
        return values[source * num_exponentials + i];
    }
    double at(std::size_t source, std::size_t i) const {
        return values[source * num_exponentials + i];
    }
};

// Advances the excitation recursion from one target event to the next.
// windows[r] holds the source-r events in the half-open interval
// [prev_target_t, next_target_t); for the target's own type this includes the
// previous target event itself, which reproduces the closed self-type form
// R(j) = exp(-dt/tau) (1 + R(j-1)).
RecursionState advance_recursion(const RecursionState& state, const KernelParams& kernel,
                                 std::size_t target, double prev_target_t, double next_target_t,
                                 std::span<const std::span<const double>> windows);

struct LogLikelihoodResult {
    double value = 0.0;
    // False when some target event has zero intensity under the model; value
    // is then -inf and zero_intensity_events counts the offenders.
    bool finite = true;
    std::size_t zero_intensity_events = 0;
};

// Per-target log-likelihood via the O(N) excitation recursions.
LogLikelihoodResult log_likelihood(const HawkesModel& model, const EventLog& log,
                                   std::size_t target);

// O(N^2) direct evaluation of the same quantity; testing oracle, intended for
// small event counts.
LogLikelihoodResult log_likelihood_direct(const HawkesModel& model, const EventLog& log,
                                          std::size_t target);

// Sum over targets; the per-target likelihoods are separable because no
// parameter couples two target equations.
LogLikelihoodResult total_log_likelihood(const HawkesModel& model, const EventLog& log);

}  // namespace hawkes_lob
