#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hawkes_lob/model.hpp"
#include "hawkes_lob/rng.hpp"

namespace hawkes_lob::testing {

// Random subcritical-ish model with a piecewise-linear baseline and random
// event times; the log is independent of the model (likelihood identities
// hold for any valid pair).
struct Instance {
    HawkesModel model;
    EventLog log;
};

inline Instance random_instance(std::uint64_t seed, std::size_t R, std::size_t M,
                                std::size_t total_events, double T) {
    Rng rng(seed);
    Instance inst;
    inst.model.kernel = KernelParams(R, M);
    for (std::size_t t = 0; t < R; ++t)
        for (std::size_t s = 0; s < R; ++s)
            for (std::size_t i = 0; i < M; ++i) {
                inst.model.kernel.alpha_at(t, s, i) = rng.uniform(0.0, 0.5);
                inst.model.kernel.tau_at(t, s, i) = rng.uniform(0.05, 5.0);
            }
    for (std::size_t t = 0; t < R; ++t) {
        std::vector<double> knots{0.0, T / 3.0, 2.0 * T / 3.0, T};
        std::vector<double> values;
        for (int k = 0; k < 4; ++k) values.push_back(rng.uniform(0.1, 2.0));
        inst.model.baselines.emplace_back(knots, values);
    }
    inst.model.horizon = T;

    inst.log.horizon = T;
    inst.log.events.resize(R);
    for (std::size_t t = 0; t < R; ++t) {
        std::size_t n = total_events / R;
        std::vector<double>& seq = inst.log.events[t];
        for (std::size_t i = 0; i < n; ++i) seq.push_back(rng.uniform(0.0, T));
        std::sort(seq.begin(), seq.end());
        for (std::size_t i = 1; i < seq.size(); ++i)
            if (seq[i] <= seq[i - 1]) seq[i] = seq[i - 1] + 1e-9;
    }
    return inst;
}

}  // namespace hawkes_lob::testing
