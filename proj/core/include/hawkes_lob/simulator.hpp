#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "hawkes_lob/model.hpp"

namespace hawkes_lob {

struct SimulationConfig {
    double horizon = 0.0;  // T, sec
    std::uint64_t seed = 0;
    std::uint64_t max_events = 10'000'000;  // safety cap
};

struct SimulationResult {
    EventLog log;
    bool truncated = false;  // max_events hit; expect a supercritical model
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    double acceptance_rate() const {
        return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
    }
};

// Ogata thinning with a dominating rate rebuilt after every proposal from the
// baseline maximum over the remaining horizon plus the current (decaying)
// excitation. Reproducible per seed.
SimulationResult simulate(const HawkesModel& model, const SimulationConfig& config);

// Stationary rate vector (I - n)^{-1} mu_bar with mu_bar the time-averaged
// baseline; validation oracle for simulate. Throws std::domain_error when the
// branching matrix is not subcritical.
Eigen::VectorXd expected_count(const HawkesModel& model);

}  // namespace hawkes_lob
