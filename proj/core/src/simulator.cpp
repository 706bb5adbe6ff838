#include "hawkes_lob/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes_lob/rng.hpp"

namespace hawkes_lob {

SimulationResult simulate(const HawkesModel& model, const SimulationConfig& config) {
    model.validate();
    if (!(config.horizon > 0.0) || config.horizon > model.horizon)
        throw std::invalid_argument("simulate: horizon must be in (0, model.horizon]");
    if (config.max_events == 0) throw std::invalid_argument("simulate: max_events must be > 0");

    const KernelParams& k = model.kernel;
    const std::size_t R = k.num_types;
    const std::size_t M = k.num_exponentials;
    const double T = config.horizon;

    Rng rng(config.seed);
    SimulationResult out;
    out.log.events.resize(R);
    out.log.horizon = T;

    // exc[(t*R+s)*M+i] = sum over past source-s events of exp(-(now-t_k)/tau),
    // without the alpha factor.
    std::vector<double> exc(R * R * M, 0.0);
    std::uint64_t count = 0;
    double now = 0.0;

    auto excitation_of = [&](std::size_t target) {
        double e = 0.0;
        for (std::size_t s = 0; s < R; ++s)
            for (std::size_t i = 0; i < M; ++i)
                e += k.alpha_at(target, s, i) * exc[(target * R + s) * M + i];
        return e;
    };

    while (now < T) {
        // Dominating rate: excitation only decays until the next accepted
        // event, and the baseline is bounded by its max over [now, T].
        double bound = 0.0;
        for (std::size_t r = 0; r < R; ++r)
            bound += model.baselines[r].max_on(now, T) + excitation_of(r);
        if (!(bound > 0.0)) break;  // dead process, no further events possible

        double cand = now + rng.exponential(1.0 / bound);
        ++out.proposals;
        if (cand >= T) break;

        // Decay all excitation states to the candidate time.
        for (std::size_t t = 0; t < R; ++t)
            for (std::size_t s = 0; s < R; ++s)
                for (std::size_t i = 0; i < M; ++i) {
                    double& e = exc[(t * R + s) * M + i];
                    if (e != 0.0) e *= std::exp(-(cand - now) / k.tau_at(t, s, i));
                }
        now = cand;

        std::vector<double> lambda(R);
        double total = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            lambda[r] = model.baselines[r].value_at(now) + excitation_of(r);
            total += lambda[r];
        }
        if (rng.uniform() * bound > total) continue;  // rejected proposal

        // Attribute to a target proportionally to its intensity.
        double pick = rng.uniform() * total;
        std::size_t chosen = R - 1;
        double acc = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            acc += lambda[r];
            if (pick <= acc) {
                chosen = r;
                break;
            }
        }
        out.log.events[chosen].push_back(now);
        ++out.accepted;
        for (std::size_t t = 0; t < R; ++t)
            for (std::size_t i = 0; i < M; ++i) exc[(t * R + chosen) * M + i] += 1.0;

        if (++count >= config.max_events) {
            out.truncated = true;
            out.log.horizon = now;
            break;
        }
    }
    return out;
}

Eigen::VectorXd expected_count(const HawkesModel& model) {
    const auto R = static_cast<Eigen::Index>(model.num_types());
    Eigen::VectorXd mu_bar(R);
    for (Eigen::Index r = 0; r < R; ++r)
        mu_bar(r) = model.baselines[static_cast<std::size_t>(r)].integral(0.0, model.horizon)
                    / model.horizon;
    Eigen::MatrixXd n = branching_ratio(model.kernel);
    if (stability_flag(model.kernel) != Stability::subcritical)
        throw std::domain_error("expected_count: branching matrix not subcritical");
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(R, R) - n;
    return system.partialPivLu().solve(mu_bar);
}

}  // namespace hawkes_lob
