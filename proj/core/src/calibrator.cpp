#include "hawkes_lob/calibrator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "hawkes_lob/likelihood.hpp"
#include "hawkes_lob/rng.hpp"
#include "hawkes_lob/stats.hpp"

namespace hawkes_lob {

namespace {

constexpr double kPenalty = -1e15;
constexpr double kAlphaFloor = 1e-8;
constexpr double kLogitClamp = 1e-9;

double sigmoid(double y) { return 1.0 / (1.0 + std::exp(-y)); }

double logit(double u) {
    u = std::clamp(u, kLogitClamp, 1.0 - kLogitClamp);
    return std::log(u / (1.0 - u));
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, n); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// One target's likelihood maximization in unconstrained coordinates: every
// parameter maps through a sigmoid onto its box (log-box for alpha and tau,
// so positivity holds by construction).
class TargetProblem {
public:
    TargetProblem(const EventLog& log, std::size_t target, const CalibrationOptions& opts)
        : log_(log), target_(target), R_(log.num_types()), M_(opts.num_exponentials) {
        knots_ = opts.baseline_knots;
        if (knots_.empty()) {
            // Default: 4 evenly spaced knots (3-period piecewise linear).
            for (int i = 0; i < 4; ++i) knots_.push_back(log.horizon * i / 3.0);
        }
        if (knots_.front() != 0.0 || knots_.back() != log.horizon)
            throw std::invalid_argument("calibrate: baseline knots must span [0, T]");
        K_ = knots_.size();
        bounds_ = opts.bounds;
        double rate = static_cast<double>(log.events[target].size()) / log.horizon;
        if (bounds_.mu_hi <= 0.0) bounds_.mu_hi = std::max(10.0 * rate, 1e-3);
        alpha_lo_ = std::log(std::max(bounds_.alpha_lo, kAlphaFloor));
        alpha_hi_ = std::log(bounds_.alpha_hi);
        tau_lo_ = std::log(bounds_.tau_lo);
        tau_hi_ = std::log(bounds_.tau_hi);
        empirical_rate_ = rate;

        scratch_.kernel = KernelParams(R_, M_);
        scratch_.horizon = log.horizon;
        scratch_.baselines.assign(R_, PiecewiseLinearBaseline::constant(0.0, log.horizon));
    }

    std::size_t dim() const { return K_ + 2 * R_ * M_; }
    std::size_t num_knots() const { return K_; }
    const std::vector<double>& knots() const { return knots_; }

    // Decodes into the scratch model (only the target's baseline and kernel
    // row are populated); tau sorted ascending per source with alpha paired,
    // which removes the label-switching degeneracy for M > 1.
    void decode(const std::vector<double>& y, HawkesModel& model) const {
        std::vector<double> values(K_);
        for (std::size_t k = 0; k < K_; ++k)
            values[k] = bounds_.mu_lo + (bounds_.mu_hi - bounds_.mu_lo) * sigmoid(y[k]);
        model.baselines[target_] = PiecewiseLinearBaseline(knots_, values);
        std::vector<std::pair<double, double>> pairs(M_);
        for (std::size_t s = 0; s < R_; ++s) {
            for (std::size_t i = 0; i < M_; ++i) {
                double a = std::exp(alpha_lo_ + (alpha_hi_ - alpha_lo_) *
                                                     sigmoid(y[K_ + (s * M_ + i) * 2]));
                double t = std::exp(tau_lo_ + (tau_hi_ - tau_lo_) *
                                                  sigmoid(y[K_ + (s * M_ + i) * 2 + 1]));
                pairs[i] = {t, a};
            }
            std::sort(pairs.begin(), pairs.end());
            for (std::size_t i = 0; i < M_; ++i) {
                model.kernel.tau_at(target_, s, i) = pairs[i].first;
                model.kernel.alpha_at(target_, s, i) = pairs[i].second;
            }
        }
    }

    double objective(const std::vector<double>& y) const {
        decode(y, scratch_);
        LogLikelihoodResult r = log_likelihood(scratch_, log_, target_);
        if (!r.finite) return kPenalty - static_cast<double>(r.zero_intensity_events);
        return r.value;
    }

    std::vector<double> encode_params(const std::vector<double>& mu_values,
                                      const std::vector<double>& alphas,
                                      const std::vector<double>& taus) const {
        std::vector<double> y(dim());
        for (std::size_t k = 0; k < K_; ++k)
            y[k] = logit((mu_values[k] - bounds_.mu_lo) / (bounds_.mu_hi - bounds_.mu_lo));
        for (std::size_t j = 0; j < R_ * M_; ++j) {
            y[K_ + 2 * j] =
                logit((std::log(std::max(alphas[j], kAlphaFloor)) - alpha_lo_) /
                      (alpha_hi_ - alpha_lo_));
            y[K_ + 2 * j + 1] = logit((std::log(taus[j]) - tau_lo_) / (tau_hi_ - tau_lo_));
        }
        return y;
    }

    // Moment-based start: baseline at the empirical rate, mild excitation
    // with log-spaced timescales.
    std::vector<double> heuristic_start() const {
        std::vector<double> mu(K_, std::max(0.7 * empirical_rate_, 1e-4));
        std::vector<double> alphas(R_ * M_), taus(R_ * M_);
        double t_lo = std::max(bounds_.tau_lo * 5.0, 0.05);
        double t_hi = std::min(bounds_.tau_hi / 5.0, 10.0);
        for (std::size_t j = 0; j < R_ * M_; ++j) {
            std::size_t i = j % M_;
            double frac = M_ == 1 ? 0.5 : static_cast<double>(i) / (static_cast<double>(M_) - 1.0);
            double tau = t_lo * std::pow(t_hi / t_lo, frac);
            taus[j] = std::clamp(tau, bounds_.tau_lo, bounds_.tau_hi);
            alphas[j] = std::clamp(0.05 / (static_cast<double>(M_) * taus[j]),
                                   kAlphaFloor, bounds_.alpha_hi);
        }
        return encode_params(mu, alphas, taus);
    }

    std::vector<double> random_start(Rng& rng) const {
        std::vector<double> y(dim());
        for (double& v : y) v = logit(rng.uniform(0.02, 0.98));
        return y;
    }

private:
    const EventLog& log_;
    std::size_t target_;
    std::size_t R_, M_, K_ = 0;
    std::vector<double> knots_;
    ParamBounds bounds_;
    double alpha_lo_ = 0.0, alpha_hi_ = 0.0, tau_lo_ = 0.0, tau_hi_ = 0.0;
    double empirical_rate_ = 0.0;
    mutable HawkesModel scratch_;
};

struct Candidate {
    std::vector<double> y;
    double ll = kPenalty;
};

std::vector<Candidate> genetic_search(const TargetProblem& prob, const CalibrationOptions& opts,
                                      Rng rng) {
    const std::size_t P = std::max<std::size_t>(opts.population_size, 4);
    const std::size_t d = prob.dim();
    std::vector<Candidate> pop(P);
    pop[0].y = prob.heuristic_start();
    for (std::size_t p = 1; p < P; ++p) pop[p].y = prob.random_start(rng);
    for (auto& c : pop) c.ll = prob.objective(c.y);

    auto by_ll_desc = [](const Candidate& a, const Candidate& b) { return a.ll > b.ll; };
    auto tournament = [&](Rng& r) -> const Candidate& {
        const Candidate* best = &pop[r.next_u64() % P];
        for (int k = 0; k < 2; ++k) {
            const Candidate& c = pop[r.next_u64() % P];
            if (c.ll > best->ll) best = &c;
        }
        return *best;
    };

    for (std::size_t gen = 0; gen < opts.generations; ++gen) {
        std::sort(pop.begin(), pop.end(), by_ll_desc);
        std::vector<Candidate> next;
        next.reserve(P);
        next.push_back(pop[0]);  // elitism
        next.push_back(pop[1]);
        while (next.size() < P) {
            const Candidate& a = tournament(rng);
            const Candidate& b = tournament(rng);
            Candidate child;
            child.y.resize(d);
            for (std::size_t i = 0; i < d; ++i) {
                double w = rng.uniform(-0.3, 1.3);  // BLX blend
                child.y[i] = a.y[i] + w * (b.y[i] - a.y[i]);
                if (rng.uniform() < 1.0 / static_cast<double>(d))
                    child.y[i] += 0.7 * rng.normal();
                child.y[i] = std::clamp(child.y[i], -35.0, 35.0);
            }
            child.ll = prob.objective(child.y);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
    }
    std::sort(pop.begin(), pop.end(), by_ll_desc);
    return pop;
}

struct LocalResult {
    std::vector<double> y;
    double ll = kPenalty;
    bool converged = false;
    std::size_t iterations = 0;
};

// L-BFGS with backtracking Armijo line search on f = -LL; finite central
// differences for the gradient. Monotone by construction.
LocalResult local_refine(const TargetProblem& prob, std::vector<double> y,
                         const CalibrationOptions& opts) {
    const std::size_t d = prob.dim();
    const std::size_t mem = 6;
    auto f_of = [&](const std::vector<double>& v) { return -prob.objective(v); };

    auto gradient = [&](const std::vector<double>& v) {
        std::vector<double> g(d);
        std::vector<double> w = v;
        for (std::size_t i = 0; i < d; ++i) {
            double h = 1e-6 * std::max(1.0, std::fabs(v[i]));
            w[i] = v[i] + h;
            double fp = f_of(w);
            w[i] = v[i] - h;
            double fm = f_of(w);
            w[i] = v[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        return g;
    };

    double f = f_of(y);
    std::vector<double> g = gradient(y);
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    LocalResult out;
    out.y = y;
    out.ll = -f;
    for (std::size_t iter = 0; iter < opts.local_max_iters; ++iter) {
        // Two-loop recursion for the search direction.
        std::vector<double> q = g;
        std::vector<double> alpha_c(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            double a = rho_hist[k] * std::inner_product(s_hist[k].begin(), s_hist[k].end(),
                                                        q.begin(), 0.0);
            alpha_c[k] = a;
            for (std::size_t i = 0; i < d; ++i) q[i] -= a * y_hist[k][i];
        }
        if (!s_hist.empty()) {
            const auto& sk = s_hist.back();
            const auto& yk = y_hist.back();
            double sy = std::inner_product(sk.begin(), sk.end(), yk.begin(), 0.0);
            double yy = std::inner_product(yk.begin(), yk.end(), yk.begin(), 0.0);
            if (yy > 0.0) {
                double scale = sy / yy;
                for (double& v : q) v *= scale;
            }
        }
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            double b = rho_hist[k] * std::inner_product(y_hist[k].begin(), y_hist[k].end(),
                                                        q.begin(), 0.0);
            for (std::size_t i = 0; i < d; ++i) q[i] += (alpha_c[k] - b) * s_hist[k][i];
        }
        std::vector<double> dir(d);
        for (std::size_t i = 0; i < d; ++i) dir[i] = -q[i];
        double slope = std::inner_product(g.begin(), g.end(), dir.begin(), 0.0);
        if (slope >= 0.0) {  // not a descent direction, fall back to steepest
            for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
            slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }
        double gnorm = 0.0;
        for (double v : g) gnorm = std::max(gnorm, std::fabs(v));
        if (gnorm < 1e-8 || slope == 0.0) {
            out.converged = true;
            break;
        }

        double step = 1.0;
        std::vector<double> y_new(d);
        double f_new = f;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls) {
            for (std::size_t i = 0; i < d; ++i)
                y_new[i] = std::clamp(y[i] + step * dir[i], -35.0, 35.0);
            f_new = f_of(y_new);
            if (f_new <= f + 1e-4 * step * slope) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        ++out.iterations;
        if (!moved) {
            out.converged = true;  // no admissible decrease left
            break;
        }

        std::vector<double> g_new = gradient(y_new);
        std::vector<double> sk(d), yk(d);
        for (std::size_t i = 0; i < d; ++i) {
            sk[i] = y_new[i] - y[i];
            yk[i] = g_new[i] - g[i];
        }
        double sy = std::inner_product(sk.begin(), sk.end(), yk.begin(), 0.0);
        if (sy > 1e-12) {
            s_hist.push_back(std::move(sk));
            y_hist.push_back(std::move(yk));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > mem) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }

        double rel = std::fabs(f - f_new) / std::max(1.0, std::fabs(f_new));
        y = std::move(y_new);
        g = std::move(g_new);
        f = f_new;
        out.y = y;
        out.ll = -f;
        if (rel < opts.local_tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace

FitResult calibrate(const EventLog& log, const CalibrationOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t R = log.num_types();
    if (R == 0 || !(log.horizon > 0.0))
        throw std::invalid_argument("calibrate: empty event log");

    FitResult out;
    out.model.kernel = KernelParams(R, options.num_exponentials);
    out.model.horizon = log.horizon;
    out.model.baselines.assign(R, PiecewiseLinearBaseline::constant(0.0, log.horizon));
    out.per_target_log_likelihood.assign(R, 0.0);
    out.converged = true;

    Rng root(options.seed);
    for (std::size_t target = 0; target < R; ++target) {
        if (log.events[target].empty()) {
            out.diagnostic += "target " + std::to_string(target) + " has no events; skipped. ";
            continue;
        }
        TargetProblem prob(log, target, options);
        Rng rng = root.split(target);

        std::vector<Candidate> seeds;
        if (options.generations == 0) {
            seeds.push_back({prob.heuristic_start(), 0.0});
            for (std::size_t k = 1; k < std::max<std::size_t>(options.restarts, 1); ++k)
                seeds.push_back({prob.random_start(rng), 0.0});
            for (auto& s : seeds) s.ll = prob.objective(s.y);
        } else {
            seeds = genetic_search(prob, options, rng);
        }

        LocalResult best;
        const std::size_t n_refine =
            std::min<std::size_t>(std::max<std::size_t>(options.restarts, 1), seeds.size());
        for (std::size_t k = 0; k < n_refine; ++k) {
            LocalResult r = local_refine(prob, seeds[k].y, options);
            out.iterations += r.iterations;
            if (r.ll > best.ll) best = r;
        }
        if (best.ll <= kPenalty / 2.0) {
            out.infeasible = true;
            out.converged = false;
            out.diagnostic += "target " + std::to_string(target) +
                              ": no feasible parameters (zero-intensity events everywhere). ";
            continue;
        }
        if (!best.converged) out.converged = false;

        // Merge the target's row into the joint model.
        HawkesModel scratch = out.model;
        prob.decode(best.y, scratch);
        out.model.baselines[target] = scratch.baselines[target];
        for (std::size_t s = 0; s < R; ++s)
            for (std::size_t i = 0; i < options.num_exponentials; ++i) {
                out.model.kernel.alpha_at(target, s, i) = scratch.kernel.alpha_at(target, s, i);
                out.model.kernel.tau_at(target, s, i) = scratch.kernel.tau_at(target, s, i);
            }
        out.per_target_log_likelihood[target] = best.ll;
        out.log_likelihood += best.ll;
    }

    Eigen::MatrixXd n = branching_ratio(out.model.kernel);
    for (std::size_t r = 0; r < R; ++r) {
        out.self_branching.push_back(n(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)));
        out.self_half_life.push_back(half_life(out.model.kernel, r, r));
    }
    if (stability_flag(out.model.kernel) != Stability::subcritical)
        out.diagnostic += "warning: fitted branching matrix is not subcritical. ";

    out.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

namespace {

StabilityTestRow pool_batteries(std::size_t m,
                                const std::vector<const std::vector<TargetBattery>*>& sets) {
    StabilityTestRow row;
    row.num_exponentials = m;
    struct Acc {
        double pass = 0.0, p = 0.0;
        std::size_t n = 0;
    } ks, ed, lbq, kpss;
    for (const auto* set : sets) {
        for (const TargetBattery& tb : *set) {
            if (tb.skipped) continue;
            for (const TestReport& r : tb.reports) {
                Acc* a = nullptr;
                if (r.name == "KS") a = &ks;
                else if (r.name == "ED") a = &ed;
                else if (r.name == "LBQ") a = &lbq;
                else if (r.name == "KPSS") a = &kpss;
                if (!a) continue;
                a->pass += r.accept_h0 ? 1.0 : 0.0;
                a->p += r.p_value.value_or(0.0);
                ++a->n;
            }
        }
    }
    auto fin = [](const Acc& a, double& h0, double& p) {
        if (a.n == 0) return;
        h0 = a.pass / static_cast<double>(a.n);
        p = a.p / static_cast<double>(a.n);
    };
    fin(ks, row.ks_h0, row.ks_p);
    fin(ed, row.ed_h0, row.ed_p);
    fin(lbq, row.lbq_h0, row.lbq_p);
    fin(kpss, row.kpss_h0, row.kpss_p);
    return row;
}

}  // namespace

StabilityResult stability_run(const EventLog& log, const CalibrationOptions& options,
                              std::size_t repeats, const BatteryOptions& battery_opts) {
    if (repeats < 2) throw std::invalid_argument("stability_run: repeats must be >= 2");
    StabilityResult out;
    out.fits.resize(repeats);
    out.batteries.resize(repeats);
    Rng root(options.seed);
    std::vector<std::uint64_t> seeds(repeats);
    for (std::size_t k = 0; k < repeats; ++k) seeds[k] = root.split(1000 + k).next_u64();

    parallel_for(repeats, options.jobs, [&](std::size_t k) {
        CalibrationOptions o = options;
        o.seed = seeds[k];
        o.jobs = 1;
        out.fits[k] = calibrate(log, o);
        out.batteries[k] = battery(out.fits[k].model, log, battery_opts);
    });

    std::vector<const std::vector<TargetBattery>*> sets;
    for (const auto& b : out.batteries) sets.push_back(&b);
    out.summary = pool_batteries(options.num_exponentials, sets);

    const std::size_t R = log.num_types();
    out.branching_mean.assign(R, 0.0);
    out.branching_cv.assign(R, 0.0);
    for (std::size_t r = 0; r < R; ++r) {
        std::vector<double> vals;
        for (const auto& f : out.fits)
            if (r < f.self_branching.size()) vals.push_back(f.self_branching[r]);
        if (vals.empty()) continue;
        double m = stats::mean(vals);
        out.branching_mean[r] = m;
        out.branching_cv[r] = m > 0.0 ? stats::sample_stddev(vals) / m : 0.0;
    }
    return out;
}

FitReport fit_report(const std::vector<EventLog>& days, const std::vector<std::size_t>& m_values,
                     const CalibrationOptions& base_options,
                     const BatteryOptions& battery_opts) {
    FitReport out;
    out.m_values = m_values;
    std::vector<std::pair<std::size_t, std::size_t>> grid;  // (day, m index)
    for (std::size_t d = 0; d < days.size(); ++d)
        for (std::size_t mi = 0; mi < m_values.size(); ++mi) grid.emplace_back(d, mi);
    out.day_fits.resize(grid.size());

    Rng root(base_options.seed);
    parallel_for(grid.size(), base_options.jobs, [&](std::size_t i) {
        auto [d, mi] = grid[i];
        CalibrationOptions o = base_options;
        o.num_exponentials = m_values[mi];
        o.seed = root.split(i).next_u64();
        o.jobs = 1;
        DayFit df;
        df.day = d;
        df.num_exponentials = m_values[mi];
        df.fit = calibrate(days[d], o);
        df.battery = battery(df.fit.model, days[d], battery_opts);
        out.day_fits[i] = std::move(df);
    });

    const std::size_t R = days.empty() ? 0 : days.front().num_types();
    for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
        std::vector<const std::vector<TargetBattery>*> sets;
        std::vector<std::vector<double>> br(R), hl(R);
        for (const DayFit& df : out.day_fits) {
            if (df.num_exponentials != m_values[mi]) continue;
            sets.push_back(&df.battery);
            for (std::size_t r = 0; r < R; ++r) {
                if (r < df.fit.self_branching.size()) {
                    br[r].push_back(df.fit.self_branching[r]);
                    hl[r].push_back(df.fit.self_half_life[r]);
                }
            }
        }
        out.summary_by_m.push_back(pool_batteries(m_values[mi], sets));
        std::vector<double> bm(R, 0.0), bs(R, 0.0), hm(R, 0.0), hs(R, 0.0);
        for (std::size_t r = 0; r < R; ++r) {
            if (br[r].empty()) continue;
            bm[r] = stats::mean(br[r]);
            bs[r] = br[r].size() > 1 ? stats::sample_stddev(br[r]) : 0.0;
            hm[r] = stats::mean(hl[r]);
            hs[r] = hl[r].size() > 1 ? stats::sample_stddev(hl[r]) : 0.0;
        }
        out.branching_mean.push_back(std::move(bm));
        out.branching_sd.push_back(std::move(bs));
        out.half_life_mean.push_back(std::move(hm));
        out.half_life_sd.push_back(std::move(hs));
    }
    return out;
}

}  // namespace hawkes_lob
