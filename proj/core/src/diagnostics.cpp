#include "hawkes_lob/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes_lob/stats.hpp"

namespace hawkes_lob {

namespace {

// Kernel contribution to Lambda_target over [a, b), given the decayed sums
// state[s*M+i] = sum_{t_k < a} exp(-(a - t_k)/tau) and the source events inside
// the window. Also advances the state to b.
double kernel_compensator_increment(const HawkesModel& model, const EventLog& log,
                                    std::size_t target, double a, double b,
                                    std::vector<double>& state,
                                    std::vector<std::size_t>& cursor) {
    const KernelParams& k = model.kernel;
    const std::size_t M = k.num_exponentials;
    double total = 0.0;
    for (std::size_t source = 0; source < k.num_types; ++source) {
        const auto& seq = log.events[source];
        std::size_t begin = cursor[source];
        std::size_t end = begin;
        while (end < seq.size() && seq[end] < b) ++end;
        for (std::size_t i = 0; i < M; ++i) {
            double tau = k.tau_at(target, source, i);
            double alpha = k.alpha_at(target, source, i);
            double decay = std::exp(-(b - a) / tau);
            double s = state[source * M + i];
            double inc = s * (1.0 - decay);
            double s_new = s * decay;
            for (std::size_t e = begin; e < end; ++e) {
                double d = std::exp(-(b - seq[e]) / tau);
                inc += 1.0 - d;
                s_new += d;
            }
            total += alpha * tau * inc;
            state[source * M + i] = s_new;
        }
        cursor[source] = end;
    }
    return total;
}

}  // namespace

double compensator_at(const HawkesModel& model, const EventLog& log, std::size_t target,
                      double t) {
    if (t < 0.0 || t > model.horizon)
        throw std::domain_error("compensator_at: t outside [0, T]");
    const KernelParams& k = model.kernel;
    double total = model.baselines[target].integral(0.0, t);
    for (std::size_t source = 0; source < k.num_types; ++source) {
        for (std::size_t i = 0; i < k.num_exponentials; ++i) {
            double alpha = k.alpha_at(target, source, i);
            if (alpha == 0.0) continue;
            double tau = k.tau_at(target, source, i);
            double sum = 0.0;
            for (double tk : log.events[source]) {
                if (tk >= t) break;
                sum += 1.0 - std::exp(-(t - tk) / tau);
            }
            total += alpha * tau * sum;
        }
    }
    return total;
}

ResidualSeries residuals(const HawkesModel& model, const EventLog& log, std::size_t target,
                         const ResidualOptions& opts) {
    const KernelParams& k = model.kernel;
    const auto& targets = log.events[target];
    ResidualSeries out;
    out.target = target;
    if (targets.empty()) return out;

    std::vector<double> state(k.num_types * k.num_exponentials, 0.0);
    std::vector<std::size_t> cursor(k.num_types, 0);
    double prev = 0.0;
    bool first = true;
    for (double tj : targets) {
        if (tj > prev) {
            double inc = model.baselines[target].integral(prev, tj)
                         + kernel_compensator_increment(model, log, target, prev, tj, state, cursor);
            if (!first || opts.include_leading) out.values.push_back(inc);
        }
        prev = tj;
        first = false;
    }
    return out;
}

TestReport ks_test(std::span<const double> sample, double level) {
    const std::size_t n = sample.size();
    if (n < 1) throw std::domain_error("ks_test: empty sample");
    TestReport r;
    r.name = "KS";
    r.significance_level = level;
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = 1.0 - std::exp(-std::max(s[i], 0.0));
        double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
        double lo = f - static_cast<double>(i) / static_cast<double>(n);
        d = std::max({d, hi, lo});
    }
    r.statistic = d;
    // Stephens' finite-sample adjustment to the asymptotic Kolmogorov law.
    double sn = std::sqrt(static_cast<double>(n));
    double lambda = (sn + 0.12 + 0.11 / sn) * d;
    r.p_value = stats::kolmogorov_sf(lambda);
    r.accept_h0 = *r.p_value > level;
    if (n < 5) r.note = "low power: n < 5";
    return r;
}

TestReport excess_dispersion_test(std::span<const double> sample, double level) {
    const std::size_t n = sample.size();
    if (n < 2) throw std::domain_error("excess_dispersion_test: need n >= 2");
    TestReport r;
    r.name = "ED";
    r.significance_level = level;
    double s2 = 0.0;
    for (double v : sample) s2 += (v - 1.0) * (v - 1.0);
    s2 /= static_cast<double>(n);
    double z = std::sqrt(static_cast<double>(n) / 8.0) * (s2 - 1.0);
    r.statistic = z;
    r.p_value = 2.0 * stats::normal_sf(std::fabs(z));
    r.accept_h0 = *r.p_value > level;
    if (n < 30) r.note = "asymptotic test: n < 30";
    return r;
}

std::size_t default_lbq_lags(std::size_t n) {
    return std::min<std::size_t>(20, std::max<std::size_t>(1, n / 4));
}

TestReport ljung_box_test(std::span<const double> sample, std::size_t lags, double level) {
    const std::size_t n = sample.size();
    if (lags < 1 || lags >= n) throw std::domain_error("ljung_box_test: need 1 <= lags < n");
    TestReport r;
    r.name = "LBQ";
    r.significance_level = level;
    std::vector<double> rho = stats::autocorrelations(sample, lags);
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k)
        q += rho[k - 1] * rho[k - 1] / static_cast<double>(n - k);
    q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);
    r.statistic = q;
    r.p_value = stats::chi_square_sf(q, static_cast<double>(lags));
    r.accept_h0 = *r.p_value > level;
    return r;
}

namespace {

// Level-stationarity critical values (upper tail) and their significance
// levels, from the published KPSS reference table.
constexpr double kKpssLevels[] = {0.10, 0.05, 0.025, 0.01};
constexpr double kKpssCrit[] = {0.347, 0.463, 0.574, 0.739};

double kpss_critical_value(double level) {
    if (level >= kKpssLevels[0]) return kKpssCrit[0];
    if (level <= kKpssLevels[3]) return kKpssCrit[3];
    for (int i = 0; i < 3; ++i) {
        if (level <= kKpssLevels[i] && level >= kKpssLevels[i + 1]) {
            double w = (kKpssLevels[i] - level) / (kKpssLevels[i] - kKpssLevels[i + 1]);
            return kKpssCrit[i] + w * (kKpssCrit[i + 1] - kKpssCrit[i]);
        }
    }
    return kKpssCrit[1];
}

// Table-interpolated p-value, clamped to [0.01, 0.10]; exported for report
// columns only, the accept decision uses the critical value.
double kpss_p_value(double statistic) {
    if (statistic <= kKpssCrit[0]) return 0.10;
    if (statistic >= kKpssCrit[3]) return 0.01;
    for (int i = 0; i < 3; ++i) {
        if (statistic >= kKpssCrit[i] && statistic <= kKpssCrit[i + 1]) {
            double w = (statistic - kKpssCrit[i]) / (kKpssCrit[i + 1] - kKpssCrit[i]);
            return kKpssLevels[i] + w * (kKpssLevels[i + 1] - kKpssLevels[i]);
        }
    }
    return 0.05;
}

}  // namespace

TestReport kpss_test(std::span<const double> sample, double level) {
    const std::size_t n = sample.size();
    if (n < 2) throw std::domain_error("kpss_test: need n >= 2");
    TestReport r;
    r.name = "KPSS";
    r.significance_level = level;
    const double nd = static_cast<double>(n);
    double m = stats::mean(sample);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = sample[i] - m;

    double cum = 0.0;
    double s2sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += e[i];
        s2sum += cum * cum;
    }

    // Bartlett-window long-run variance.
    auto bandwidth = static_cast<std::size_t>(std::floor(4.0 * std::pow(nd / 100.0, 0.25)));
    double lrv = 0.0;
    for (double v : e) lrv += v * v;
    lrv /= nd;
    for (std::size_t l = 1; l <= bandwidth; ++l) {
        double g = 0.0;
        for (std::size_t t = l; t < n; ++t) g += e[t] * e[t - l];
        g /= nd;
        lrv += 2.0 * (1.0 - static_cast<double>(l) / (static_cast<double>(bandwidth) + 1.0)) * g;
    }
    if (!(lrv > 0.0)) throw std::domain_error("kpss_test: zero long-run variance");

    r.statistic = s2sum / (nd * nd * lrv);
    r.p_value = kpss_p_value(r.statistic);
    r.accept_h0 = r.statistic < kpss_critical_value(level);
    if (n < 30) r.note = "asymptotic test: n < 30";
    return r;
}

std::vector<TargetBattery> battery(const HawkesModel& model, const EventLog& log,
                                   const BatteryOptions& opts) {
    std::vector<TargetBattery> out;
    for (std::size_t target = 0; target < model.num_types(); ++target) {
        TargetBattery tb;
        tb.target = target;
        ResidualSeries res = residuals(model, log, target, opts.residual_options);
        if (res.values.size() < 5) {
            tb.skipped = true;
            tb.skip_reason = res.values.empty() ? "no residuals for target stream"
                                                : "fewer than 5 residuals";
            out.push_back(std::move(tb));
            continue;
        }
        std::span<const double> v(res.values);
        tb.reports.push_back(ks_test(v, opts.ks_level));
        tb.reports.push_back(excess_dispersion_test(v, opts.ed_level));
        std::size_t lags = opts.lbq_lags ? *opts.lbq_lags : default_lbq_lags(v.size());
        tb.reports.push_back(ljung_box_test(v, lags, opts.lbq_level));
        tb.reports.push_back(kpss_test(v, opts.kpss_level));
        out.push_back(std::move(tb));
    }
    return out;
}

}  // namespace hawkes_lob
