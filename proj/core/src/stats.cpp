#include "hawkes_lob/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkes_lob::stats {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    // Modified Lentz continued fraction for Q(a,x).
    const double fpmin = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_p: a > 0 and x >= 0 required");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q: a > 0 and x >= 0 required");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // P(K <= lambda) via the theta-function form, fast-converging for small lambda.
        double y = std::exp(-1.23370055013616983 / (lambda * lambda));  // pi^2/8
        double cdf = 2.506628274631000502 / lambda * (y + std::pow(y, 9) + std::pow(y, 25) + std::pow(y, 49));
        return 1.0 - cdf;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double sample_stddev(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag >= n) throw std::domain_error("autocorrelations: max_lag must be < n");
    double m = mean(x);
    double denom = 0.0;
    for (double v : x) denom += (v - m) * (v - m);
    if (denom == 0.0) throw std::domain_error("autocorrelations: zero variance series");
    std::vector<double> rho(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < n; ++t) num += (x[t] - m) * (x[t - k] - m);
        rho[k - 1] = num / denom;
    }
    return rho;
}

double quantile(std::span<const double> x, double q) {
    if (x.empty()) throw std::domain_error("quantile: empty sample");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    if (q <= 0.0) return s.front();
    if (q >= 1.0) return s.back();
    double pos = q * static_cast<double>(s.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= s.size()) return s.back();
    return s[lo] * (1.0 - frac) + s[lo + 1] * frac;
}

BoxPlotSummary box_plot(std::span<const double> x) {
    BoxPlotSummary out;
    out.median = quantile(x, 0.5);
    out.q1 = quantile(x, 0.25);
    out.q3 = quantile(x, 0.75);
    double iqr = out.q3 - out.q1;
    double lo_fence = out.q1 - 1.5 * iqr;
    double hi_fence = out.q3 + 1.5 * iqr;
    out.whisker_lo = out.q3;
    out.whisker_hi = out.q1;
    bool any = false;
    for (double v : x) {
        if (v < lo_fence || v > hi_fence) {
            out.outliers.push_back(v);
        } else {
            if (!any) {
                out.whisker_lo = out.whisker_hi = v;
                any = true;
            } else {
                out.whisker_lo = std::min(out.whisker_lo, v);
                out.whisker_hi = std::max(out.whisker_hi, v);
            }
        }
    }
    std::sort(out.outliers.begin(), out.outliers.end());
    return out;
}

}  // namespace hawkes_lob::stats
