#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hawkes_lob::stats {

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
// Series expansion for x < a+1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail probability of a chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

// Standard normal CDF and survival function.
double normal_cdf(double x);
double normal_sf(double x);

// Kolmogorov distribution survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2),
// with the Jacobi-theta form used for small lambda.
double kolmogorov_sf(double lambda);

double mean(std::span<const double> x);
// Unbiased sample variance (divides by n-1).
double sample_variance(std::span<const double> x);
double sample_stddev(std::span<const double> x);

// Sample autocorrelations rho_1..rho_max_lag about the sample mean.
std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag);

// Linear-interpolation quantile on a sorted copy, q in [0,1].
double quantile(std::span<const double> x, double q);

struct BoxPlotSummary {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;  // furthest point within 1.5 IQR of the box
    double whisker_hi = 0.0;
    std::vector<double> outliers;
};

BoxPlotSummary box_plot(std::span<const double> x);

}  // namespace hawkes_lob::stats
