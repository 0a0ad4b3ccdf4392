#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "grd/params.hpp"

namespace grd {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  ///< heuristic upper estimate of the absolute error
};

/// Integrand selector for the quadrature oracle:
///   g(y) = prod_k y_k^{y_powers[k]} * y_1^{-y1_negative_order + y1_power_real}
///          * prod_{k=2}^d (log(y_{k-1}/y_k))^{z_powers[k-2]}.
/// Empty vectors mean all-zero powers.
struct MomentSpec {
    std::vector<int> y_powers;
    int y1_negative_order = 0;
    double y1_power_real = 0.0;
    std::vector<int> z_powers;
};

/// Direct numerical integration of the unnormalized density over the ordered
/// simplex, d in {2, 3} only (Error(unsupported_dimension) otherwise).
/// Integrable endpoint singularities (exponents below 1) are removed by the
/// substitution u = y_d^{e} at the vanishing coordinate; the integrals
/// themselves use adaptive Gauss-Kronrod 15(7). A divergent integral
/// (inadmissible parameters) exhausts the refinement budget and throws
/// Error(tolerance_not_reached) — validity can be cross-checked against this.
QuadratureResult quadrature_normalizing_constant(std::span<const double> a, double tol = 1e-10);

/// Normalized expectation E[g(Y)] by the same route (ratio of two integrals).
QuadratureResult quadrature_moment(std::span<const double> a, const MomentSpec& g,
                                   double tol = 1e-10);

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;  ///< sample standard deviation / sqrt(n)
    std::size_t n = 0;
};

/// Mean and standard error of a sample (Error(empty_input) on empty,
/// Error(too_few_samples) for n < 2).
McEstimate mc_estimate(std::span<const double> xs);

/// Kolmogorov limiting survival function P(sup|B| > x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_survival(double x);

/// Critical value c(alpha) with kolmogorov_survival(c) = alpha; the one-sample
/// test at size n rejects when sqrt(n) * D_n > c (asymptotic).
double kolmogorov_critical(double alpha);

struct KsResult {
    double statistic = 0.0;  ///< D (sup distance between the compared CDFs)
    double critical = 0.0;   ///< rejection threshold for D at the given alpha
    bool reject = false;
    std::size_t n = 0;
    std::size_t m = 0;  ///< second sample size (two-sample only)
};

/// One-sample KS against a continuous CDF, asymptotic critical value.
KsResult ks_test(std::span<const double> xs, const std::function<double(double)>& cdf,
                 double alpha);

/// Two-sample KS, critical value c(alpha) * sqrt((n+m)/(n m)).
KsResult ks_test_two_sample(std::span<const double> xs, std::span<const double> ys, double alpha);

struct CheckItem {
    std::string name;
    bool passed = false;
    double worst = 0.0;      ///< worst observed discrepancy
    double tolerance = 0.0;  ///< what it was compared against
    std::string detail;
};

struct CheckSuiteResult {
    std::vector<CheckItem> items;
    bool all_passed = true;
};

/// Deterministic formula-vs-oracle suite: closed-form constants and moments
/// against quadrature, calibration round trips, series against closed forms,
/// MGF derivatives against first moments. quick shrinks the grids.
CheckSuiteResult run_check_suite(bool quick = false);

} // namespace grd
