#pragma once

#include <span>

#include "grd/compositions.hpp"
#include "grd/params.hpp"

namespace grd {

struct SeriesOptions {
    double tol = 1e-10;  ///< stop once two consecutive increments fall below this
    int max_k = 60;      ///< hard cap on the series index
};

struct SeriesDiagnostics {
    int terms_used = 0;            ///< number of series terms evaluated
    bool converged = false;        ///< stopping rule met before max_k
    double final_increment = 0.0;  ///< last increment added
};

/// E[Y_1^{-r}] for zero-sum parameters and arbitrary real r, via the binomial
/// series around 1/d <= Y_1 <= 1:
///   E[Y_1^{-r}] = d^r * sum_{k>=0} (r choose k) (-1)^k E[(1 - 1/(d Y_1))^k],
/// where each E[(1 - 1/(d Y_1))^k] is a binomial transform of the closed-form
/// negative integer moments E[Y_1^{-j}], j <= k. The transform cancels
/// catastrophically in double precision, so it is accumulated in extended
/// precision internally; inputs and outputs are doubles.
///
/// Stops at the first k whose increment and predecessor are both below
/// opts.tol in absolute value; for integer r >= 0 the series terminates
/// exactly at k = r. If max_k is reached first, the partial sum is returned
/// and diag->converged is false (no exception).
double expected_power_y1_series(const Params& p, double r, SeriesOptions opts = {},
                                SeriesDiagnostics* diag = nullptr);

/// Truncated mixing distribution over compositions for arbitrary valid
/// parameters with r = -sum(a): entries are all m with sum(m) = j <= K,
/// ordered by j ascending then decreasing-lexicographically, with collapsed
/// signed weight
///   w_m(K) proportional to phi_j(K) * d^{r-j} * multinomial(j; m) *
///                          prod_{k=2}^d a-bar_k/(a-bar_k + m-bar_k),
///   phi_j(K) = sum_{k=j}^K (r choose k)(k choose j)(-1)^{k-j}.
/// Negative collapsed weights are clipped to zero and renormalized; the
/// clipped mass is reported on the table. For integer r = M and K >= M the
/// table reduces exactly to the closed-form mixture over compositions of M
/// (all other entries get weight 0).
MixtureTable signed_series_weights(const Params& p, int K,
                                   std::size_t cap = default_composition_cap);

/// Log-gap moments E[prod Z_k^{n_k}] for arbitrary valid parameters, via the
/// truncated series mixture: each component contributes its product of
/// exponential moments prod n_k!/(a-bar_k + m-bar_k)^{n_k}, weighted by the
/// signed series weights, normalized by C = E[Y_1^{-r}] at the zero-sum shift
/// (computed with expected_power_y1_series under opts). n has size d-1.
/// diag, when given, reports the convergence of the normalizer series.
double loggap_moments_series(const Params& p, std::span<const int> n, int K,
                             SeriesOptions opts = {}, SeriesDiagnostics* diag = nullptr);

} // namespace grd
