#pragma once

#include <span>
#include <vector>

#include "grd/params.hpp"

namespace grd {

/// E[ prod_k Y_k^{n_k} / Y_1^M ] for zero-sum parameters:
///   sum over compositions m of (M - n-bar_1) of
///   multinomial(M - n-bar_1; m) * prod_{k=2}^d a-bar_k / (a-bar_k + m-bar_k + n-bar_k).
/// n has size d with nonnegative entries; requires M >= sum(n).
double ratio_moment_zero_sum(const Params& p, std::span<const int> n, int M);

/// E[ Y_1^{-M} ] for zero-sum parameters (the n = 0 case of the ratio moment):
///   sum over compositions m of M of
///   multinomial(M; m) * prod_{k=2}^d a-bar_k / (a-bar_k + m-bar_k).
double negative_moment_y1(const Params& p, int M);

/// E[ prod_k Y_k^{n_k} ] when sum(a) == -M (M = p.order() >= 1): the ratio of
/// two composition sums, numerator over compositions of (M - n-bar_1) shifted
/// by the tail sums of n, denominator over compositions of M. The denominator
/// is computed once per Params object and cached. Requires sum(n) <= M.
double positive_moments(const Params& p, std::span<const int> n);

/// First-moment vector when sum(a) == -1:
///   E[Y_k] = (1/C) * prod_{j=2}^k a-bar_j / (a-bar_j + 1),
///   C = 1 + sum_{k=2}^d prod_{j=2}^k a-bar_j / (a-bar_j + 1).
/// Entries are nonincreasing and sum to 1.
std::vector<double> mean_vector_m1(const Params& p);

/// Inverts the first-moment map: finds the unique a with sum(a) == -1 whose
/// mean vector equals y. Requires y strictly ordered with y_d > 0 (throws
/// Error(tied_or_zero_weights) otherwise) and on the ordered simplex.
///   a_1 = -1 - y_2/(y_1 - y_2),
///   a_k = y_k/(y_{k-1} - y_k) - y_{k+1}/(y_k - y_{k+1})  (2 <= k <= d-1),
///   a_d = y_d/(y_{d-1} - y_d).
Params calibrate_first_moment(std::span<const double> y);

} // namespace grd
