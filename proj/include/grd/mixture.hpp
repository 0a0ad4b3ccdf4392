#pragma once

#include <span>
#include <vector>

#include "grd/compositions.hpp"
#include "grd/params.hpp"

namespace grd {

/// Log gaps Z_k = log Y_{k-1} - log Y_k for k = 2..d, stored as a vector of
/// size d-1 with index i holding Z_{i+2}.
using LogGapVector = std::vector<double>;

/// Finite mixing distribution over compositions of M = p.order() when
/// sum(a) == -M (M = 0, the zero-sum case, gives the single-entry table):
///   w_m proportional to multinomial(M; m) * prod_{k=2}^d a-bar_k/(a-bar_k + m-bar_k),
/// normalized to sum to 1. All weights are strictly positive.
MixtureTable mixture_weights(const Params& p, std::size_t cap = default_composition_cap);

/// Joint moment generating function of the log gaps, E[exp(sum t_k Z_k)], for
/// sum(a) == -M (M >= 0). t has size d-1 (t[i] is t_{i+2}) and must satisfy
/// t_k < a-bar_k for every k (throws Error(mgf_domain_violation) with the
/// first offending k otherwise):
///   (1/C) * sum_m multinomial(M; m) * prod_{k=2}^d a-bar_k/(a-bar_k - t_k + m-bar_k),
///   C = E[Y_1^{-M}] at the zero-sum shift of a.
double loggap_mgf(const Params& p, std::span<const double> t);

/// Joint log-gap moments E[prod Z_k^{n_k}] for sum(a) == -M (M >= 0); n has
/// size d-1 with nonnegative entries:
///   (1/C) * sum_m multinomial(M; m) * prod_{k=2}^d a-bar_k n_k!/(a-bar_k + m-bar_k)^{n_k+1}.
double loggap_moments(const Params& p, std::span<const int> n);

/// Zero-sum case: the log gaps are independent exponentials; returns their
/// rates (a-bar_2, ..., a-bar_d), size d-1.
std::vector<double> loggap_rates_zero_sum(const Params& p);

} // namespace grd
