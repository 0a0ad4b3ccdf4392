#pragma once

#include <span>
#include <vector>

#include "grd/compositions.hpp"
#include "logsum.hpp"

namespace grd::detail {

/// log of sum over compositions m of M into d parts of
///   multinomial(M; m) * exp( sum_{k=2}^d term(k, m-bar_k) )
/// where term receives the 1-based index k and the tail sum m-bar_k.
template <class TermFn>
double log_composition_sum(int d, int M, TermFn&& term) {
    LogSumAccumulator acc;
    for_each_composition(d, M, [&](std::span<const int> m, std::span<const int> tail) {
        double log_term = log_multinomial(M, m);
        for (int k = 2; k <= d; ++k) {
            log_term += term(k, tail[static_cast<size_t>(k - 1)]);
        }
        acc.add(log_term);
    });
    return acc.logsum();
}

/// log E[Y_1^{-M}] for a zero-sum parameter vector given via its tail sums:
/// log of sum over compositions m of M of multinomial * prod a-bar/(a-bar + m-bar).
/// Shared by the negative-moment formula and the finite-mixture normalizer
/// (the latter evaluates it on tails shifted to the zero-sum case, which agree
/// with the original tails for k >= 2).
double log_negative_moment_sum(std::span<const double> tails, int M);

} // namespace grd::detail
