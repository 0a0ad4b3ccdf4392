#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "grd/error.hpp"

namespace grd {

/// Nonnegative integer vector m with a fixed total sum(m) == M.
using Composition = std::vector<int>;

/// Default cap on the number of enumerated compositions / table entries.
inline constexpr std::size_t default_composition_cap = 10'000'000;

/// Number of compositions of M into d nonnegative parts, C(M+d-1, d-1),
/// as a double (exact for any count below the cap magnitudes).
double composition_count(int d, int M);

/// log of the multinomial coefficient M! / (m_1! ... m_d!).
/// Throws Error(mismatched_total) when sum(m) != M, bad_moment_order on a
/// negative entry.
double log_multinomial(int M, std::span<const int> m);

/// Streams the compositions of M into d parts in decreasing lexicographic
/// order: (M,0,...,0) first, (0,...,0,M) last. No allocation per step.
class CompositionEnumerator {
  public:
    CompositionEnumerator(int d, int M);

    /// Copies the next composition into m (size d) and its tail sums
    /// m-bar_k = m_k + ... + m_d into tail (size d). Returns false when the
    /// sequence is exhausted (outputs untouched).
    bool next(std::span<int> m, std::span<int> tail);

  private:
    int d_;
    int total_;
    bool first_ = true;
    bool done_ = false;
    std::vector<int> m_;
};

/// Calls f(std::span<const int> m, std::span<const int> tail) for every
/// composition of M into d parts, in the enumerator's order.
template <class F>
void for_each_composition(int d, int M, F&& f) {
    CompositionEnumerator e(d, M);
    std::vector<int> m(static_cast<size_t>(d));
    std::vector<int> tail(static_cast<size_t>(d));
    while (e.next(m, tail)) {
        f(std::span<const int>(m), std::span<const int>(tail));
    }
}

/// Materializes the full list; throws Error(cap_exceeded) when the count
/// would exceed cap.
std::vector<Composition> enumerate_compositions(int d, int M,
                                                std::size_t cap = default_composition_cap);

/// One row of a discrete mixing distribution over compositions.
struct TableEntry {
    Composition m;
    double log_weight_abs;  ///< log |unnormalized weight| (-inf allowed)
    int sign;               ///< sign of the unnormalized weight: -1, 0, +1
    double weight;          ///< final nonnegative normalized weight
    double cumulative;      ///< running sum of weight, ends at 1
};

/// Normalized discrete distribution over compositions, in enumeration order,
/// with an inverse-CDF lookup. Negative unnormalized weights (possible for
/// truncated series tables) are clipped to zero before renormalization and
/// reported via clipped_mass()/clipped_count(); signs are kept per entry.
class MixtureTable {
  public:
    /// Builds from parallel arrays of compositions, log|w| and signs.
    /// Throws Error(invalid_argument) if the total signed mass is not positive.
    static MixtureTable from_log_weights(int d, std::vector<Composition> ms,
                                         std::vector<double> log_weight_abs,
                                         std::vector<int> sign);

    std::size_t size() const noexcept { return entries_.size(); }
    int dim() const noexcept { return d_; }
    const TableEntry& entry(std::size_t i) const { return entries_.at(i); }
    const std::vector<TableEntry>& entries() const noexcept { return entries_; }

    /// Index of the entry whose cumulative interval contains u in [0,1).
    std::size_t sample_index(double u) const;

    /// Negative mass clipped to zero, relative to the signed total (so 0 when
    /// every weight is nonnegative).
    double clipped_mass() const noexcept { return clipped_mass_; }
    std::size_t clipped_count() const noexcept { return clipped_count_; }

  private:
    int d_ = 0;
    std::vector<TableEntry> entries_;
    double clipped_mass_ = 0.0;
    std::size_t clipped_count_ = 0;
};

} // namespace grd
