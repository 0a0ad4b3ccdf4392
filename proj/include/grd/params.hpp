#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "grd/error.hpp"

namespace grd {

/// Absolute tolerance for simplex membership (sum-to-one) and for treating
/// sum(a) as exactly zero.
inline constexpr double simplex_abs_tol = 1e-12;

/// Absolute tolerance for detecting sum(a) == -M with M a nonnegative integer,
/// loose enough to absorb round-off from calibrated parameters.
inline constexpr double integer_sum_tol = 1e-9;

/// Which closed-form regime a parameter vector falls into, by its total sum:
/// zero (product-form constants, independent log gaps), a negative integer -M
/// (finite mixture formulas), or anything else (series machinery).
enum class ParamCase { zero_sum, negative_integer, general };

const char* param_case_name(ParamCase c);

struct ValidationReport {
    bool valid = false;
    errc code = errc::ok;        ///< failure reason when !valid
    int offending_k = -1;        ///< 1-based tail index for tail_sum_violation
    ParamCase kind = ParamCase::general;
    int order = 0;               ///< M when kind != general (0 for zero_sum)
    double power = 0.0;          ///< r = -sum(a), the general-case exponent
    std::vector<double> tails;   ///< a-bar_k = a_k + ... + a_d, k = 1..d
};

/// Tail sums a-bar_k = a_k + ... + a_d for k = 1..d, accumulated from the right.
std::vector<double> tail_sums(std::span<const double> a);

/// Checks d >= 2, finiteness, and a-bar_k > 0 for all k >= 2; classifies the
/// case by a-bar_1. Never throws; inspect .valid and .code.
ValidationReport validate_params(std::span<const double> a) noexcept;

/// Validated parameter vector of the rank-Dirichlet family with cached tail
/// sums and case classification. Immutable after construction; cheap to copy.
class Params {
  public:
    /// Throws Error (dimension_too_small / nonfinite_input / tail_sum_violation)
    /// when the vector violates the admissibility condition.
    explicit Params(std::vector<double> a);

    int dim() const noexcept { return static_cast<int>(a_.size()); }
    const std::vector<double>& a() const noexcept { return a_; }
    const std::vector<double>& tails() const noexcept { return tails_; }

    /// Tail sum a-bar_k, 1-based k in [1, dim()].
    double tail(int k) const { return tails_.at(static_cast<size_t>(k - 1)); }

    ParamCase kind() const noexcept { return kind_; }

    /// M >= 0 such that sum(a) == -M; only meaningful when kind() != general.
    int order() const noexcept { return order_; }

    /// r = -sum(a), meaningful in every case (0 for zero_sum, M for integer).
    double power() const noexcept { return power_; }

    /// Memoizes an expensive scalar derived from the parameters (used for the
    /// normalizing sum of the finite-mixture formulas). The first caller's
    /// compute() result wins; concurrent callers block until it is stored.
    template <class F>
    double cached_moment_normalizer(F&& compute) const {
        std::call_once(cache_->flag, [&] { cache_->value = compute(); });
        return cache_->value;
    }

  private:
    struct Cache {
        std::once_flag flag;
        double value = 0.0;
    };

    std::vector<double> a_;
    std::vector<double> tails_;
    ParamCase kind_ = ParamCase::general;
    int order_ = 0;
    double power_ = 0.0;
    std::shared_ptr<Cache> cache_;
};

/// Point on the ordered simplex: y_1 >= y_2 >= ... >= y_d >= 0, sum = 1
/// (sum checked to simplex_abs_tol).
class OrderedPoint {
  public:
    /// Throws Error(not_in_ordered_simplex) when the invariants fail.
    static OrderedPoint validated(std::vector<double> y);

    /// No checks; for outputs that are valid by construction.
    static OrderedPoint unchecked(std::vector<double> y);

    /// Invariant check without constructing; returns errc::ok or
    /// not_in_ordered_simplex / dimension_too_small / nonfinite_input.
    static errc check(std::span<const double> y) noexcept;

    int dim() const noexcept { return static_cast<int>(y_.size()); }
    const std::vector<double>& y() const noexcept { return y_; }
    double operator[](int k) const { return y_.at(static_cast<size_t>(k)); }

  private:
    explicit OrderedPoint(std::vector<double> y) : y_(std::move(y)) {}
    std::vector<double> y_;
};

/// log of the unnormalized density sum_k (a_k - 1) log y_k with boundary
/// conventions at y_k == 0: the term is 0 when a_k == 1, +inf when a_k < 1,
/// -inf when a_k > 1. If both +inf and -inf terms occur the value is NaN
/// (the density limit is direction-dependent there).
double log_density_unnormalized(const Params& p, const OrderedPoint& y);

/// Same, validating the raw vector first (throws not_in_ordered_simplex).
double log_density_unnormalized(const Params& p, std::span<const double> y);

/// Normalizing constant of the zero-sum case: Q = prod_{k=2}^d (1 / a-bar_k).
/// Throws Error(not_zero_sum) otherwise.
double normalizing_constant_zero_sum(const Params& p);

/// log Q = -sum_{k=2}^d log a-bar_k for the zero-sum case.
double log_normalizing_constant_zero_sum(const Params& p);

} // namespace grd
