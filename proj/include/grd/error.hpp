#pragma once

#include <stdexcept>
#include <string>

namespace grd {

/// Stable error identifiers. These map one-to-one onto the C API status codes
/// and onto the snake_case "code" strings emitted in CLI error JSON.
enum class errc {
    ok = 0,
    dimension_too_small,        ///< parameter/point vector has fewer than 2 entries
    nonfinite_input,            ///< NaN or infinity in an input vector
    tail_sum_violation,         ///< some tail sum a_k + ... + a_d <= 0 for k >= 2
    not_zero_sum,               ///< operation requires sum(a) == 0
    not_negative_integer_sum,   ///< operation requires sum(a) == -M for integer M >= 1
    not_in_ordered_simplex,     ///< point fails ordering / sum-to-one / nonnegativity
    bad_moment_order,           ///< moment order vector invalid (negative entry, wrong size)
    moment_order_too_high,      ///< requested moment order exceeds what the case admits
    mgf_domain_violation,       ///< some t_k >= tail sum a-bar_k
    cap_exceeded,               ///< composition/table enumeration larger than the cap
    mismatched_total,           ///< multinomial coefficient with sum(m) != M
    tied_or_zero_weights,       ///< calibration target not strictly ordered and positive
    negative_truncated_weight,  ///< truncated series weight clipped (diagnostic code)
    non_converged,              ///< series stopping rule not met within max_k (diagnostic code)
    unsupported_dimension,      ///< quadrature oracle implements d in {2,3} only
    tolerance_not_reached,      ///< adaptive quadrature could not meet the tolerance
    empty_input,                ///< statistic requested on an empty sample
    too_few_samples,            ///< statistic needs more samples than were given
    method_case_mismatch,       ///< sampler method incompatible with the parameter case
    invalid_argument,           ///< anything else malformed at the call boundary
};

/// Stable snake_case name for an error code (used by the CLI and the C API).
const char* errc_name(errc code);

/// Exception carrying a stable code plus an optional 1-based index (e.g. the
/// offending tail position k for tail_sum_violation).
class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& message, int index = -1)
        : std::runtime_error(message), code_(code), index_(index) {}

    errc code() const noexcept { return code_; }

    /// 1-based position the error refers to, or -1 when not applicable.
    int index() const noexcept { return index_; }

  private:
    errc code_;
    int index_;
};

} // namespace grd
