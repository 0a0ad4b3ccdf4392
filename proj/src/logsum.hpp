#pragma once

#include <cmath>
#include <limits>

namespace grd::detail {

/// Streaming log-sum-exp: feeds log-terms, reads back log of the sum of their
/// exponentials without overflow. All terms are assumed finite or -inf.
class LogSumAccumulator {
  public:
    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            // Rescale the running sum to the new maximum.
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }

    bool empty() const { return sum_ == 0.0; }

    double logsum() const {
        if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(sum_);
    }

  private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

} // namespace grd::detail
