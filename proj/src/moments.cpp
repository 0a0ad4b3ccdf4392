#include "grd/moments.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "composition_sums.hpp"

namespace grd {

namespace {

void require_zero_sum(const Params& p, const char* what) {
    if (p.kind() != ParamCase::zero_sum) {
        throw Error(errc::not_zero_sum,
                    std::string(what) + " requires sum(a) == 0; got sum = " +
                        std::to_string(p.tail(1)));
    }
}

/// Validates a moment-order vector of the given size and returns its tail sums.
std::vector<int> order_tails(std::span<const int> n, size_t expected_size, const char* what) {
    if (n.size() != expected_size) {
        throw Error(errc::bad_moment_order,
                    std::string(what) + ": order vector has wrong size");
    }
    for (int v : n) {
        if (v < 0) {
            throw Error(errc::bad_moment_order,
                        std::string(what) + ": order entries must be nonnegative");
        }
    }
    std::vector<int> tails(n.size());
    int acc = 0;
    for (size_t i = n.size(); i-- > 0;) {
        acc += n[i];
        tails[i] = acc;
    }
    return tails;
}

} // namespace

namespace detail {

double log_negative_moment_sum(std::span<const double> tails, int M) {
    int d = static_cast<int>(tails.size());
    return log_composition_sum(d, M, [&](int k, int mbar) {
        double abar = tails[static_cast<size_t>(k - 1)];
        return std::log(abar) - std::log(abar + mbar);
    });
}

} // namespace detail

double ratio_moment_zero_sum(const Params& p, std::span<const int> n, int M) {
    require_zero_sum(p, "ratio moment");
    std::vector<int> nbar = order_tails(n, static_cast<size_t>(p.dim()), "ratio moment");
    if (M < 0) {
        throw Error(errc::bad_moment_order, "ratio moment: M must be nonnegative");
    }
    if (M < nbar[0]) {
        std::ostringstream os;
        os << "ratio moment needs M >= sum(n); got M = " << M << ", sum(n) = " << nbar[0];
        throw Error(errc::moment_order_too_high, os.str());
    }
    double log_value =
        detail::log_composition_sum(p.dim(), M - nbar[0], [&](int k, int mbar) {
            double abar = p.tail(k);
            return std::log(abar) - std::log(abar + mbar + nbar[static_cast<size_t>(k - 1)]);
        });
    return std::exp(log_value);
}

double negative_moment_y1(const Params& p, int M) {
    require_zero_sum(p, "negative moment of Y1");
    if (M < 0) {
        throw Error(errc::bad_moment_order, "negative moment of Y1: M must be nonnegative");
    }
    return std::exp(detail::log_negative_moment_sum(p.tails(), M));
}

double positive_moments(const Params& p, std::span<const int> n) {
    if (p.kind() != ParamCase::negative_integer) {
        throw Error(errc::not_negative_integer_sum,
                    "positive moments in closed form require sum(a) == -M for integer M >= 1; "
                    "got sum = " + std::to_string(p.tail(1)));
    }
    int M = p.order();
    std::vector<int> nbar = order_tails(n, static_cast<size_t>(p.dim()), "positive moments");
    if (nbar[0] > M) {
        std::ostringstream os;
        os << "positive moments exist up to total order M = " << M << "; requested sum(n) = "
           << nbar[0];
        throw Error(errc::moment_order_too_high, os.str());
    }
    double log_num = detail::log_composition_sum(p.dim(), M - nbar[0], [&](int k, int mbar) {
        double abar = p.tail(k);
        return std::log(abar) - std::log(abar + mbar + nbar[static_cast<size_t>(k - 1)]);
    });
    double log_den = p.cached_moment_normalizer(
        [&] { return detail::log_negative_moment_sum(p.tails(), M); });
    return std::exp(log_num - log_den);
}

std::vector<double> mean_vector_m1(const Params& p) {
    if (p.kind() != ParamCase::negative_integer || p.order() != 1) {
        throw Error(errc::not_negative_integer_sum,
                    "mean vector in closed form requires sum(a) == -1; got sum = " +
                        std::to_string(p.tail(1)));
    }
    int d = p.dim();
    std::vector<double> cumprod(static_cast<size_t>(d));
    cumprod[0] = 1.0;
    for (int k = 2; k <= d; ++k) {
        double abar = p.tail(k);
        cumprod[static_cast<size_t>(k - 1)] =
            cumprod[static_cast<size_t>(k - 2)] * abar / (abar + 1.0);
    }
    double c = std::accumulate(cumprod.begin(), cumprod.end(), 0.0);
    std::vector<double> mean(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
        mean[static_cast<size_t>(k)] = cumprod[static_cast<size_t>(k)] / c;
    }
    return mean;
}

Params calibrate_first_moment(std::span<const double> y) {
    errc c = OrderedPoint::check(y);
    if (c != errc::ok) {
        throw Error(c, "calibration target must lie on the ordered simplex");
    }
    int d = static_cast<int>(y.size());
    for (int k = 0; k + 1 < d; ++k) {
        if (!(y[static_cast<size_t>(k)] > y[static_cast<size_t>(k + 1)])) {
            throw Error(errc::tied_or_zero_weights,
                        "calibration target must be strictly decreasing", k + 2);
        }
    }
    if (!(y[static_cast<size_t>(d - 1)] > 0.0)) {
        throw Error(errc::tied_or_zero_weights,
                    "calibration target must have a strictly positive smallest entry", d);
    }
    // t_k = y_k / (y_{k-1} - y_k) is the implied tail sum a-bar_k for k >= 2;
    // slots 0..d+1 so the k = d step sees t_{d+1} = 0 (no gap past the end).
    std::vector<double> t(static_cast<size_t>(d + 2), 0.0);
    for (int k = 2; k <= d; ++k) {
        t[static_cast<size_t>(k)] = y[static_cast<size_t>(k - 1)] /
                                    (y[static_cast<size_t>(k - 2)] - y[static_cast<size_t>(k - 1)]);
    }
    std::vector<double> a(static_cast<size_t>(d));
    a[0] = -1.0 - t[2];
    for (int k = 2; k <= d; ++k) {
        a[static_cast<size_t>(k - 1)] = t[static_cast<size_t>(k)] - t[static_cast<size_t>(k + 1)];
    }
    return Params(std::move(a));
}

} // namespace grd
