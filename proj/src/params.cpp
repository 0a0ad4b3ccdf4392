#include "grd/params.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace grd {

namespace {

std::string format_vector(std::span<const double> v) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << "]";
    return os.str();
}

} // namespace

const char* errc_name(errc code) {
    switch (code) {
        case errc::ok: return "ok";
        case errc::dimension_too_small: return "dimension_too_small";
        case errc::nonfinite_input: return "nonfinite_input";
        case errc::tail_sum_violation: return "tail_sum_violation";
        case errc::not_zero_sum: return "not_zero_sum";
        case errc::not_negative_integer_sum: return "not_negative_integer_sum";
        case errc::not_in_ordered_simplex: return "not_in_ordered_simplex";
        case errc::bad_moment_order: return "bad_moment_order";
        case errc::moment_order_too_high: return "moment_order_too_high";
        case errc::mgf_domain_violation: return "mgf_domain_violation";
        case errc::cap_exceeded: return "cap_exceeded";
        case errc::mismatched_total: return "mismatched_total";
        case errc::tied_or_zero_weights: return "tied_or_zero_weights";
        case errc::negative_truncated_weight: return "negative_truncated_weight";
        case errc::non_converged: return "non_converged";
        case errc::unsupported_dimension: return "unsupported_dimension";
        case errc::tolerance_not_reached: return "tolerance_not_reached";
        case errc::empty_input: return "empty_input";
        case errc::too_few_samples: return "too_few_samples";
        case errc::method_case_mismatch: return "method_case_mismatch";
        case errc::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

const char* param_case_name(ParamCase c) {
    switch (c) {
        case ParamCase::zero_sum: return "zero-sum";
        case ParamCase::negative_integer: return "negative-integer-sum";
        case ParamCase::general: return "general";
    }
    return "unknown";
}

std::vector<double> tail_sums(std::span<const double> a) {
    std::vector<double> tails(a.size());
    double acc = 0.0;
    for (size_t i = a.size(); i-- > 0;) {
        acc += a[i];
        tails[i] = acc;
    }
    return tails;
}

ValidationReport validate_params(std::span<const double> a) noexcept {
    ValidationReport rep;
    if (a.size() < 2) {
        rep.code = errc::dimension_too_small;
        return rep;
    }
    for (double v : a) {
        if (!std::isfinite(v)) {
            rep.code = errc::nonfinite_input;
            return rep;
        }
    }
    rep.tails = tail_sums(a);
    for (size_t k = 1; k < a.size(); ++k) {
        if (!(rep.tails[k] > 0.0)) {
            rep.code = errc::tail_sum_violation;
            rep.offending_k = static_cast<int>(k + 1);
            return rep;
        }
    }
    rep.valid = true;
    double total = rep.tails[0];
    rep.power = total == 0.0 ? 0.0 : -total;  // avoid -0.0 in reports
    double rounded = std::round(total);
    if (std::abs(total) <= simplex_abs_tol) {
        rep.kind = ParamCase::zero_sum;
        rep.order = 0;
    } else if (std::abs(total - rounded) <= integer_sum_tol && rounded <= -1.0) {
        rep.kind = ParamCase::negative_integer;
        rep.order = static_cast<int>(-rounded);
    } else {
        rep.kind = ParamCase::general;
        rep.order = 0;
    }
    return rep;
}

Params::Params(std::vector<double> a) : a_(std::move(a)), cache_(std::make_shared<Cache>()) {
    ValidationReport rep = validate_params(a_);
    if (!rep.valid) {
        switch (rep.code) {
            case errc::dimension_too_small:
                throw Error(rep.code, "parameter vector needs at least 2 entries");
            case errc::nonfinite_input:
                throw Error(rep.code, "parameter vector contains a non-finite entry");
            default: {
                std::ostringstream os;
                os << "tail sum a[" << rep.offending_k << "] + ... + a[" << a_.size()
                   << "] must be positive, got " << rep.tails[static_cast<size_t>(rep.offending_k - 1)]
                   << " for a = " << format_vector(a_);
                throw Error(rep.code, os.str(), rep.offending_k);
            }
        }
    }
    tails_ = std::move(rep.tails);
    kind_ = rep.kind;
    order_ = rep.order;
    power_ = rep.power;
}

errc OrderedPoint::check(std::span<const double> y) noexcept {
    if (y.size() < 2) return errc::dimension_too_small;
    double sum = 0.0;
    for (double v : y) {
        if (!std::isfinite(v)) return errc::nonfinite_input;
        sum += v;
    }
    for (size_t i = 0; i + 1 < y.size(); ++i) {
        if (!(y[i] >= y[i + 1])) return errc::not_in_ordered_simplex;
    }
    if (!(y[y.size() - 1] >= 0.0)) return errc::not_in_ordered_simplex;
    if (std::abs(sum - 1.0) > simplex_abs_tol) return errc::not_in_ordered_simplex;
    return errc::ok;
}

OrderedPoint OrderedPoint::validated(std::vector<double> y) {
    errc c = check(y);
    if (c != errc::ok) {
        throw Error(c, "point is not on the ordered simplex (need y1 >= ... >= yd >= 0, sum 1): " +
                           format_vector(y));
    }
    return OrderedPoint(std::move(y));
}

OrderedPoint OrderedPoint::unchecked(std::vector<double> y) {
    return OrderedPoint(std::move(y));
}

double log_density_unnormalized(const Params& p, const OrderedPoint& y) {
    if (p.dim() != y.dim()) {
        throw Error(errc::invalid_argument, "parameter/point dimension mismatch");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    double finite_part = 0.0;
    bool pos_inf = false;
    bool neg_inf = false;
    for (int k = 0; k < y.dim(); ++k) {
        double yk = y[k];
        double ek = p.a()[static_cast<size_t>(k)] - 1.0;
        if (yk > 0.0) {
            finite_part += ek * std::log(yk);
        } else if (ek < 0.0) {
            pos_inf = true;  // y_k^{a_k-1} -> +inf
        } else if (ek > 0.0) {
            neg_inf = true;  // y_k^{a_k-1} -> 0, log -> -inf
        }
        // ek == 0: the factor is y_k^0 == 1 even at y_k == 0; term contributes 0.
    }
    if (pos_inf && neg_inf) return std::numeric_limits<double>::quiet_NaN();
    if (pos_inf) return inf;
    if (neg_inf) return -inf;
    return finite_part;
}

double log_density_unnormalized(const Params& p, std::span<const double> y) {
    return log_density_unnormalized(
        p, OrderedPoint::validated(std::vector<double>(y.begin(), y.end())));
}

double log_normalizing_constant_zero_sum(const Params& p) {
    if (p.kind() != ParamCase::zero_sum) {
        throw Error(errc::not_zero_sum,
                    "normalizing constant in closed form requires sum(a) == 0; got sum = " +
                        std::to_string(p.tail(1)));
    }
    double log_q = 0.0;
    for (int k = 2; k <= p.dim(); ++k) {
        log_q -= std::log(p.tail(k));
    }
    return log_q;
}

double normalizing_constant_zero_sum(const Params& p) {
    return std::exp(log_normalizing_constant_zero_sum(p));
}

} // namespace grd
