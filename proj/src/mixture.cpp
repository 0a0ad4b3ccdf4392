#include "grd/mixture.hpp"

#include <cmath>
#include <sstream>

#include "composition_sums.hpp"

namespace grd {

namespace {

int require_integer_case(const Params& p, const char* what) {
    if (p.kind() == ParamCase::general) {
        throw Error(errc::not_negative_integer_sum,
                    std::string(what) +
                        " in closed form requires sum(a) == -M for integer M >= 0; got sum = " +
                        std::to_string(p.tail(1)));
    }
    return p.order();
}

double log_mixture_normalizer(const Params& p, int M) {
    return p.cached_moment_normalizer(
        [&] { return detail::log_negative_moment_sum(p.tails(), M); });
}

} // namespace

MixtureTable mixture_weights(const Params& p, std::size_t cap) {
    int M = require_integer_case(p, "mixture weights");
    int d = p.dim();
    double count = composition_count(d, M);
    if (count > static_cast<double>(cap)) {
        std::ostringstream os;
        os << "mixture table would have " << count << " entries, cap is " << cap;
        throw Error(errc::cap_exceeded, os.str());
    }
    std::vector<Composition> ms;
    std::vector<double> logw;
    std::vector<int> sign;
    ms.reserve(static_cast<size_t>(count));
    logw.reserve(static_cast<size_t>(count));
    for_each_composition(d, M, [&](std::span<const int> m, std::span<const int> tail) {
        double lw = log_multinomial(M, m);
        for (int k = 2; k <= d; ++k) {
            double abar = p.tail(k);
            lw += std::log(abar) - std::log(abar + tail[static_cast<size_t>(k - 1)]);
        }
        ms.emplace_back(m.begin(), m.end());
        logw.push_back(lw);
        sign.push_back(1);
    });
    return MixtureTable::from_log_weights(d, std::move(ms), std::move(logw), std::move(sign));
}

double loggap_mgf(const Params& p, std::span<const double> t) {
    int M = require_integer_case(p, "log-gap MGF");
    int d = p.dim();
    if (t.size() != static_cast<size_t>(d - 1)) {
        throw Error(errc::invalid_argument, "log-gap MGF argument must have size d-1");
    }
    for (int k = 2; k <= d; ++k) {
        double tk = t[static_cast<size_t>(k - 2)];
        if (!std::isfinite(tk)) {
            throw Error(errc::nonfinite_input, "log-gap MGF argument must be finite");
        }
        if (!(tk < p.tail(k))) {
            std::ostringstream os;
            os << "log-gap MGF requires t_k < tail sum for every k; violated at k = " << k
               << " (t = " << tk << ", tail = " << p.tail(k) << ")";
            throw Error(errc::mgf_domain_violation, os.str(), k);
        }
    }
    double log_num = detail::log_composition_sum(d, M, [&](int k, int mbar) {
        double abar = p.tail(k);
        return std::log(abar) - std::log(abar - t[static_cast<size_t>(k - 2)] + mbar);
    });
    return std::exp(log_num - log_mixture_normalizer(p, M));
}

double loggap_moments(const Params& p, std::span<const int> n) {
    int M = require_integer_case(p, "log-gap moments");
    int d = p.dim();
    if (n.size() != static_cast<size_t>(d - 1)) {
        throw Error(errc::bad_moment_order, "log-gap moment order must have size d-1");
    }
    for (int v : n) {
        if (v < 0) {
            throw Error(errc::bad_moment_order, "log-gap moment orders must be nonnegative");
        }
    }
    double log_num = detail::log_composition_sum(d, M, [&](int k, int mbar) {
        double abar = p.tail(k);
        int nk = n[static_cast<size_t>(k - 2)];
        return std::log(abar) + std::lgamma(nk + 1.0) - (nk + 1.0) * std::log(abar + mbar);
    });
    return std::exp(log_num - log_mixture_normalizer(p, M));
}

std::vector<double> loggap_rates_zero_sum(const Params& p) {
    if (p.kind() != ParamCase::zero_sum) {
        throw Error(errc::not_zero_sum,
                    "independent log gaps require sum(a) == 0; got sum = " +
                        std::to_string(p.tail(1)));
    }
    return std::vector<double>(p.tails().begin() + 1, p.tails().end());
}

} // namespace grd
