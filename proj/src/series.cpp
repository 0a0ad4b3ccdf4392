#include "grd/series.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "composition_sums.hpp"
#include "logsum.hpp"

namespace grd {

namespace {

// Working precision for the series accumulation. The binomial transforms lose
// roughly k * log2(2d/(d-1)) bits at index k (2k bits at d = 2); 384 bits
// covers the default max_k = 60 with a wide margin.
constexpr mpfr_prec_t kPrec = 384;

/// Minimal RAII wrapper around one mpfr_t at kPrec bits.
class Real {
  public:
    Real() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    explicit Real(double x) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real& operator=(const Real& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  private:
    mpfr_t v_;
};

/// Exact multinomial coefficient multinomial(M; m) as an extended-precision
/// real (exact since kPrec exceeds the coefficient bit length for the sizes
/// in play): product of binomials C(S_i, m_i) over the prefix sums S_i.
void set_multinomial(Real& out, std::span<const int> m) {
    mpz_t acc, bin;
    mpz_init_set_ui(acc, 1);
    mpz_init(bin);
    unsigned long prefix = 0;
    for (int v : m) {
        prefix += static_cast<unsigned long>(v);
        mpz_bin_uiui(bin, prefix, static_cast<unsigned long>(v));
        mpz_mul(acc, acc, bin);
    }
    mpfr_set_z(out.get(), acc, MPFR_RNDN);
    mpz_clear(acc);
    mpz_clear(bin);
}

/// b_j = E[(d Y_1)^{-j}] for a zero-sum tail-sum vector, in extended
/// precision: composition sum of multinomial * prod a-bar/(a-bar + m-bar),
/// divided by d^j. All terms are positive.
Real negative_moment_scaled(std::span<const double> tails, int j, std::size_t cap) {
    int d = static_cast<int>(tails.size());
    double count = composition_count(d, j);
    if (count > static_cast<double>(cap)) {
        std::ostringstream os;
        os << "series term needs " << count << " compositions, cap is " << cap;
        throw Error(errc::cap_exceeded, os.str());
    }
    Real sum, term, factor;
    for_each_composition(d, j, [&](std::span<const int> m, std::span<const int> tail) {
        set_multinomial(term, m);
        for (int k = 2; k <= d; ++k) {
            double abar = tails[static_cast<size_t>(k - 1)];
            mpfr_mul_d(term.get(), term.get(), abar, MPFR_RNDN);
            mpfr_set_d(factor.get(), abar + tail[static_cast<size_t>(k - 1)], MPFR_RNDN);
            mpfr_div(term.get(), term.get(), factor.get(), MPFR_RNDN);
        }
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
    });
    Real dj;
    mpfr_ui_pow_ui(dj.get(), static_cast<unsigned long>(d), static_cast<unsigned long>(j),
                   MPFR_RNDN);
    mpfr_div(sum.get(), sum.get(), dj.get(), MPFR_RNDN);
    return sum;
}

/// Generalized binomial coefficients (r choose k) for k = 0..kmax via the
/// recurrence c_k = c_{k-1} (r - k + 1) / k; exact integers when r is one.
std::vector<Real> binomials_of_power(double r, int kmax) {
    std::vector<Real> c(static_cast<size_t>(kmax) + 1);
    mpfr_set_ui(c[0].get(), 1, MPFR_RNDN);
    Real factor;
    for (int k = 1; k <= kmax; ++k) {
        mpfr_set_d(factor.get(), r - (k - 1), MPFR_RNDN);
        mpfr_mul(c[static_cast<size_t>(k)].get(), c[static_cast<size_t>(k - 1)].get(),
                 factor.get(), MPFR_RNDN);
        mpfr_div_ui(c[static_cast<size_t>(k)].get(), c[static_cast<size_t>(k)].get(),
                    static_cast<unsigned long>(k), MPFR_RNDN);
    }
    return c;
}

} // namespace

double expected_power_y1_series(const Params& p, double r, SeriesOptions opts,
                                SeriesDiagnostics* diag) {
    if (p.kind() != ParamCase::zero_sum) {
        throw Error(errc::not_zero_sum,
                    "series for E[Y1^-r] requires sum(a) == 0; got sum = " +
                        std::to_string(p.tail(1)));
    }
    if (!std::isfinite(r)) {
        throw Error(errc::nonfinite_input, "series power must be finite");
    }
    if (opts.max_k < 0 || !(opts.tol > 0.0)) {
        throw Error(errc::invalid_argument, "series options need max_k >= 0 and tol > 0");
    }
    const std::vector<double>& tails = p.tails();
    int d = p.dim();

    std::vector<Real> choose = binomials_of_power(r, opts.max_k);
    Real dr;  // d^r
    {
        Real base(static_cast<double>(d)), expo(r);
        mpfr_pow(dr.get(), base.get(), expo.get(), MPFR_RNDN);
    }

    std::vector<Real> b;  // b_j = E[(d Y_1)^{-j}]
    b.reserve(static_cast<size_t>(opts.max_k) + 1);
    Real partial, u, term;
    mpz_t bin;
    mpz_init(bin);
    double prev_increment = std::numeric_limits<double>::infinity();
    double increment = std::numeric_limits<double>::infinity();
    bool converged = false;
    int terms = 0;
    for (int k = 0; k <= opts.max_k; ++k) {
        b.push_back(negative_moment_scaled(tails, k, default_composition_cap));
        // u_k = E[(1 - 1/(d Y_1))^k] = sum_j C(k,j) (-1)^j b_j  (>= 0).
        mpfr_set_zero(u.get(), 1);
        for (int j = 0; j <= k; ++j) {
            mpz_bin_uiui(bin, static_cast<unsigned long>(k), static_cast<unsigned long>(j));
            mpfr_set_z(term.get(), bin, MPFR_RNDN);
            mpfr_mul(term.get(), term.get(), b[static_cast<size_t>(j)].get(), MPFR_RNDN);
            if (j % 2 == 1) mpfr_neg(term.get(), term.get(), MPFR_RNDN);
            mpfr_add(u.get(), u.get(), term.get(), MPFR_RNDN);
        }
        // increment_k = d^r (r choose k) (-1)^k u_k
        mpfr_mul(term.get(), choose[static_cast<size_t>(k)].get(), u.get(), MPFR_RNDN);
        mpfr_mul(term.get(), term.get(), dr.get(), MPFR_RNDN);
        if (k % 2 == 1) mpfr_neg(term.get(), term.get(), MPFR_RNDN);
        mpfr_add(partial.get(), partial.get(), term.get(), MPFR_RNDN);
        prev_increment = increment;
        increment = term.to_double();
        terms = k + 1;
        if (k >= 1 && std::abs(increment) < opts.tol && std::abs(prev_increment) < opts.tol) {
            converged = true;
            break;
        }
    }
    mpz_clear(bin);
    if (diag) {
        diag->terms_used = terms;
        diag->converged = converged;
        diag->final_increment = increment;
    }
    return partial.to_double();
}

namespace {

/// phi_j(K) = sum_{k=j}^K (r choose k)(k choose j)(-1)^{k-j} for j = 0..K,
/// in extended precision. For integer r = M these are exactly zero for
/// j < min(K, M) and exactly one at j = M <= K.
std::vector<Real> collapsed_coefficients(double r, int K) {
    std::vector<Real> choose = binomials_of_power(r, K);
    std::vector<Real> phi(static_cast<size_t>(K) + 1);
    Real term;
    mpz_t bin;
    mpz_init(bin);
    for (int j = 0; j <= K; ++j) {
        for (int k = j; k <= K; ++k) {
            mpz_bin_uiui(bin, static_cast<unsigned long>(k), static_cast<unsigned long>(j));
            mpfr_set_z(term.get(), bin, MPFR_RNDN);
            mpfr_mul(term.get(), term.get(), choose[static_cast<size_t>(k)].get(), MPFR_RNDN);
            if ((k - j) % 2 == 1) mpfr_neg(term.get(), term.get(), MPFR_RNDN);
            mpfr_add(phi[static_cast<size_t>(j)].get(), phi[static_cast<size_t>(j)].get(),
                     term.get(), MPFR_RNDN);
        }
    }
    mpz_clear(bin);
    return phi;
}

struct CollapsedScale {
    double log_abs;  ///< log |phi_j(K) * d^{r-j}|
    int sign;        ///< -1, 0, +1
};

std::vector<CollapsedScale> collapsed_scales(const Params& p, int K) {
    double r = p.power();
    int d = p.dim();
    std::vector<Real> phi = collapsed_coefficients(r, K);
    std::vector<CollapsedScale> scale(static_cast<size_t>(K) + 1);
    Real tmp;
    for (int j = 0; j <= K; ++j) {
        const Real& ph = phi[static_cast<size_t>(j)];
        if (ph.is_zero()) {
            scale[static_cast<size_t>(j)] = {-std::numeric_limits<double>::infinity(), 0};
            continue;
        }
        mpfr_abs(tmp.get(), ph.get(), MPFR_RNDN);
        mpfr_log(tmp.get(), tmp.get(), MPFR_RNDN);
        double log_abs = tmp.to_double() + (r - j) * std::log(static_cast<double>(d));
        scale[static_cast<size_t>(j)] = {log_abs, ph.sign()};
    }
    return scale;
}

} // namespace

MixtureTable signed_series_weights(const Params& p, int K, std::size_t cap) {
    if (K < 0) {
        throw Error(errc::invalid_argument, "truncation index K must be nonnegative");
    }
    int d = p.dim();
    // Total entries: sum_{j<=K} C(j+d-1, d-1) = C(K+d, d).
    double total = composition_count(d + 1, K);
    if (total > static_cast<double>(cap)) {
        std::ostringstream os;
        os << "truncated table would have " << total << " entries, cap is " << cap;
        throw Error(errc::cap_exceeded, os.str());
    }
    std::vector<CollapsedScale> scale = collapsed_scales(p, K);
    std::vector<Composition> ms;
    std::vector<double> logw;
    std::vector<int> sign;
    ms.reserve(static_cast<size_t>(total));
    for (int j = 0; j <= K; ++j) {
        const CollapsedScale& s = scale[static_cast<size_t>(j)];
        for_each_composition(d, j, [&](std::span<const int> m, std::span<const int> tail) {
            double lw = s.log_abs;
            if (s.sign != 0) {
                lw += log_multinomial(j, m);
                for (int k = 2; k <= d; ++k) {
                    double abar = p.tail(k);
                    lw += std::log(abar) - std::log(abar + tail[static_cast<size_t>(k - 1)]);
                }
            }
            ms.emplace_back(m.begin(), m.end());
            logw.push_back(lw);
            sign.push_back(s.sign);
        });
    }
    return MixtureTable::from_log_weights(d, std::move(ms), std::move(logw), std::move(sign));
}

double loggap_moments_series(const Params& p, std::span<const int> n, int K, SeriesOptions opts,
                             SeriesDiagnostics* diag) {
    int d = p.dim();
    if (n.size() != static_cast<size_t>(d - 1)) {
        throw Error(errc::bad_moment_order, "log-gap moment order must have size d-1");
    }
    for (int v : n) {
        if (v < 0) {
            throw Error(errc::bad_moment_order, "log-gap moment orders must be nonnegative");
        }
    }
    if (K < 0) {
        throw Error(errc::invalid_argument, "truncation index K must be nonnegative");
    }
    double r = p.power();
    // Normalizer C = E[Y_1^{-r}] under the zero-sum shift a + r e_1.
    std::vector<double> shifted = p.a();
    shifted[0] += r;
    Params zero_sum(std::move(shifted));
    double c = expected_power_y1_series(zero_sum, r, opts, diag);

    std::vector<CollapsedScale> scale = collapsed_scales(p, K);
    // numerator = sum_j phi_j d^{r-j} * sum_{m: sum(m)=j} multinomial *
    //             prod_k [a-bar_k/(a-bar_k+m-bar_k)] * [n_k!/(a-bar_k+m-bar_k)^{n_k}]
    double numerator = 0.0;
    for (int j = 0; j <= K; ++j) {
        const CollapsedScale& s = scale[static_cast<size_t>(j)];
        if (s.sign == 0) continue;
        detail::LogSumAccumulator inner;
        for_each_composition(d, j, [&](std::span<const int> m, std::span<const int> tail) {
            double lt = log_multinomial(j, m);
            for (int k = 2; k <= d; ++k) {
                double abar = p.tail(k);
                double rate = abar + tail[static_cast<size_t>(k - 1)];
                int nk = n[static_cast<size_t>(k - 2)];
                lt += std::log(abar) - std::log(rate) + std::lgamma(nk + 1.0) -
                      nk * std::log(rate);
            }
            inner.add(lt);
        });
        numerator += s.sign * std::exp(s.log_abs + inner.logsum());
    }
    return numerator / c;
}

} // namespace grd
