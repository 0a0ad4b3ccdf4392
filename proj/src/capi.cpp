#include "grd/grd.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "grd/error.hpp"
#include "grd/mixture.hpp"
#include "grd/moments.hpp"
#include "grd/oracle.hpp"
#include "grd/params.hpp"
#include "grd/sampling.hpp"
#include "grd/series.hpp"

namespace {

// The C status enum mirrors grd::errc value-for-value; keep them locked.
static_assert(GRD_OK == static_cast<int>(grd::errc::ok));
static_assert(GRD_DIMENSION_TOO_SMALL == static_cast<int>(grd::errc::dimension_too_small));
static_assert(GRD_NONFINITE_INPUT == static_cast<int>(grd::errc::nonfinite_input));
static_assert(GRD_TAIL_SUM_VIOLATION == static_cast<int>(grd::errc::tail_sum_violation));
static_assert(GRD_NOT_ZERO_SUM == static_cast<int>(grd::errc::not_zero_sum));
static_assert(GRD_NOT_NEGATIVE_INTEGER_SUM ==
              static_cast<int>(grd::errc::not_negative_integer_sum));
static_assert(GRD_NOT_IN_ORDERED_SIMPLEX ==
              static_cast<int>(grd::errc::not_in_ordered_simplex));
static_assert(GRD_BAD_MOMENT_ORDER == static_cast<int>(grd::errc::bad_moment_order));
static_assert(GRD_MOMENT_ORDER_TOO_HIGH == static_cast<int>(grd::errc::moment_order_too_high));
static_assert(GRD_MGF_DOMAIN_VIOLATION == static_cast<int>(grd::errc::mgf_domain_violation));
static_assert(GRD_CAP_EXCEEDED == static_cast<int>(grd::errc::cap_exceeded));
static_assert(GRD_MISMATCHED_TOTAL == static_cast<int>(grd::errc::mismatched_total));
static_assert(GRD_TIED_OR_ZERO_WEIGHTS == static_cast<int>(grd::errc::tied_or_zero_weights));
static_assert(GRD_NEGATIVE_TRUNCATED_WEIGHT ==
              static_cast<int>(grd::errc::negative_truncated_weight));
static_assert(GRD_NON_CONVERGED == static_cast<int>(grd::errc::non_converged));
static_assert(GRD_UNSUPPORTED_DIMENSION == static_cast<int>(grd::errc::unsupported_dimension));
static_assert(GRD_TOLERANCE_NOT_REACHED == static_cast<int>(grd::errc::tolerance_not_reached));
static_assert(GRD_EMPTY_INPUT == static_cast<int>(grd::errc::empty_input));
static_assert(GRD_TOO_FEW_SAMPLES == static_cast<int>(grd::errc::too_few_samples));
static_assert(GRD_METHOD_CASE_MISMATCH == static_cast<int>(grd::errc::method_case_mismatch));
static_assert(GRD_INVALID_ARGUMENT == static_cast<int>(grd::errc::invalid_argument));

static_assert(GRD_CASE_ZERO_SUM == static_cast<int>(grd::ParamCase::zero_sum));
static_assert(GRD_CASE_NEGATIVE_INTEGER == static_cast<int>(grd::ParamCase::negative_integer));
static_assert(GRD_CASE_GENERAL == static_cast<int>(grd::ParamCase::general));

static_assert(GRD_METHOD_ZERO_SUM == static_cast<int>(grd::Method::zero_sum));
static_assert(GRD_METHOD_EXACT == static_cast<int>(grd::Method::exact));
static_assert(GRD_METHOD_APPROX == static_cast<int>(grd::Method::approximate));
static_assert(GRD_METHOD_REJECTION == static_cast<int>(grd::Method::rejection));

thread_local std::string t_last_message;
thread_local int t_last_index = -1;

void set_last_error(const std::string& message, int index) {
    t_last_message = message;
    t_last_index = index;
}

grd_status to_status(grd::errc code) { return static_cast<grd_status>(code); }

template <class F>
grd_status guarded(F&& body) noexcept {
    try {
        body();
        return GRD_OK;
    } catch (const grd::Error& e) {
        set_last_error(e.what(), e.index());
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        set_last_error("out of memory", -1);
        return GRD_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_last_error(e.what(), -1);
        return GRD_INVALID_ARGUMENT;
    } catch (...) {
        set_last_error("unknown error", -1);
        return GRD_INVALID_ARGUMENT;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw grd::Error(grd::errc::invalid_argument, what);
}

std::vector<double> to_vector(const double* p, int n, const char* what) {
    require(p != nullptr, what);
    require(n >= 1, "length must be >= 1");
    return std::vector<double>(p, p + n);
}

std::vector<int> to_int_vector(const int* p, int n, const char* what) {
    require(p != nullptr, what);
    require(n >= 0, "length must be >= 0");
    return std::vector<int>(p, p + n);
}

grd::SeriesOptions make_series_options(double tol, int max_k) {
    grd::SeriesOptions opts;
    if (tol > 0.0) opts.tol = tol;
    if (max_k > 0) opts.max_k = max_k;
    return opts;
}

void copy_diag(const grd::SeriesDiagnostics& in, grd_series_diag* out) {
    if (!out) return;
    out->terms_used = in.terms_used;
    out->converged = in.converged ? 1 : 0;
    out->final_increment = in.final_increment;
}

} // namespace

struct grd_params {
    grd::Params impl;
};

struct grd_rng {
    grd::RngState impl;
};

struct grd_sampler {
    grd::Sampler impl;
};

struct grd_table {
    grd::MixtureTable impl;
};

extern "C" {

const char* grd_version(void) { return "0.1.0"; }

const char* grd_status_name(grd_status code) {
    return grd::errc_name(static_cast<grd::errc>(code));
}

const char* grd_last_error_message(void) { return t_last_message.c_str(); }

int grd_last_error_index(void) { return t_last_index; }

void grd_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------------ */

grd_status grd_validate(const double* a, int d, grd_validation* out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        require(a != nullptr, "parameter pointer is null");
        require(d >= 1, "dimension must be >= 1");
        grd::ValidationReport rep = grd::validate_params(std::span<const double>(a, a + d));
        out->valid = rep.valid ? 1 : 0;
        out->code = to_status(rep.code);
        out->offending_k = rep.offending_k;
        out->kind = static_cast<grd_case>(rep.kind);
        out->order = rep.order;
        out->power = rep.power;
    });
}

grd_status grd_tail_sums(const double* a, int d, double* out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        std::vector<double> in = to_vector(a, d, "parameter pointer is null");
        std::vector<double> tails = grd::tail_sums(in);
        std::memcpy(out, tails.data(), sizeof(double) * tails.size());
    });
}

grd_status grd_params_create(const double* a, int d, grd_params** out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        std::vector<double> in = to_vector(a, d, "parameter pointer is null");
        *out = new grd_params{grd::Params(std::move(in))};
    });
}

void grd_params_destroy(grd_params* p) { delete p; }

int grd_params_dim(const grd_params* p) { return p ? p->impl.dim() : 0; }

grd_status grd_params_a(const grd_params* p, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        const std::vector<double>& a = p->impl.a();
        std::memcpy(out, a.data(), sizeof(double) * a.size());
    });
}

grd_status grd_params_tails(const grd_params* p, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        const std::vector<double>& tails = p->impl.tails();
        std::memcpy(out, tails.data(), sizeof(double) * tails.size());
    });
}

grd_status grd_params_case(const grd_params* p, grd_case* kind, int* order, double* power) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        if (kind) *kind = static_cast<grd_case>(p->impl.kind());
        if (order) *order = p->impl.order();
        if (power) *power = p->impl.power();
    });
}

grd_status grd_log_density(const grd_params* p, const double* y, int d, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<double> point = to_vector(y, d, "point pointer is null");
        require(d == p->impl.dim(), "point dimension must match the parameter dimension");
        *out = grd::log_density_unnormalized(p->impl, std::span<const double>(point));
    });
}

grd_status grd_norm_const_zero_sum(const grd_params* p, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        *out = grd::normalizing_constant_zero_sum(p->impl);
    });
}

/* ------------------------------------------------------------------ */

grd_status grd_ratio_moment_zero_sum(const grd_params* p, const int* n, int d, int M,
                                     double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<int> order = to_int_vector(n, d, "moment order pointer is null");
        *out = grd::ratio_moment_zero_sum(p->impl, order, M);
    });
}

grd_status grd_negative_moment_y1(const grd_params* p, int M, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        *out = grd::negative_moment_y1(p->impl, M);
    });
}

grd_status grd_positive_moments(const grd_params* p, const int* n, int d, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<int> order = to_int_vector(n, d, "moment order pointer is null");
        *out = grd::positive_moments(p->impl, order);
    });
}

grd_status grd_mean_vector(const grd_params* p, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<double> mean = grd::mean_vector_m1(p->impl);
        std::memcpy(out, mean.data(), sizeof(double) * mean.size());
    });
}

grd_status grd_calibrate_first_moment(const double* y, int d, grd_params** out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        std::vector<double> target = to_vector(y, d, "target pointer is null");
        *out = new grd_params{grd::calibrate_first_moment(target)};
    });
}

/* ------------------------------------------------------------------ */

grd_status grd_loggap_rates_zero_sum(const grd_params* p, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<double> rates = grd::loggap_rates_zero_sum(p->impl);
        std::memcpy(out, rates.data(), sizeof(double) * rates.size());
    });
}

grd_status grd_loggap_mgf(const grd_params* p, const double* t, int len, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<double> arg = to_vector(t, len, "t pointer is null");
        *out = grd::loggap_mgf(p->impl, arg);
    });
}

grd_status grd_loggap_moments(const grd_params* p, const int* n, int len, double* out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<int> order = to_int_vector(n, len, "moment order pointer is null");
        *out = grd::loggap_moments(p->impl, order);
    });
}

/* ------------------------------------------------------------------ */

grd_status grd_expected_power_y1_series(const grd_params* p, double r, double tol, int max_k,
                                        double* out, grd_series_diag* diag) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        grd::SeriesDiagnostics d;
        *out = grd::expected_power_y1_series(p->impl, r, make_series_options(tol, max_k), &d);
        copy_diag(d, diag);
    });
}

grd_status grd_loggap_moments_series(const grd_params* p, const int* n, int len, int K,
                                     double tol, int max_k, double* out,
                                     grd_series_diag* diag) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::vector<int> order = to_int_vector(n, len, "moment order pointer is null");
        grd::SeriesDiagnostics d;
        *out = grd::loggap_moments_series(p->impl, order, K, make_series_options(tol, max_k),
                                          &d);
        copy_diag(d, diag);
    });
}

/* ------------------------------------------------------------------ */

grd_status grd_table_exact(const grd_params* p, size_t cap, grd_table** out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::size_t effective = cap == 0 ? grd::default_composition_cap : cap;
        *out = new grd_table{grd::mixture_weights(p->impl, effective)};
    });
}

grd_status grd_table_truncated(const grd_params* p, int K, size_t cap, grd_table** out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        std::size_t effective = cap == 0 ? grd::default_composition_cap : cap;
        *out = new grd_table{grd::signed_series_weights(p->impl, K, effective)};
    });
}

void grd_table_destroy(grd_table* t) { delete t; }

long long grd_table_size(const grd_table* t) {
    return t ? static_cast<long long>(t->impl.size()) : 0;
}

int grd_table_dim(const grd_table* t) { return t ? t->impl.dim() : 0; }

grd_status grd_table_entry(const grd_table* t, long long i, int* m_out, double* weight_out) {
    return guarded([&] {
        require(t != nullptr, "table handle is null");
        require(i >= 0 && i < static_cast<long long>(t->impl.size()),
                "table index out of range");
        const grd::TableEntry& e = t->impl.entry(static_cast<std::size_t>(i));
        if (m_out) {
            for (std::size_t k = 0; k < e.m.size(); ++k) m_out[k] = e.m[k];
        }
        if (weight_out) *weight_out = e.weight;
    });
}

grd_status grd_table_diag(const grd_table* t, double* clipped_mass, long long* clipped_count) {
    return guarded([&] {
        require(t != nullptr, "table handle is null");
        if (clipped_mass) *clipped_mass = t->impl.clipped_mass();
        if (clipped_count) *clipped_count = static_cast<long long>(t->impl.clipped_count());
    });
}

/* ------------------------------------------------------------------ */

grd_status grd_rng_create(unsigned long long seed, grd_rng** out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        *out = new grd_rng{grd::RngState(seed)};
    });
}

void grd_rng_destroy(grd_rng* r) { delete r; }

grd_status grd_rng_uniform(grd_rng* r, double* out) {
    return guarded([&] {
        require(r != nullptr, "rng handle is null");
        require(out != nullptr, "output pointer is null");
        *out = r->impl.uniform01();
    });
}

grd_status grd_rng_exponential(grd_rng* r, double rate, double* out) {
    return guarded([&] {
        require(r != nullptr, "rng handle is null");
        require(out != nullptr, "output pointer is null");
        require(rate > 0.0, "rate must be positive");
        *out = r->impl.exponential(rate);
    });
}

grd_status grd_sampler_create(const grd_params* p, grd_method method, int truncation,
                              size_t cap, grd_sampler** out) {
    return guarded([&] {
        require(p != nullptr, "params handle is null");
        require(out != nullptr, "output pointer is null");
        require(method == GRD_METHOD_ZERO_SUM || method == GRD_METHOD_EXACT ||
                    method == GRD_METHOD_APPROX || method == GRD_METHOD_REJECTION,
                "unknown sampling method");
        std::size_t effective = cap == 0 ? grd::default_composition_cap : cap;
        *out = new grd_sampler{grd::Sampler(p->impl, static_cast<grd::Method>(method),
                                            truncation, effective)};
    });
}

void grd_sampler_destroy(grd_sampler* s) { delete s; }

grd_status grd_sampler_draw(grd_sampler* s, grd_rng* r, double* y_out) {
    return guarded([&] {
        require(s != nullptr, "sampler handle is null");
        require(r != nullptr, "rng handle is null");
        require(y_out != nullptr, "output pointer is null");
        grd::OrderedPoint y = s->impl.draw(r->impl);
        std::memcpy(y_out, y.y().data(), sizeof(double) * y.y().size());
    });
}

grd_status grd_sampler_draw_batch(grd_sampler* s, grd_rng* r, long long n, double* out) {
    return guarded([&] {
        require(s != nullptr, "sampler handle is null");
        require(r != nullptr, "rng handle is null");
        require(out != nullptr, "output pointer is null");
        require(n >= 0, "draw count must be nonnegative");
        grd::SampleBatch batch = s->impl.draw_batch(r->impl, static_cast<std::size_t>(n));
        for (int k = 0; k < batch.d; ++k) {
            std::span<const double> col = batch.column(k);
            std::memcpy(out + static_cast<std::size_t>(k) * static_cast<std::size_t>(n),
                        col.data(), sizeof(double) * col.size());
        }
    });
}

grd_status grd_sampler_get_stats(const grd_sampler* s, grd_sampler_stats* out) {
    return guarded([&] {
        require(s != nullptr, "sampler handle is null");
        require(out != nullptr, "output pointer is null");
        grd::SamplerStats st = s->impl.stats();
        out->draws = static_cast<long long>(st.draws);
        out->proposals = static_cast<long long>(st.proposals);
        out->accepted = static_cast<long long>(st.accepted);
        out->acceptance_rate = st.acceptance_rate;
        out->clipped_mass = st.clipped_mass;
        out->table_size = static_cast<long long>(st.table_size);
    });
}

/* ------------------------------------------------------------------ */

grd_status grd_quadrature_norm_const(const double* a, int d, double tol, double* value,
                                     double* error) {
    return guarded([&] {
        require(value != nullptr, "output pointer is null");
        std::vector<double> in = to_vector(a, d, "parameter pointer is null");
        grd::QuadratureResult q =
            grd::quadrature_normalizing_constant(in, tol > 0.0 ? tol : 1e-10);
        *value = q.value;
        if (error) *error = q.error;
    });
}

grd_status grd_quadrature_moment(const double* a, int d, const int* y_powers,
                                 int y1_negative_order, double y1_power_real,
                                 const int* z_powers, double tol, double* value,
                                 double* error) {
    return guarded([&] {
        require(value != nullptr, "output pointer is null");
        std::vector<double> in = to_vector(a, d, "parameter pointer is null");
        grd::MomentSpec spec;
        if (y_powers) spec.y_powers.assign(y_powers, y_powers + d);
        spec.y1_negative_order = y1_negative_order;
        spec.y1_power_real = y1_power_real;
        if (z_powers) spec.z_powers.assign(z_powers, z_powers + (d - 1));
        grd::QuadratureResult q = grd::quadrature_moment(in, spec, tol > 0.0 ? tol : 1e-10);
        *value = q.value;
        if (error) *error = q.error;
    });
}

grd_status grd_mc_estimate(const double* xs, long long n, double* mean, double* se) {
    return guarded([&] {
        require(mean != nullptr, "output pointer is null");
        require(xs != nullptr || n == 0, "sample pointer is null");
        require(n >= 0, "sample size must be nonnegative");
        grd::McEstimate est =
            grd::mc_estimate(std::span<const double>(xs, xs + static_cast<std::size_t>(n)));
        *mean = est.mean;
        if (se) *se = est.se;
    });
}

grd_status grd_kolmogorov_critical(double alpha, double* out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        *out = grd::kolmogorov_critical(alpha);
    });
}

grd_status grd_ks_test(const double* xs, long long n, grd_cdf_fn cdf, void* ctx, double alpha,
                       grd_ks_result* out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        require(cdf != nullptr, "cdf callback is null");
        require(xs != nullptr || n == 0, "sample pointer is null");
        require(n >= 0, "sample size must be nonnegative");
        grd::KsResult res = grd::ks_test(
            std::span<const double>(xs, xs + static_cast<std::size_t>(n)),
            [cdf, ctx](double x) { return cdf(x, ctx); }, alpha);
        out->statistic = res.statistic;
        out->critical = res.critical;
        out->reject = res.reject ? 1 : 0;
        out->n = static_cast<long long>(res.n);
        out->m = static_cast<long long>(res.m);
    });
}

grd_status grd_ks_test_two_sample(const double* xs, long long n, const double* ys, long long m,
                                  double alpha, grd_ks_result* out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        require(xs != nullptr || n == 0, "first sample pointer is null");
        require(ys != nullptr || m == 0, "second sample pointer is null");
        require(n >= 0 && m >= 0, "sample sizes must be nonnegative");
        grd::KsResult res = grd::ks_test_two_sample(
            std::span<const double>(xs, xs + static_cast<std::size_t>(n)),
            std::span<const double>(ys, ys + static_cast<std::size_t>(m)), alpha);
        out->statistic = res.statistic;
        out->critical = res.critical;
        out->reject = res.reject ? 1 : 0;
        out->n = static_cast<long long>(res.n);
        out->m = static_cast<long long>(res.m);
    });
}

grd_status grd_check_report(int quick, char** json_out) {
    return guarded([&] {
        require(json_out != nullptr, "output pointer is null");
        grd::CheckSuiteResult suite = grd::run_check_suite(quick != 0);
        nlohmann::json items = nlohmann::json::array();
        for (const grd::CheckItem& item : suite.items) {
            items.push_back({{"name", item.name},
                             {"passed", item.passed},
                             {"worst", item.worst},
                             {"tolerance", item.tolerance},
                             {"detail", item.detail}});
        }
        nlohmann::json report = {{"all_passed", suite.all_passed}, {"items", items}};
        std::string text = report.dump(2);
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *json_out = buf;
    });
}

} // extern "C"
