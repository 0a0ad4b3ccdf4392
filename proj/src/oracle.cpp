#include "grd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include "grd/mixture.hpp"
#include "grd/moments.hpp"
#include "grd/sampling.hpp"
#include "grd/series.hpp"

namespace grd {

namespace {

// ---------------------------------------------------------------------------
// Gauss-Kronrod 15(7) panel
// ---------------------------------------------------------------------------

// Kronrod abscissae on [0, 1] side of the origin; the embedded 7-point Gauss
// rule uses the odd-indexed nodes plus the center.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double value;
    double error;
};

template <class F>
Panel gk15(F&& f, double lo, double hi, const char* what) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
    }
    const double value = resk * h;
    if (!std::isfinite(value)) {
        throw Error(errc::tolerance_not_reached,
                    std::string(what) + ": non-finite integrand value (integral diverges)");
    }
    return {value, std::abs((resk - resg) * h)};
}

struct Interval {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

/// Adaptive bisection driven by the Gauss-Kronrod error estimate. Terminates
/// when the summed error estimate drops below rel_tol * |integral| (plus a
/// tiny absolute floor), and throws Error(tolerance_not_reached) when the
/// interval budget is exhausted first — which is exactly what happens when the
/// integrand is not integrable, so inadmissible parameter vectors are detected
/// rather than silently mis-integrated.
template <class F>
Panel integrate_adaptive(F&& f, double lo, double hi, double rel_tol, int max_intervals,
                         const char* what) {
    if (!(hi > lo)) return {0.0, 0.0};
    std::priority_queue<Interval> queue;
    Panel first = gk15(f, lo, hi, what);
    queue.push({lo, hi, first.value, first.error});
    double value_sum = first.value;
    double error_sum = first.error;
    double stuck_error = 0.0;  // error from intervals too narrow to split
    int used = 1;
    const double abs_floor = 1e-280;
    while (error_sum + stuck_error >
           std::max(rel_tol * std::abs(value_sum), abs_floor)) {
        if (std::abs(value_sum) > 1e100) {
            throw Error(errc::tolerance_not_reached,
                        std::string(what) + ": integral appears divergent");
        }
        if (queue.empty() || used >= max_intervals) {
            std::ostringstream oss;
            oss << what << ": tolerance not reached after " << used
                << " intervals (residual error estimate "
                << (error_sum + stuck_error) << ")";
            throw Error(errc::tolerance_not_reached, oss.str());
        }
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo) || !(mid < worst.hi)) {
            // Cannot be split further at machine precision; its error estimate
            // stays in the total so convergence is never claimed spuriously.
            stuck_error += worst.error;
            error_sum -= worst.error;
            continue;
        }
        Panel left = gk15(f, worst.lo, mid, what);
        Panel right = gk15(f, mid, worst.hi, what);
        value_sum += left.value + right.value - worst.value;
        error_sum += left.error + right.error - worst.error;
        queue.push({worst.lo, mid, left.value, left.error});
        queue.push({mid, worst.hi, right.value, right.error});
        ++used;
    }
    return {value_sum, error_sum + stuck_error};
}

// ---------------------------------------------------------------------------
// Integrand assembly over the ordered simplex
// ---------------------------------------------------------------------------

constexpr int kBudgetD2 = 4000;
constexpr int kBudgetOuter = 3000;
constexpr int kBudgetInner = 2000;

double eval_g(const MomentSpec& g, const double* y, int d) {
    double v = 1.0;
    if (!g.y_powers.empty()) {
        for (int k = 0; k < d; ++k) {
            if (g.y_powers[static_cast<size_t>(k)] != 0) {
                v *= std::pow(y[k], g.y_powers[static_cast<size_t>(k)]);
            }
        }
    }
    if (g.y1_negative_order != 0) v *= std::pow(y[0], -g.y1_negative_order);
    if (g.y1_power_real != 0.0) v *= std::pow(y[0], g.y1_power_real);
    if (!g.z_powers.empty()) {
        for (int k = 1; k < d; ++k) {
            const int q = g.z_powers[static_cast<size_t>(k - 1)];
            if (q != 0) v *= std::pow(std::log(y[k - 1] / y[k]), q);
        }
    }
    return v;
}

void check_spec(const MomentSpec& g, int d) {
    if (!g.y_powers.empty() && static_cast<int>(g.y_powers.size()) != d) {
        throw Error(errc::invalid_argument, "y_powers must be empty or have size d");
    }
    if (!g.z_powers.empty() && static_cast<int>(g.z_powers.size()) != d - 1) {
        throw Error(errc::invalid_argument, "z_powers must be empty or have size d-1");
    }
    for (int p : g.y_powers) {
        if (p < 0) throw Error(errc::bad_moment_order, "y_powers entries must be >= 0");
    }
    for (int q : g.z_powers) {
        if (q < 0) throw Error(errc::bad_moment_order, "z_powers entries must be >= 0");
    }
    if (g.y1_negative_order < 0) {
        throw Error(errc::bad_moment_order, "y1_negative_order must be >= 0");
    }
}

/// Raw integral of g(y) * prod y_k^{a_k - 1} over {y_1 >= y_2 >= 0, sum = 1}.
/// y_1 runs over [1/2, 1]; the right piece [3/4, 1] has y_2 -> 0, where the
/// substitution u = y_2^{a_2} removes the integrable singularity when
/// 0 < a_2 < 1 (a_2 <= 0 is left in place so divergence is detected).
Panel raw_integral_d2(std::span<const double> a, const MomentSpec* g, double tol) {
    const double a1 = a[0];
    const double a2 = a[1];
    auto direct = [&](double y1) {
        const double y[2] = {y1, 1.0 - y1};
        double v = std::pow(y[0], a1 - 1.0) * std::pow(y[1], a2 - 1.0);
        if (g != nullptr) v *= eval_g(*g, y, 2);
        return v;
    };
    Panel left = integrate_adaptive(direct, 0.5, 0.75, tol, kBudgetD2, "d=2 left piece");
    Panel right;
    if (a2 > 0.0 && a2 < 1.0) {
        const double cap = std::pow(0.25, a2);
        auto substituted = [&](double u) {
            const double y2 = std::pow(u, 1.0 / a2);
            const double y[2] = {1.0 - y2, y2};
            double v = std::pow(y[0], a1 - 1.0) / a2;
            if (g != nullptr) v *= eval_g(*g, y, 2);
            return v;
        };
        right = integrate_adaptive(substituted, 0.0, cap, tol, kBudgetD2, "d=2 right piece");
    } else {
        right = integrate_adaptive(direct, 0.75, 1.0, tol, kBudgetD2, "d=2 right piece");
    }
    return {left.value + right.value, left.error + right.error};
}

/// Raw integral over {y_1 >= y_2 >= y_3 >= 0, sum = 1}, iterated as
/// dy_1 over [1/3, 1] times dy_2 over [(1-y_1)/2, min(y_1, 1-y_1)].
/// Substitutions (applied only when the exponent sits in (0, 1), so that
/// genuinely divergent exponents still exhaust the budget):
///   inner, y_1 > 1/2:  u = y_3^{a_3}      (y_3 -> 0 at the upper y_2 limit)
///   outer, y_1 -> 1:   v = (1-y_1)^{a_2 + a_3}
Panel raw_integral_d3(std::span<const double> a, const MomentSpec* g, double tol) {
    const double a1 = a[0];
    const double a2 = a[1];
    const double a3 = a[2];
    const double tail2 = a2 + a3;
    const double inner_tol = std::max(tol * 0.2, 5e-13);

    auto inner = [&](double y1) -> double {
        const double lo2 = 0.5 * (1.0 - y1);
        const double hi2 = std::min(y1, 1.0 - y1);
        if (!(hi2 - lo2 > 1e-300)) return 0.0;
        auto direct = [&](double y2) {
            const double y[3] = {y1, y2, 1.0 - y1 - y2};
            double v = std::pow(y[1], a2 - 1.0) * std::pow(y[2], a3 - 1.0);
            if (g != nullptr) v *= eval_g(*g, y, 3);
            return v;
        };
        if (y1 > 0.5 && a3 > 0.0 && a3 < 1.0) {
            const double y3max = lo2;  // y_3 at the lower y_2 limit
            const double cap = std::pow(y3max, a3);
            auto substituted = [&](double u) {
                const double y3 = std::pow(u, 1.0 / a3);
                const double y[3] = {y1, 1.0 - y1 - y3, y3};
                double v = std::pow(y[1], a2 - 1.0) / a3;
                if (g != nullptr) v *= eval_g(*g, y, 3);
                return v;
            };
            return integrate_adaptive(substituted, 0.0, cap, inner_tol, kBudgetInner,
                                      "d=3 inner (substituted)")
                .value;
        }
        return integrate_adaptive(direct, lo2, hi2, inner_tol, kBudgetInner, "d=3 inner").value;
    };

    auto outer = [&](double y1) { return std::pow(y1, a1 - 1.0) * inner(y1); };

    Panel p1 = integrate_adaptive(outer, 1.0 / 3.0, 0.5, tol, kBudgetOuter, "d=3 outer [1/3,1/2]");
    Panel p2 = integrate_adaptive(outer, 0.5, 0.75, tol, kBudgetOuter, "d=3 outer [1/2,3/4]");
    Panel p3;
    if (tail2 > 0.0 && tail2 < 1.0) {
        const double cap = std::pow(0.25, tail2);
        auto substituted = [&](double v) {
            const double w = std::pow(v, 1.0 / tail2);  // w = 1 - y_1
            return outer(1.0 - w) * std::pow(v, 1.0 / tail2 - 1.0) / tail2;
        };
        p3 = integrate_adaptive(substituted, 0.0, cap, tol, kBudgetOuter,
                                "d=3 outer (substituted)");
    } else {
        p3 = integrate_adaptive(outer, 0.75, 1.0, tol, kBudgetOuter, "d=3 outer [3/4,1]");
    }
    const double value = p1.value + p2.value + p3.value;
    // The outer error estimates do not see the inner truncation, so fold the
    // inner relative target in as a heuristic contribution.
    const double error =
        p1.error + p2.error + p3.error + std::abs(value) * inner_tol * 2.0;
    return {value, error};
}

Panel raw_integral(std::span<const double> a, const MomentSpec* g, double tol) {
    const int d = static_cast<int>(a.size());
    for (double x : a) {
        if (!std::isfinite(x)) {
            throw Error(errc::nonfinite_input, "parameter vector has a non-finite entry");
        }
    }
    if (d == 2) return raw_integral_d2(a, g, tol);
    if (d == 3) return raw_integral_d3(a, g, tol);
    throw Error(errc::unsupported_dimension,
                "quadrature oracle supports d = 2 and d = 3 only (got d = " +
                    std::to_string(d) + ")");
}

} // namespace

QuadratureResult quadrature_normalizing_constant(std::span<const double> a, double tol) {
    Panel p = raw_integral(a, nullptr, tol);
    return {p.value, p.error};
}

QuadratureResult quadrature_moment(std::span<const double> a, const MomentSpec& g, double tol) {
    check_spec(g, static_cast<int>(a.size()));
    Panel num = raw_integral(a, &g, tol);
    Panel den = raw_integral(a, nullptr, tol);
    const double tiny = std::numeric_limits<double>::min();
    const double value = num.value / den.value;
    const double error = std::abs(value) * (num.error / std::max(std::abs(num.value), tiny) +
                                            den.error / std::max(std::abs(den.value), tiny));
    return {value, error};
}

// ---------------------------------------------------------------------------
// Sample statistics and Kolmogorov-Smirnov machinery
// ---------------------------------------------------------------------------

McEstimate mc_estimate(std::span<const double> xs) {
    if (xs.empty()) throw Error(errc::empty_input, "mc_estimate: empty sample");
    if (xs.size() < 2) {
        throw Error(errc::too_few_samples, "mc_estimate: need at least 2 samples");
    }
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) {
        if (!std::isfinite(x)) {
            throw Error(errc::nonfinite_input, "mc_estimate: non-finite sample value");
        }
        mean += x;
    }
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return {mean, se, xs.size()};
}

double kolmogorov_survival(double x) {
    if (!(x > 0.0)) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 1000; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double kolmogorov_critical(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw Error(errc::invalid_argument, "kolmogorov_critical: alpha must be in (0, 1)");
    }
    double lo = 1e-8;
    double hi = 10.0;
    // survival is strictly decreasing; bisect survival(x) = alpha.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_survival(mid) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

KsResult ks_test(std::span<const double> xs, const std::function<double(double)>& cdf,
                 double alpha) {
    if (xs.empty()) throw Error(errc::empty_input, "ks_test: empty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        if (!std::isfinite(f)) {
            throw Error(errc::nonfinite_input, "ks_test: cdf returned a non-finite value");
        }
        const double below = f - static_cast<double>(i) / n;
        const double above = static_cast<double>(i + 1) / n - f;
        d_stat = std::max({d_stat, below, above});
    }
    const double critical = kolmogorov_critical(alpha) / std::sqrt(n);
    return {d_stat, critical, d_stat > critical, sorted.size(), 0};
}

KsResult ks_test_two_sample(std::span<const double> xs, std::span<const double> ys,
                            double alpha) {
    if (xs.empty() || ys.empty()) throw Error(errc::empty_input, "ks_test: empty sample");
    std::vector<double> x(xs.begin(), xs.end());
    std::vector<double> y(ys.begin(), ys.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d_stat = 0.0;
    while (i < x.size() || j < y.size()) {
        double v;
        if (i >= x.size()) {
            v = y[j];
        } else if (j >= y.size()) {
            v = x[i];
        } else {
            v = std::min(x[i], y[j]);
        }
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d_stat = std::max(d_stat,
                          std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    const double critical = kolmogorov_critical(alpha) * std::sqrt((n + m) / (n * m));
    return {d_stat, critical, d_stat > critical, x.size(), y.size()};
}

// ---------------------------------------------------------------------------
// Formula-vs-oracle check suite
// ---------------------------------------------------------------------------

namespace {

std::string vec_to_string(std::span<const double> a) {
    std::ostringstream oss;
    oss << "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) oss << ",";
        oss << a[i];
    }
    oss << ")";
    return oss.str();
}

/// Mixed absolute/relative discrepancy: |x - ref| / max(1, |ref|).
double discrepancy(double x, double ref) {
    return std::abs(x - ref) / std::max(1.0, std::abs(ref));
}

struct ItemRecorder {
    CheckSuiteResult& out;
    std::string name;
    double tolerance;
    double worst = 0.0;
    std::string worst_label;
    int cases = 0;

    void record(double err, const std::string& label) {
        ++cases;
        if (err > worst || cases == 1) {
            worst = err;
            worst_label = label;
        }
    }

    void finish() {
        std::ostringstream oss;
        oss << cases << " case(s); worst at " << worst_label;
        bool ok = std::isfinite(worst) && worst <= tolerance;
        out.items.push_back({name, ok, worst, tolerance, oss.str()});
        if (!ok) out.all_passed = false;
    }

    void fail(const std::string& why) {
        out.items.push_back(
            {name, false, std::numeric_limits<double>::infinity(), tolerance, why});
        out.all_passed = false;
    }
};

template <class Body>
void run_item(CheckSuiteResult& out, const std::string& name, double tol, Body&& body) {
    ItemRecorder rec{out, name, tol, 0.0, std::string(), 0};
    try {
        body(rec);
        rec.finish();
    } catch (const std::exception& e) {
        rec.fail(e.what());
    }
}

} // namespace

CheckSuiteResult run_check_suite(bool quick) {
    CheckSuiteResult out;

    // 1. Product-form normalizing constant against direct integration.
    run_item(out, "zero_sum_constant_vs_quadrature", 1e-8, [&](ItemRecorder& rec) {
        std::vector<std::vector<double>> sets = {
            {-0.5, 0.5}, {-1.0, 1.0}, {-2.5, 2.5},
            {-3.0, 1.0, 2.0}, {-1.5, 0.5, 1.0}, {-2.2, 0.7, 1.5}};
        if (!quick) {
            sets.push_back({-0.25, 0.25});
            sets.push_back({-4.0, 4.0});
            sets.push_back({-0.9, 0.4, 0.5});
            sets.push_back({-4.0, 1.5, 2.5});
        }
        for (const auto& a : sets) {
            Params p(a);
            const double formula = normalizing_constant_zero_sum(p);
            const QuadratureResult q = quadrature_normalizing_constant(a, 1e-10);
            rec.record(discrepancy(q.value, formula), "a=" + vec_to_string(a));
        }
    });

    // 2. Zero-sum ratio / negative moments against direct integration.
    run_item(out, "zero_sum_moments_vs_quadrature", 1e-7, [&](ItemRecorder& rec) {
        struct Case {
            std::vector<double> a;
            std::vector<int> n;
            int M;
        };
        std::vector<Case> cases = {
            {{-1.0, 1.0}, {0, 0}, 1},        // E[Y1^-1] = 3/2
            {{-2.0, 2.0}, {0, 0}, 1},        // E[Y1^-1] = 5/3
            {{-1.0, 1.0}, {0, 0}, 2},        // E[Y1^-2] = 7/3
            {{-1.0, 1.0}, {0, 1}, 1},        // E[Y2/Y1] = 1/2
            {{-1.0, 1.0}, {1, 0}, 1},        // E[Y1/Y1] = 1
            {{-3.0, 1.0, 2.0}, {0, 0, 0}, 1},
            {{-3.0, 1.0, 2.0}, {0, 1, 0}, 1},
            {{-3.0, 1.0, 2.0}, {0, 0, 1}, 1},
        };
        if (!quick) {
            cases.push_back({{-3.0, 1.0, 2.0}, {0, 1, 1}, 2});
            cases.push_back({{-3.0, 1.0, 2.0}, {0, 0, 0}, 3});
            cases.push_back({{-1.5, 0.5, 1.0}, {0, 0, 0}, 2});
        }
        for (const auto& c : cases) {
            Params p(c.a);
            const double formula = ratio_moment_zero_sum(p, c.n, c.M);
            MomentSpec spec;
            spec.y_powers = c.n;
            spec.y1_negative_order = c.M;
            const double tol = c.a.size() == 2 ? 1e-10 : 1e-9;
            const QuadratureResult q = quadrature_moment(c.a, spec, tol);
            std::ostringstream label;
            label << "a=" << vec_to_string(c.a) << " M=" << c.M;
            rec.record(discrepancy(q.value, formula), label.str());
        }
    });

    // 3. Finite-mixture positive moments against direct integration.
    run_item(out, "integer_case_moments_vs_quadrature", 1e-7, [&](ItemRecorder& rec) {
        struct Case {
            std::vector<double> a;
            std::vector<int> n;
        };
        std::vector<Case> cases = {
            {{-3.0, 2.0}, {1, 0}},  // E[Y1] = 3/5
            {{-3.0, 2.0}, {0, 1}},  // E[Y2] = 2/5
            {{-4.0, 2.0}, {2, 0}},  // E[Y1^2] = 6/17
            {{-2.5, -0.5, 2.0}, {1, 0, 0}},
            {{-2.5, -0.5, 2.0}, {0, 1, 0}},
            {{-2.5, -0.5, 2.0}, {0, 0, 1}},
        };
        if (!quick) {
            cases.push_back({{-4.0, 2.0}, {1, 1}});
            cases.push_back({{-4.0, 1.0, 1.0}, {1, 1, 0}});
        }
        for (const auto& c : cases) {
            Params p(c.a);
            const double formula = positive_moments(p, c.n);
            MomentSpec spec;
            spec.y_powers = c.n;
            const double tol = c.a.size() == 2 ? 1e-10 : 1e-9;
            const QuadratureResult q = quadrature_moment(c.a, spec, tol);
            std::ostringstream label;
            label << "a=" << vec_to_string(c.a) << " n=(";
            for (std::size_t i = 0; i < c.n.size(); ++i) {
                if (i) label << ",";
                label << c.n[i];
            }
            label << ")";
            rec.record(discrepancy(q.value, formula), label.str());
        }
    });

    // 4. First-moment calibration round trips on random targets.
    run_item(out, "calibration_round_trip", 1e-9, [&](ItemRecorder& rec) {
        RngState rng(12345);
        const int reps = quick ? 2 : 10;
        for (int d = 2; d <= 6; ++d) {
            for (int rep = 0; rep < reps; ++rep) {
                std::vector<double> z(static_cast<size_t>(d - 1));
                for (double& zk : z) zk = rng.exponential(0.8) + 0.01;
                OrderedPoint target = point_from_loggaps(z);
                Params fitted = calibrate_first_moment(target.y());
                std::vector<double> mean = mean_vector_m1(fitted);
                double err = 0.0;
                for (int k = 0; k < d; ++k) {
                    err = std::max(err, std::abs(mean[static_cast<size_t>(k)] - target[k]));
                }
                std::ostringstream label;
                label << "d=" << d << " rep=" << rep;
                rec.record(err, label.str());
            }
        }
    });

    // 5. Series evaluation against closed forms and direct integration.
    run_item(out, "series_vs_reference", 1e-6, [&](ItemRecorder& rec) {
        SeriesOptions opts;
        SeriesDiagnostics diag;
        {
            Params p({-1.0, 1.0});
            rec.record(std::abs(expected_power_y1_series(p, 1.0, opts, &diag) - 1.5),
                       "a=(-1,1) r=1");
            rec.record(std::abs(expected_power_y1_series(p, 2.0, opts, &diag) - 7.0 / 3.0),
                       "a=(-1,1) r=2");
            MomentSpec half;
            half.y1_power_real = -0.5;
            const QuadratureResult q = quadrature_moment(p.a(), half, 1e-10);
            rec.record(std::abs(expected_power_y1_series(p, 0.5, opts, &diag) - q.value),
                       "a=(-1,1) r=0.5");
        }
        {
            Params p({-2.0, 2.0});
            rec.record(std::abs(expected_power_y1_series(p, 1.0, opts, &diag) - 5.0 / 3.0),
                       "a=(-2,2) r=1");
        }
        {
            Params p({-1.5, 0.5, 1.0});
            rec.record(std::abs(expected_power_y1_series(p, 1.0, opts, &diag) -
                                negative_moment_y1(p, 1)),
                       "a=(-1.5,0.5,1) r=1");
            if (!quick) {
                MomentSpec frac;
                frac.y1_power_real = -1.5;
                const QuadratureResult q = quadrature_moment(p.a(), frac, 1e-9);
                rec.record(std::abs(expected_power_y1_series(p, 1.5, opts, &diag) - q.value),
                           "a=(-1.5,0.5,1) r=1.5");
            }
        }
    });

    // 6. MGF derivative (central difference) against first log-gap moments.
    run_item(out, "mgf_derivative_vs_loggap_mean", 1e-6, [&](ItemRecorder& rec) {
        std::vector<std::vector<double>> sets = {
            {-3.0, 2.0}, {-4.0, 2.0}, {-5.0, 2.0, 3.0}, {-2.5, -0.5, 2.0}, {-4.0, 1.0, 1.0}};
        const double h = 1e-5;
        for (const auto& a : sets) {
            Params p(a);
            const int d = p.dim();
            for (int k = 0; k < d - 1; ++k) {
                std::vector<double> t(static_cast<size_t>(d - 1), 0.0);
                std::vector<int> n(static_cast<size_t>(d - 1), 0);
                t[static_cast<size_t>(k)] = h;
                const double up = loggap_mgf(p, t);
                t[static_cast<size_t>(k)] = -h;
                const double down = loggap_mgf(p, t);
                n[static_cast<size_t>(k)] = 1;
                const double exact = loggap_moments(p, n);
                std::ostringstream label;
                label << "a=" << vec_to_string(a) << " k=" << (k + 2);
                rec.record(std::abs((up - down) / (2.0 * h) - exact), label.str());
            }
        }
    });

    return out;
}

} // namespace grd
