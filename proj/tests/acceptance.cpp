// End-to-end acceptance gate for the rank-ordered Dirichlet library.
//
// Ten numbered criteria, each validated against an independent route
// (adaptive quadrature, closed forms, Monte Carlo error bars, KS tests,
// or byte-level CLI reproducibility). Every check normalizes its observed
// discrepancy by its pinned tolerance, so each criterion reports a single
// "worst fraction of budget" figure. One PASS/FAIL line per criterion;
// the process exit code is the number of failed criteria.
//
// Criterion 10 drives the installed CLI binary through the GRD_CLI
// environment variable (set by ctest); without it that criterion fails
// with an explanatory message.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "grd/compositions.hpp"
#include "grd/mixture.hpp"
#include "grd/moments.hpp"
#include "grd/oracle.hpp"
#include "grd/params.hpp"
#include "grd/sampling.hpp"
#include "grd/series.hpp"

namespace {

using namespace grd;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// One acceptance criterion: accumulates checks, remembers the first
/// failure verbatim, and tracks the worst discrepancy as a fraction of
/// the tolerance it was judged against.
struct Gate {
    std::string name;
    bool ok = true;
    int checks = 0;
    double worst = 0.0;  // max over checks of |got - want| / tol
    std::string first_failure;

    explicit Gate(std::string n) : name(std::move(n)) {}

    void require(bool cond, const std::string& what) {
        ++checks;
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }

    void within(double got, double want, double tol, const std::string& what) {
        const double err = std::fabs(got - want);
        if (tol > 0.0 && std::isfinite(err)) worst = std::max(worst, err / tol);
        require(std::isfinite(err) && err <= tol,
                what + ": got " + fmt(got) + ", want " + fmt(want) + ", |diff| " +
                    fmt(err) + " > " + fmt(tol));
    }

    /// Monte Carlo comparison: |got - want| within `mult` standard errors.
    void within_se(double got, double want, double se, double mult,
                   const std::string& what) {
        within(got, want, mult * se, what + " (" + fmt(mult) + " SE)");
    }
};

std::vector<double> loggap_column(const SampleBatch& b, int k, std::size_t n = 0) {
    // z_{k+1} = log(Y_k / Y_{k+1}) for the first n rows (0 = all rows).
    auto hi = b.column(k - 1);
    auto lo = b.column(k);
    const std::size_t m = n == 0 ? hi.size() : std::min(n, hi.size());
    std::vector<double> z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = std::log(hi[i] / lo[i]);
    return z;
}

// ---------------------------------------------------------------------------
// 1. Zero-sum normalizing constants: product formula vs adaptive quadrature.
// ---------------------------------------------------------------------------
Gate criterion_normalizing_constants() {
    Gate g{"zero-sum normalizing constants match adaptive quadrature"};
    const double tol = 1e-8;  // relative

    for (double t : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0}) {
        const std::vector<double> a = {-t, t};
        const double formula = normalizing_constant_zero_sum(Params(a));
        const auto quad = quadrature_normalizing_constant(a);
        g.within(formula / quad.value, 1.0, tol, "d=2, tail " + fmt(t));
    }

    const double pairs[10][2] = {{0.5, 0.25}, {0.75, 0.5}, {1.0, 0.5}, {1.5, 2.0},
                                 {2.0, 1.0},  {2.5, 1.5},  {3.0, 1.0}, {3.0, 2.0},
                                 {4.0, 2.0},  {5.0, 2.5}};
    for (const auto& pr : pairs) {
        const double t2 = pr[0], t3 = pr[1];
        const std::vector<double> a = {-t2, t2 - t3, t3};
        const double formula = normalizing_constant_zero_sum(Params(a));
        const auto quad = quadrature_normalizing_constant(a);
        g.within(formula / quad.value, 1.0, tol,
                 "d=3, tails (" + fmt(t2) + ", " + fmt(t3) + ")");
    }
    return g;
}

// ---------------------------------------------------------------------------
// 2. Zero-sum negative and ratio moments: closed forms vs quadrature,
//    plus hand-derived rational goldens.
// ---------------------------------------------------------------------------
Gate criterion_negative_and_ratio_moments() {
    Gate g{"closed-form negative and ratio moments match quadrature"};
    const double quad_tol = 1e-7;

    struct NegCase {
        std::vector<double> a;
        int M;
    };
    const NegCase neg_cases[] = {
        {{-1, 1}, 1},    {{-1, 1}, 2},        {{-1, 1}, 3},
        {{-2, 2}, 1},    {{-2, 2}, 2},        {{-0.5, 0.5}, 1},
        {{-2, 1, 1}, 1}, {{-2, 1, 1}, 2},     {{-3, 1.5, 1.5}, 1},
    };
    for (const auto& c : neg_cases) {
        Params p(c.a);
        const double formula = negative_moment_y1(p, c.M);
        MomentSpec spec;
        spec.y1_negative_order = c.M;
        const auto quad = quadrature_moment(c.a, spec);
        g.within(formula, quad.value, quad_tol,
                 "E[Y1^-" + std::to_string(c.M) + "], d=" + std::to_string(p.dim()));
    }

    // Rational goldens, exact to closed-form precision.
    g.within(negative_moment_y1(Params({-1, 1}), 1), 1.5, 1e-10, "E[Y1^-1] = 3/2");
    g.within(negative_moment_y1(Params({-1, 1}), 2), 7.0 / 3.0, 1e-10,
             "E[Y1^-2] = 7/3");
    g.within(negative_moment_y1(Params({-2, 2}), 1), 5.0 / 3.0, 1e-10,
             "E[Y1^-1] = 5/3");

    struct RatioCase {
        std::vector<double> a;
        std::vector<int> n;
        int M;
    };
    const RatioCase ratio_cases[] = {
        {{-1, 1}, {0, 1}, 1},
        {{-2, 2}, {0, 2}, 2},
        {{-2, 1, 1}, {0, 1, 0}, 1},
        {{-2, 1, 1}, {0, 0, 1}, 2},
    };
    for (const auto& c : ratio_cases) {
        Params p(c.a);
        const double formula = ratio_moment_zero_sum(p, c.n, c.M);
        MomentSpec spec;
        spec.y_powers = c.n;
        spec.y1_negative_order = c.M;
        const auto quad = quadrature_moment(c.a, spec);
        g.within(formula, quad.value, quad_tol,
                 "ratio moment, d=" + std::to_string(p.dim()) +
                     ", M=" + std::to_string(c.M));
    }
    g.within(ratio_moment_zero_sum(Params({-1, 1}), std::vector<int>{0, 1}, 1), 0.5,
             1e-10, "E[Y2/Y1 * Y1^-1]... = 1/2");
    return g;
}

// ---------------------------------------------------------------------------
// 3. Negative-integer-sum positive moments vs quadrature (orders 1 and 2).
// ---------------------------------------------------------------------------
Gate criterion_positive_moments() {
    Gate g{"integer-case positive moments match quadrature"};
    const double quad_tol = 1e-7;

    struct Case {
        std::vector<double> a;
        std::vector<int> n;
    };
    const Case cases[] = {
        {{-3, 2}, {1, 0}},          {{-3, 2}, {0, 1}},
        {{-4, 2}, {2, 0}},          {{-4, 2}, {1, 1}},
        {{-4, 2}, {0, 2}},          {{-2.5, -0.5, 2}, {1, 0, 0}},
        {{-2.5, -0.5, 2}, {0, 1, 0}}, {{-2.5, -0.5, 2}, {0, 0, 1}},
        {{-3.5, 0.5, 2}, {1, 0, 0}},  {{-4.5, 0.5, 2}, {1, 1, 0}},
    };
    for (const auto& c : cases) {
        Params p(c.a);
        const double formula = positive_moments(p, c.n);
        MomentSpec spec;
        spec.y_powers = c.n;
        const auto quad = quadrature_moment(c.a, spec);
        std::string label = "E[prod Y^n], d=" + std::to_string(p.dim()) +
                            ", M=" + std::to_string(p.order());
        g.within(formula, quad.value, quad_tol, label);
    }

    // Rational goldens.
    g.within(positive_moments(Params({-4, 2}), std::vector<int>{2, 0}), 6.0 / 17.0,
             1e-12, "E[Y1^2] = 6/17");
    const auto mean2 = mean_vector_m1(Params({-3, 2}));
    g.within(mean2[0], 0.6, 1e-12, "E[Y1] = 3/5");
    g.within(mean2[1], 0.4, 1e-12, "E[Y2] = 2/5");
    const auto mean3 = mean_vector_m1(Params({-2.5, -0.5, 2}));
    g.within(mean3[0], 0.5, 1e-12, "E[Y1] = 1/2");
    g.within(mean3[1], 0.3, 1e-12, "E[Y2] = 3/10");
    g.within(mean3[2], 0.2, 1e-12, "E[Y3] = 1/5");
    return g;
}

// ---------------------------------------------------------------------------
// 4. First-moment calibration round-trips 100 random mean vectors.
// ---------------------------------------------------------------------------
Gate criterion_calibration() {
    Gate g{"first-moment calibration round-trips 100 random mean vectors"};
    const double tol = 1e-9;
    std::mt19937_64 eng(20260822ull);
    std::uniform_real_distribution<double> gap(0.05, 1.0);

    for (int d = 2; d <= 6; ++d) {
        for (int rep = 0; rep < 20; ++rep) {
            // Strictly decreasing positive means from positive suffix sums.
            std::vector<double> e(static_cast<size_t>(d));
            for (auto& v : e) v = gap(eng);
            std::vector<double> y(static_cast<size_t>(d));
            double run = 0.0;
            double total = 0.0;
            for (int k = d - 1; k >= 0; --k) {
                run += e[static_cast<size_t>(k)];
                y[static_cast<size_t>(k)] = run;
                total += run;
            }
            for (auto& v : y) v /= total;

            Params p = calibrate_first_moment(y);
            g.require(p.kind() == ParamCase::negative_integer && p.order() == 1,
                      "calibrated parameters must sum to -1");
            const auto back = mean_vector_m1(p);
            double sup = 0.0;
            for (int k = 0; k < d; ++k) {
                sup = std::max(sup, std::fabs(back[static_cast<size_t>(k)] -
                                              y[static_cast<size_t>(k)]));
            }
            g.within(sup, 0.0, tol,
                     "round trip d=" + std::to_string(d) + " rep " + std::to_string(rep));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// 5. Exact mixture sampler: sample means vs closed forms, and the first
//    log gap against its exponential-mixture law (one-sample KS).
// ---------------------------------------------------------------------------
Gate criterion_exact_sampler() {
    Gate g{"exact mixture sampler reproduces means and the first log-gap law"};
    const std::size_t n = 1'000'000;
    const std::size_t n_ks = 100'000;

    {
        Params p({-3, 2});
        Sampler s(p, Method::exact);
        RngState rng(51);
        const auto batch = s.draw_batch(rng, n);
        const auto m1 = mc_estimate(batch.column(0));
        const auto m2 = mc_estimate(batch.column(1));
        g.within_se(m1.mean, 0.6, m1.se, 4.0, "mean Y1 of (-3,2)");
        g.within_se(m2.mean, 0.4, m2.se, 4.0, "mean Y2 of (-3,2)");

        const auto z2 = loggap_column(batch, 1);
        const auto mz = mc_estimate(z2);
        g.within_se(mz.mean, 13.0 / 30.0, mz.se, 4.0, "mean Z2 of (-3,2)");

        // Z2 ~ 3/5 Exp(2) + 2/5 Exp(3): mixture weights 3/5, 2/5 and rates
        // equal to the two tail sums of the shifted parameters.
        const std::vector<double> z2_head(z2.begin(),
                                          z2.begin() + static_cast<long>(n_ks));
        auto cdf = [](double z) {
            return 0.6 * (1.0 - std::exp(-2.0 * z)) + 0.4 * (1.0 - std::exp(-3.0 * z));
        };
        const auto ks = ks_test(z2_head, cdf, 0.001);
        g.within(ks.statistic, 0.0, ks.critical, "KS of Z2 vs exponential mixture");
    }
    {
        Params p({-2.5, -0.5, 2});
        Sampler s(p, Method::exact);
        RngState rng(52);
        const auto batch = s.draw_batch(rng, n);
        const auto want = mean_vector_m1(p);  // (1/2, 3/10, 1/5)
        for (int k = 0; k < 3; ++k) {
            const auto mk = mc_estimate(batch.column(k));
            g.within_se(mk.mean, want[static_cast<size_t>(k)], mk.se, 4.0,
                        "mean Y" + std::to_string(k + 1) + " of (-2.5,-0.5,2)");
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// 6. Exact vs rejection samplers agree in distribution on Y1 (two-sample KS).
// ---------------------------------------------------------------------------
Gate criterion_exact_vs_rejection() {
    Gate g{"exact and rejection samplers agree in distribution"};
    const std::size_t n = 100'000;
    const std::vector<std::vector<double>> sets = {
        {-3, 2}, {-4, 2}, {-2.5, -0.5, 2}};

    std::uint64_t seed = 61;
    for (const auto& a : sets) {
        Params p(a);
        Sampler ex(p, Method::exact);
        Sampler rej(p, Method::rejection);
        RngState r1(seed++);
        RngState r2(seed++);
        const auto xs = ex.draw_batch(r1, n);
        const auto ys = rej.draw_batch(r2, n);
        const auto ks = ks_test_two_sample(xs.column(0), ys.column(0), 0.001);
        g.within(ks.statistic, 0.0, ks.critical,
                 "two-sample KS on Y1, d=" + std::to_string(p.dim()));
        g.require(rej.stats().acceptance_rate > 0.05,
                  "rejection sampler acceptance rate unexpectedly low");
    }
    return g;
}

// ---------------------------------------------------------------------------
// 7. Real-power series for E[Y1^-r]: exact termination at integer r, the
//    fractional golden value, and exact collapse of the truncated table.
// ---------------------------------------------------------------------------
Gate criterion_series() {
    Gate g{"real-power series matches closed forms; truncated table collapses"};

    Params p11({-1, 1});
    SeriesDiagnostics diag;
    g.within(expected_power_y1_series(p11, 1.0, {}, &diag), 1.5, 1e-10,
             "series at r=1 equals 3/2");
    g.require(diag.converged, "series at r=1 must converge");
    // E[Y1^-1/2] for unit tail: (2/3)(2 sqrt(2) - 1).
    g.within(expected_power_y1_series(p11, 0.5, {}, &diag), 1.21895141649746, 1e-6,
             "series at r=1/2");
    g.require(diag.converged, "series at r=1/2 must converge");

    // For integer -sum(a) = M and K >= M the signed table must reduce to the
    // closed-form mixture: same weights on compositions of M, zero elsewhere.
    for (int M = 1; M <= 3; ++M) {
        Params pm({-(M + 2.0), 2.0});
        const auto exact = mixture_weights(pm);
        const auto trunc = signed_series_weights(pm, M + 3);
        g.require(trunc.clipped_mass() == 0.0,
                  "integer collapse must clip nothing (M=" + std::to_string(M) + ")");

        std::map<std::vector<int>, double> want;
        for (const auto& e : exact.entries()) want[e.m] = e.weight;
        for (const auto& e : trunc.entries()) {
            int total = 0;
            for (int v : e.m) total += v;
            if (total == M) {
                auto it = want.find(e.m);
                g.require(it != want.end(), "truncated entry missing from exact table");
                if (it != want.end()) {
                    g.within(e.weight, it->second, 1e-10,
                             "collapsed weight, M=" + std::to_string(M));
                }
            } else {
                g.within(e.weight, 0.0, 1e-10,
                         "off-order weight must vanish, M=" + std::to_string(M));
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// 8. Approximate sampler and the signed series in their supported regimes:
//    exact when nothing is clipped (zero-sum and integer totals), and the
//    signed series + clipped-mass diagnostic for fractional totals.
// ---------------------------------------------------------------------------
Gate criterion_approximate_regimes() {
    Gate g{"approximate sampler exact when nothing is clipped; series covers the rest"};
    const std::size_t n = 200'000;

    // (a) Zero-sum parameters: truncated table degenerates to one component.
    {
        Params p({-1.5, 0.5, 1});
        Sampler ap(p, Method::approximate, 20);
        Sampler rj(p, Method::rejection);
        RngState r1(81), r2(82);
        const auto xa = ap.draw_batch(r1, n);
        const auto xr = rj.draw_batch(r2, n);
        g.require(ap.stats().clipped_mass == 0.0, "zero-sum table must clip nothing");
        const auto a1 = mc_estimate(xa.column(0));
        const auto b1 = mc_estimate(xr.column(0));
        g.within_se(a1.mean, b1.mean, std::hypot(a1.se, b1.se), 4.0,
                    "mean Y1, approximate vs rejection, zero-sum");
        const auto za = mc_estimate(loggap_column(xa, 1));
        const auto zb = mc_estimate(loggap_column(xr, 1));
        g.within_se(za.mean, zb.mean, std::hypot(za.se, zb.se), 4.0,
                    "mean Z2, approximate vs rejection, zero-sum");
    }

    // (b) Integer total: the signed table collapses exactly, so the
    //     approximate sampler is the exact mixture sampler.
    {
        Params p({-3.5, 0.5, 2});
        Sampler ap(p, Method::approximate, 12);
        Sampler rj(p, Method::rejection);
        RngState r1(83), r2(84);
        const auto xa = ap.draw_batch(r1, n);
        const auto xr = rj.draw_batch(r2, n);
        g.require(ap.stats().clipped_mass == 0.0,
                  "integer-total table must clip nothing");
        for (int k = 0; k < 3; ++k) {
            const auto ma = mc_estimate(xa.column(k));
            const auto mr = mc_estimate(xr.column(k));
            g.within_se(ma.mean, mr.mean, std::hypot(ma.se, mr.se), 4.0,
                        "mean Y" + std::to_string(k + 1) +
                            ", approximate vs rejection, integer total");
        }
    }

    // (c) Fractional total: the clipped table is not a faithful sampler (its
    //     clipped mass grows with the truncation order), but the *signed*
    //     series for log-gap moments converges; quadrature is the referee
    //     and the clipped-mass diagnostic must flag the regime.
    {
        const std::vector<double> a = {-3, 0.5, 1};
        Params p(a);
        const std::vector<int> n2 = {1, 0}, n3 = {0, 1};
        const double s2 = loggap_moments_series(p, n2, 24);
        const double s3 = loggap_moments_series(p, n3, 24);
        MomentSpec spec2, spec3;
        spec2.z_powers = {1, 0};
        spec3.z_powers = {0, 1};
        const auto q2 = quadrature_moment(a, spec2);
        const auto q3 = quadrature_moment(a, spec3);
        g.within(s2, q2.value, 1e-7, "signed series E[Z2] vs quadrature");
        g.within(s3, q3.value, 1e-7, "signed series E[Z3] vs quadrature");
        g.within(q2.value, 0.487142871823, 1e-9, "quadrature E[Z2] reference value");
        g.within(q3.value, 0.880390140445, 1e-9, "quadrature E[Z3] reference value");

        const auto table = signed_series_weights(p, 20);
        g.require(table.clipped_mass() > 0.1,
                  "clipped-mass diagnostic must flag the fractional regime");
    }
    return g;
}

// ---------------------------------------------------------------------------
// 9. MGF derivatives at zero (central differences) vs first log-gap moments.
// ---------------------------------------------------------------------------
Gate criterion_mgf_derivatives() {
    Gate g{"log-gap MGF derivatives match first moments"};
    const double h = 1e-5;
    const double tol = 1e-6;
    const std::vector<std::vector<double>> sets = {
        {-3, 2}, {-4, 2}, {-2.5, -0.5, 2}, {-5, 2, 3}, {-1, 1}};

    for (const auto& a : sets) {
        Params p(a);
        const int d = p.dim();
        for (int k = 0; k < d - 1; ++k) {
            std::vector<double> tp(static_cast<size_t>(d - 1), 0.0);
            std::vector<double> tm(static_cast<size_t>(d - 1), 0.0);
            tp[static_cast<size_t>(k)] = h;
            tm[static_cast<size_t>(k)] = -h;
            const double fd = (loggap_mgf(p, tp) - loggap_mgf(p, tm)) / (2.0 * h);
            std::vector<int> n(static_cast<size_t>(d - 1), 0);
            n[static_cast<size_t>(k)] = 1;
            const double exact = loggap_moments(p, n);
            g.within(fd, exact, tol,
                     "d/dt_" + std::to_string(k + 2) + " MGF, d=" + std::to_string(d));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// 10. CLI sampling is byte-reproducible for a fixed seed.
// ---------------------------------------------------------------------------
struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = cli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    RunResult r;
    if (pipe == nullptr) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Gate criterion_cli_reproducibility() {
    Gate g{"CLI sampling is byte-reproducible under a fixed seed"};
    const char* cli = std::getenv("GRD_CLI");
    g.require(cli != nullptr,
              "GRD_CLI must point at the CLI binary (set by ctest)");
    if (cli == nullptr) return g;

    const std::string base = "sample -a \"-3,2\" --method exact -n 64 --format csv";
    const auto r1 = run_cli(cli, base + " --seed 123");
    const auto r2 = run_cli(cli, base + " --seed 123");
    const auto r3 = run_cli(cli, base + " --seed 124");

    g.require(r1.code == 0 && r2.code == 0 && r3.code == 0,
              "sample subcommand must exit 0");
    g.require(!r1.out.empty() && r1.out.rfind("y1,y2", 0) == 0,
              "CSV output must start with its header row");
    g.require(r1.out == r2.out, "same seed must reproduce identical bytes");
    g.require(r1.out != r3.out, "different seeds must differ");
    return g;
}

}  // namespace

int main() {
    using Criterion = Gate (*)();
    const Criterion criteria[] = {
        criterion_normalizing_constants, criterion_negative_and_ratio_moments,
        criterion_positive_moments,      criterion_calibration,
        criterion_exact_sampler,         criterion_exact_vs_rejection,
        criterion_series,                criterion_approximate_regimes,
        criterion_mgf_derivatives,       criterion_cli_reproducibility,
    };

    int failures = 0;
    int idx = 0;
    for (const auto& fn : criteria) {
        ++idx;
        Gate g = fn();
        std::printf("[%s] %2d/10 %s (%d checks, worst %.3g of tolerance)\n",
                    g.ok ? "PASS" : "FAIL", idx, g.name.c_str(), g.checks, g.worst);
        if (!g.ok) {
            std::printf("       first failure: %s\n", g.first_failure.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
    return failures;
}
