// Composition enumeration, multinomial coefficients, and the normalized
// mixture table with inverse-CDF lookup and negative-weight clipping.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "grd/compositions.hpp"

using namespace grd;

TEST_CASE("composition counts match the stars-and-bars formula") {
    CHECK(composition_count(2, 0) == doctest::Approx(1.0));
    CHECK(composition_count(2, 1) == doctest::Approx(2.0));
    CHECK(composition_count(3, 2) == doctest::Approx(6.0));
    CHECK(composition_count(4, 5) == doctest::Approx(56.0));
    // Cross-check against a direct enumeration for a grid of cases.
    for (int d = 2; d <= 6; ++d) {
        for (int M = 0; M <= 8; ++M) {
            std::size_t n = enumerate_compositions(d, M).size();
            CHECK(composition_count(d, M) == doctest::Approx(double(n)));
        }
    }
}

TEST_CASE("enumeration order is decreasing lexicographic and tails are right sums") {
    SUBCASE("d=2 M=1") {
        auto ms = enumerate_compositions(2, 1);
        REQUIRE(ms.size() == 2);
        CHECK(ms[0] == Composition{1, 0});
        CHECK(ms[1] == Composition{0, 1});
    }
    SUBCASE("d=3 M=2 full sequence") {
        std::vector<Composition> expect = {
            {2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2},
        };
        auto ms = enumerate_compositions(3, 2);
        CHECK(ms == expect);

        std::vector<Composition> seen;
        std::vector<Composition> tails;
        for_each_composition(3, 2, [&](std::span<const int> m, std::span<const int> t) {
            seen.emplace_back(m.begin(), m.end());
            tails.emplace_back(t.begin(), t.end());
        });
        CHECK(seen == expect);
        REQUIRE(tails.size() == 6);
        CHECK(tails[1] == Composition{2, 1, 0});  // tails of (1,1,0)
        CHECK(tails[2] == Composition{2, 1, 1});  // tails of (1,0,1)
        CHECK(tails[5] == Composition{2, 2, 2});  // tails of (0,0,2)
    }
    SUBCASE("M=0 yields the single zero composition") {
        auto ms = enumerate_compositions(2, 0);
        REQUIRE(ms.size() == 1);
        CHECK(ms[0] == Composition{0, 0});
    }
    SUBCASE("every tail vector is the right-to-left partial sum") {
        for_each_composition(4, 3, [&](std::span<const int> m, std::span<const int> t) {
            int acc = 0;
            for (int k = 3; k >= 0; --k) {
                acc += m[size_t(k)];
                CHECK(t[size_t(k)] == acc);
            }
        });
    }
}

TEST_CASE("multinomial coefficients") {
    std::vector<int> m = {5, 3, 2};
    CHECK(log_multinomial(10, m) == doctest::Approx(std::log(2520.0)).epsilon(1e-14));
    std::vector<int> all_one_bucket = {4, 0};
    CHECK(log_multinomial(4, all_one_bucket) == doctest::Approx(0.0));
    std::vector<int> binom = {2, 2};
    CHECK(log_multinomial(4, binom) == doctest::Approx(std::log(6.0)).epsilon(1e-14));

    std::vector<int> wrong_total = {1, 1};
    CHECK_THROWS_AS((void)log_multinomial(3, wrong_total), Error);
    try {
        (void)log_multinomial(3, wrong_total);
    } catch (const Error& e) {
        CHECK(e.code() == errc::mismatched_total);
    }
    std::vector<int> negative = {4, -1};
    try {
        (void)log_multinomial(3, negative);
    } catch (const Error& e) {
        CHECK(e.code() == errc::bad_moment_order);
    }
}

TEST_CASE("enumeration cap") {
    // C(10+20-1, 20-1) is astronomically larger than 1000.
    CHECK_THROWS_AS((void)enumerate_compositions(20, 10, 1000), Error);
    try {
        (void)enumerate_compositions(20, 10, 1000);
    } catch (const Error& e) {
        CHECK(e.code() == errc::cap_exceeded);
    }
    CHECK_NOTHROW((void)enumerate_compositions(3, 2, 6));
}

TEST_CASE("mixture table normalizes and supports inverse-CDF lookup") {
    auto ms = enumerate_compositions(2, 1);  // (1,0), (0,1)
    // Unnormalized weights 3 and 2 -> normalized (0.6, 0.4).
    std::vector<double> lw = {std::log(3.0), std::log(2.0)};
    std::vector<int> sign = {1, 1};
    MixtureTable t = MixtureTable::from_log_weights(2, ms, lw, sign);

    REQUIRE(t.size() == 2);
    CHECK(t.dim() == 2);
    CHECK(t.entry(0).weight == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(t.entry(1).weight == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(t.entry(0).cumulative == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(t.entry(1).cumulative == doctest::Approx(1.0));
    CHECK(t.entry(1).cumulative == 1.0);  // exact: last cumulative is pinned
    CHECK(t.clipped_mass() == 0.0);
    CHECK(t.clipped_count() == 0);

    CHECK(t.sample_index(0.0) == 0);
    CHECK(t.sample_index(0.59) == 0);
    CHECK(t.sample_index(0.61) == 1);
    CHECK(t.sample_index(0.999999) == 1);
    CHECK_THROWS_AS((void)t.sample_index(1.0), Error);   // domain is [0,1)
    CHECK_THROWS_AS((void)t.sample_index(-0.1), Error);
}

TEST_CASE("mixture table clips negative weights and reports the clipped mass") {
    auto ms = enumerate_compositions(2, 2);  // 3 entries
    // Unnormalized signed weights: +4, -1, +2. Clipping drops the -1.
    std::vector<double> lw = {std::log(4.0), std::log(1.0), std::log(2.0)};
    std::vector<int> sign = {1, -1, 1};
    MixtureTable t = MixtureTable::from_log_weights(2, ms, lw, sign);

    REQUIRE(t.size() == 3);
    CHECK(t.entry(0).weight == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
    CHECK(t.entry(1).weight == 0.0);
    CHECK(t.entry(1).sign == -1);
    CHECK(t.entry(2).weight == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
    // The -1 weight is 1/5 of the signed total 4-1+2.
    CHECK(t.clipped_mass() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(t.clipped_count() == 1);
    // Zero-weight middle entry is never selected.
    CHECK(t.sample_index(4.0 / 6.0 - 1e-12) == 0);
    CHECK(t.sample_index(4.0 / 6.0 + 1e-12) == 2);
}

TEST_CASE("mixture table rejects a non-positive total") {
    auto ms = enumerate_compositions(2, 1);
    std::vector<double> lw = {std::log(1.0), std::log(2.0)};
    std::vector<int> sign = {-1, -1};
    CHECK_THROWS_AS((void)MixtureTable::from_log_weights(2, ms, lw, sign), Error);
}

TEST_CASE("enumeration and table construction are deterministic") {
    auto a = enumerate_compositions(4, 4);
    auto b = enumerate_compositions(4, 4);
    CHECK(a == b);
    std::vector<double> lw(a.size(), 0.0);
    std::vector<int> sign(a.size(), 1);
    MixtureTable t1 = MixtureTable::from_log_weights(4, a, lw, sign);
    MixtureTable t2 = MixtureTable::from_log_weights(4, b, lw, sign);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1.entry(i).weight == t2.entry(i).weight);
        CHECK(t1.entry(i).cumulative == t2.entry(i).cumulative);
    }
}
