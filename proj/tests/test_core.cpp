// Parameter validation, case classification, ordered-simplex checks, density
// evaluation with boundary conventions, and product-form constants.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "grd/params.hpp"

using namespace grd;

TEST_CASE("tail sums accumulate from the right") {
    std::vector<double> a = {-2.0, -1.0, 4.0};
    std::vector<double> tails = tail_sums(a);
    REQUIRE(tails.size() == 3);
    CHECK(tails[0] == doctest::Approx(1.0));
    CHECK(tails[1] == doctest::Approx(3.0));
    CHECK(tails[2] == doctest::Approx(4.0));
}

TEST_CASE("validation accepts admissible vectors and classifies them") {
    SUBCASE("zero sum") {
        ValidationReport rep = validate_params(std::vector<double>{-1.0, 1.0});
        CHECK(rep.valid);
        CHECK(rep.kind == ParamCase::zero_sum);
        CHECK(rep.order == 0);
        CHECK(rep.power == 0.0);
        CHECK(!std::signbit(rep.power));
        CHECK(rep.tails[0] == doctest::Approx(0.0));
        CHECK(rep.tails[1] == doctest::Approx(1.0));
    }
    SUBCASE("negative integer sum") {
        ValidationReport rep = validate_params(std::vector<double>{-3.0, 2.0});
        CHECK(rep.valid);
        CHECK(rep.kind == ParamCase::negative_integer);
        CHECK(rep.order == 1);
        CHECK(rep.power == doctest::Approx(1.0));

        rep = validate_params(std::vector<double>{-4.0, 2.0});
        CHECK(rep.kind == ParamCase::negative_integer);
        CHECK(rep.order == 2);

        rep = validate_params(std::vector<double>{-2.5, -0.5, 2.0});
        CHECK(rep.kind == ParamCase::negative_integer);
        CHECK(rep.order == 1);
    }
    SUBCASE("near-integer sums are absorbed") {
        ValidationReport rep = validate_params(std::vector<double>{-3.0000000001, 2.0});
        CHECK(rep.valid);
        CHECK(rep.kind == ParamCase::negative_integer);
        CHECK(rep.order == 1);
    }
    SUBCASE("general sums, including positive totals") {
        ValidationReport rep = validate_params(std::vector<double>{-3.0, 0.5, 1.0});
        CHECK(rep.valid);
        CHECK(rep.kind == ParamCase::general);
        CHECK(rep.power == doctest::Approx(1.5));

        // A positive total is admissible: only the k >= 2 tail sums are
        // constrained.
        rep = validate_params(std::vector<double>{-2.0, -1.0, 4.0});
        CHECK(rep.valid);
        CHECK(rep.kind == ParamCase::general);
        CHECK(rep.power == doctest::Approx(-1.0));
    }
}

TEST_CASE("validation rejects inadmissible vectors with the offending index") {
    SUBCASE("tail sum violations report the first bad k") {
        ValidationReport rep = validate_params(std::vector<double>{1.0, 1.0, -1.0});
        CHECK(!rep.valid);
        CHECK(rep.code == errc::tail_sum_violation);
        CHECK(rep.offending_k == 2);  // a_2 + a_3 = 0 fails before a_3 = -1

        rep = validate_params(std::vector<double>{1.0, 2.0, -1.0});
        CHECK(!rep.valid);
        CHECK(rep.code == errc::tail_sum_violation);
        CHECK(rep.offending_k == 3);  // a_2 + a_3 = 1 > 0 but a_3 = -1 <= 0
    }
    SUBCASE("dimension and finiteness") {
        CHECK(validate_params(std::vector<double>{1.0}).code == errc::dimension_too_small);
        CHECK(validate_params(std::vector<double>{}).code == errc::dimension_too_small);
        std::vector<double> nan = {std::numeric_limits<double>::quiet_NaN(), 1.0};
        CHECK(validate_params(nan).code == errc::nonfinite_input);
        std::vector<double> inf = {1.0, std::numeric_limits<double>::infinity()};
        CHECK(validate_params(inf).code == errc::nonfinite_input);
    }
}

TEST_CASE("Params constructor throws carrying code and index") {
    CHECK_NOTHROW(Params({-1.0, 1.0}));
    try {
        Params p({1.0, 1.0, -1.0});
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == errc::tail_sum_violation);
        CHECK(e.index() == 2);
    }
}

TEST_CASE("Params exposes cached tails and classification") {
    Params p({-2.5, -0.5, 2.0});
    CHECK(p.dim() == 3);
    CHECK(p.tail(1) == doctest::Approx(-1.0));
    CHECK(p.tail(2) == doctest::Approx(1.5));
    CHECK(p.tail(3) == doctest::Approx(2.0));
    CHECK(p.kind() == ParamCase::negative_integer);
    CHECK(p.order() == 1);
    CHECK(p.power() == doctest::Approx(1.0));
}

TEST_CASE("case and error names are stable strings") {
    CHECK(std::string(param_case_name(ParamCase::zero_sum)) == "zero-sum");
    CHECK(std::string(param_case_name(ParamCase::negative_integer)) ==
          "negative-integer-sum");
    CHECK(std::string(param_case_name(ParamCase::general)) == "general");
    CHECK(std::string(errc_name(errc::ok)) == "ok");
    CHECK(std::string(errc_name(errc::tail_sum_violation)) == "tail_sum_violation");
    CHECK(std::string(errc_name(errc::tolerance_not_reached)) == "tolerance_not_reached");
}

TEST_CASE("ordered-simplex membership") {
    CHECK(OrderedPoint::check(std::vector<double>{0.5, 0.5}) == errc::ok);
    CHECK(OrderedPoint::check(std::vector<double>{0.5, 0.25, 0.25}) == errc::ok);
    CHECK(OrderedPoint::check(std::vector<double>{1.0, 0.0}) == errc::ok);
    CHECK(OrderedPoint::check(std::vector<double>{0.4, 0.6}) ==
          errc::not_in_ordered_simplex);
    CHECK(OrderedPoint::check(std::vector<double>{0.6, 0.5}) ==
          errc::not_in_ordered_simplex);  // sums to 1.1
    CHECK(OrderedPoint::check(std::vector<double>{1.2, -0.2}) ==
          errc::not_in_ordered_simplex);
    CHECK(OrderedPoint::check(std::vector<double>{0.5}) == errc::dimension_too_small);
    CHECK_THROWS_AS((void)OrderedPoint::validated({0.4, 0.6}), Error);
    CHECK_NOTHROW((void)OrderedPoint::validated({0.6, 0.4}));
}

TEST_CASE("log density on the interior") {
    Params p({-1.0, 1.0});
    // sum (a_k - 1) log y_k = -2 log(1/2) = 2 log 2 at the barycenter.
    CHECK(log_density_unnormalized(p, std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(log_density_unnormalized(p, std::vector<double>{0.75, 0.25}) ==
          doctest::Approx(-2.0 * std::log(0.75)).epsilon(1e-12));
    CHECK_THROWS_AS((void)log_density_unnormalized(p, std::vector<double>{0.4, 0.6}), Error);
}

TEST_CASE("log density boundary conventions at zero coordinates") {
    SUBCASE("exponent exactly one contributes nothing") {
        Params p({-1.0, 1.0});
        CHECK(log_density_unnormalized(p, std::vector<double>{1.0, 0.0}) ==
              doctest::Approx(0.0));
    }
    SUBCASE("exponent below one diverges upward") {
        Params p({0.5, 0.5});  // valid general vector, total +1
        double v = log_density_unnormalized(p, std::vector<double>{1.0, 0.0});
        CHECK(std::isinf(v));
        CHECK(v > 0.0);
    }
    SUBCASE("exponent above one vanishes (log density to -inf)") {
        Params p({-1.0, 3.0});
        double v = log_density_unnormalized(p, std::vector<double>{1.0, 0.0});
        CHECK(std::isinf(v));
        CHECK(v < 0.0);
    }
    SUBCASE("competing infinities give NaN") {
        Params p({-1.0, 0.5, 2.0});
        double v = log_density_unnormalized(p, std::vector<double>{1.0, 0.0, 0.0});
        CHECK(std::isnan(v));
    }
}

TEST_CASE("zero-sum normalizing constant is the product of inverse tails") {
    CHECK(normalizing_constant_zero_sum(Params({-1.0, 1.0})) == doctest::Approx(1.0));
    CHECK(normalizing_constant_zero_sum(Params({-5.0, 2.0, 3.0})) ==
          doctest::Approx(1.0 / 15.0).epsilon(1e-14));
    CHECK(log_normalizing_constant_zero_sum(Params({-5.0, 2.0, 3.0})) ==
          doctest::Approx(-std::log(15.0)).epsilon(1e-14));
    CHECK_THROWS_AS((void)normalizing_constant_zero_sum(Params({-3.0, 2.0})), Error);
}
