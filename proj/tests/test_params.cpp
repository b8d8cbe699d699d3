#include <doctest.h>

#include <cmath>

#include "carleson/params.hpp"

using namespace carleson;

TEST_CASE("sharp exponent values") {
    CHECK(sharp_exponent(1) == Rat(1, 4));
    CHECK(sharp_exponent(2) == Rat(1, 3));
    CHECK(sharp_exponent(3) == Rat(3, 8));
    CHECK_THROWS(sharp_exponent(0));
    CHECK_THROWS(sharp_exponent(-3));
}

TEST_CASE("theorem 1 threshold") {
    CHECK(theorem1_threshold(2, Rat(2)) == Rat(1, 3));
    // independent recompute: n/(2(n+1)) + (n-1)(n-a)/(2(n+1)) at n=2, a=7/4
    Rat expect = Rat(2, 6) + Rat(1, 6) * (Rat(2) - Rat(7, 4));
    CHECK(expect == Rat(3, 8));
    CHECK(theorem1_threshold(2, Rat(7, 4)) == Rat(3, 8));
    CHECK(theorem1_threshold(3, Rat(3)) == Rat(3, 8));
    CHECK_THROWS(theorem1_threshold(2, Rat(1)));      // below (3n+1)/4
    CHECK_THROWS(theorem1_threshold(2, Rat(5, 2)));   // above n

    // reduces to the sharp exponent at alpha = n
    for (int n = 1; n <= 8; ++n) CHECK(theorem1_threshold(n, Rat(n)) == sharp_exponent(n));
}

TEST_CASE("dimension lower bound branches") {
    // n=1: branch 4 formula n-2s
    CHECK(dimension_lower_bound(1, Rat(3, 10)) == Rat(2, 5));
    CHECK(dimension_lower_bound(1, Rat(1, 5)) == Rat(1));
    // the n=1 jump at s=1/4 goes from 1 to 1/2
    CHECK(dimension_lower_bound(1, Rat(1, 4)) == Rat(1, 2));
    // n=2 low-regularity branch
    CHECK(dimension_lower_bound(2, Rat(1, 5)) == Rat(2));
    CHECK_THROWS(dimension_lower_bound(2, Rat(-1, 10)));
    CHECK_THROWS(dimension_lower_bound(2, Rat(11, 10)));
}

TEST_CASE("dimension lower bound continuity and the 1/(2n) jump") {
    for (int n = 2; n <= 8; ++n) {
        // continuity at s = n/(2(n+1)): branch1 value n equals branch2 limit
        Rat s1(n, 2 * (n + 1));
        CHECK(dimension_lower_bound(n, s1) == Rat(n));
        // continuity at s = n/4
        Rat s3(n, 4);
        Rat left = Rat(n + 1) - Rat(2 * (n + 2), n) * s3;
        CHECK(dimension_lower_bound(n, s3) == left);
        CHECK(left == Rat(n) - 2 * s3);
        // one-sided limits at s=(n+1)/8 differ by exactly 1/(2n)
        Rat s2(n + 1, 8);
        Rat branch2 = Rat(n) + Rat(n, n - 1) - Rat(2 * (n + 1), n - 1) * s2;
        Rat branch3 = Rat(n + 1) - Rat(2 * (n + 2), n) * s2;
        CHECK(branch2 - branch3 == Rat(1, 2 * n));
        CHECK(dimension_lower_bound(n, s2) == branch3);  // right-continuous at the jump
    }
}

TEST_CASE("params validation") {
    ExperimentParams p;  // defaults: n=2, sigma=0.1, delta_w=0.02, lambda=16
    p.lambda_explicit = true;
    CHECK_NOTHROW(p.validate_single_scale());
    CHECK_NOTHROW(p.validate_multi_scale());

    SUBCASE("sigma >= 1/4 with alpha >= (3n+1)/4 fails multi-scale") {
        p.sigma = 0.26;
        p.delta_w = 0.05;
        CHECK_NOTHROW(p.validate_single_scale());
        CHECK_THROWS(p.validate_multi_scale());
    }
    SUBCASE("delta_w >= sigma/4 fails") {
        p.delta_w = 0.025001;  // sigma/4 = 0.025
        CHECK_THROWS(p.validate_multi_scale());
    }
    SUBCASE("alpha out of range") {
        p.alpha = 1.6;  // below 7/4
        p.alpha_set = true;
        CHECK_THROWS(p.validate_multi_scale());
    }
    SUBCASE("beta range enforced when set in the fractal case") {
        p.alpha = 1.9;
        p.beta_set = true;
        p.beta = 0.95;  // above alpha-1 = 0.9
        CHECK_THROWS(p.validate_multi_scale());
        p.beta = 0.85;  // inside ((n-1)(2a+1)/6, 0.9) = (0.8, 0.9)
        CHECK_NOTHROW(p.validate_multi_scale());
    }
    SUBCASE("R must exceed 4") {
        p.R = 4;
        CHECK_THROWS(p.validate_single_scale());
    }
}

TEST_CASE("config parsing") {
    auto entries = parse_config_text("# comment\n\nn = 2\nsigma= 0.1\nlambda =16\nseed = 9\n");
    ExperimentParams p;
    apply_config(p, entries);
    CHECK(p.n == 2);
    CHECK(p.sigma == doctest::Approx(0.1));
    CHECK(p.lambda == doctest::Approx(16.0));
    CHECK(p.lambda_explicit);
    CHECK(p.seed == 9);

    SUBCASE("unknown key is an error") {
        auto bad = parse_config_text("n = 2\nbogus = 1\n");
        ExperimentParams q;
        CHECK_THROWS_WITH_AS(apply_config(q, bad), doctest::Contains("unknown key"),
                             std::runtime_error);
    }
    SUBCASE("malformed line names the line number") {
        CHECK_THROWS_WITH_AS(parse_config_text("n = 2\nnonsense line\n"),
                             doctest::Contains(":2"), std::runtime_error);
    }
    SUBCASE("M derives lambda when lambda not given") {
        auto e = parse_config_text("sigma = 0.1\nM = 9\n");
        ExperimentParams q;
        apply_config(q, e);
        CHECK(q.lambda == doctest::Approx(std::exp2(9.0 / 0.9)));
        CHECK_FALSE(q.lambda_explicit);
    }
    SUBCASE("inconsistent lambda and M rejected") {
        auto e = parse_config_text("sigma = 0.1\nM = 9\nlambda = 16\n");
        ExperimentParams q;
        CHECK_THROWS(apply_config(q, e));
    }
}
