#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "jointsup/asymptotics.hpp"
#include "jointsup/errors.hpp"
#include "jointsup/exact.hpp"
#include "jointsup/gauss.hpp"

using namespace jointsup;

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

std::string label(double a1, double a2, double c1, double c2, double T) {
    return std::string(to_string(many_source_classify(normalize(a1, a2, c1, c2), T)));
}

}  // namespace

TEST_CASE("many_source_classify examples") {
    CHECK(label(1, 2, 2, 1, 3) == "T25-iiic");
    CHECK(label(1, 2, 2, 1, 0.5) == "T21-i");
    CHECK(label(1, 3, 3, 1, 2) == "T25-iiid");
}

TEST_CASE("many_source_classify reaches every case") {
    struct Row { double a1, a2, c1, c2, T; const char* want; };
    const Row rows[] = {
        {1, 2, 2, 1, 0.5, "T21-i"},       {1, 4, 1.5, 1, 4, "T21-ii"},
        {1, 4, 1.5, 1, 5, "T21-iii"},     {2, 2.5, 1, 0.5, 1.5, "T25-ia"},
        {2, 2.5, 1, 0.5, 2, "T25-ib"},    {2, 2.5, 1, 0.5, 3, "T25-ic"},
        {1, 1.5, 1, 0.5, 2, "T25-ii"},    {1, 5, 3, 1, 2.5, "T25-iiia"},
        {1, 5, 3, 1, 3, "T25-iiib"},      {1, 2, 2, 1, 3, "T25-iiic"},
        {1, 3, 3, 1, 2, "T25-iiid"},      {1, 5, 3, 1, 4, "T25-iiie"},
        {1, 2, 1.5, 1, 3, "T25-iv"},      {1, 4, 1.5, 1, 7, "T25-v"},
    };
    std::set<std::string> seen;
    for (auto r : rows) {
        CHECK(label(r.a1, r.a2, r.c1, r.c2, r.T) == r.want);
        seen.insert(r.want);
        CHECK_NOTHROW(many_source_asym(normalize(r.a1, r.a2, r.c1, r.c2), r.T));
    }
    CHECK(seen.size() == static_cast<std::size_t>(kRegimeCaseCount));
}

TEST_CASE("many_source_classify ties snap to equality cases") {
    // t* = T up to rounding of the inputs.
    CHECK(label(0.1, 0.3, 0.3, 0.1, 1.0000000000001) == "T21-i");
    CHECK(label(1, 2, 2, 1, 1.0 + 1e-14) == "T21-i");
    CHECK(label(2, 2.5, 1, 0.5, 2.0 * (1 + 1e-13)) == "T25-ib");
    CHECK(label(1, 5, 3, 1, 3.0 * (1 - 1e-13)) == "T25-iiib");
}

TEST_CASE("many_source_classify is exhaustive") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::set<std::string> seen;
    for (int i = 0; i < 10000; ++i) {
        const double a1 = 0.05 + 3.0 * u(rng);
        const double a2 = a1 + 0.01 + 4.0 * u(rng);
        const double c2 = 0.01 + 2.0 * u(rng);
        const double c1 = c2 + 0.01 + 3.0 * u(rng);
        const double T = 0.01 + 8.0 * u(rng);
        REQUIRE_NOTHROW(seen.insert(label(a1, a2, c1, c2, T)));
    }
    CHECK(seen.size() >= 8);
}

TEST_CASE("many_source_classify rejects invalid drifts") {
    CHECK_THROWS_AS(many_source_classify(normalize(1, 2, 2, 0), 1.0), ValidationError);
    CHECK_THROWS_AS(many_source_classify(normalize(1, 2, 2, -1), 1.0), ValidationError);
    CHECK_THROWS_AS(many_source_classify(normalize(2, 1, 2, 1), 1.0), ValidationError);
    CHECK_THROWS_AS(many_source_classify(normalize(1, 2, 2, 1), 0.0), ValidationError);
}

TEST_CASE("many_source_asym examples") {
    SUBCASE("T25-iiic") {
        const auto f = many_source_asym(normalize(1, 2, 2, 1), 3.0);
        CHECK(f.rate == doctest::Approx(4.5).epsilon(1e-15));
        CHECK(f.power == -0.5);
        CHECK(f.prefactor == doctest::Approx(8.0 / 3.0 * kInvSqrt2Pi).epsilon(1e-15));
        CHECK(f.kind == FormKind::equivalence);
    }
    SUBCASE("T21-i") {
        const auto f = many_source_asym(normalize(1, 2, 2, 1), 0.5);
        const double s = std::sqrt(0.5);
        CHECK(f.rate == doctest::Approx(6.25).epsilon(1e-15));
        CHECK(f.power == -0.5);
        CHECK(f.prefactor == doctest::Approx(kInvSqrt2Pi * (s / 2.5 + s / 1.5)).epsilon(1e-15));
    }
    SUBCASE("equality cases") {
        const auto f = many_source_asym(normalize(1, 1.5, 1, 0.5), 2.0);
        CHECK(f.power == 0.0);
        CHECK(f.prefactor == 0.5);
        CHECK(f.rate == doctest::Approx(2.0).epsilon(1e-15));
        const auto g = many_source_asym(normalize(1, 3, 3, 1), 2.0);
        CHECK(g.prefactor == 0.5);
        CHECK(g.rate == doctest::Approx(8.0).epsilon(1e-15));
    }
    SUBCASE("unit prefactor cases") {
        for (auto [a1, a2, c1, c2, T] : {std::array{1.0, 4.0, 1.5, 1.0, 5.0}, std::array{2.0, 2.5, 1.0, 0.5, 3.0},
                                         std::array{1.0, 5.0, 3.0, 1.0, 4.0}, std::array{1.0, 4.0, 1.5, 1.0, 7.0}}) {
            const auto f = many_source_asym(normalize(a1, a2, c1, c2), T);
            CHECK(f.power == 0.0);
            CHECK(f.prefactor == 1.0);
        }
    }
}

TEST_CASE("eval_asym") {
    const AsymptoticForm unit{1.0, 0.0, 3.0, FormKind::equivalence};
    CHECK(eval_asym(unit, 7.0).log_p == doctest::Approx(-21.0).epsilon(1e-15));
    const AsymptoticForm f{0.3, -0.5, 2.0, FormKind::equivalence};
    CHECK(eval_asym(f, 1.0).log_p == doctest::Approx(std::log(0.3) - 2.0).epsilon(1e-15));
    double prev = 0.0;
    for (double N = 0.5; N < 500.0; N *= 1.3) {
        const double v = eval_asym(f, N).log_p;
        CHECK(v < prev);
        prev = v;
    }
    CHECK(eval_asym(unit, 400.0).underflow);
    CHECK_THROWS_AS(eval_asym(unit, 0.0), ValidationError);
}

TEST_CASE("many-source scaling") {
    const auto p = normalize(1, 2, 2, 1);
    const auto q = many_source_scaled(p, 4.0);
    CHECK(q.a1 == 2.0);
    CHECK(q.a2 == 4.0);
    CHECK(q.c1 == 4.0);
    CHECK(q.c2 == 2.0);
    CHECK(log_many_source(p, 3.0, 1.0).log_p == log_pi_joint(p, 3.0).log_p);
    CHECK_THROWS_AS(many_source_scaled(p, -1.0), ValidationError);
}

TEST_CASE("high_threshold") {
    CHECK(high_threshold(0.5, 2.0, 1.0, 1.0, 1.0).p ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::exp(-2.0)).epsilon(1e-15));
    const double ref = high_threshold(0.1, 2.0, 1.0, 1.5, 6.0).log_p;
    for (double a : {0.3, 0.5, 0.7, 0.9}) CHECK(high_threshold(a, 2.0, 1.0, 1.5, 6.0).log_p == ref);
    CHECK(high_threshold(0.5, 9.0, 1.0, 1.5, 6.0).log_p == ref);
    CHECK_THROWS_AS(high_threshold(1.0, 2.0, 1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(high_threshold(0.0, 2.0, 1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(high_threshold(0.5, 1.0, 2.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(high_threshold(0.5, 2.0, -1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(high_threshold(0.5, 2.0, 1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("bvn_tail_asym classification") {
    struct Row { double rho, alpha, beta; LemmaCase want; };
    const Row rows[] = {
        {0.3, 1.0, -1.0, LemmaCase::c1i},  {0.3, -2.0, 1.0, LemmaCase::c2i},
        {0.0, -1.0, 2.0, LemmaCase::c3i},  {-0.5, -1.0, 2.0, LemmaCase::c3ii},
        {-0.8, -1.0, 2.0, LemmaCase::c3iii}, {0.7, 1.0, 2.0, LemmaCase::c4i},
        {0.5, 1.0, 2.0, LemmaCase::c4ii},  {0.25, 1.0, 2.0, LemmaCase::c4iii},
        {0.5, 0.0, 1.0, LemmaCase::c5i},   {0.0, 0.0, 1.0, LemmaCase::c5ii},
        {-0.5, 0.0, 1.0, LemmaCase::c5iii},
    };
    for (auto r : rows) {
        const auto res = bvn_tail_asym(r.rho, r.alpha, r.beta);
        CHECK(res.lemma_case == r.want);
        CHECK_FALSE(res.swapped);
        const bool equivalence = r.want == LemmaCase::c1i || r.want == LemmaCase::c2i ||
                                 r.want == LemmaCase::c3i || r.want == LemmaCase::c4i ||
                                 r.want == LemmaCase::c4iii || r.want == LemmaCase::c5i ||
                                 r.want == LemmaCase::c5ii;
        CHECK((res.kind == FormKind::equivalence) == equivalence);
    }
    CHECK(bvn_tail_asym(0.5, 1.0, 2.0).kind == FormKind::two_sided_bound);
    CHECK(bvn_tail_asym(-0.5, -1.0, 2.0).kind == FormKind::upper_bound);
}

TEST_CASE("bvn_tail_asym forms") {
    const auto one = bvn_tail_asym(0.9, 1.5, -1.5);
    CHECK(one.form.rate == doctest::Approx(1.5 * 1.5 / 2.0).epsilon(1e-15));
    CHECK(one.form.power == -1.0);
    CHECK(one.form.prefactor == doctest::Approx(kInvSqrt2Pi / 1.5).epsilon(1e-15));

    const auto four = bvn_tail_asym(0.25, 1.0, 2.0);
    CHECK(four.form.rate == doctest::Approx((1.0 + 4.0 - 1.0) / (2.0 * 0.9375)).epsilon(1e-14));
    CHECK(four.form.power == -2.0);

    const auto swapped = bvn_tail_asym(0.25, 2.0, 1.0);
    CHECK(swapped.swapped);
    CHECK(swapped.lemma_case == LemmaCase::c4iii);
    CHECK(swapped.alpha == 1.0);
    CHECK(swapped.beta == 2.0);

    const auto mirrored = bvn_tail_asym(0.2, -1.0, 1.0);
    CHECK(mirrored.swapped);
    CHECK(mirrored.lemma_case == LemmaCase::c1i);

    CHECK_THROWS_AS(bvn_tail_asym(0.3, -1.0, -1.0), ValidationError);
    CHECK_THROWS_AS(bvn_tail_asym(0.3, 0.0, -1.0), ValidationError);
    CHECK_THROWS_AS(bvn_tail_asym(1.5, 1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(bvn_tail_asym(-1.0, -1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(bvn_tail_asym(0.3, 1.0, 2.0).log_lower(10.0), ValidationError);
}

TEST_CASE("bvn_tail_asym against the quadrature oracle") {
    const auto oracle = [](const BivariateTailResult& r, double t) {
        return gauss::log_bvn_sf({r.rho, r.alpha * t, r.beta * t}).log_p;
    };
    struct Row { double rho, alpha, beta; };
    const Row equivalence[] = {{0.3, 1.0, -1.0}, {0.3, -2.0, 1.0}, {0.0, -1.0, 2.0}, {0.7, 1.0, 2.0},
                               {0.25, 1.0, 2.0}, {0.5, 0.0, 1.0}, {0.0, 0.0, 1.0}};
    for (auto r : equivalence) {
        const auto res = bvn_tail_asym(r.rho, r.alpha, r.beta);
        INFO(to_string(res.lemma_case));
        const double d30 = std::abs(std::exp(oracle(res, 30.0) - res.log_value(30.0)) - 1.0);
        const double d40 = std::abs(std::exp(oracle(res, 40.0) - res.log_value(40.0)) - 1.0);
        CHECK(d30 <= 0.1);
        CHECK(d40 <= d30);
    }
    const Row bounds[] = {{-0.5, -1.0, 2.0}, {-0.8, -1.0, 2.0}, {0.5, 1.0, 2.0}, {-0.5, 0.0, 1.0}};
    for (auto r : bounds) {
        const auto res = bvn_tail_asym(r.rho, r.alpha, r.beta);
        INFO(to_string(res.lemma_case));
        for (double t : {10.0, 20.0, 30.0}) {
            CHECK(oracle(res, t) <= res.log_value(t));
            if (res.kind == FormKind::two_sided_bound) CHECK(oracle(res, t) >= res.log_lower(t));
        }
    }
}
