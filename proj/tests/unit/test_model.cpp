#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "jointsup/errors.hpp"
#include "jointsup/model.hpp"

using namespace jointsup;

TEST_CASE("normalize divides by volatility") {
    const auto p = normalize(ModelParams{2.0, 1.0, 4.0, 1.0, 2.0, 2.0});
    CHECK(p.c1 == 2.0);
    CHECK(p.c2 == 1.0);
    CHECK(p.a1 == 1.0);
    CHECK(p.a2 == 2.0);
    CHECK_FALSE(p.degenerate);
    CHECK_FALSE(p.binding.has_value());
}

TEST_CASE("normalize flags degenerate instances") {
    SUBCASE("a1 >= a2 binds the first component") {
        const auto p = normalize(ModelParams{1.0, 1.0, 2.0, 1.0, 3.0, 2.0});
        REQUIRE(p.degenerate);
        CHECK(p.binding->a == 3.0);
        CHECK(p.binding->c == 2.0);
    }
    SUBCASE("parallel boundaries bind the larger threshold") {
        const auto p = normalize(ModelParams{1.0, 1.0, 1.0, 1.0, 1.0, 2.0});
        REQUIRE(p.degenerate);
        CHECK(p.binding->a == 2.0);
        CHECK(p.binding->c == 1.0);
    }
    SUBCASE("equal thresholds") {
        const auto p = normalize(1.5, 1.5, 2.0, 1.0);
        REQUIRE(p.degenerate);
        CHECK(p.binding->a == 1.5);
        CHECK(p.binding->c == 2.0);
    }
}

TEST_CASE("normalize orders by drift") {
    const auto p = normalize(ModelParams{1.0, 1.0, 1.0, 2.0, 2.0, 1.0});
    CHECK(p.swapped);
    CHECK(p.c1 == 2.0);
    CHECK(p.a1 == 1.0);
    CHECK(p.a2 == 2.0);
    CHECK_FALSE(p.degenerate);
}

TEST_CASE("normalize rejects invalid input") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto field_of = [](const ModelParams& m) {
        try {
            normalize(m);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string();
    };
    CHECK(field_of({0.0, 1.0, 1.0, 0.0, 1.0, 2.0}) == "sigma1");
    CHECK(field_of({1.0, -1.0, 1.0, 0.0, 1.0, 2.0}) == "sigma2");
    CHECK(field_of({1.0, 1.0, 1.0, 0.0, 0.0, 2.0}) == "a1");
    CHECK(field_of({1.0, 1.0, 1.0, 0.0, 1.0, -2.0}) == "a2");
    CHECK(field_of({1.0, 1.0, nan, 0.0, 1.0, 2.0}) == "c1");
    CHECK(field_of({1.0, 1.0, 1.0, std::numeric_limits<double>::infinity(), 1.0, 2.0}) == "c2");
}

TEST_CASE("normalize swap symmetry and scale covariance") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        const ModelParams m{u(rng), u(rng), c(rng), c(rng), u(rng), u(rng)};
        const ModelParams flipped{m.sigma2, m.sigma1, m.c2, m.c1, m.a2, m.a1};
        const auto p = normalize(m);
        const auto q = normalize(flipped);
        CHECK(p.c1 == q.c1);
        CHECK(p.c2 == q.c2);
        CHECK(p.a1 == q.a1);
        CHECK(p.a2 == q.a2);
        CHECK(p.degenerate == q.degenerate);

        const double lambda = u(rng);
        const ModelParams scaled{m.sigma1 * lambda, m.sigma2 * lambda, m.c1 * lambda,
                                 m.c2 * lambda,     m.a1 * lambda,     m.a2 * lambda};
        const auto s = normalize(scaled);
        CHECK(std::abs(s.c1 - p.c1) <= 1e-15 * std::max(1.0, std::abs(p.c1)));
        CHECK(std::abs(s.c2 - p.c2) <= 1e-15 * std::max(1.0, std::abs(p.c2)));
        CHECK(std::abs(s.a1 - p.a1) <= 1e-15 * std::max(1.0, p.a1));
        CHECK(std::abs(s.a2 - p.a2) <= 1e-15 * std::max(1.0, p.a2));
    }
}

TEST_CASE("critical times") {
    SUBCASE("a=(1,2), c=(2,1)") {
        const auto t = critical_times(normalize(1.0, 2.0, 2.0, 1.0));
        CHECK(t.t_star == 1.0);
        CHECK(*t.t1 == 0.5);
        CHECK(*t.t2 == 2.0);
        CHECK(*t.t_tilde == 0.0);
    }
    SUBCASE("a=(1,3), c=(3,1)") {
        const auto t = critical_times(normalize(1.0, 3.0, 3.0, 1.0));
        CHECK(t.t_star == 1.0);
        CHECK(*t.t1 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(*t.t2 == 3.0);
        CHECK(*t.t_tilde == 1.0);
    }
    SUBCASE("a=(1,1.01), c=(2,1)") {
        const auto t = critical_times(normalize(1.0, 1.01, 2.0, 1.0));
        CHECK(t.t_star == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(t.t_star < *t.t1);
    }
    SUBCASE("non-positive drifts leave the times unset") {
        const auto t = critical_times(normalize(1.0, 2.0, 0.5, -1.0));
        CHECK(t.t_star == doctest::Approx(2.0 / 3.0));
        CHECK(t.t1.has_value());
        CHECK_FALSE(t.t2.has_value());
        CHECK_FALSE(t.t_tilde.has_value());
        const auto u = critical_times(normalize(1.0, 2.0, -0.5, -1.0));
        CHECK_FALSE(u.t1.has_value());
    }
    CHECK_THROWS_AS(critical_times(normalize(2.0, 1.0, 2.0, 1.0)), ValidationError);
}

TEST_CASE("boundaries meet at t*") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double a1 = u(rng), c2 = u(rng) - 2.5;
        const auto p = normalize(a1, a1 + u(rng), c2 + u(rng), c2);
        if (p.degenerate) continue;
        const double ts = critical_times(p).t_star;
        CHECK(ts > 0.0);
        const double y1 = p.a1 + p.c1 * ts;
        const double y2 = p.a2 + p.c2 * ts;
        CHECK(std::abs(y1 - y2) <= 1e-12 * std::max(1.0, std::abs(y1)));
    }
}

TEST_CASE("nearly_equal and horizon validation") {
    CHECK(nearly_equal(1.0, 1.0 + 1e-13));
    CHECK_FALSE(nearly_equal(1.0, 1.0 + 1e-11));
    CHECK(nearly_equal(0.0, 0.0));
    CHECK_NOTHROW(validate_horizon(0.1));
    CHECK_THROWS_AS(validate_horizon(0.0), ValidationError);
    CHECK_THROWS_AS(validate_horizon(std::numeric_limits<double>::infinity()), ValidationError);
    CHECK(Horizon::infinite().is_infinite());
    CHECK_FALSE(Horizon{2.0}.is_infinite());
}
