#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fgl/bounds.hpp"
#include "fgl/error.hpp"
#include "fgl/ode.hpp"
#include "oracles/quadrature.hpp"

using namespace fgl;
using std::numbers::pi;

TEST_CASE("threshold examples") {
    const double inv_h = std::sqrt(oracle::integrate_line([](double x) { return 1 / (1 + x * x); }));
    CHECK(inv_h == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
    CHECK(blowup_threshold({2, 0.5, inv_h, 1}) == doctest::Approx(0.88623).epsilon(1e-5));
    CHECK(blowup_threshold({2, 0.0, inv_h, 1}) == 0.0);
    CHECK(blowup_threshold({3, 4.0, 1.0, 1}) == doctest::Approx(2.0));
}

TEST_CASE("lower bound at t = 0 equals the weighted data norm") {
    const BoundParams b{2, 0.5, std::sqrt(pi), 2 * std::sqrt(pi)};
    CHECK(weighted_norm_lower_bound(b, 0, BoundVariant::paper) == doctest::Approx(b.initial_weighted_norm));
    CHECK(weighted_norm_lower_bound(b, 0, BoundVariant::sharp) == doctest::Approx(b.initial_weighted_norm));
}

TEST_CASE("sharp bound is the square root of the comparison ODE for Q") {
    for (double p : {2.0, 2.5, 3.0}) {
        const BoundParams b{p, 0.5, std::sqrt(pi), 2 * std::sqrt(pi)};
        // Q' = -2 kappa Q + 2 ||1/h||^{-(p-1)} Q^{(p+1)/2}
        const OdeParams q_ode{2 * b.kappa, 2 * std::pow(b.inv_h_norm, -(p - 1)), (p + 1) / 2,
                              b.initial_weighted_norm * b.initial_weighted_norm};
        const double tstar = blowup_time(q_ode);
        const double t_end = std::isfinite(tstar) ? 0.9 * tstar : 1.0;
        const auto traj = numeric_oracle(q_ode, t_end);
        for (std::size_t i = 0; i < traj.t.size(); i += 5) {
            const double t = traj.t[i];
            const double sharp = weighted_norm_lower_bound(b, t, BoundVariant::sharp);
            CHECK(std::abs(sharp - std::sqrt(traj.f[i])) <= 1e-7 * sharp);
            const double paper = weighted_norm_lower_bound(b, t, BoundVariant::paper);
            CHECK(paper == doctest::Approx(sharp * std::exp(-b.kappa * t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("paper variant at t = 0.1 matches direct evaluation") {
    const BoundParams b{2, 0.5, std::sqrt(pi), 2 * std::sqrt(pi)};
    const double t = 0.1;
    const double bracket = 1 / b.initial_weighted_norm + (1 / b.kappa) / b.inv_h_norm * (std::exp(-b.kappa * t) - 1);
    CHECK(lower_bound_bracket(b, t) == doctest::Approx(bracket).epsilon(1e-14));
    CHECK(weighted_norm_lower_bound(b, t) == doctest::Approx(std::exp(-2 * b.kappa * t) / bracket).epsilon(1e-14));
}

TEST_CASE("kappa -> 0 limit is continuous") {
    const double t = 0.3;
    BoundParams b{2, 1e-12, std::sqrt(pi), 2 * std::sqrt(pi)};
    const double limit = 1 / (1 / b.initial_weighted_norm - t / b.inv_h_norm);
    CHECK(weighted_norm_lower_bound(b, t) == doctest::Approx(limit).epsilon(1e-12));
    b.kappa = 1e-7;
    CHECK(weighted_norm_lower_bound(b, t) == doctest::Approx(limit).epsilon(1e-6));
    b.kappa = 0;
    CHECK(weighted_norm_lower_bound(b, t) == doctest::Approx(limit).epsilon(1e-12));
}

TEST_CASE("diverged bound is reported") {
    const BoundParams b{2, 0.5, std::sqrt(pi), 2 * std::sqrt(pi)};
    const auto life = lifespan_upper_bound(b, BoundVariant::sharp);
    REQUIRE(life.condition_met);
    try {
        (void)weighted_norm_lower_bound(b, life.value * 1.01, BoundVariant::sharp);
        FAIL("expected blowup_exceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::blowup_exceeded);
    }
}

TEST_CASE("lifespan bound examples") {
    const BoundParams b{2, 0.5, std::sqrt(pi), 2 * 0.5 * std::sqrt(pi)};
    const auto life = lifespan_upper_bound(b);
    CHECK(life.condition_met);
    CHECK(life.value == doctest::Approx(4 * std::log(2.0)).epsilon(1e-14));
    CHECK(lifespan_upper_bound(b, BoundVariant::sharp).value == doctest::Approx(2 * std::log(2.0)).epsilon(1e-14));

    const BoundParams below{2, 0.5, std::sqrt(pi), 0.9 * 0.5 * std::sqrt(pi)};
    const auto none = lifespan_upper_bound(below);
    CHECK_FALSE(none.condition_met);
    CHECK(std::isinf(none.value));
}

TEST_CASE("lifespan bound asymptotics for large data") {
    for (double p : {2.0, 3.0}) {
        double previous_error = 1;
        for (double r : {1e2, 1e3, 1e4}) {
            const BoundParams b{p, 0.5, std::sqrt(pi), r};
            const double leading = (2 / (p - 1)) * std::pow(b.inv_h_norm, p - 1) * std::pow(r, -(p - 1));
            const double error = std::abs(lifespan_upper_bound(b).value / leading - 1);
            CHECK(error < previous_error);
            previous_error = error;
        }
        CHECK(previous_error < 1e-3);
    }
}

TEST_CASE("sharp bound dominates the paper bound") {
    for (double kappa : {0.01, 0.3, 1.0, 3.0}) {
        const BoundParams b{2, kappa, std::sqrt(pi), 10.0};
        const double end = lifespan_upper_bound(b, BoundVariant::sharp).value;
        for (int i = 0; i < 50; ++i) {
            const double t = end * i / 51.0;
            CHECK(weighted_norm_lower_bound(b, t, BoundVariant::sharp) >=
                  weighted_norm_lower_bound(b, t, BoundVariant::paper));
        }
    }
}

TEST_CASE("variant names") {
    CHECK(parse_bound_variant("paper") == BoundVariant::paper);
    CHECK(parse_bound_variant("sharp") == BoundVariant::sharp);
    CHECK(std::string(to_string(BoundVariant::sharp)) == "sharp");
    CHECK_THROWS_AS(parse_bound_variant("loose"), Error);
}
