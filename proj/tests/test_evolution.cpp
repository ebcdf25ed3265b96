#include <doctest.h>

#include <cmath>

#include "fgl/error.hpp"
#include "fgl/evolution.hpp"
#include "fgl/spectral.hpp"

using namespace fgl;

namespace {

SimConfig constant_run(double value, std::size_t points = 64) {
    SimConfig cfg;
    cfg.grid = make_grid(10, points);
    cfg.initial = ConstantProfile{value};
    cfg.t_max = 10;
    return cfg;
}

FieldState evolve_fixed(FieldState f, double dt, double t_end, double p) {
    const int steps = static_cast<int>(std::lround(t_end / dt));
    for (int i = 0; i < steps; ++i) f = strang_step(f, dt, p);
    return f;
}

}  // namespace

TEST_CASE("nonlinear sub-flow examples") {
    const auto g = make_grid(1, 8);
    const auto one = sample(g, [](double) { return cplx(1); });
    const auto out = nonlinear_substep(one, 0.5, 2);
    for (const auto& z : out.values) CHECK(std::abs(z) == doctest::Approx(2.0).epsilon(1e-15));

    const auto phased = sample(g, [](double x) { return std::polar(1.0, x); });
    const auto rotated = nonlinear_substep(phased, 0.5, 2);
    for (std::size_t m = 0; m < g.points(); ++m) CHECK(std::arg(rotated[m]) == doctest::Approx(std::arg(phased[m])));

    const FieldState zero(g);
    CHECK(sup_norm(nonlinear_substep(zero, 123.0, 3)) == 0.0);

    try {
        (void)nonlinear_substep(one, 1.0, 2);
        FAIL("expected SingularSubstep");
    } catch (const SingularSubstep& e) {
        CHECK(e.kind() == ErrorKind::singular_substep);
        CHECK(e.max_admissible_dt() == doctest::Approx(1.0));
    }
}

TEST_CASE("linear step conserves mass") {
    const auto g = make_grid(20, 512);
    auto f = sample(g, [](double x) { return cplx(std::exp(-x * x), 0.3 * x * std::exp(-x * x)); });
    const double m0 = std::pow(l2_norm(f), 2);
    for (int i = 0; i < 20; ++i) {
        const double before = std::pow(l2_norm(f), 2);
        f = strang_step(f, 0.05, 2, false);
        CHECK(std::abs(std::pow(l2_norm(f), 2) - before) <= 1e-12 * before);
    }
    CHECK(std::abs(std::pow(l2_norm(f), 2) - m0) <= 1e-12 * m0);
}

TEST_CASE("constant data: Strang step equals the nonlinear sub-flow") {
    const auto g = make_grid(5, 32);
    const auto c = sample(g, [](double) { return cplx(1.5, 0.5); });
    CHECK(max_abs_diff(strang_step(c, 0.1, 2.5), nonlinear_substep(c, 0.1, 2.5)) < 1e-13);
}

TEST_CASE("Strang splitting is second order") {
    const auto g = make_grid(20, 256);
    const auto u0 = sample(g, [](double x) { return cplx(0.8 * std::exp(-x * x)); });
    const double t_end = 0.4;
    const auto a = evolve_fixed(u0, 0.02, t_end, 2);
    const auto b = evolve_fixed(u0, 0.01, t_end, 2);
    const auto c = evolve_fixed(u0, 0.005, t_end, 2);
    const double ratio = l2_norm(a - b) / l2_norm(b - c);
    CHECK(ratio > 4 * 0.8);
    CHECK(ratio < 4 * 1.2);
}

TEST_CASE("step selection") {
    SimConfig cfg;
    cfg.theta = 0.5;
    cfg.dt_max = 1;
    cfg.dt_min = 1e-12;
    auto c = choose_dt(10.0, 2, cfg);
    CHECK(c.dt == doctest::Approx(0.05));
    CHECK_FALSE(c.underflow);
    CHECK(choose_dt(0.0, 2, cfg).dt == 1.0);
    CHECK(choose_dt(1e-9, 2, cfg).dt == 1.0);

    cfg.dt_min = 1e-10;
    c = choose_dt(1e8, 2, cfg);
    CHECK(c.dt == doctest::Approx(5e-9));
    CHECK_FALSE(c.underflow);
    c = choose_dt(1e10, 2, cfg);
    CHECK(c.underflow);
}

TEST_CASE("configuration validation") {
    SimConfig cfg;
    cfg.theta = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = SimConfig{};
    cfg.p = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = SimConfig{};
    cfg.dt_min = cfg.dt_max;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = SimConfig{};
    cfg.record_every = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("constant data blows up at 1/((p-1) c^{p-1})") {
    const auto res = simulate(constant_run(2.0));
    REQUIRE(res.report.blew_up);
    CHECK(res.report.criterion == BlowupCriterion::sup_threshold);
    CHECK(std::abs(*res.report.t_detected - 0.5) < 1e-3);
    CHECK(*res.report.t_detected <= 10.0);

    double previous = 1e9;
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
        const auto run = simulate(constant_run(r));
        REQUIRE(run.report.t_detected.has_value());
        CHECK(std::abs(*run.report.t_detected - 1 / r) < 1e-3 / r);
        CHECK(*run.report.t_detected < previous);
        previous = *run.report.t_detected;
    }
}

TEST_CASE("detected time does not depend on the sup threshold") {
    auto cfg = constant_run(2.0);
    const double t8 = *simulate(cfg).report.t_detected;
    cfg.blowup_sup_threshold = 1e10;
    const double t10 = *simulate(cfg).report.t_detected;
    CHECK(std::abs(t10 - t8) < 1e-3 * t8);
}

TEST_CASE("step underflow is reported as blow-up") {
    auto cfg = constant_run(2.0);
    cfg.dt_min = 1e-4;
    const auto res = simulate(cfg);
    REQUIRE(res.report.blew_up);
    CHECK(res.report.criterion == BlowupCriterion::dt_underflow);
    CHECK(*res.report.t_detected < 0.5);
}

TEST_CASE("linear-only evolution is unitary over t = 10") {
    SimConfig cfg;
    cfg.grid = make_grid(20, 1024);
    cfg.nonlinear = false;
    cfg.t_max = 10;
    cfg.dt_max = 0.05;
    const auto res = simulate(cfg);
    CHECK_FALSE(res.report.blew_up);
    CHECK(res.series.times.back() == doctest::Approx(10.0));
    const double m0 = res.series.mass.front();
    for (double m : res.series.mass) CHECK(std::abs(m - m0) <= 1e-10 * m0);
}

TEST_CASE("time series bookkeeping") {
    SimConfig cfg;
    cfg.grid = make_grid(20, 512);
    cfg.initial = GaussianProfile{4.0, 1.0, 0.0};
    cfg.record_every = 3;
    const auto res = simulate(cfg);
    const auto& s = res.series;
    REQUIRE(s.size() > 3);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.times[i] > s.times[i - 1]);
    CHECK(s.weights == default_weights());
    CHECK(s.momentum.size() == 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::isfinite(s.mass[i]));
        CHECK(s.momentum[0][i] <= s.momentum[1][i]);
        CHECK(s.momentum[1][i] <= s.mass[i]);
    }
    CHECK(res.report.blew_up);
    CHECK(res.report.t_last_stable <= *res.report.t_detected);
    CHECK_THROWS_AS(s.weight_index({3, 1}), Error);
}

TEST_CASE("refinement and step-factor stability of the detected time") {
    SimConfig cfg;
    cfg.grid = make_grid(20, 512);
    cfg.initial = GaussianProfile{4.0, 1.0, 0.0};
    const double base = *simulate(cfg).report.t_detected;
    cfg.grid = make_grid(20, 1024);
    const double fine = *simulate(cfg).report.t_detected;
    CHECK(std::abs(fine - base) < 5e-3 * base);
    cfg.theta = 0.25;
    const double careful = *simulate(cfg).report.t_detected;
    CHECK(std::abs(careful - fine) < 1e-2 * fine);
}

TEST_CASE("profiles") {
    const auto g = make_grid(5, 16);
    const auto scaled = scale_profile(GaussianProfile{2, 1, 0}, 3);
    CHECK(std::get<GaussianProfile>(scaled).amplitude == 6.0);
    const auto c = sample_profile(scale_profile(ConstantProfile{2.0}, 0.5), g);
    CHECK(c[3] == cplx(1.0));
    CHECK_THROWS_AS(sample_profile(SampledProfile{{1, 2, 3}}, g), Error);
}

TEST_CASE("homogeneous lifespan is exact for every step factor") {
    // both sub-flows are exact for constant data, so theta only changes the
    // sampling of the blow-up, not its time
    for (double theta : {0.5, 0.25, 0.1, 0.05}) {
        auto cfg = constant_run(2.0);
        cfg.theta = theta;
        CHECK(std::abs(*simulate(cfg).report.t_detected - 0.5) <= 1e-6);
    }
}
