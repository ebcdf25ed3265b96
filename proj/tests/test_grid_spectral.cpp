#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "fgl/error.hpp"
#include "fgl/grid.hpp"
#include "fgl/spectral.hpp"
#include "oracles/dense.hpp"
#include "oracles/quadrature.hpp"

using namespace fgl;
using std::numbers::pi;

namespace {

FieldState random_field(const GridSpec& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    FieldState f(g);
    for (auto& z : f.values) z = {nd(rng), nd(rng)};
    return f;
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0;
    for (auto z : v) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

TEST_CASE("grid nodes and frequencies for L = pi, N = 4") {
    const auto g = make_grid(pi, 4);
    const double expected_nodes[] = {-pi, -pi / 2, 0.0, pi / 2};
    for (std::size_t m = 0; m < 4; ++m) CHECK(g.node(m) == doctest::Approx(expected_nodes[m]).epsilon(1e-15));
    auto k = g.wavenumbers();
    std::sort(k.begin(), k.end());
    const double expected_k[] = {-2, -1, 0, 1};
    for (std::size_t m = 0; m < 4; ++m) CHECK(k[m] == doctest::Approx(expected_k[m]));
    CHECK(g.is_unpaired(2));
    CHECK(g.mode(2) == -2);
}

TEST_CASE("grid spacing and preconditions") {
    CHECK(make_grid(100, 1024).dx() == 200.0 / 1024);
    CHECK_THROWS_AS(make_grid(-1, 8), Error);
    CHECK_THROWS_AS(make_grid(0, 8), Error);
    CHECK_THROWS_AS(make_grid(1, 7), Error);
    CHECK_THROWS_AS(make_grid(1, 2), Error);
    CHECK_THROWS_AS(make_grid(1, 8, 3), Error);
    const auto g = make_grid(3.5, 64);
    CHECK(g.dx() * 64 == doctest::Approx(7.0));
    CHECK(integrate(g, std::vector<double>(64, 1.0)) == doctest::Approx(7.0));
}

TEST_CASE("|k| eigenfunctions") {
    const auto g = make_grid(pi, 16);
    const auto e1 = sample(g, [](double x) { return cplx(std::cos(x), std::sin(x)); });
    CHECK(max_abs_diff(apply_abs_derivative(e1), e1) < 1e-13);

    const auto c = sample(g, [](double) { return cplx(3.0); });
    CHECK(sup_norm(apply_abs_derivative(c)) < 1e-13);

    const auto cos2 = sample(g, [](double x) { return cplx(std::cos(2 * x)); });
    CHECK(max_abs_diff(apply_abs_derivative(cos2), 2.0 * cos2) < 1e-13);
}

TEST_CASE("multipliers agree with a direct DFT") {
    const auto g = make_grid(5.0, 32);
    const auto f = random_field(g, 7);
    const double unit = pi / g.half_length();

    SUBCASE("fractional power, unpaired mode kept") {
        for (double s : {0.5, 1.0, 2.0}) {
            const auto fast = apply_multiplier(f, FractionalPower{s});
            const auto ref = oracle::naive_multiplier(
                f.values, [&](long k) { return cplx(std::pow(std::abs(k * unit), s)); });
            CHECK(max_abs_diff(fast, FieldState(g, ref)) < 1e-11 * max_abs(ref));
        }
    }
    SUBCASE("gradient, unpaired mode zeroed") {
        const auto fast = apply_multiplier(f, Gradient{0});
        const auto ref = oracle::naive_multiplier(
            f.values, [&](long k) { return k == -16 ? cplx(0) : cplx(0, k * unit); });
        CHECK(max_abs_diff(fast, FieldState(g, ref)) < 1e-11 * max_abs(ref));
    }
    SUBCASE("half-wave phase") {
        const auto fast = apply_multiplier(f, HalfWavePhase{0.37});
        const auto ref = oracle::naive_multiplier(
            f.values, [&](long k) { return std::exp(cplx(0, -std::abs(k * unit) * 0.37)); });
        CHECK(max_abs_diff(fast, FieldState(g, ref)) < 1e-11 * max_abs(ref));
    }
}

TEST_CASE("norms of simple fields") {
    const auto g = make_grid(20, 2048);
    const auto c = sample(g, [](double) { return cplx(1.5); });
    CHECK(l2_norm(c) == doctest::Approx(1.5 * std::sqrt(40.0)).epsilon(1e-14));

    const auto gauss = sample(g, [](double x) { return cplx(std::exp(-x * x)); });
    const double ref = oracle::integrate_line([](double x) { return std::exp(-2 * x * x); });
    CHECK(std::abs(ref - std::sqrt(pi / 2)) < 1e-12);
    CHECK(std::abs(std::pow(l2_norm(gauss), 2) - ref) < 1e-6);

    // ||f'||^2 = int 4x^2 e^{-2x^2} = ||f||^2 for this profile
    const double h1_ref = oracle::integrate_line([](double x) { return (1 + 4 * x * x) * std::exp(-2 * x * x); });
    CHECK(std::abs(std::pow(h1_norm(gauss), 2) - h1_ref) < 1e-9);
    CHECK(lp_norm(gauss, 3) == doctest::Approx(std::cbrt(std::sqrt(pi / 3))).epsilon(1e-10));
    CHECK(sup_norm(gauss) == doctest::Approx(1.0));

    const FieldState zero(g);
    for (auto kind : {NormKind::l2, NormKind::lp, NormKind::h1, NormKind::sup}) CHECK(norm(zero, kind, 3.0) == 0.0);
}

TEST_CASE("Parseval, round trip and unit-modulus phase up to N = 8192") {
    for (std::size_t n : {16u, 256u, 1024u, 8192u}) {
        const auto g = make_grid(10, n);
        const auto f = random_field(g, static_cast<unsigned>(n));
        const double phys = l2_norm(f);
        CHECK(std::abs(l2_norm_spectral(f) - phys) <= 1e-12 * phys);

        const auto back = inverse_transform(g, forward_transform(f));
        CHECK(max_abs_diff(back, f) <= 1e-12 * sup_norm(f));

        const auto rotated = apply_multiplier(f, HalfWavePhase{1.234});
        CHECK(std::abs(l2_norm(rotated) - phys) <= 1e-12 * phys);
    }
}

TEST_CASE("non-finite input is rejected") {
    const auto g = make_grid(1, 8);
    FieldState f(g);
    f[3] = cplx(std::nan(""), 0);
    try {
        (void)apply_abs_derivative(f);
        FAIL("expected corrupt_state");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::corrupt_state);
    }
    CHECK_FALSE(f.finite());
}

TEST_CASE("two-dimensional plane wave") {
    const auto g = make_grid(pi, 16, 2);
    const auto wave = sample(g, [](double x, double y) { return std::exp(cplx(0, x + y)); });
    CHECK(max_abs_diff(apply_abs_derivative(wave), std::sqrt(2.0) * wave) < 1e-12);
    CHECK(l2_norm(wave) == doctest::Approx(2 * pi));
}

TEST_CASE("transforms are safe to call from several threads") {
    const auto g = make_grid(8, 512);
    const auto f = random_field(g, 3);
    const auto expected = apply_abs_derivative(f);
    std::vector<double> diffs(8, 1.0);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < diffs.size(); ++i)
            pool.emplace_back([&, i] {
                double worst = 0;
                for (int rep = 0; rep < 20; ++rep) worst = std::max(worst, max_abs_diff(apply_abs_derivative(f), expected));
                diffs[i] = worst;
            });
    }
    for (double d : diffs) CHECK(d == 0.0);
}
