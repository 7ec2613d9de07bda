#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "icf/math.hpp"
#include "icf/spaceform.hpp"
#include "icf/weight.hpp"

using namespace icf;

TEST_CASE("warp factors match the closed forms") {
    SpaceForm hyp(-1), euc(0), sph(1);
    CHECK(hyp.lambda(0.7) == Catch::Approx(std::sinh(0.7)).epsilon(1e-15));
    CHECK(euc.lambda(0.7) == 0.7);
    CHECK(sph.lambda(0.7) == Catch::Approx(std::sin(0.7)).epsilon(1e-15));
    CHECK(hyp.phi(1.3) == Catch::Approx(std::cosh(1.3) - 1.0).epsilon(1e-14));
    CHECK(euc.phi(1.3) == Catch::Approx(0.5 * 1.3 * 1.3).epsilon(1e-15));
    CHECK(sph.phi(1.3) == Catch::Approx(1.0 - std::cos(1.3)).epsilon(1e-14));
}

TEST_CASE("lambda' + eps Phi = 1 pointwise") {
    for (int eps : {-1, 0, 1}) {
        SpaceForm form(eps);
        Rng rng(42 + eps);
        const double hi = (eps == 1) ? M_PI - 1e-3 : 5.0;
        for (int i = 0; i < 2000; ++i) {
            const double r = rng.uniform(1e-6, hi);
            CHECK(std::abs(form.dlambda(r) + eps * form.phi(r) - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("unit sphere areas") {
    CHECK(unit_sphere_area(1) == Catch::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(unit_sphere_area(2) == Catch::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(unit_sphere_area(3) == Catch::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
    CHECK(unit_sphere_area(4) == Catch::Approx(8.0 * M_PI * M_PI / 3.0).epsilon(1e-14));
}

TEST_CASE("hyperbolic ball quermassintegrals") {
    BallFunctions ball(3, SpaceForm(-1));
    // closed forms in H^3: |B_r| = pi (sinh 2r - 2r), int H_1 = 2 pi sinh 2r
    const double r = 1.0;
    CHECK(ball.quermassintegral(0, r) ==
          Catch::Approx(M_PI * (std::sinh(2.0) - 2.0)).epsilon(1e-11));
    CHECK(ball.quermassintegral(1, r) ==
          Catch::Approx(4.0 * M_PI * std::sinh(1.0) * std::sinh(1.0) / 2.0).epsilon(1e-13));
    CHECK(ball.quermassintegral(2, r) ==
          Catch::Approx(M_PI * (std::sinh(2.0) + 2.0)).epsilon(1e-11));
    CHECK(ball.quermassintegral(3, r) == Catch::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
}

TEST_CASE("euclidean ball quermassintegrals close forms") {
    for (int n : {3, 4, 5}) {
        BallFunctions ball(n, SpaceForm(0));
        const double om = unit_sphere_area(n - 1);
        for (double r : {0.5, 1.0, 2.3}) {
            CHECK(ball.quermassintegral(0, r) == Catch::Approx(om * std::pow(r, n) / n).epsilon(1e-11));
            for (int l = 1; l < n; ++l)
                CHECK(ball.quermassintegral(l, r) ==
                      Catch::Approx(om * std::pow(r, n - l) / (n - l)).epsilon(1e-12));
        }
    }
}

TEST_CASE("comparison functions invert to the defining radius") {
    for (int eps : {-1, 0, 1}) {
        BallFunctions ball(4, SpaceForm(eps));
        const double r = (eps == 1) ? 0.9 : 1.7;
        CHECK(ball.invert([&](double s) { return ball.weighted_volume(s); },
                          ball.weighted_volume(r)) == Catch::Approx(r).epsilon(1e-9));
        CHECK(ball.invert([&](double s) { return ball.xi(s); }, ball.xi(r)) ==
              Catch::Approx(r).epsilon(1e-9));
        CHECK(ball.invert([&](double s) { return ball.quermassintegral(2, s); },
                          ball.quermassintegral(2, r)) == Catch::Approx(r).epsilon(1e-9));
    }
}

TEST_CASE("weighted sphere integral matches direct evaluation") {
    BallFunctions ball(5, SpaceForm(-1));
    const auto f = make_weight("pow:2");
    const double r = 1.2;
    const Warp w = SpaceForm(-1).warp(r);
    const double expect = unit_sphere_area(4) * std::pow(w.lambda, 4) * w.phi * w.phi *
                          std::pow(w.dlambda / w.lambda, 2);
    CHECK(ball.chi_k(2, f, r) == Catch::Approx(expect).epsilon(1e-13));
}

TEST_CASE("minkowski comparison function is increasing") {
    for (int eps : {-1, 1}) {
        BallFunctions ball(3, SpaceForm(eps));
        const auto f = make_weight("pow:2");
        double prev = 0.0;
        const double hi = (eps == 1) ? 0.5 * M_PI - 1e-3 : 3.0;
        for (int i = 1; i <= 40; ++i) {
            const double cur = ball.chi_minkowski(f, i * hi / 40.0);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("admissibility registry") {
    CHECK(admissibility(make_weight("pow:2"), 2, 0.1, 3.0).order_k);
    CHECK(admissibility(make_weight("affpow:2"), 2, 0.1, 3.0).order_k);
    CHECK(admissibility(make_weight("exppow:2"), 2, 0.1, 3.0).order_k);
    CHECK(admissibility(make_weight("pow:3"), 3, 0.1, 3.0).order_k);
    CHECK_FALSE(admissibility(make_weight("pow:1.2"), 2, 0.1, 3.0).order_k);
    CHECK(admissibility(make_weight("pow:1"), 1, 0.1, 3.0).ratio);
    CHECK(admissibility(make_weight("const:1"), 1, 0.1, 3.0).basic);
    CHECK_FALSE(admissibility(make_weight("const:1"), 1, 0.1, 3.0).ratio);
    CHECK(admissibility(make_weight("pow:2"), 2, 0.1, 3.0).deriv_consistency < 1e-7);
    CHECK_THROWS_AS(make_weight("spline:2"), std::invalid_argument);
}

TEST_CASE("corrected trapezoid integrates smooth periodic-free data to high order") {
    auto value = [](int N) {
        const double h = 1.0 / N;
        const auto w = corrected_trapezoid_weights(N, h);
        double s = 0.0;
        for (int i = 0; i <= N; ++i) s += w[i] * std::exp(i * h);
        return s;
    };
    const double exact = std::exp(1.0) - 1.0;
    const double e64 = std::abs(value(64) - exact);
    const double e128 = std::abs(value(128) - exact);
    CHECK(e128 < e64 / 40.0);  // order > 5
    CHECK(e128 < 1e-13);
}

TEST_CASE("prefix integrals agree with adaptive quadrature") {
    std::vector<double> xs{0.3, 1.7, 0.9, 1.7, 0.05};
    auto g = [](double s) { return std::cos(s) * s + 1.0; };
    const auto pre = prefix_integrals(xs, g);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(pre[i] == Catch::Approx(adaptive_quad(g, 0.0, xs[i], 1e-13)).epsilon(1e-12));
}
