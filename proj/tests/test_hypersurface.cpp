#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "icf/corpus.hpp"
#include "icf/hypersurface.hpp"
#include "icf/spaceform.hpp"

using namespace icf;

namespace {

ProfileGraph legendre_bump(int n, int eps, int N, double r0, double a2, double a3 = 0.0) {
    CorpusShape s;
    s.n = n;
    s.epsilon = eps;
    s.r0 = r0;
    s.coeffs = {{2, a2}, {3, a3}};
    return s.discretize(N);
}

}  // namespace

TEST_CASE("geodesic sphere curvature and area are exact") {
    for (int eps : {-1, 0, 1}) {
        for (int n : {3, 4, 5}) {
            const double r = (eps == 1) ? 0.8 : 1.3;
            const auto geo = geometry(ProfileGraph::sphere(n, SpaceForm(eps), 128, r));
            const SpaceForm form(eps);
            const double kexp = form.dlambda(r) / form.lambda(r);
            for (const auto& g : geo.nodes)
                for (double k : g.kappa) CHECK(k == Catch::Approx(kexp).epsilon(1e-10));
            const double aexp = unit_sphere_area(n - 1) * std::pow(form.lambda(r), n - 1);
            CHECK(geo.area() == Catch::Approx(aexp).epsilon(1e-9));
            for (int k = 1; k <= n - 1; ++k)
                CHECK(curvature_integral(geo, k) ==
                      Catch::Approx(aexp * std::pow(kexp, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("sphere quermassintegrals match the ball recursion") {
    for (int eps : {-1, 0, 1}) {
        const int n = 4;
        const double r = (eps == 1) ? 0.9 : 1.5;
        const auto geo = geometry(ProfileGraph::sphere(n, SpaceForm(eps), 128, r));
        const BallFunctions ball(n, SpaceForm(eps));
        const auto W = quermassintegrals(geo, n);
        for (int l = 0; l <= n; ++l)
            CHECK(W[l] == Catch::Approx(ball.quermassintegral(l, r)).epsilon(1e-9));
    }
}

TEST_CASE("euclidean enclosed volume against the radial closed form") {
    const int N = 256;
    const auto g = legendre_bump(3, 0, N, 1.0, 0.1, 0.05);
    const auto geo = geometry(g);
    // independent oracle: (2 pi / 3) int rho^3 sin(theta)
    double oracle = 0.0;
    const auto w = corrected_trapezoid_weights(N, M_PI / N);
    for (int i = 0; i <= N; ++i)
        oracle += w[i] * std::pow(g.rho[i], 3) * std::sin(i * M_PI / N);
    oracle *= 2.0 * M_PI / 3.0;
    CHECK(enclosed_volume(geo) == Catch::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("structural identity residuals vanish under refinement") {
    for (int eps : {-1, 0, 1}) {
        const double r0 = (eps == 1) ? 0.7 : 1.0;
        double prev = 1e300;
        for (int N : {64, 128, 256}) {
            const auto geo = geometry(legendre_bump(3, eps, N, r0, 0.08, 0.04));
            double worst = 0.0;
            for (int k = 1; k <= 2; ++k) {
                worst = std::max(worst, minkowski_residual(geo, k));
                worst = std::max(worst, divergence_identity_residual(geo, k));
            }
            worst = std::max(worst, hessian_identity_residual(geo));
            worst = std::max(worst, gradient_identity_residual(geo));
            CHECK(worst < prev);
            prev = worst;
        }
        CHECK(prev < 1e-8);
    }
}

TEST_CASE("residuals in higher ambient dimension") {
    const auto geo = geometry(legendre_bump(5, -1, 192, 1.0, 0.05));
    for (int k = 1; k <= 4; ++k) {
        CHECK(minkowski_residual(geo, k) < 1e-7);
        CHECK(divergence_identity_residual(geo, k) < 1e-7);
    }
}

TEST_CASE("convexity classification on spheres") {
    const auto hyp = geometry(ProfileGraph::sphere(3, SpaceForm(-1), 64, 1.0));
    const auto cls = convexity_classify(hyp);
    CHECK(cls.strictly_convex());
    CHECK(cls.h_convex());
    CHECK(cls.static_convex());
    // coth r - tanh r = 1 / (sinh cosh)
    CHECK(cls.static_margin ==
          Catch::Approx(1.0 / (std::sinh(1.0) * std::cosh(1.0))).epsilon(1e-9));
    const auto sph = geometry(ProfileGraph::sphere(3, SpaceForm(1), 64, 1.0));
    CHECK(convexity_classify(sph).strictly_convex());
    CHECK_FALSE(convexity_classify(sph).static_convex());  // r = 1 > pi/4
}

TEST_CASE("profile and lat-long representations agree") {
    for (int eps : {-1, 0, 1}) {
        const double r0 = (eps == 1) ? 0.7 : 1.0;
        CorpusShape s;
        s.n = 3;
        s.epsilon = eps;
        s.r0 = r0;
        s.coeffs = {{2, 0.08}, {4, 0.03}};
        const auto pgeo = geometry(s.discretize(512));
        const int NT = 192, NP = 384;
        std::vector<double> rho((NT + 1) * NP);
        for (int i = 0; i <= NT; ++i)
            for (int j = 0; j < NP; ++j) rho[std::size_t(i) * NP + j] = s.radius(i * M_PI / NT);
        const auto sgeo = geometry(SphereGraph(SpaceForm(eps), NT, NP, rho));
        CHECK(sgeo.area() == Catch::Approx(pgeo.area()).epsilon(2e-4));
        CHECK(curvature_integral(sgeo, 1) ==
              Catch::Approx(curvature_integral(pgeo, 1)).epsilon(2e-4));
        CHECK(curvature_integral(sgeo, 2) ==
              Catch::Approx(curvature_integral(pgeo, 2)).epsilon(2e-4));
        CHECK(enclosed_volume(sgeo) == Catch::Approx(enclosed_volume(pgeo)).epsilon(2e-4));
    }
}

TEST_CASE("corpus generation is deterministic and respects the margin floor") {
    CorpusSpec spec;
    spec.count = 5;
    spec.epsilon = -1;
    spec.seed = 99;
    spec.amplitude = 0.08;
    spec.N = 64;
    const auto a = corpus_generate(spec);
    const auto b = corpus_generate(spec);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].coeffs == b[i].coeffs);
        CHECK(a[i].margin >= spec.margin_floor);
    }
    spec.seed = 100;
    const auto c = corpus_generate(spec);
    CHECK(a[0].coeffs != c[0].coeffs);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(ProfileGraph(3, SpaceForm(-1), std::vector<double>(65, -1.0)),
                    std::domain_error);
    CHECK_THROWS_AS(ProfileGraph(2, SpaceForm(-1), std::vector<double>(65, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ProfileGraph(3, SpaceForm(1), std::vector<double>(65, 3.5)),
                    std::domain_error);
    CorpusSpec hopeless;
    hopeless.count = 1;
    hopeless.amplitude = 5.0;  // essentially always pierces the origin
    hopeless.max_attempts = 10;
    hopeless.N = 64;
    CHECK_THROWS_AS(corpus_generate(hopeless), std::runtime_error);
}
