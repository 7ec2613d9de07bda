#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icf/math.hpp"
#include "icf/spaceform.hpp"
#include "icf/symfunc.hpp"
#include "icf/weight.hpp"

namespace icf {

inline constexpr double kMinRho = 1e-6;  // origin must be strictly enclosed

/// Rotationally symmetric radial graph: rho(theta_i) on the uniform grid
/// theta_i = i pi / N, representing {(rho(theta), theta, omega)} in N^n(eps).
struct ProfileGraph {
    int n = 3;
    SpaceForm form;
    std::vector<double> rho;  // N+1 nodes

    ProfileGraph() = default;
    ProfileGraph(int n_, SpaceForm form_, std::vector<double> rho_)
        : n(n_), form(form_), rho(std::move(rho_)) {
        validate();
    }

    static ProfileGraph sphere(int n, SpaceForm form, int N, double r) {
        return ProfileGraph(n, form, std::vector<double>(N + 1, r));
    }

    int N() const { return int(rho.size()) - 1; }
    double dtheta() const { return M_PI / N(); }
    double theta(int i) const { return i * dtheta(); }

    // Even reflection across both poles.
    double at(int i) const {
        const int N_ = N();
        if (i < 0) i = -i;
        if (i > N_) i = 2 * N_ - i;
        return rho[i];
    }

    void validate() const {
        if (n < 3) throw std::invalid_argument("ProfileGraph: n >= 3 required");
        if (rho.size() < 9) throw std::invalid_argument("ProfileGraph: too few nodes");
        for (double r : rho) {
            if (!std::isfinite(r) || r < kMinRho)
                throw std::domain_error("ProfileGraph: rho must be finite and > 1e-6");
            form.check_radius(r);
        }
    }
};

/// Full latitude-longitude graph over S^2 (ambient dimension fixed to 3).
/// Cross-check representation; pole rows are synchronized across longitudes.
struct SphereGraph {
    SpaceForm form;
    int Ntheta = 0, Nphi = 0;
    std::vector<double> rho;  // (Ntheta+1) * Nphi, row-major in theta

    SphereGraph() = default;
    SphereGraph(SpaceForm form_, int Ntheta_, int Nphi_, std::vector<double> rho_)
        : form(form_), Ntheta(Ntheta_), Nphi(Nphi_), rho(std::move(rho_)) {
        if (Ntheta < 8 || Nphi < 8 || Nphi % 2 != 0)
            throw std::invalid_argument("SphereGraph: need Ntheta >= 8 and even Nphi >= 8");
        if (int(rho.size()) != (Ntheta + 1) * Nphi)
            throw std::invalid_argument("SphereGraph: grid size mismatch");
        synchronize_poles();
        for (double r : rho)
            if (!std::isfinite(r) || r < kMinRho)
                throw std::domain_error("SphereGraph: rho must be finite and > 1e-6");
    }

    double dtheta() const { return M_PI / Ntheta; }
    double dphi() const { return 2.0 * M_PI / Nphi; }
    double& ref(int i, int j) { return rho[std::size_t(i) * Nphi + j]; }
    double val(int i, int j) const {
        j = ((j % Nphi) + Nphi) % Nphi;
        if (i < 0) return rho[std::size_t(-i) * Nphi + (j + Nphi / 2) % Nphi];
        if (i > Ntheta) return rho[std::size_t(2 * Ntheta - i) * Nphi + (j + Nphi / 2) % Nphi];
        return rho[std::size_t(i) * Nphi + j];
    }

    void synchronize_poles() {
        for (int i : {0, Ntheta}) {
            double m = 0.0;
            for (int j = 0; j < Nphi; ++j) m += ref(i, j);
            m /= Nphi;
            for (int j = 0; j < Nphi; ++j) ref(i, j) = m;
        }
    }
};

/// Per-node first/second fundamental data and quadrature weights.
struct GeoNode {
    double theta = 0.0, rho = 0.0, rhop = 0.0, rhopp = 0.0;
    double lambda = 0.0, dlambda = 0.0, phi = 0.0;
    double v = 1.0, u = 0.0;
    std::vector<double> kappa;   // n-1 principal curvatures (profile: mer, az...)
    std::vector<double> sigma;   // sigma_0..sigma_{n-1}
    double area_weight = 0.0;    // dmu weight
    double solid_weight = 0.0;   // unit-sphere dsigma weight (radial quadrature)
    double grad_phi_sq = 0.0;    // |nabla Phi|^2
    double g_tt = 0.0;           // profile meridian metric coefficient
    double h_tt = 0.0;           // profile meridian second fundamental form
    double h_az = 0.0;           // azimuthal h per unit round metric
};

struct PointwiseGeometry {
    int n = 3;
    SpaceForm form;
    bool profile = true;
    double dtheta = 0.0;
    std::vector<GeoNode> nodes;

    double H(const GeoNode& g, int k) const { return g.sigma[k] / binomial(n - 1, k); }
    double area() const {
        double a = 0.0;
        for (const auto& g : nodes) a += g.area_weight;
        return a;
    }
    double kappa_min() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& g : nodes)
            for (double k : g.kappa) m = std::min(m, k);
        return m;
    }
    double kappa_max() const {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& g : nodes)
            for (double k : g.kappa) m = std::max(m, k);
        return m;
    }
};

/// Curvature pipeline for the profile representation. Fourth-order central
/// differences with even reflection at the poles; Euler-Maclaurin corrected
/// trapezoid weights in theta.
inline PointwiseGeometry geometry(const ProfileGraph& g) {
    g.validate();
    const int N = g.N(), n = g.n, m = n - 1;
    const double dt = g.dtheta();
    const double om2 = unit_sphere_area(n - 2);
    const auto w = corrected_trapezoid_weights(N, dt);

    PointwiseGeometry geo;
    geo.n = n;
    geo.form = g.form;
    geo.profile = true;
    geo.dtheta = dt;
    geo.nodes.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        GeoNode& nd = geo.nodes[i];
        nd.theta = g.theta(i);
        nd.rho = g.rho[i];
        // grouped so that constant data cancels exactly in floating point
        nd.rhop = (8.0 * (g.at(i + 1) - g.at(i - 1)) - (g.at(i + 2) - g.at(i - 2))) / (12.0 * dt);
        nd.rhopp = (16.0 * ((g.at(i + 1) - g.at(i)) + (g.at(i - 1) - g.at(i))) -
                    ((g.at(i + 2) - g.at(i)) + (g.at(i - 2) - g.at(i)))) /
                   (12.0 * dt * dt);
        if (!std::isfinite(nd.rhop) || !std::isfinite(nd.rhopp))
            throw std::domain_error("geometry: non-finite derivatives");
        const Warp wp = g.form.warp(nd.rho);
        nd.lambda = wp.lambda;
        nd.dlambda = wp.dlambda;
        nd.phi = wp.phi;
        const double lam = wp.lambda, dlam = wp.dlambda;
        nd.v = std::sqrt(1.0 + nd.rhop * nd.rhop / (lam * lam));
        nd.u = lam / nd.v;
        nd.g_tt = lam * lam + nd.rhop * nd.rhop;
        nd.h_tt = (lam * dlam + 2.0 * dlam * nd.rhop * nd.rhop / lam - nd.rhopp) / nd.v;
        const double kmer = nd.h_tt / nd.g_tt;
        const double st = std::sin(nd.theta), ct = std::cos(nd.theta);
        double kaz;
        if (i == 0 || i == N) {
            kaz = kmer;  // umbilic limit at the poles
            nd.h_az = 0.0;
        } else {
            nd.h_az = (lam * dlam * st * st - st * ct * nd.rhop) / nd.v;
            kaz = nd.h_az / (lam * lam * st * st);
        }
        nd.kappa.assign(m, kaz);
        nd.kappa[0] = kmer;
        nd.sigma = sigma_all(nd.kappa);
        nd.grad_phi_sq = lam * lam * nd.rhop * nd.rhop / nd.g_tt;
        const double snm2 = (n == 3) ? st : std::pow(st, n - 2);
        nd.solid_weight = om2 * w[i] * snm2;
        nd.area_weight = nd.solid_weight * std::pow(lam, n - 2) * lam * nd.v;
    }
    return geo;
}

/// Curvature pipeline for the lat-long S^2 grid (second-order differences).
inline PointwiseGeometry geometry(const SphereGraph& g) {
    const int NT = g.Ntheta, NP = g.Nphi;
    const double dt = g.dtheta(), dp = g.dphi();
    const auto wt = corrected_trapezoid_weights(NT, dt);

    PointwiseGeometry geo;
    geo.n = 3;
    geo.form = g.form;
    geo.profile = false;
    geo.dtheta = dt;
    geo.nodes.resize(std::size_t(NT + 1) * NP);
    for (int i = 0; i <= NT; ++i) {
        const double th = i * dt, st = std::sin(th), ct = std::cos(th);
        for (int j = 0; j < NP; ++j) {
            GeoNode& nd = geo.nodes[std::size_t(i) * NP + j];
            nd.theta = th;
            nd.rho = g.val(i, j);
            const Warp wp = g.form.warp(nd.rho);
            nd.lambda = wp.lambda;
            nd.dlambda = wp.dlambda;
            nd.phi = wp.phi;
            const double lam = wp.lambda, dlam = wp.dlambda;
            nd.solid_weight = wt[i] * dp * st;
            if (i == 0 || i == NT) {
                // smooth pole: treated as umbilic to leading order; the area
                // weight vanishes so this only feeds the margin fields
                nd.v = 1.0;
                nd.u = lam;
                nd.kappa.assign(2, dlam / lam);
                nd.sigma = sigma_all(nd.kappa);
                nd.area_weight = 0.0;
                continue;
            }
            const double rt = (g.val(i + 1, j) - g.val(i - 1, j)) / (2.0 * dt);
            const double rp = (g.val(i, j + 1) - g.val(i, j - 1)) / (2.0 * dp);
            const double rtt = (g.val(i + 1, j) - 2.0 * nd.rho + g.val(i - 1, j)) / (dt * dt);
            const double rpp = (g.val(i, j + 1) - 2.0 * nd.rho + g.val(i, j - 1)) / (dp * dp);
            const double rtp = (g.val(i + 1, j + 1) - g.val(i + 1, j - 1) - g.val(i - 1, j + 1) +
                                g.val(i - 1, j - 1)) /
                               (4.0 * dt * dp);
            const double grad2 = rt * rt + rp * rp / (st * st);
            nd.v = std::sqrt(1.0 + grad2 / (lam * lam));
            nd.u = lam / nd.v;
            const double g11 = lam * lam + rt * rt;
            const double g12 = rt * rp;
            const double g22 = lam * lam * st * st + rp * rp;
            const double detg = g11 * g22 - g12 * g12;
            const double hess_tt = rtt;
            const double hess_tp = rtp - (ct / st) * rp;
            const double hess_pp = rpp + st * ct * rt;
            const double h11 = (lam * dlam + 2.0 * dlam * rt * rt / lam - hess_tt) / nd.v;
            const double h12 = (2.0 * dlam * rt * rp / lam - hess_tp) / nd.v;
            const double h22 = (lam * dlam * st * st + 2.0 * dlam * rp * rp / lam - hess_pp) / nd.v;
            const double trA = (g22 * h11 - 2.0 * g12 * h12 + g11 * h22) / detg;
            const double detA = (h11 * h22 - h12 * h12) / detg;
            const double disc = std::sqrt(std::max(0.0, 0.25 * trA * trA - detA));
            nd.kappa = {0.5 * trA - disc, 0.5 * trA + disc};
            nd.sigma = sigma_all(nd.kappa);
            nd.grad_phi_sq =
                lam * lam * (g22 * rt * rt - 2.0 * g12 * rt * rp + g11 * rp * rp) / detg;
            nd.area_weight = wt[i] * dp * std::sqrt(detg);
        }
    }
    return geo;
}

// ---------------------------------------------------------------------------
// Surface and bulk integrals
// ---------------------------------------------------------------------------

inline double curvature_integral(const PointwiseGeometry& geo, int k) {
    if (k < 0 || k > geo.n - 1) throw std::invalid_argument("curvature_integral: order");
    double s = 0.0;
    for (const auto& g : geo.nodes) s += geo.H(g, k) * g.area_weight;
    return s;
}

inline double weighted_curvature_integral(const PointwiseGeometry& geo, int k,
                                          const WeightFunction& f) {
    if (k < 0 || k > geo.n - 1) throw std::invalid_argument("weighted_curvature_integral: order");
    double s = 0.0;
    for (const auto& g : geo.nodes) {
        if (!(g.phi > 0.0))
            throw std::domain_error("weighted_curvature_integral: Phi <= 0 at a node");
        s += f(g.phi) * geo.H(g, k) * g.area_weight;
    }
    return s;
}

/// Enclosed volume by radial quadrature int_{S^{n-1}} int_0^{rho} lambda^{n-1}.
inline double enclosed_volume(const PointwiseGeometry& geo) {
    std::vector<double> targets;
    targets.reserve(geo.nodes.size());
    for (const auto& g : geo.nodes) targets.push_back(g.rho);
    const SpaceForm form = geo.form;
    const int n = geo.n;
    const auto prefix = prefix_integrals(
        targets, [form, n](double s) { return std::pow(form.lambda(s), n - 1); });
    double vol = 0.0;
    for (std::size_t i = 0; i < geo.nodes.size(); ++i)
        vol += geo.nodes[i].solid_weight * prefix[i];
    return vol;
}

struct BulkIntegrals {
    double volume;
    double lambda_weighted;  // int_Omega lambda' dv
    double f_weighted;       // int_Omega f(Phi) dv
};

inline BulkIntegrals bulk_integrals(const PointwiseGeometry& geo, const WeightFunction& f) {
    BulkIntegrals b{};
    b.volume = enclosed_volume(geo);
    const SpaceForm form = geo.form;
    const int n = geo.n;
    // d/dr (lambda^n / n) = lambda' lambda^{n-1}: exact inner antiderivative
    for (const auto& g : geo.nodes)
        b.lambda_weighted += g.solid_weight * std::pow(g.lambda, n) / n;
    std::vector<double> targets;
    targets.reserve(geo.nodes.size());
    for (const auto& g : geo.nodes) targets.push_back(g.rho);
    const auto prefix = prefix_integrals(targets, [form, n, &f](double s) {
        return f(form.phi(s)) * std::pow(form.lambda(s), n - 1);
    });
    for (std::size_t i = 0; i < geo.nodes.size(); ++i)
        b.f_weighted += geo.nodes[i].solid_weight * prefix[i];
    return b;
}

/// W_0..W_{up_to} by the quermassintegral recursion with the eps-term.
inline std::vector<double> quermassintegrals(const PointwiseGeometry& geo, int up_to) {
    const int n = geo.n;
    if (up_to < 0 || up_to > n) throw std::invalid_argument("quermassintegrals: order");
    std::vector<double> W(up_to + 1, 0.0);
    W[0] = enclosed_volume(geo);
    if (up_to >= 1) W[1] = geo.area() / (n - 1);
    for (int k = 1; k <= up_to - 1; ++k) {
        if (k + 1 == n) {
            W[k + 1] = unit_sphere_area(n - 1) / n;
            continue;
        }
        W[k + 1] =
            (curvature_integral(geo, k) + geo.form.epsilon * double(k) * W[k - 1]) /
            double(n - 1 - k);
    }
    return W;
}

// ---------------------------------------------------------------------------
// Convexity classification
// ---------------------------------------------------------------------------

struct ConvexityReport {
    double strict_margin;       // min kappa
    double static_margin;       // min (kappa - u / lambda')
    double h_margin;            // min (kappa - 1)
    std::vector<double> cone_margin;  // index k: min over nodes of min_{j<=k} sigma_j
    bool strictly_convex() const { return strict_margin > 0.0; }
    bool static_convex() const { return static_margin > 0.0; }
    bool h_convex() const { return h_margin > 0.0; }
    bool k_convex(int k) const { return cone_margin[k] > 0.0; }
};

inline ConvexityReport convexity_classify(const PointwiseGeometry& geo) {
    ConvexityReport r;
    r.strict_margin = r.static_margin = r.h_margin = std::numeric_limits<double>::infinity();
    r.cone_margin.assign(geo.n, std::numeric_limits<double>::infinity());
    for (const auto& g : geo.nodes) {
        double kmin = *std::min_element(g.kappa.begin(), g.kappa.end());
        r.strict_margin = std::min(r.strict_margin, kmin);
        r.h_margin = std::min(r.h_margin, kmin - 1.0);
        r.static_margin = std::min(r.static_margin, kmin - g.u / g.dlambda);
        double running = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= geo.n - 1; ++k) {
            running = std::min(running, g.sigma[k]);
            r.cone_margin[k] = std::min(r.cone_margin[k], running);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Structural identity residuals (validation oracles for the discretization)
// ---------------------------------------------------------------------------

/// | int u H_k - int lambda' H_{k-1} | relative to the mean magnitude.
inline double minkowski_residual(const PointwiseGeometry& geo, int k) {
    if (k < 1 || k > geo.n - 1) throw std::invalid_argument("minkowski_residual: order");
    double a = 0.0, b = 0.0;
    for (const auto& g : geo.nodes) {
        a += g.u * geo.H(g, k) * g.area_weight;
        b += g.dlambda * geo.H(g, k - 1) * g.area_weight;
    }
    return std::abs(a - b) / (0.5 * (std::abs(a) + std::abs(b)));
}

/// Residual of the integrated divergence identity:
/// int [(n-k) lambda' sigma_{k-1} - k sigma_k u] dmu = 0 on closed surfaces.
inline double divergence_identity_residual(const PointwiseGeometry& geo, int k) {
    if (k < 1 || k > geo.n - 1)
        throw std::invalid_argument("divergence_identity_residual: order");
    const int n = geo.n;
    double num = 0.0, scale = 0.0;
    for (const auto& g : geo.nodes) {
        const double t1 = (n - k) * g.dlambda * g.sigma[k - 1];
        const double t2 = double(k) * g.sigma[k] * g.u;
        num += (t1 - t2) * g.area_weight;
        scale += (std::abs(t1) + std::abs(t2)) * g.area_weight;
    }
    return std::abs(num) / (0.5 * scale);
}

/// Integrated componentwise residual of Hess Phi = lambda' g - u h (profile).
inline double hessian_identity_residual(const PointwiseGeometry& geo) {
    if (!geo.profile) throw std::invalid_argument("hessian_identity_residual: profile only");
    const int n = geo.n, N = int(geo.nodes.size()) - 1;
    double num = 0.0, area = 0.0, scale = 0.0;
    for (int i = 0; i <= N; ++i) {
        const GeoNode& g = geo.nodes[i];
        const double lam = g.lambda, dlam = g.dlambda;
        // theta-theta component
        const double dphi = lam * g.rhop;
        const double ddphi = dlam * g.rhop * g.rhop + lam * g.rhopp;
        const double gamma_ttt = (lam * dlam * g.rhop + g.rhop * g.rhopp) / g.g_tt;
        const double hess_tt = ddphi - gamma_ttt * dphi;
        const double target_tt = dlam * g.g_tt - g.u * g.h_tt;
        double e = std::abs(hess_tt - target_tt) / g.g_tt;
        // azimuthal component per unit round metric
        const double st = std::sin(g.theta), ct = std::cos(g.theta);
        if (i != 0 && i != N) {
            const double g_az = lam * lam * st * st;
            const double hess_az =
                (lam * dlam * g.rhop * st * st + lam * lam * st * ct) / g.g_tt * dphi;
            const double target_az = dlam * g_az - g.u * g.h_az;
            e += (n - 2) * std::abs(hess_az - target_az) / g_az;
        }
        num += e * g.area_weight;
        area += g.area_weight;
        scale = std::max(scale, dlam);
    }
    return num / (area * scale);
}

/// Integrated residual of grad u = h(grad Phi) on profile graphs.
inline double gradient_identity_residual(const PointwiseGeometry& geo) {
    if (!geo.profile) throw std::invalid_argument("gradient_identity_residual: profile only");
    const int N = int(geo.nodes.size()) - 1;
    const double dt = geo.dtheta;
    auto uat = [&](int i) {
        if (i < 0) i = -i;
        if (i > N) i = 2 * N - i;
        return geo.nodes[i].u;
    };
    double num = 0.0, area = 0.0, scale = 0.0;
    for (int i = 0; i <= N; ++i) {
        const GeoNode& g = geo.nodes[i];
        const double du =
            (8.0 * (uat(i + 1) - uat(i - 1)) - (uat(i + 2) - uat(i - 2))) / (12.0 * dt);
        const double target = g.kappa[0] * g.lambda * g.rhop;  // h_theta^theta dPhi
        num += std::abs(du - target) * g.area_weight;
        area += g.area_weight;
        scale = std::max(scale, std::abs(g.u) + g.dlambda);
    }
    return num / (area * scale);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline nlohmann::json shape_to_json(const ProfileGraph& g) {
    return {{"epsilon", g.form.epsilon},
            {"n", g.n},
            {"representation", "profile"},
            {"N", g.N()},
            {"rho", g.rho},
            {"metadata", nlohmann::json::object()}};
}

inline nlohmann::json shape_to_json(const SphereGraph& g) {
    return {{"epsilon", g.form.epsilon},
            {"n", 3},
            {"representation", "sphere"},
            {"N", nlohmann::json{{"theta", g.Ntheta}, {"phi", g.Nphi}}},
            {"rho", g.rho},
            {"metadata", nlohmann::json::object()}};
}

inline ProfileGraph profile_from_json(const nlohmann::json& j) {
    if (j.at("representation") != "profile")
        throw std::invalid_argument("profile_from_json: not a profile shape");
    return ProfileGraph(j.at("n").get<int>(), SpaceForm(j.at("epsilon").get<int>()),
                        j.at("rho").get<std::vector<double>>());
}

inline SphereGraph sphere_from_json(const nlohmann::json& j) {
    if (j.at("representation") != "sphere")
        throw std::invalid_argument("sphere_from_json: not a sphere-grid shape");
    return SphereGraph(SpaceForm(j.at("epsilon").get<int>()), j.at("N").at("theta").get<int>(),
                       j.at("N").at("phi").get<int>(), j.at("rho").get<std::vector<double>>());
}

}  // namespace icf
