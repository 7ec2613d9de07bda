#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icf/hypersurface.hpp"
#include "icf/io.hpp"
#include "icf/weight.hpp"

namespace icf {

struct FlowTolerances {
    double monotonicity_slack = 1e-8;  // relative, per sample interval
    double roundness_stop = 1e-3;      // curvature pinching threshold
};

struct FlowConfig {
    int k = 1;                  // flow order, 1 <= k <= n-1
    double dt_init = 1e-2;      // step cap
    double cfl = 0.4;           // parabolic step-control factor
    double t_max = 50.0;
    int sample_every = 10;      // steps between monitor samples
    FlowTolerances tol;
    WeightFunction weight = make_weight("pow:2");
    std::vector<WeightFunction> extra_weights;  // monitor-only companions

    std::vector<WeightFunction> all_weights() const {
        std::vector<WeightFunction> w{weight};
        w.insert(w.end(), extra_weights.begin(), extra_weights.end());
        return w;
    }
};

struct FlowSample {
    double t = 0.0;
    std::vector<double> W;        // W_0..W_k
    double area = 0.0;
    std::vector<double> wk;       // int f(Phi) H_k per weight
    std::vector<double> w1;       // int f(Phi) H_1 per weight
    std::vector<double> bulk_f;   // int_Omega f(Phi) per weight
    std::vector<double> combo;    // w1 + eps * bulk_f
    double bulk_lambda = 0.0;     // int_Omega lambda'
    double static_margin = 0.0, h_margin = 0.0, strict_margin = 0.0;
    double pinch = 0.0, osc = 0.0, max_speed = 0.0;
};

struct FlowRun {
    FlowConfig cfg;
    int n = 3;
    int epsilon = -1;
    std::vector<FlowSample> samples;
    bool converged = false;
    double r_inf = 0.0;
    std::string reason;
    std::vector<std::string> diagnostics;
};

/// Normal speed F = H_{k-1}/H_k - u/lambda' of the locally constrained
/// inverse curvature flow; identically zero on centered geodesic spheres.
inline std::vector<double> flow_speed(const PointwiseGeometry& geo, int k) {
    if (k < 1 || k > geo.n - 1) throw std::invalid_argument("flow_speed: order out of range");
    const double cr = binomial(geo.n - 1, k) / binomial(geo.n - 1, k - 1);
    std::vector<double> F(geo.nodes.size());
    std::vector<int> bad;
    for (std::size_t i = 0; i < geo.nodes.size(); ++i) {
        const GeoNode& g = geo.nodes[i];
        if (!(g.sigma[k] > 0.0)) {
            bad.push_back(int(i));
            continue;
        }
        F[i] = cr * g.sigma[k - 1] / g.sigma[k] - g.u / g.dlambda;
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "flow_speed: H_" << k << " <= 0 at nodes";
        for (std::size_t i = 0; i < bad.size() && i < 8; ++i) os << ' ' << bad[i];
        throw std::domain_error(os.str());
    }
    return F;
}

namespace detail {

// Radial right-hand side d rho/dt = F v on the profile grid.
inline std::vector<double> radial_rhs(const ProfileGraph& g, int k) {
    const PointwiseGeometry geo = geometry(g);
    const auto F = flow_speed(geo, k);
    std::vector<double> rhs(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs[i] = F[i] * geo.nodes[i].v;
    return rhs;
}

// Parabolic step bound: the linearized speed diffuses with coefficient
// |dQ/d kappa_mer| / (v^2 lambda^2), Q = H_{k-1}/H_k.
inline double diffusivity(const PointwiseGeometry& geo, int k) {
    const int m = geo.n - 1;
    const double cr = binomial(m, k) / binomial(m, k - 1);
    double dmax = 0.0;
    for (const auto& g : geo.nodes) {
        const double kaz = g.kappa.back();
        // deleted-meridian sigmas of (m-1) copies of kaz
        auto sdel = [&](int j) {
            return (j < 0 || j > m - 1) ? 0.0 : binomial(m - 1, j) * std::pow(kaz, j);
        };
        const double dq =
            cr * (sdel(k - 2) * g.sigma[k] - sdel(k - 1) * g.sigma[k - 1]) / (g.sigma[k] * g.sigma[k]);
        dmax = std::max(dmax, std::abs(dq) / (g.v * g.v * g.lambda * g.lambda));
    }
    // include the Nyquist symbol 16/3 of the fourth-order second difference,
    // so cfl is measured against the explicit stability limit
    return dmax * (16.0 / 3.0);
}

inline bool acceptable(const ProfileGraph& g, int epsilon, double guard) {
    for (double r : g.rho)
        if (!std::isfinite(r) || r < kMinRho) return false;
    if (epsilon == 1) {
        for (double r : g.rho)
            if (r >= 0.5 * M_PI - 1e-3) return false;
    }
    const auto cls = convexity_classify(geometry(g));
    if (epsilon == -1 && cls.static_margin < -guard) return false;
    if (epsilon == 1 && cls.strict_margin < -guard) return false;
    return true;
}

}  // namespace detail

/// One explicit RK4 update of rho with right-hand side F v. Throws
/// std::runtime_error on guard violation (callers halve dt and retry).
inline ProfileGraph flow_step(const ProfileGraph& g, const FlowConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("flow_step: dt <= 0");
    auto advanced = [&](const std::vector<double>& base, const std::vector<double>& slope,
                        double h) {
        std::vector<double> r(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) r[i] = base[i] + h * slope[i];
        return ProfileGraph(g.n, g.form, std::move(r));
    };
    const auto k1 = detail::radial_rhs(g, cfg.k);
    const auto k2 = detail::radial_rhs(advanced(g.rho, k1, 0.5 * dt), cfg.k);
    const auto k3 = detail::radial_rhs(advanced(g.rho, k2, 0.5 * dt), cfg.k);
    const auto k4 = detail::radial_rhs(advanced(g.rho, k3, dt), cfg.k);
    std::vector<double> r(g.rho.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = g.rho[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    ProfileGraph out(g.n, g.form, std::move(r));
    if (!detail::acceptable(out, g.form.epsilon, cfg.tol.monotonicity_slack))
        throw std::runtime_error("flow_step: guard violation, dt too large");
    return out;
}

inline FlowSample flow_sample(const PointwiseGeometry& geo, const FlowConfig& cfg, double t) {
    FlowSample s;
    s.t = t;
    s.W = quermassintegrals(geo, std::min(cfg.k, geo.n));
    s.area = geo.area();
    for (const auto& f : cfg.all_weights()) {
        s.wk.push_back(weighted_curvature_integral(geo, cfg.k, f));
        s.w1.push_back(weighted_curvature_integral(geo, 1, f));
        const auto b = bulk_integrals(geo, f);
        s.bulk_f.push_back(b.f_weighted);
        s.bulk_lambda = b.lambda_weighted;
        s.combo.push_back(s.w1.back() + geo.form.epsilon * s.bulk_f.back());
    }
    const auto cls = convexity_classify(geo);
    s.static_margin = cls.static_margin;
    s.h_margin = cls.h_margin;
    s.strict_margin = cls.strict_margin;
    const double kmin = geo.kappa_min(), kmax = geo.kappa_max();
    s.pinch = kmax / kmin - 1.0;
    double rmin = 1e300, rmax = -1e300;
    for (const auto& g : geo.nodes) {
        rmin = std::min(rmin, g.rho);
        rmax = std::max(rmax, g.rho);
    }
    s.osc = rmax - rmin;
    double mf = 0.0;
    for (double f : flow_speed(geo, cfg.k)) mf = std::max(mf, std::abs(f));
    s.max_speed = mf;
    return s;
}

/// Integrate the flow until the pinching roundness drops below the stop
/// threshold or t_max is reached, sampling the monitored functionals.
inline FlowRun flow_run(ProfileGraph g, const FlowConfig& cfg) {
    FlowRun run;
    run.cfg = cfg;
    run.n = g.n;
    run.epsilon = g.form.epsilon;
    if (cfg.k < 1 || cfg.k > g.n - 1) throw std::invalid_argument("flow_run: order out of range");

    PointwiseGeometry geo = geometry(g);
    const auto cls0 = convexity_classify(geo);
    if (g.form.epsilon == -1 && !(cls0.static_margin > 0.0))
        throw std::domain_error("flow_run: initial hypersurface is not static convex");
    if (g.form.epsilon == 1) {
        if (cfg.k != 1) throw std::domain_error("flow_run: spherical flows require k = 1");
        if (!(cls0.strict_margin > 0.0))
            throw std::domain_error("flow_run: initial hypersurface is not strictly convex");
        for (double r : g.rho)
            if (r >= 0.5 * M_PI - 0.02)
                throw std::domain_error("flow_run: initial data must stay inside the hemisphere");
    }
    if (g.form.epsilon == 0 && !(cls0.cone_margin[cfg.k] > 0.0))
        throw std::domain_error("flow_run: initial hypersurface is not k-convex");

    run.samples.push_back(flow_sample(geo, cfg, 0.0));
    double t = 0.0;
    long steps = 0;
    bool convexity_lost = false;
    while (t < cfg.t_max) {
        if (run.samples.back().pinch < cfg.tol.roundness_stop && steps > 0) {
            run.converged = true;
            run.reason = "roundness below stop threshold";
            break;
        }
        const double dth = g.dtheta();
        double dt = std::min(cfg.dt_init,
                             cfg.cfl * dth * dth / std::max(1e-12, detail::diffusivity(geo, cfg.k)));
        dt = std::min(dt, cfg.t_max - t);
        bool advanced = false;
        for (int attempt = 0; attempt < 30 && !advanced; ++attempt) {
            try {
                ProfileGraph next = flow_step(g, cfg, dt);
                g = std::move(next);
                advanced = true;
            } catch (const std::exception&) {
                dt *= 0.5;
            }
        }
        if (!advanced) {
            run.reason = "step rejection cascade, dt underflow";
            break;
        }
        t += dt;
        ++steps;
        geo = geometry(g);
        if (!convexity_lost) {
            const auto cls = convexity_classify(geo);
            const bool lost = (g.form.epsilon == -1) ? cls.static_margin <= 0.0
                                                     : cls.strict_margin <= 0.0;
            if (lost) {
                convexity_lost = true;
                run.diagnostics.push_back("convexity margin lost at t=" + fmt17(t));
            }
        }
        if (steps % cfg.sample_every == 0) run.samples.push_back(flow_sample(geo, cfg, t));
    }
    if (run.samples.back().t < t) run.samples.push_back(flow_sample(geo, cfg, t));
    if (!run.converged && run.reason.empty()) run.reason = "t_max reached";
    if (run.converged || run.samples.back().pinch < cfg.tol.roundness_stop) run.converged = true;
    double rsum = 0.0;
    for (double r : g.rho) rsum += r;
    run.r_inf = rsum / g.rho.size();
    return run;
}

// ---------------------------------------------------------------------------
// Evolution-equation residuals
// ---------------------------------------------------------------------------

/// Right-hand side of the weighted evolution identity for d/dt int f(Phi) H_k:
/// quadrature of the analytic integrand against the actual flow speed.
inline double evolution_rhs(const PointwiseGeometry& geo, int k, const WeightFunction& f,
                            const std::vector<double>& F) {
    const int n = geo.n, m = n - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < geo.nodes.size(); ++i) {
        const GeoNode& g = geo.nodes[i];
        const double fv = f.f(g.phi), fpv = f.fp(g.phi), fppv = f.fpp(g.phi);
        const double Hk = geo.H(g, k);
        const double Hkm1 = geo.H(g, k - 1);
        const double Hkp1 = (k + 1 <= m) ? geo.H(g, k + 1) : 0.0;
        // meridian eigenvalue of T_{k-1} (grad Phi is meridional on profiles)
        const double kaz = g.kappa.back();
        const double tmer = binomial(m - 1, k - 1) * std::pow(kaz, k - 1);
        double integrand = (m - k) * fv * Hkp1 + (k + 1) * fpv * g.u * Hk -
                           k * (fpv - fv / g.phi) * g.dlambda * Hkm1 -
                           k * (fv / g.phi) * Hkm1 -
                           fppv * tmer * g.grad_phi_sq / binomial(m, k);
        s += integrand * F[i] * g.area_weight;
    }
    return s;
}

struct EvolutionResidual {
    double lhs;       // centered finite-difference time derivative
    double rhs;       // analytic right-hand side quadrature
    double relative;  // mismatch relative to the integrand magnitude
};

namespace detail {
inline ProfileGraph displaced(const ProfileGraph& g, const std::vector<double>& rhs, double dt) {
    std::vector<double> r(g.rho.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = g.rho[i] + dt * rhs[i];
    return ProfileGraph(g.n, g.form, std::move(r));
}
}  // namespace detail

/// Compare d/dt of int f(Phi) H_k dmu (and of the eps-corrected k=1 combo)
/// against the analytic evolution identity, by centered differencing of the
/// functional along the actual flow displacement.
inline EvolutionResidual evolution_residual(const ProfileGraph& g, const FlowConfig& cfg,
                                            double dt = 1e-4) {
    const PointwiseGeometry geo = geometry(g);
    const auto F = flow_speed(geo, cfg.k);
    std::vector<double> rhs_vec(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs_vec[i] = F[i] * geo.nodes[i].v;
    const auto gp = detail::displaced(g, rhs_vec, dt);
    const auto gm = detail::displaced(g, rhs_vec, -dt);
    const PointwiseGeometry geop = geometry(gp), geom = geometry(gm);

    EvolutionResidual res{};
    if (cfg.k == 1) {
        const int eps = g.form.epsilon;
        auto combo = [&](const PointwiseGeometry& ge) {
            return weighted_curvature_integral(ge, 1, cfg.weight) +
                   eps * bulk_integrals(ge, cfg.weight).f_weighted;
        };
        res.lhs = (combo(geop) - combo(geom)) / (2.0 * dt);
        // k = 1 combo identity: the f/Phi reaction terms cancel against the
        // coarea contribution, leaving the simplified integrand
        double s = 0.0;
        for (std::size_t i = 0; i < geo.nodes.size(); ++i) {
            const GeoNode& nd = geo.nodes[i];
            const double fv = cfg.weight.f(nd.phi), fpv = cfg.weight.fp(nd.phi),
                         fppv = cfg.weight.fpp(nd.phi);
            const double H2 = (geo.n >= 3) ? geo.H(nd, 2) : 0.0;
            s += ((geo.n - 2) * fv * H2 + 2.0 * fpv * nd.u * geo.H(nd, 1) - fpv * nd.dlambda -
                  fppv * nd.grad_phi_sq / (geo.n - 1)) *
                 F[i] * nd.area_weight;
        }
        res.rhs = s;
    } else {
        auto func = [&](const PointwiseGeometry& ge) {
            return weighted_curvature_integral(ge, cfg.k, cfg.weight);
        };
        res.lhs = (func(geop) - func(geom)) / (2.0 * dt);
        res.rhs = evolution_rhs(geo, cfg.k, cfg.weight, F);
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < geo.nodes.size(); ++i)
        scale += std::abs(F[i]) * geo.nodes[i].area_weight;
    scale = std::max(scale, 1e-300);
    res.relative = std::abs(res.lhs - res.rhs) / std::max({std::abs(res.rhs), scale * 1e-3, 1e-14});
    return res;
}

/// Residual of the quermassintegral variational formula dW_l/dt = int F H_l.
inline double variational_residual(const ProfileGraph& g, const FlowConfig& cfg, int l,
                                   double dt = 1e-4) {
    const PointwiseGeometry geo = geometry(g);
    const auto F = flow_speed(geo, cfg.k);
    std::vector<double> rhs_vec(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs_vec[i] = F[i] * geo.nodes[i].v;
    const auto Wp = quermassintegrals(geometry(detail::displaced(g, rhs_vec, dt)), l);
    const auto Wm = quermassintegrals(geometry(detail::displaced(g, rhs_vec, -dt)), l);
    const double lhs = (Wp[l] - Wm[l]) / (2.0 * dt);
    double rhs = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < geo.nodes.size(); ++i) {
        rhs += F[i] * geo.H(geo.nodes[i], l) * geo.nodes[i].area_weight;
        scale += std::abs(F[i]) * geo.nodes[i].area_weight;
    }
    return std::abs(lhs - rhs) / std::max({std::abs(rhs), scale * 1e-3, 1e-14});
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::string flow_csv(const FlowRun& run) {
    std::ostringstream os;
    const auto weights = run.cfg.all_weights();
    std::vector<std::string> head{"t"};
    for (int l = 0; l <= run.cfg.k; ++l) head.push_back("W" + std::to_string(l));
    head.push_back("area");
    for (const auto& w : weights) {
        head.push_back("intHk[" + w.name + "]");
        head.push_back("intH1[" + w.name + "]");
        head.push_back("bulk[" + w.name + "]");
        head.push_back("combo[" + w.name + "]");
    }
    for (const char* c : {"bulk_lambda", "static_margin", "h_margin", "strict_margin", "pinch",
                          "osc", "max_speed"})
        head.push_back(c);
    os << join_csv(head) << '\n';
    for (const auto& s : run.samples) {
        std::vector<std::string> row{fmt17(s.t)};
        for (double w : s.W) row.push_back(fmt17(w));
        row.push_back(fmt17(s.area));
        for (std::size_t wi = 0; wi < weights.size(); ++wi) {
            row.push_back(fmt17(s.wk[wi]));
            row.push_back(fmt17(s.w1[wi]));
            row.push_back(fmt17(s.bulk_f[wi]));
            row.push_back(fmt17(s.combo[wi]));
        }
        for (double v : {s.bulk_lambda, s.static_margin, s.h_margin, s.strict_margin, s.pinch,
                         s.osc, s.max_speed})
            row.push_back(fmt17(v));
        os << join_csv(row) << '\n';
    }
    return os.str();
}

inline nlohmann::json flow_manifest(const FlowRun& run) {
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& w : run.cfg.all_weights()) weights.push_back(w.name);
    return {{"config",
             {{"k", run.cfg.k},
              {"dt_init", run.cfg.dt_init},
              {"cfl", run.cfg.cfl},
              {"t_max", run.cfg.t_max},
              {"sample_every", run.cfg.sample_every},
              {"monotonicity_slack", run.cfg.tol.monotonicity_slack},
              {"roundness_stop", run.cfg.tol.roundness_stop},
              {"weights", weights},
              {"n", run.n},
              {"epsilon", run.epsilon}}},
            {"terminal",
             {{"converged", run.converged}, {"r_inf", run.r_inf}, {"reason", run.reason}}},
            {"diagnostics", run.diagnostics}};
}

}  // namespace icf
