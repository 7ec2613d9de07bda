#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icf/flow.hpp"
#include "icf/hypersurface.hpp"
#include "icf/io.hpp"
#include "icf/spaceform.hpp"
#include "icf/weight.hpp"

namespace icf {

struct GapReport {
    std::string theorem;
    std::string weight;
    int k = 0, l = -1;
    double lhs = std::numeric_limits<double>::quiet_NaN();
    double rhs = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
    double rel_gap = std::numeric_limits<double>::quiet_NaN();
    bool equality = false;
    bool hypothesis_ok = false;
    std::string failure;  // set when the hypotheses are not satisfied

    bool nonnegative(double tol = 1e-6) const {
        return hypothesis_ok && gap >= -tol * std::abs(lhs);
    }
};

namespace detail {
inline GapReport finish(GapReport r) {
    r.gap = r.lhs - r.rhs;
    r.rel_gap = r.gap / std::max(std::abs(r.lhs), 1e-300);
    r.equality = std::abs(r.gap) <= 1e-8 * std::abs(r.lhs);
    return r;
}

inline std::pair<double, double> phi_range(const PointwiseGeometry& geo) {
    double lo = 1e300, hi = -1e300;
    for (const auto& g : geo.nodes) {
        lo = std::min(lo, g.phi);
        hi = std::max(hi, g.phi);
    }
    return {0.9 * lo, 1.1 * hi};
}
}  // namespace detail

/// Theorem-1.1 style verification: weighted curvature integral against the
/// geodesic-ball comparison through W_l and through the weighted volume.
inline std::pair<GapReport, GapReport> verify_thm_1_1(const PointwiseGeometry& geo, int k, int l,
                                                      const WeightFunction& f) {
    GapReport a, b;
    a.theorem = "1.1(W_l)";
    b.theorem = "1.1(wvol)";
    a.weight = b.weight = f.name;
    a.k = b.k = k;
    a.l = l;
    const int n = geo.n;
    auto fail = [&](const std::string& why) {
        a.failure = b.failure = why;
        return std::make_pair(a, b);
    };
    if (geo.form.epsilon != -1) return fail("ambient space is not hyperbolic");
    if (k < 2 || k > n - 1 || l < 0 || l > k) return fail("order out of range");
    const auto cls = convexity_classify(geo);
    if (!cls.static_convex()) return fail("hypersurface is not static convex");
    const auto [smin, smax] = detail::phi_range(geo);
    if (!admissibility(f, k, smin, smax).order_k)
        return fail("weight fails the order-" + std::to_string(k) + " condition");
    a.hypothesis_ok = b.hypothesis_ok = true;

    const BallFunctions ball(n, geo.form);
    const double lhs = weighted_curvature_integral(geo, k, f);
    a.lhs = b.lhs = lhs;
    const auto W = quermassintegrals(geo, l);
    const double rA = ball.invert([&](double r) { return ball.quermassintegral(l, r); }, W[l]);
    a.rhs = ball.chi_k(k, f, rA);
    const double wvol = bulk_integrals(geo, weight_constant()).lambda_weighted;
    const double rB = ball.invert([&](double r) { return ball.weighted_volume(r); }, wvol);
    b.rhs = ball.chi_k(k, f, rB);
    return {detail::finish(a), detail::finish(b)};
}

inline std::pair<GapReport, GapReport> verify_cor_1_2(const PointwiseGeometry& geo, int k, int l,
                                                      double alpha) {
    if (k >= 2 && alpha < double(k) / double(k - 1) - 1e-12)
        throw std::invalid_argument("verify_cor_1_2: alpha below k/(k-1)");
    auto rep = verify_thm_1_1(geo, k, l, weight_gpow("one", alpha));
    rep.first.theorem = "1.2(W_l)";
    rep.second.theorem = "1.2(wvol)";
    return rep;
}

/// Weighted Minkowski inequality for static convex hypersurfaces in H^n.
inline std::pair<GapReport, GapReport> verify_thm_1_4(const PointwiseGeometry& geo,
                                                      const WeightFunction& f) {
    GapReport a, b;
    a.theorem = "1.4(area)";
    b.theorem = "1.4(wvol)";
    a.weight = b.weight = f.name;
    a.k = b.k = 1;
    auto fail = [&](const std::string& why) {
        a.failure = b.failure = why;
        return std::make_pair(a, b);
    };
    if (geo.form.epsilon != -1) return fail("ambient space is not hyperbolic");
    if (!convexity_classify(geo).static_convex()) return fail("hypersurface is not static convex");
    const auto [smin, smax] = detail::phi_range(geo);
    const auto adm = admissibility(f, 1, smin, smax);
    if (!adm.basic || !adm.ratio) return fail("weight fails (f(s)/s)' >= 0");
    a.hypothesis_ok = b.hypothesis_ok = true;

    const BallFunctions ball(geo.n, geo.form);
    const auto bulk = bulk_integrals(geo, f);
    const double lhs = weighted_curvature_integral(geo, 1, f) - bulk.f_weighted;
    a.lhs = b.lhs = lhs;
    const double rA = ball.invert([&](double r) { return ball.xi(r); }, geo.area());
    a.rhs = ball.chi_minkowski(f, rA);
    const double rB =
        ball.invert([&](double r) { return ball.weighted_volume(r); }, bulk.lambda_weighted);
    b.rhs = ball.chi_minkowski(f, rB);
    return {detail::finish(a), detail::finish(b)};
}

/// Weighted Minkowski inequality for strictly convex hypersurfaces in S^n.
inline GapReport verify_thm_1_6(const PointwiseGeometry& geo, const WeightFunction& f) {
    GapReport r;
    r.theorem = "1.6";
    r.weight = f.name;
    r.k = 1;
    if (geo.form.epsilon != 1) {
        r.failure = "ambient space is not spherical";
        return r;
    }
    if (!convexity_classify(geo).strictly_convex()) {
        r.failure = "hypersurface is not strictly convex";
        return r;
    }
    const auto [smin, smax] = detail::phi_range(geo);
    if (!admissibility(f, 1, smin, smax).basic) {
        r.failure = "weight is not positive non-decreasing convex";
        return r;
    }
    r.hypothesis_ok = true;
    const BallFunctions ball(geo.n, geo.form);
    const auto bulk = bulk_integrals(geo, f);
    r.lhs = weighted_curvature_integral(geo, 1, f) + bulk.f_weighted;
    const double rB =
        ball.invert([&](double r_) { return ball.weighted_volume(r_); }, bulk.lambda_weighted);
    r.rhs = ball.chi_minkowski(f, rB);
    return detail::finish(r);
}

// ---------------------------------------------------------------------------
// Flow monotonicity audit
// ---------------------------------------------------------------------------

struct SeriesVerdict {
    std::string series;
    bool expected_up = true;
    double worst = 0.0;  // max relative change in the forbidden direction
    double at_t = 0.0;
    bool pass = true;
};

struct MonotonicityAudit {
    std::vector<SeriesVerdict> verdicts;
    bool pass = true;
};

/// Check each monitored series of a completed run against its proven
/// direction: W_l and the weighted volume never decrease, the weighted k-th
/// curvature integral (k >= 2) and the eps-corrected mean-curvature combo
/// (k = 1) never increase, within the per-interval slack.
inline MonotonicityAudit monotonicity_audit(const FlowRun& run) {
    MonotonicityAudit audit;
    const double slack = run.cfg.tol.monotonicity_slack;
    auto check = [&](const std::string& name, bool up, auto getter) {
        SeriesVerdict v;
        v.series = name;
        v.expected_up = up;
        for (std::size_t i = 1; i < run.samples.size(); ++i) {
            const double prev = getter(run.samples[i - 1]);
            const double next = getter(run.samples[i]);
            const double change = up ? prev - next : next - prev;  // forbidden direction
            const double rel = change / std::max(std::abs(prev), 1e-300);
            if (rel > v.worst) {
                v.worst = rel;
                v.at_t = run.samples[i].t;
            }
        }
        v.pass = v.worst <= slack;
        audit.verdicts.push_back(v);
        audit.pass = audit.pass && v.pass;
    };
    // the quermassintegral chain is part of the hyperbolic/euclidean proofs;
    // in the sphere only the combined functional and the weighted volume are
    // ordered by the flow
    if (run.epsilon <= 0)
        for (int l = 0; l <= run.cfg.k; ++l)
            check("W" + std::to_string(l), true, [l](const FlowSample& s) { return s.W[l]; });
    check("bulk_lambda", true, [](const FlowSample& s) { return s.bulk_lambda; });
    const auto weights = run.cfg.all_weights();
    for (std::size_t wi = 0; wi < weights.size(); ++wi) {
        if (run.cfg.k >= 2)
            check("intHk[" + weights[wi].name + "]", false,
                  [wi](const FlowSample& s) { return s.wk[wi]; });
        else
            check("combo[" + weights[wi].name + "]", false,
                  [wi](const FlowSample& s) { return s.combo[wi]; });
    }
    return audit;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::string gap_csv_header() {
    return "shape,theorem,weight,k,l,lhs,rhs,gap,rel_gap,equality,hypothesis_ok,failure";
}

inline std::string gap_csv_row(const std::string& shape_id, const GapReport& r) {
    return join_csv({shape_id, r.theorem, r.weight, std::to_string(r.k), std::to_string(r.l),
                     fmt17(r.lhs), fmt17(r.rhs), fmt17(r.gap), fmt17(r.rel_gap),
                     r.equality ? "1" : "0", r.hypothesis_ok ? "1" : "0", r.failure});
}

inline nlohmann::json gap_to_json(const GapReport& r) {
    return {{"theorem", r.theorem}, {"weight", r.weight},       {"k", r.k},
            {"l", r.l},             {"lhs", r.lhs},             {"rhs", r.rhs},
            {"gap", r.gap},         {"rel_gap", r.rel_gap},     {"equality", r.equality},
            {"hypothesis_ok", r.hypothesis_ok},                 {"failure", r.failure}};
}

inline nlohmann::json audit_to_json(const MonotonicityAudit& a) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& s : a.verdicts)
        v.push_back({{"series", s.series},
                     {"expected", s.expected_up ? "non-decreasing" : "non-increasing"},
                     {"worst_violation", s.worst},
                     {"at_t", s.at_t},
                     {"pass", s.pass}});
    return {{"pass", a.pass}, {"series", v}};
}

}  // namespace icf
