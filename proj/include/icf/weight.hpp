#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icf {

/// A scalar weight w(s) on (0, inf) carried together with its first two
/// derivatives. All built-in registry entries are positive, non-decreasing
/// and convex on s > 0.
struct WeightFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> fp;
    std::function<double(double)> fpp;

    double operator()(double s) const { return f(s); }
};

inline WeightFunction weight_constant(double c = 1.0) {
    return {"const:" + std::to_string(c),
            [c](double) { return c; },
            [](double) { return 0.0; },
            [](double) { return 0.0; }};
}

/// f(s) = g(s) * s^alpha with g one of {1, 1+s, e^s}.
inline WeightFunction weight_gpow(const std::string& gkind, double alpha) {
    std::function<double(double)> g, gp, gpp;
    if (gkind == "one") {
        g = [](double) { return 1.0; };
        gp = [](double) { return 0.0; };
        gpp = [](double) { return 0.0; };
    } else if (gkind == "aff") {
        g = [](double s) { return 1.0 + s; };
        gp = [](double) { return 1.0; };
        gpp = [](double) { return 0.0; };
    } else if (gkind == "exp") {
        g = [](double s) { return std::exp(s); };
        gp = [](double s) { return std::exp(s); };
        gpp = [](double s) { return std::exp(s); };
    } else {
        throw std::invalid_argument("weight_gpow: unknown prefactor '" + gkind + "'");
    }
    const std::string name = (gkind == "one") ? "pow:" + std::to_string(alpha)
                                              : gkind + "pow:" + std::to_string(alpha);
    auto val = [g, alpha](double s) { return g(s) * std::pow(s, alpha); };
    auto der = [g, gp, alpha](double s) {
        return gp(s) * std::pow(s, alpha) + alpha * g(s) * std::pow(s, alpha - 1.0);
    };
    auto der2 = [g, gp, gpp, alpha](double s) {
        return gpp(s) * std::pow(s, alpha) + 2.0 * alpha * gp(s) * std::pow(s, alpha - 1.0) +
               alpha * (alpha - 1.0) * g(s) * std::pow(s, alpha - 2.0);
    };
    return {name, val, der, der2};
}

/// Registry lookup. Ids: "pow:<a>", "affpow:<a>" ((1+s)s^a), "exppow:<a>"
/// (e^s s^a), "const:<c>".
inline WeightFunction make_weight(const std::string& id) {
    const auto colon = id.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("make_weight: bad id '" + id + "'");
    const std::string kind = id.substr(0, colon);
    const double val = std::stod(id.substr(colon + 1));
    if (kind == "pow") return weight_gpow("one", val);
    if (kind == "affpow") return weight_gpow("aff", val);
    if (kind == "exppow") return weight_gpow("exp", val);
    if (kind == "const") return weight_constant(val);
    throw std::invalid_argument("make_weight: unknown weight id '" + id + "'");
}

/// Admissibility margins for the theorem hypotheses, sampled on [smin, smax].
struct AdmissibilityReport {
    double positivity_margin;   // min f
    double monotone_margin;     // min f'
    double convexity_margin;    // min f''
    double order_k_margin;      // min of f'(s) - k/(k-1) f(s)/s   (k >= 2 families)
    double ratio_margin;        // min of (f(s)/s)'                (mean-curvature case)
    double equivalent_margin;   // min slope of s -> f(s)/s^{k/(k-1)}
    double deriv_consistency;   // max rel mismatch of central FD of f against f'
    bool basic;                 // positive, non-decreasing, convex
    bool order_k;
    bool ratio;
};

inline AdmissibilityReport admissibility(const WeightFunction& w, int k, double smin,
                                         double smax, int samples = 1000) {
    if (!(smax > smin) || smin <= 0.0)
        throw std::invalid_argument("admissibility: degenerate range");
    AdmissibilityReport rep{};
    rep.positivity_margin = rep.monotone_margin = rep.convexity_margin =
        rep.order_k_margin = rep.ratio_margin = rep.equivalent_margin =
            std::numeric_limits<double>::infinity();
    rep.deriv_consistency = 0.0;
    const double q = (k >= 2) ? double(k) / double(k - 1) : 1.0;
    double prev_equiv = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double s = smin + (smax - smin) * i / samples;
        const double fv = w.f(s), fpv = w.fp(s), fppv = w.fpp(s);
        rep.positivity_margin = std::min(rep.positivity_margin, fv);
        rep.monotone_margin = std::min(rep.monotone_margin, fpv);
        rep.convexity_margin = std::min(rep.convexity_margin, fppv);
        rep.order_k_margin = std::min(rep.order_k_margin, fpv - q * fv / s);
        rep.ratio_margin = std::min(rep.ratio_margin, (fpv * s - fv) / (s * s));
        const double equiv = fv / std::pow(s, q);
        if (i > 0)
            rep.equivalent_margin =
                std::min(rep.equivalent_margin, (equiv - prev_equiv) * samples / (smax - smin));
        prev_equiv = equiv;
        // derivative consistency by central differences
        const double h = 1e-5 * std::max(1.0, s);
        if (s - h > 0.0) {
            const double fd = (w.f(s + h) - w.f(s - h)) / (2.0 * h);
            const double fd2 = (w.fp(s + h) - w.fp(s - h)) / (2.0 * h);
            rep.deriv_consistency = std::max(
                rep.deriv_consistency,
                std::max(std::abs(fd - fpv) / std::max(1.0, std::abs(fpv)),
                         std::abs(fd2 - fppv) / std::max(1.0, std::abs(fppv))));
        }
    }
    const double tol = -1e-12;
    rep.basic = rep.positivity_margin > 0.0 && rep.monotone_margin >= tol &&
                rep.convexity_margin >= tol;
    rep.order_k = rep.basic && k >= 2 && rep.order_k_margin >= tol * 10 &&
                  rep.equivalent_margin >= -1e-9;
    rep.ratio = rep.basic && rep.ratio_margin >= tol;
    return rep;
}

}  // namespace icf
