#pragma once

#include <cmath>
#include <stdexcept>

#include "icf/math.hpp"
#include "icf/weight.hpp"

namespace icf {

/// Warp factor values at one radius: lambda, its derivative, and the
/// primitive Phi = int_0^r lambda.
struct Warp {
    double lambda;
    double dlambda;
    double phi;
};

/// One of the three simply connected constant-curvature ambients,
/// modeled as the warped product dr^2 + lambda(r)^2 g_{S^{n-1}}.
struct SpaceForm {
    int epsilon = -1;  // -1 hyperbolic, 0 euclidean, +1 spherical
    double r_cap = 10.0;  // bracket cap for inversion when epsilon <= 0

    explicit SpaceForm(int eps = -1, double cap = 10.0) : epsilon(eps), r_cap(cap) {
        if (eps != -1 && eps != 0 && eps != 1)
            throw std::invalid_argument("SpaceForm: epsilon must be in {-1,0,+1}");
    }

    double r_max() const { return epsilon == 1 ? M_PI - 1e-6 : r_cap; }

    void check_radius(double r) const {
        if (!(r >= 0.0)) throw std::domain_error("SpaceForm: r < 0");
        if (epsilon == 1 && r >= M_PI) throw std::domain_error("SpaceForm: r >= pi on the sphere");
    }

    double lambda(double r) const {
        switch (epsilon) {
            case -1: return std::sinh(r);
            case 0: return r;
            default: return std::sin(r);
        }
    }
    // lambda' evaluated through the same half-angle primitive as Phi, so that
    // lambda' + eps Phi = 1 holds to one rounding of the addition.
    double dlambda(double r) const {
        switch (epsilon) {
            case -1: return 1.0 + phi(r);  // cosh r
            case 0: return 1.0;
            default: return 1.0 - phi(r);  // cos r
        }
    }
    // Phi via half-angle forms, accurate near r = 0.
    double phi(double r) const {
        switch (epsilon) {
            case -1: {
                const double s = std::sinh(0.5 * r);
                return 2.0 * s * s;  // cosh r - 1
            }
            case 0: return 0.5 * r * r;
            default: {
                const double s = std::sin(0.5 * r);
                return 2.0 * s * s;  // 1 - cos r
            }
        }
    }

    Warp warp(double r) const {
        check_radius(r);
        return {lambda(r), dlambda(r), phi(r)};
    }
};

inline Warp eval_warp(const SpaceForm& form, double r) { return form.warp(r); }

/// Closed-form comparison quantities on geodesic balls B_r in N^n(eps):
/// quermassintegrals, weighted curvature integrals, the lambda'-weighted
/// volume, the sphere area, and the Minkowski comparison chi. All of them are
/// strictly increasing on the interior radial domain, which makes them
/// invertible by bracketed root finding.
class BallFunctions {
public:
    BallFunctions(int n, SpaceForm form) : n_(n), form_(form), omega_(unit_sphere_area(n - 1)) {
        if (n < 3) throw std::invalid_argument("BallFunctions: n >= 3 required");
    }

    int n() const { return n_; }
    const SpaceForm& form() const { return form_; }
    double omega() const { return omega_; }

    /// W_l(B_r) through the ball recursion; the curvature integrals on a
    /// geodesic sphere are omega lambda^{n-1} (lambda'/lambda)^k.
    double quermassintegral(int l, double r) const {
        if (l < 0 || l > n_) throw std::invalid_argument("quermassintegral: order out of range");
        form_.check_radius(r);
        if (l == n_) return omega_ / n_;
        // W_0, W_1 seeds, then chain W_{k+1} from int H_k and W_{k-1}.
        if (l == 0) return volume(r);
        if (l == 1) return omega_ * std::pow(form_.lambda(r), n_ - 1) / (n_ - 1);
        const double lam = form_.lambda(r), dlam = form_.dlambda(r);
        auto curv_int = [&](int k) {
            return omega_ * std::pow(lam, n_ - 1) * std::pow(dlam / lam, k);
        };
        double wm1 = volume(r);                       // W_{k-1} with k = 1
        double w = omega_ * std::pow(lam, n_ - 1) / (n_ - 1);  // W_k with k = 1
        for (int k = 1; k <= l - 1; ++k) {
            const double next =
                (curv_int(k) + form_.epsilon * double(k) * wm1) / double(n_ - 1 - k);
            wm1 = w;
            w = next;
        }
        return w;
    }

    /// int_{partial B_r} f(Phi) H_k dmu (pure evaluation, no admissibility check).
    double chi_k(int k, const WeightFunction& f, double r) const {
        if (k < 0 || k > n_ - 1) throw std::invalid_argument("chi_k: order out of range");
        form_.check_radius(r);
        const Warp w = form_.warp(r);
        return omega_ * std::pow(w.lambda, n_ - 1) * f(w.phi) * std::pow(w.dlambda / w.lambda, k);
    }

    /// h(r) = int_{B_r} lambda'(r) dv = omega lambda^n / n.
    double weighted_volume(double r) const {
        form_.check_radius(r);
        return omega_ * std::pow(form_.lambda(r), n_) / n_;
    }

    /// xi(r) = |partial B_r| = omega lambda^{n-1}.
    double xi(double r) const {
        form_.check_radius(r);
        return omega_ * std::pow(form_.lambda(r), n_ - 1);
    }

    /// int_{B_r} f(Phi) dv by adaptive radial quadrature.
    double bulk_weight_integral(const WeightFunction& f, double r) const {
        form_.check_radius(r);
        return omega_ * adaptive_quad(
                            [&](double s) {
                                return f(form_.phi(s)) * std::pow(form_.lambda(s), n_ - 1);
                            },
                            0.0, r);
    }

    /// chi(r) = int_{partial B_r} f(Phi) H_1 dmu + eps int_{B_r} f(Phi) dv,
    /// the comparison function of the Minkowski-type theorems.
    double chi_minkowski(const WeightFunction& f, double r) const {
        if (form_.epsilon == 0)
            throw std::domain_error("chi_minkowski: defined for eps = -1 or +1");
        return chi_k(1, f, r) + form_.epsilon * bulk_weight_integral(f, r);
    }

    /// Ball volume by radial quadrature of omega lambda^{n-1}.
    double volume(double r) const {
        form_.check_radius(r);
        return omega_ * adaptive_quad(
                            [&](double s) { return std::pow(form_.lambda(s), n_ - 1); }, 0.0, r,
                            1e-12);
    }

    /// Solve fn(r) = y for a strictly increasing comparison function over the
    /// default bracket (capped at pi/2 on the sphere, where lambda' > 0).
    double invert(const std::function<double(double)>& fn, double y) const {
        const double hi = form_.epsilon == 1 ? 0.5 * M_PI - 1e-9 : form_.r_max();
        return invert_increasing(fn, y, 1e-8, hi);
    }

private:
    int n_;
    SpaceForm form_;
    double omega_;
};

}  // namespace icf
