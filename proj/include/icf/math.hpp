#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace icf {

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

/// Area of the unit sphere S^dim embedded in R^{dim+1}.
inline double unit_sphere_area(int dim) {
    if (dim < 0) throw std::invalid_argument("unit_sphere_area: negative dimension");
    const double p = 0.5 * (dim + 1);
    return 2.0 * std::pow(M_PI, p) / std::tgamma(p);
}

/// Legendre polynomial P_j(x), three-term recurrence.
inline double legendre(int j, double x) {
    if (j == 0) return 1.0;
    if (j == 1) return x;
    double pm1 = 1.0, p = x;
    for (int m = 2; m <= j; ++m) {
        double pn = ((2 * m - 1) * x * p - (m - 1) * pm1) / m;
        pm1 = p;
        p = pn;
    }
    return p;
}

namespace detail {
// Gauss(7)-Kronrod(15) nodes on [0,1] of |x| and weights.
inline constexpr double gk_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
inline void gk15(const F& f, double a, double b, double& kres, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double resk = gk_wk[7] * f(c);
    double resg = gk_wg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double x = h * gk_nodes[i];
        const double fv = f(c - x) + f(c + x);
        resk += gk_wk[i] * fv;
        if (i % 2 == 1) resg += gk_wg[i / 2] * fv;
    }
    kres = resk * h;
    err = std::abs((resk - resg) * h);
}
}  // namespace detail

/// Fixed 15-point Kronrod rule on [a,b]; exact for polynomials up to degree 22.
template <class F>
inline double fixed_quad(const F& f, double a, double b) {
    double r, e;
    detail::gk15(f, a, b, r, e);
    return r;
}

/// Adaptive Gauss-Kronrod quadrature, relative tolerance with absolute floor.
template <class F>
inline double adaptive_quad(const F& f, double a, double b, double rtol = 1e-10,
                            double afloor = 1e-14, int max_depth = 48) {
    struct Rec {
        const F* f;
        double rtol, afloor;
        double operator()(double lo, double hi, double whole, double err, int depth) const {
            if (err <= std::max(afloor, rtol * std::abs(whole)) || depth >= 48) return whole;
            const double mid = 0.5 * (lo + hi);
            double l, le, r, re;
            detail::gk15(*f, lo, mid, l, le);
            detail::gk15(*f, mid, hi, r, re);
            if (depth >= 40 && le + re >= err)
                throw std::runtime_error("adaptive_quad: failed to converge");
            return (*this)(lo, mid, l, le, depth + 1) + (*this)(mid, hi, r, re, depth + 1);
        }
    };
    double w, e;
    detail::gk15(f, a, b, w, e);
    Rec rec{&f, rtol, afloor};
    (void)max_depth;
    return rec(a, b, w, e, 0);
}

/// Invert a strictly increasing scalar function on [lo, hi].
/// Bisection with secant acceleration, |fn(r) - y| <= rtol * max(1, |y|).
inline double invert_increasing(const std::function<double(double)>& fn, double y,
                                double lo, double hi, double rtol = 1e-12) {
    double flo = fn(lo), fhi = fn(hi);
    if (y < flo || y > fhi)
        throw std::domain_error("invert_increasing: target outside bracket range");
    const double tol = rtol * std::max(1.0, std::abs(y));
    for (int it = 0; it < 200; ++it) {
        // Secant candidate, fall back to bisection midpoint when outside.
        double x = (fhi > flo) ? lo + (y - flo) * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) x = mid;
        if (it % 2 == 1) x = mid;  // keep the bracket shrinking
        const double fx = fn(x);
        if (std::abs(fx - y) <= tol) return x;
        if (fx < y) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

/// Composite trapezoid weights on a uniform grid of N+1 nodes with spacing h,
/// with Euler-Maclaurin endpoint corrections through the h^4 term.
/// Integrates smooth data to O(h^6); requires N >= 8.
inline std::vector<double> corrected_trapezoid_weights(int N, double h) {
    if (N < 8) throw std::invalid_argument("corrected_trapezoid_weights: N >= 8 required");
    std::vector<double> w(N + 1, h);
    w[0] = w[N] = 0.5 * h;
    // + h^2/12 * f'(a), - h^2/12 * f'(b): one-sided 5-point first derivative
    const double c1[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
    // - h^4/720 * f'''(a), + h^4/720 * f'''(b): one-sided 5-point third derivative
    const double c3[5] = {-5.0, 18.0, -24.0, 14.0, -3.0};
    for (int i = 0; i < 5; ++i) {
        const double d = c1[i] * h / 144.0 - c3[i] * h / 1440.0;
        w[i] += d;
        w[N - i] += d;
    }
    return w;
}

/// Incremental antiderivative: given targets x_1..x_m >= 0, returns G(x_i) where
/// G(x) = int_0^x g(s) ds, evaluated with a fixed high-order rule per sorted gap.
inline std::vector<double> prefix_integrals(const std::vector<double>& x,
                                            const std::function<double(double)>& g) {
    const std::size_t m = x.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> out(m);
    double acc = 0.0, prev = 0.0;
    for (std::size_t idx : order) {
        const double xi = x[idx];
        if (xi < prev) throw std::logic_error("prefix_integrals: unsorted");
        if (xi > prev) {
            // split long gaps so each panel stays well resolved
            const int panels = std::max(1, int(std::ceil((xi - prev) / 0.05)));
            const double dh = (xi - prev) / panels;
            for (int p = 0; p < panels; ++p) acc += fixed_quad(g, prev + p * dh, prev + (p + 1) * dh);
            prev = xi;
        }
        out[idx] = acc;
    }
    return out;
}

/// Deterministic RNG wrapper used across tests and corpus generation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double a, double b) {
        return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }
    std::uint64_t next_seed() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace icf
