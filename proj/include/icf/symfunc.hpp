#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "icf/math.hpp"

namespace icf {

using Matrix = Eigen::MatrixXd;

/// Coefficients of prod_i (1 + t kappa_i): sigma_0..sigma_m by the stable
/// one-pass expansion. Entries beyond m are zero by convention.
inline std::vector<double> sigma_all(const std::vector<double>& kappa) {
    const int m = int(kappa.size());
    std::vector<double> s(m + 1, 0.0);
    s[0] = 1.0;
    for (int i = 0; i < m; ++i) {
        if (!std::isfinite(kappa[i])) throw std::invalid_argument("sigma_all: non-finite entry");
        for (int k = std::min(i + 1, m); k >= 1; --k) s[k] += kappa[i] * s[k - 1];
    }
    return s;
}

/// sigma_k of kappa with entry `skip` removed.
inline std::vector<double> sigma_all_excluding(const std::vector<double>& kappa, int skip) {
    std::vector<double> rest;
    rest.reserve(kappa.size() - 1);
    for (int i = 0; i < int(kappa.size()); ++i)
        if (i != skip) rest.push_back(kappa[i]);
    return sigma_all(rest);
}

/// Normalized k-th mean curvature H_k = sigma_k / C(m, k), m = n-1.
inline double normalized_Hk(const std::vector<double>& kappa, int k) {
    const int m = int(kappa.size());
    if (k < 0 || k > m) throw std::invalid_argument("normalized_Hk: order out of range");
    return sigma_all(kappa)[k] / binomial(m, k);
}

struct ConeMembership {
    bool member;
    double margin;  // min_{1<=j<=k} sigma_j
};

/// Garding cone test: sigma_1..sigma_k all strictly positive.
inline ConeMembership gamma_cone(const std::vector<double>& kappa, int k) {
    if (k < 1 || k > int(kappa.size()))
        throw std::invalid_argument("gamma_cone: order out of range");
    const auto s = sigma_all(kappa);
    double margin = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= k; ++j) margin = std::min(margin, s[j]);
    return {margin > 0.0, margin};
}

inline std::vector<double> eigenvalues_sym(const Matrix& S) {
    Matrix sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + S.rows());
    return ev;
}

inline std::vector<double> sigma_all(const Matrix& S) { return sigma_all(eigenvalues_sym(S)); }

/// Newton transformation by the recursion T_0 = I, T_k = sigma_k I - T_{k-1} S.
inline Matrix newton_tensor(const Matrix& S, int k) {
    const int m = int(S.rows());
    if (k < 0 || k > m - 1) throw std::invalid_argument("newton_tensor: order out of range");
    const auto s = sigma_all(S);
    Matrix T = Matrix::Identity(m, m);
    for (int j = 1; j <= k; ++j) T = s[j] * Matrix::Identity(m, m) - T * S;
    return T;
}

struct NewtonMaclaurin {
    bool holds;
    double gap;  // H_l H_k - H_{l-1} H_{k+1}
    bool equality;
};

/// H_l H_k >= H_{l-1} H_{k+1} on the Garding cone, with equality exactly at
/// isotropic kappa. Throws if kappa is outside Gamma_k^+.
inline NewtonMaclaurin newton_maclaurin_check(const std::vector<double>& kappa, int l, int k,
                                              double eq_gap_tol = 1e-12,
                                              double iso_tol = 1e-6) {
    const int m = int(kappa.size());
    if (!(1 <= l && l <= k && k <= m))
        throw std::invalid_argument("newton_maclaurin_check: need 1 <= l <= k <= n-1");
    if (!gamma_cone(kappa, k).member)
        throw std::domain_error("newton_maclaurin_check: kappa outside Gamma_k+");
    const auto s = sigma_all(kappa);
    auto H = [&](int j) { return (j > m) ? 0.0 : s[j] / binomial(m, j); };
    const double lhs = H(l) * H(k), rhs = H(l - 1) * H(k + 1);
    const double gap = lhs - rhs;
    const double scale = std::abs(lhs) + std::abs(rhs);
    double mean = 0.0;
    for (double v : kappa) mean += v;
    mean /= m;
    bool iso = true;
    for (double v : kappa)
        if (std::abs(v - mean) > iso_tol * std::max(1e-300, std::abs(mean))) iso = false;
    return {gap >= -1e-14 * std::max(1.0, scale), gap,
            gap <= eq_gap_tol * std::max(1.0, scale) && iso};
}

/// Analytic derivative of the quotient H_k / H_{k-1} with respect to the
/// shape operator: (H_{k-1} T_{k-1}/C_k - H_k T_{k-2}/C_{k-1}) / H_{k-1}^2.
struct QuotientDerivative {
    Matrix d;
    double min_eigenvalue;
};

inline QuotientDerivative quotient_derivative(const Matrix& S, int k) {
    const int m = int(S.rows());
    if (k < 1 || k > m) throw std::invalid_argument("quotient_derivative: order out of range");
    const auto ev = eigenvalues_sym(S);
    if (!gamma_cone(ev, k).member)
        throw std::domain_error("quotient_derivative: eigenvalues outside Gamma_k+");
    const auto s = sigma_all(ev);
    const double Hk = s[k] / binomial(m, k);
    const double Hkm1 = s[k - 1] / binomial(m, k - 1);
    const Matrix Tkm1 = newton_tensor(S, k - 1);
    const Matrix Tkm2 = (k >= 2) ? newton_tensor(S, k - 2) : Matrix::Zero(m, m);
    Matrix d = (Hkm1 * Tkm1 / binomial(m, k) - Hk * Tkm2 / binomial(m, k - 1)) / (Hkm1 * Hkm1);
    const auto dev = eigenvalues_sym(d);
    return {d, *std::min_element(dev.begin(), dev.end())};
}

}  // namespace icf
