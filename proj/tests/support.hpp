#pragma once

// Independent reference computations used by the unit and acceptance tests. Nothing in
// here calls into the library's formulas for the quantity being checked.

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "esrk/config.hpp"
#include "esrk/space.hpp"
#include "esrk/tableau.hpp"

namespace esrk::test {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const long double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        x[i] = static_cast<double>(z);
        w[i] = static_cast<double>(2 / ((1 - z * z) * dp * dp));
    }
    return {x, w};
}

/// Integral of g over [lo, hi] with n-point Gauss-Legendre.
inline double integrate(const std::function<double(double)>& g, double lo, double hi, int n = 32) {
    const auto [x, w] = gauss_legendre(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += half * w[i] * g(mid + half * x[i]);
    return sum;
}

inline double integrate_half(const std::function<double(double)>& g, int n = 32) {
    return integrate(g, -0.5, 0.5, n);
}

/// Integral over xi in [-1/2, 1/2] of weight(xi) dv^2 H(v(xi)) along the straight path
/// v(xi) = mean + xi dv in entropy variables, H = dU/dv. For -log u, H = 1/v^2 has a pole
/// at v = 0 close to the path when u is large, so the integral is taken in s = log(-v),
/// where the integrand weight(xi(s)) dv / v is smooth.
inline double tadmor_integral(bool quadratic, double a, double b,
                              const std::function<double(double)>& weight) {
    if (quadratic) {
        const double dv = b - a;
        return integrate_half([&](double xi) { return weight(xi) * dv * dv; });
    }
    const double va = -1.0 / a, vb = -1.0 / b;
    const double mean = 0.5 * (va + vb), dv = vb - va;
    if (dv == 0.0) return 0.0;
    return integrate(
        [&](double s) {
            const double v = -std::exp(s);
            return weight((v - mean) / dv) * dv / v;
        },
        std::log(-va), std::log(-vb));
}

/// Tadmor jumps from their integral forms.
inline double quadrature_B(bool quadratic, double a, double b) {
    return tadmor_integral(quadratic, a, b, [](double xi) { return 0.5 - xi; });
}

inline double quadrature_E(bool quadratic, double a, double b) {
    return tadmor_integral(quadratic, a, b, [](double xi) { return xi + 0.5; });
}

/// Q = B A^-1 + A^-T B - A^-T b b^T A^-1 via a dense LU solve.
inline Eigen::MatrixXd q_matrix(const ButcherTableau& t) {
    const Eigen::MatrixXd Ainv = t.A.fullPivLu().inverse();
    const Eigen::MatrixXd B = t.b.asDiagonal();
    const Eigen::VectorXd w = Ainv.transpose() * t.b;
    return B * Ainv + Ainv.transpose() * B - w * w.transpose();
}

/// Stages of a linear problem U_t = L U: (I - dt A (x) L) U = 1 (x) u_n.
inline std::vector<Eigen::VectorXd> linear_stages(const ButcherTableau& t, const Eigen::MatrixXd& L,
                                                  double dt, const Eigen::VectorXd& u_n) {
    const int s = t.stages();
    const Eigen::Index n = u_n.size();
    Eigen::MatrixXd big = Eigen::MatrixXd::Identity(s * n, s * n);
    Eigen::VectorXd rhs(s * n);
    for (int k = 0; k < s; ++k) {
        rhs.segment(k * n, n) = u_n;
        for (int j = 0; j < s; ++j) big.block(k * n, j * n, n, n) -= dt * t.A(k, j) * L;
    }
    const Eigen::VectorXd x = big.partialPivLu().solve(rhs);
    std::vector<Eigen::VectorXd> out;
    for (int k = 0; k < s; ++k) out.push_back(x.segment(k * n, n));
    return out;
}

/// Burgers shock setup with a given scheme and entropy.
inline RunConfig shock_config(const std::string& scheme, EntropyKind entropy) {
    RunConfig c = burgers_config(entropy);
    c.scheme = scheme;
    return c;
}

/// Sine advection on a small periodic grid.
inline RunConfig small_advection(const std::string& scheme, double mu, int n = 64) {
    RunConfig c = advection_config();
    c.grid = Grid1D::periodic(n, -1.0, 1.0);
    c.mu = mu;
    c.scheme = scheme;
    return c;
}

}  // namespace esrk::test
