#include "esrk/tableau.hpp"

#include <cmath>

#include "esrk/error.hpp"

namespace esrk {

namespace {

using Real = long double;

Eigen::MatrixXd to_matrix(std::initializer_list<std::initializer_list<Real>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (Real v : row) m(i, j++) = static_cast<double>(v);
        ++i;
    }
    return m;
}

Eigen::VectorXd to_vector(std::initializer_list<Real> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (Real x : values) v(i++) = static_cast<double>(x);
    return v;
}

DiagonalKind classify(const Eigen::MatrixXd& A) {
    const auto s = A.rows();
    bool upper_zero = true;
    bool diag_zero = true;
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = i + 1; j < s; ++j) upper_zero = upper_zero && A(i, j) == 0.0;
        diag_zero = diag_zero && A(i, i) == 0.0;
    }
    if (!upper_zero) return DiagonalKind::FullyImplicit;
    return diag_zero ? DiagonalKind::Explicit : DiagonalKind::Dirk;
}

ButcherTableau gauss2() {
    const Real r3 = std::sqrt(Real{3});
    return make_tableau("gauss2",
                        to_matrix({{Real{1} / 4, Real{1} / 4 - r3 / 6},
                                   {Real{1} / 4 + r3 / 6, Real{1} / 4}}),
                        to_vector({Real{1} / 2, Real{1} / 2}),
                        to_vector({Real{1} / 2 - r3 / 6, Real{1} / 2 + r3 / 6}), 4);
}

ButcherTableau gauss3() {
    const Real r15 = std::sqrt(Real{15});
    return make_tableau(
        "gauss3",
        to_matrix({{Real{5} / 36, Real{2} / 9 - r15 / 15, Real{5} / 36 - r15 / 30},
                   {Real{5} / 36 + r15 / 24, Real{2} / 9, Real{5} / 36 - r15 / 24},
                   {Real{5} / 36 + r15 / 30, Real{2} / 9 + r15 / 15, Real{5} / 36}}),
        to_vector({Real{5} / 18, Real{8} / 18, Real{5} / 18}),
        to_vector({Real{1} / 2 - r15 / 10, Real{1} / 2, Real{1} / 2 + r15 / 10}), 6);
}

ButcherTableau radau2() {
    return make_tableau("radau2",
                        to_matrix({{Real{5} / 12, Real{-1} / 12}, {Real{3} / 4, Real{1} / 4}}),
                        to_vector({Real{3} / 4, Real{1} / 4}), to_vector({Real{1} / 3, 1}), 3);
}

ButcherTableau radau3() {
    const Real r6 = std::sqrt(Real{6});
    return make_tableau(
        "radau3",
        to_matrix({{(88 - 7 * r6) / 360, (296 - 169 * r6) / 1800, (-2 + 3 * r6) / 225},
                   {(296 + 169 * r6) / 1800, (88 + 7 * r6) / 360, (-2 - 3 * r6) / 225},
                   {(16 - r6) / 36, (16 + r6) / 36, Real{1} / 9}}),
        to_vector({(16 - r6) / 36, (16 + r6) / 36, Real{1} / 9}),
        to_vector({(4 - r6) / 10, (4 + r6) / 10, 1}), 5);
}

ButcherTableau sdirk2() {
    const Real g = 1 - std::sqrt(Real{2}) / 2;
    const Real w = std::sqrt(Real{2}) / 2;
    return make_tableau("sdirk2", to_matrix({{g, 0}, {w, g}}), to_vector({w, g}),
                        to_vector({g, 1}), 2);
}

ButcherTableau sdirk3() {
    const Real l = 0.4358665215L;
    const Real b1 = (-6 * l * l + 16 * l - 1) / 4;
    const Real b2 = (6 * l * l - 20 * l + 5) / 4;
    return make_tableau("sdirk3",
                        to_matrix({{l, 0, 0}, {(1 - l) / 2, l, 0}, {b1, b2, l}}),
                        to_vector({b1, b2, l}), to_vector({l, (1 + l) / 2, 1}), 3);
}

}  // namespace

std::string_view to_string(DiagonalKind kind) {
    switch (kind) {
        case DiagonalKind::Explicit: return "explicit";
        case DiagonalKind::Dirk: return "dirk";
        case DiagonalKind::FullyImplicit: return "fully-implicit";
    }
    return "?";
}

ButcherTableau make_tableau(std::string name, Eigen::MatrixXd A, Eigen::VectorXd b,
                            Eigen::VectorXd c, int order) {
    const auto s = b.size();
    if (s < 1 || A.rows() != s || A.cols() != s || c.size() != s)
        throw DegenerateTableau("tableau " + name + ": inconsistent dimensions");
    if (order < 1) throw DegenerateTableau("tableau " + name + ": order must be >= 1");
    ButcherTableau t;
    t.kind = classify(A);
    t.name = std::move(name);
    t.A = std::move(A);
    t.b = std::move(b);
    t.c = std::move(c);
    t.order = order;
    return t;
}

const std::vector<std::string>& builtin_tableau_names() {
    static const std::vector<std::string> names{"be",     "cn",     "gauss2", "gauss3",
                                                "radau2", "radau3", "sdirk2", "sdirk3"};
    return names;
}

ButcherTableau builtin_tableau(std::string_view name) {
    if (name == "be")
        return make_tableau("be", to_matrix({{1}}), to_vector({1}), to_vector({1}), 1);
    if (name == "cn")
        return make_tableau("cn", to_matrix({{0, 0}, {Real{1} / 2, Real{1} / 2}}),
                            to_vector({Real{1} / 2, Real{1} / 2}), to_vector({0, 1}), 2);
    if (name == "gauss2") return gauss2();
    if (name == "gauss3") return gauss3();
    if (name == "radau2") return radau2();
    if (name == "radau3") return radau3();
    if (name == "sdirk2") return sdirk2();
    if (name == "sdirk3") return sdirk3();
    throw UnknownScheme(std::string(name));
}

ButcherTableau dirk_chain(std::span<const double> weights) {
    const auto s = static_cast<Eigen::Index>(weights.size());
    if (s == 0) throw DegenerateTableau("dirk_chain: no weights");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s, s);
    Eigen::VectorXd b(s), c(s);
    double partial = 0.0;
    for (Eigen::Index k = 0; k < s; ++k) {
        const double w = weights[static_cast<std::size_t>(k)];
        if (w == 0.0) throw DegenerateTableau("dirk_chain: zero weight");
        b(k) = w;
        partial += w;
        c(k) = partial;
        for (Eigen::Index j = 0; j <= k; ++j) A(k, j) = weights[static_cast<std::size_t>(j)];
    }
    return make_tableau(s == 1 ? "be" : "dirk_chain", std::move(A), std::move(b),
                        std::move(c), 1);
}

StageInverse invert_stage_matrix(const ButcherTableau& t) {
    const auto s = t.stages();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(t.A);
    lu.setThreshold(1e-12);
    if (lu.rank() == s) return {InverseKind::Exact, lu.inverse()};

    // Enlarged system [ΔU; U^{n+1} - U^n] = -[A; b^T] R.
    Eigen::MatrixXd enlarged(s + 1, s);
    enlarged.topRows(s) = t.A;
    enlarged.row(s) = t.b.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu_enlarged(enlarged);
    lu_enlarged.setThreshold(1e-12);
    if (lu_enlarged.rank() < s) return {InverseKind::NotInvertible, {}};
    const Eigen::MatrixXd normal = enlarged.transpose() * enlarged;
    return {InverseKind::LeastSquares, normal.ldlt().solve(enlarged.transpose())};
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& X) {
    const Eigen::MatrixXd sym = 0.5 * (X + X.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();  // ascending
}

StabilityReport stability_report(const ButcherTableau& t) {
    StabilityReport r;
    const Eigen::MatrixXd B = t.b.asDiagonal();
    r.M = B * t.A + t.A.transpose() * B - t.b * t.b.transpose();
    r.m_eigenvalues = symmetric_eigenvalues(r.M);
    r.b_nonnegative = (t.b.array() >= 0.0).all();
    r.algebraically_stable = r.b_nonnegative && r.m_eigenvalues.minCoeff() >= -kPsdTolerance;

    const StageInverse inv = invert_stage_matrix(t);
    r.a_invertible = inv.kind == InverseKind::Exact;
    if (r.a_invertible) {
        const Eigen::MatrixXd& Ai = inv.matrix;
        const Eigen::VectorXd w = Ai.transpose() * t.b;
        r.Q = B * Ai + Ai.transpose() * B - w * w.transpose();
        r.q_eigenvalues = symmetric_eigenvalues(*r.Q);
    }
    return r;
}

}  // namespace esrk
