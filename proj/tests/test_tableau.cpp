#include <cmath>

#include <doctest.h>

#include "esrk/error.hpp"
#include "esrk/tableau.hpp"
#include "support.hpp"

using namespace esrk;

namespace {

double max_abs(const Eigen::MatrixXd& X) { return X.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("builtin tableaux carry the printed coefficients") {
    const auto be = builtin_tableau("be");
    CHECK(be.stages() == 1);
    CHECK(be.A(0, 0) == 1.0);
    CHECK(be.b[0] == 1.0);
    CHECK(be.order == 1);

    const auto r2 = builtin_tableau("radau2");
    CHECK(r2.order == 3);
    CHECK(r2.b[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r2.b[1] == doctest::Approx(0.25).epsilon(1e-15));
    Eigen::Matrix2d A;
    A << 5.0 / 12, -1.0 / 12, 0.75, 0.25;
    CHECK(max_abs(r2.A - A) < 1e-15);

    const auto s3 = builtin_tableau("sdirk3");
    for (int k = 0; k < 3; ++k) CHECK(s3.A(k, k) == 0.4358665215);
    CHECK(s3.kind == DiagonalKind::Dirk);
    CHECK(builtin_tableau("gauss3").kind == DiagonalKind::FullyImplicit);

    CHECK_THROWS_AS(builtin_tableau("rk4"), UnknownScheme);
}

TEST_CASE("row sums equal the abscissae and weights sum to one") {
    for (const auto& name : builtin_tableau_names()) {
        const auto t = builtin_tableau(name);
        CAPTURE(name);
        CHECK(max_abs(t.A.rowwise().sum() - t.c) < 1e-14);
        CHECK(std::abs(t.b.sum() - 1.0) < 1e-14);
    }
}

TEST_CASE("printed stage-matrix inverses") {
    const double r3 = std::sqrt(3.0);
    Eigen::Matrix2d g;
    g << 3.0, -3.0 + 2.0 * r3, -3.0 - 2.0 * r3, 3.0;
    const auto gi = invert_stage_matrix(builtin_tableau("gauss2"));
    REQUIRE(gi.kind == InverseKind::Exact);
    CHECK(max_abs(gi.matrix - g) < 1e-12);

    Eigen::Matrix2d r;
    r << 1.5, 0.5, -4.5, 2.5;
    const auto ri = invert_stage_matrix(builtin_tableau("radau2"));
    REQUIRE(ri.kind == InverseKind::Exact);
    CHECK(max_abs(ri.matrix - r) < 1e-12);

    CHECK(invert_stage_matrix(builtin_tableau("cn")).kind == InverseKind::NotInvertible);
}

TEST_CASE("A times its inverse is the identity for every invertible builtin") {
    for (const auto& name : builtin_tableau_names()) {
        const auto t = builtin_tableau(name);
        const auto inv = invert_stage_matrix(t);
        if (inv.kind != InverseKind::Exact) continue;
        CAPTURE(name);
        CHECK(max_abs(t.A * inv.matrix - Eigen::MatrixXd::Identity(t.stages(), t.stages())) <
              1e-12);
    }
}

TEST_CASE("least-squares inverse of a singular tableau with full-rank enlargement") {
    Eigen::MatrixXd A(2, 2);
    A << 0.5, 0.0, 1.0, 0.0;
    Eigen::VectorXd b(2), c(2);
    b << 0.3, 0.7;
    c << 0.5, 1.0;
    const auto t = make_tableau("synthetic", A, b, c, 1);
    const auto inv = invert_stage_matrix(t);
    REQUIRE(inv.kind == InverseKind::LeastSquares);
    REQUIRE(inv.matrix.rows() == 2);
    REQUIRE(inv.matrix.cols() == 3);
    Eigen::MatrixXd enlarged(3, 2);
    enlarged << A, b.transpose();
    CHECK(max_abs(inv.matrix * enlarged - Eigen::Matrix2d::Identity()) < 1e-13);
    // Moore-Penrose oracle via the complete orthogonal decomposition.
    const Eigen::MatrixXd pinv = enlarged.completeOrthogonalDecomposition().pseudoInverse();
    CHECK(max_abs(inv.matrix - pinv) < 1e-13);
}

TEST_CASE("stability matrices") {
    SUBCASE("Gauss schemes have Q = 0") {
        for (const char* name : {"gauss2", "gauss3"}) {
            const auto r = stability_report(builtin_tableau(name));
            REQUIRE(r.Q);
            CHECK(max_abs(*r.Q) < 1e-10);
            CHECK(r.algebraically_stable);
        }
    }
    SUBCASE("Radau2 Q is the printed PSD matrix") {
        const auto r = stability_report(builtin_tableau("radau2"));
        Eigen::Matrix2d Q;
        Q << 2.25, -0.75, -0.75, 0.25;
        REQUIRE(r.Q);
        CHECK(max_abs(*r.Q - Q) < 1e-12);
        CHECK(r.q_eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.q_eigenvalues[1] == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(r.algebraically_stable);
    }
    SUBCASE("SDIRK schemes are not algebraically stable") {
        for (const char* name : {"sdirk2", "sdirk3"}) {
            const auto r = stability_report(builtin_tableau(name));
            REQUIRE(r.Q);
            CHECK(r.q_eigenvalues.minCoeff() < -1e-6);
            CHECK_FALSE(r.algebraically_stable);
        }
    }
    SUBCASE("Crank-Nicolson reports M only") {
        const auto r = stability_report(builtin_tableau("cn"));
        CHECK_FALSE(r.Q);
        CHECK_FALSE(r.a_invertible);
        CHECK(r.m_eigenvalues.size() == 2);
    }
}

TEST_CASE("Q and M are symmetric and congruent through A^-1") {
    for (const auto& name : builtin_tableau_names()) {
        const auto t = builtin_tableau(name);
        const auto r = stability_report(t);
        CAPTURE(name);
        CHECK(max_abs(r.M - r.M.transpose()) < 1e-12);
        if (!r.Q) continue;
        CHECK(max_abs(*r.Q - r.Q->transpose()) < 1e-12);
        const Eigen::MatrixXd Ainv = invert_stage_matrix(t).matrix;
        CHECK(max_abs(*r.Q - Ainv.transpose() * r.M * Ainv) < 1e-10);
        CHECK(max_abs(*r.Q - test::q_matrix(t)) < 1e-10);
    }
}

TEST_CASE("Radau schemes have positive-semidefinite Q") {
    for (const char* name : {"radau2", "radau3"}) {
        const auto r = stability_report(builtin_tableau(name));
        CHECK(r.q_eigenvalues.minCoeff() >= -1e-10);
    }
}

TEST_CASE("chains of Backward-Euler sub-steps") {
    const double one[] = {1.0};
    const auto single = dirk_chain(one);
    const auto be = builtin_tableau("be");
    CHECK(single.name == "be");
    CHECK(max_abs(single.A - be.A) == 0.0);
    CHECK(max_abs(single.b - be.b) == 0.0);

    const double halves[] = {0.5, 0.5};
    const auto h = dirk_chain(halves);
    Eigen::Matrix2d A;
    A << 0.5, 0.0, 0.5, 0.5;
    CHECK(max_abs(h.A - A) == 0.0);
    CHECK(h.c[0] == 0.5);
    CHECK(h.c[1] == 1.0);
    CHECK(h.order == 1);

    const double thirds[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    const auto inv = invert_stage_matrix(dirk_chain(thirds)).matrix;
    Eigen::Matrix3d expected;
    expected << 3, 0, 0, -3, 3, 0, 0, -3, 3;
    CHECK(max_abs(inv - expected) < 1e-12);

    const double bad[] = {0.5, 0.0, 0.5};
    CHECK_THROWS_AS(dirk_chain(bad), DegenerateTableau);
}

TEST_CASE("chain inverse is lower bidiagonal with 1/b_k") {
    const double w[] = {0.2, 0.5, 0.3};
    const auto inv = invert_stage_matrix(dirk_chain(w)).matrix;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double expected = 0.0;
            if (i == j) expected = 1.0 / w[i];
            if (i == j + 1) expected = -1.0 / w[i];
            CHECK(inv(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
}

TEST_CASE("make_tableau rejects inconsistent shapes") {
    CHECK_THROWS_AS(make_tableau("x", Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Ones(2),
                                 Eigen::VectorXd::Zero(2), 1),
                    DegenerateTableau);
}
