#include <cmath>
#include <numbers>

#include <doctest.h>

#include "esrk/error.hpp"
#include "esrk/harness.hpp"
#include "esrk/stage_solver.hpp"
#include "support.hpp"

using namespace esrk;

namespace {

std::span<const double> view(const Eigen::VectorXd& x) { return {x.data(), std::size_t(x.size())}; }

struct Setup {
    FluxScheme scheme;
    Grid1D grid;
    Eigen::VectorXd u;
};

Setup shock(EntropyKind entropy, int n = 60) {
    RunConfig c = burgers_config(entropy);
    c.grid = Grid1D::fixed_ghost(n, -1.0, 5.0, 1.5, 0.5);
    return {c.flux_scheme(), c.grid, initial_state(c)};
}

Setup periodic_sine(double mu, int n = 48) {
    RunConfig c = test::small_advection("be", mu, n);
    return {c.flux_scheme(), c.grid, initial_state(c)};
}

}  // namespace

TEST_CASE("stage defect is within tolerance for every builtin scheme") {
    for (auto entropy : {EntropyKind::Quadratic, EntropyKind::Logarithmic}) {
        const Setup s = shock(entropy);
        for (const auto& name : builtin_tableau_names()) {
            CAPTURE(name);
            const auto t = builtin_tableau(name);
            const auto sol = solve_stages(t, s.scheme, s.grid, s.u, 0.5);
            CHECK(sol.stages.size() == std::size_t(t.stages()));
            CHECK(stage_defect(t, s.u, sol) <= 1e-12);
            CHECK(sol.converged_norm == stage_defect(t, s.u, sol));
            for (int k = 0; k < t.stages(); ++k)
                CHECK((sol.stage_residuals[k] -
                       residual(s.scheme, s.grid, view(sol.stages[k]), 0.5))
                          .cwiseAbs()
                          .maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("zero step leaves every stage at the initial state") {
    const Setup s = shock(EntropyKind::Quadratic);
    const auto sol = solve_stages(builtin_tableau("gauss3"), s.scheme, s.grid, s.u, 0.0);
    for (const auto& U : sol.stages) CHECK((U - s.u).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.converged_norm == 0.0);
}

TEST_CASE("linear advection stages match a dense linear solve") {
    const Setup s = periodic_sine(0.2);
    const auto L = assemble_linear_operator(s.scheme, s.grid).L;
    const double lambda = 0.9, dt = lambda * s.grid.dx();
    for (const auto& name : builtin_tableau_names()) {
        CAPTURE(name);
        const auto t = builtin_tableau(name);
        const auto sol = solve_stages(t, s.scheme, s.grid, s.u, lambda);
        const auto oracle = test::linear_stages(t, L, dt, s.u);
        for (int k = 0; k < t.stages(); ++k)
            CHECK((sol.stages[k] - oracle[k]).cwiseAbs().maxCoeff() <= 1e-11);
    }
}

TEST_CASE("sequential and coupled paths agree on SDIRK2") {
    const Setup s = shock(EntropyKind::Logarithmic);
    const auto t = builtin_tableau("sdirk2");
    SolverSettings seq, cpl;
    seq.strategy = StageStrategy::Sequential;
    cpl.strategy = StageStrategy::Coupled;
    const auto a = solve_stages(t, s.scheme, s.grid, s.u, 0.5, seq);
    const auto b = solve_stages(t, s.scheme, s.grid, s.u, 0.5, cpl);
    for (int k = 0; k < 2; ++k) CHECK((a.stages[k] - b.stages[k]).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("analytic and finite-difference Jacobians reach the same stages") {
    const Setup s = shock(EntropyKind::Quadratic);
    SolverSettings analytic;
    analytic.jacobian = JacobianKind::Analytic;
    const auto t = builtin_tableau("radau3");
    const auto a = solve_stages(t, s.scheme, s.grid, s.u, 0.5);
    const auto b = solve_stages(t, s.scheme, s.grid, s.u, 0.5, analytic);
    for (int k = 0; k < 3; ++k) CHECK((a.stages[k] - b.stages[k]).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("Backward Euler solves its implicit update") {
    const Setup s = shock(EntropyKind::Quadratic);
    const auto step = rk_step(builtin_tableau("be"), s.scheme, s.grid, s.u, 0.5);
    const Eigen::VectorXd R = residual(s.scheme, s.grid, view(step.u_next), 0.5);
    CHECK((step.u_next - s.u + R).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("a chain of Backward-Euler sub-steps equals consecutive BE steps") {
    const Setup s = shock(EntropyKind::Logarithmic);
    const double w[] = {0.2, 0.5, 0.3};
    const double lambda = 0.7;
    const auto chain = rk_step(dirk_chain(w), s.scheme, s.grid, s.u, lambda);
    Eigen::VectorXd u = s.u;
    for (double b : w) u = rk_step(builtin_tableau("be"), s.scheme, s.grid, u, b * lambda).u_next;
    CHECK((chain.u_next - u).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("constant states are fixed points") {
    const auto g = Grid1D::periodic(16, 0.0, 1.0);
    const FluxScheme scheme(EntropyModel(Law::Burgers, EntropyKind::Logarithmic), 0.1,
                            FluxForm::BurgersLogarithmic);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(16, 0.7);
    for (const auto& name : builtin_tableau_names())
        CHECK((rk_step(builtin_tableau(name), scheme, g, u, 1.0).u_next - u).cwiseAbs().maxCoeff() ==
              0.0);
}

TEST_CASE("explicit tableaux need no Newton iterations") {
    const Setup s = shock(EntropyKind::Quadratic);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 1);
    const auto fe = make_tableau("fe", A, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), 1);
    CHECK(fe.kind == DiagonalKind::Explicit);
    const auto sol = solve_stages(fe, s.scheme, s.grid, s.u, 0.2);
    CHECK(sol.newton_iterations == 0);
    CHECK((sol.stages[0] - s.u).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("periodic steps conserve the total") {
    RunConfig c = test::small_advection("be", 0.0, 40);
    c.law = Law::Burgers;
    c.form = FluxForm::BurgersQuadratic;
    c.mu = 0.1;
    Eigen::VectorXd u = initial_state(c).array() + 2.0;
    for (const auto& name : builtin_tableau_names()) {
        const auto step = rk_step(builtin_tableau(name), c.flux_scheme(), c.grid, u, 0.8);
        CHECK(std::abs(step.u_next.sum() - u.sum()) <= 1e-11);
    }
}

TEST_CASE("Newton failure is reported") {
    const Setup s = shock(EntropyKind::Quadratic);
    SolverSettings tight;
    tight.max_newton_iters = 1;
    tight.newton_tol = 1e-30;
    CHECK_THROWS_AS(solve_stages(builtin_tableau("gauss2"), s.scheme, s.grid, s.u, 0.5, tight),
                    NonConvergence);
}

TEST_CASE("damped Newton keeps iterates admissible") {
    // Root at x = 1e-3 from a start where the full Newton step overshoots below zero.
    NewtonProblem p;
    p.residual = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(1);
        r[0] = std::log(x[0] / 1e-3);
        return r;
    };
    p.jacobian = [](const Eigen::VectorXd& x) {
        Eigen::SparseMatrix<double> J(1, 1);
        J.insert(0, 0) = 1.0 / x[0];
        return J;
    };
    p.admissible = [](const Eigen::VectorXd& x) { return x[0] > 0.0; };
    const auto r = newton_solve(p, Eigen::VectorXd::Constant(1, 1.0), SolverSettings{});
    CHECK(r.x[0] == doctest::Approx(1e-3).epsilon(1e-10));
}
