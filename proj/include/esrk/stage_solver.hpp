#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "esrk/space.hpp"
#include "esrk/tableau.hpp"

namespace esrk {

/// Auto: stage-by-stage for lower-triangular tableaux, one coupled system otherwise.
enum class StageStrategy { Auto, Sequential, Coupled };

struct SolverSettings {
    double newton_tol = 1e-12;
    int max_newton_iters = 50;
    JacobianKind jacobian = JacobianKind::FiniteDifference;
    StageStrategy strategy = StageStrategy::Auto;
    int max_halvings = 30;
};

struct StageSolution {
    std::vector<Eigen::VectorXd> stages;           // U^(k)
    std::vector<Eigen::VectorXd> stage_residuals;  // R^(k) = R(U^(k))
    int newton_iterations = 0;
    double converged_norm = 0.0;  // max-norm stage-equation defect
};

/// Solves U^(k) - U^n = -sum_j a_kj R(U^(j)), k = 1..s, to `newton_tol` in the max norm.
/// Throws NonConvergence or DomainViolation.
StageSolution solve_stages(const ButcherTableau& t, const FluxScheme& scheme, const Grid1D& grid,
                           const Eigen::VectorXd& u_n, double lambda,
                           const SolverSettings& settings = {});

struct StepResult {
    Eigen::VectorXd u_next;
    StageSolution stages;
};

/// U^{n+1} = U^n - sum_k b_k R^(k).
StepResult rk_step(const ButcherTableau& t, const FluxScheme& scheme, const Grid1D& grid,
                   const Eigen::VectorXd& u_n, double lambda, const SolverSettings& settings = {});

/// max_k || U^(k) - U^n + sum_j a_kj R^(j) ||_inf, evaluated from the returned stages.
double stage_defect(const ButcherTableau& t, const Eigen::VectorXd& u_n,
                    const StageSolution& stages);

/// Damped Newton iteration for G(x) = 0 with a sparse Jacobian. The step is halved
/// (up to `max_halvings` times) while the trial iterate is rejected by `admissible`
/// or makes G throw DomainViolation.
struct NewtonProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
    std::function<Eigen::SparseMatrix<double>(const Eigen::VectorXd&)> jacobian;
    std::function<bool(const Eigen::VectorXd&)> admissible;
};

struct NewtonResult {
    Eigen::VectorXd x;
    Eigen::VectorXd defect;
    int iterations = 0;
    double norm = 0.0;
};

NewtonResult newton_solve(const NewtonProblem& problem, Eigen::VectorXd x0,
                          const SolverSettings& settings);

}  // namespace esrk
