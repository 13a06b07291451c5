#include "esrk/stage_solver.hpp"

#include <Eigen/SparseLU>

#include "esrk/error.hpp"

namespace esrk {

namespace {

std::span<const double> view(const Eigen::VectorXd& x) {
    return {x.data(), static_cast<std::size_t>(x.size())};
}

bool all_admissible(const EntropyModel& m, const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!m.admissible(x(i))) return false;
    return true;
}

StageSolution solve_sequential(const ButcherTableau& t, const FluxScheme& scheme,
                               const Grid1D& grid, const Eigen::VectorXd& u_n, double lambda,
                               const SolverSettings& settings) {
    const int s = t.stages();
    const int n = grid.n;
    StageSolution sol;
    sol.stages.reserve(s);
    sol.stage_residuals.reserve(s);
    for (int k = 0; k < s; ++k) {
        Eigen::VectorXd rhs = u_n;
        for (int j = 0; j < k; ++j) rhs -= t.A(k, j) * sol.stage_residuals[j];
        const double akk = t.A(k, k);
        if (akk == 0.0) {
            sol.stage_residuals.push_back(residual(scheme, grid, view(rhs), lambda));
            sol.stages.push_back(std::move(rhs));
            continue;
        }
        NewtonProblem problem{
            [&](const Eigen::VectorXd& U) {
                return Eigen::VectorXd(U - rhs + akk * residual(scheme, grid, view(U), lambda));
            },
            [&](const Eigen::VectorXd& U) {
                Eigen::SparseMatrix<double> J =
                    akk * residual_jacobian(scheme, grid, view(U), lambda, settings.jacobian);
                Eigen::SparseMatrix<double> I(n, n);
                I.setIdentity();
                return Eigen::SparseMatrix<double>(I + J);
            },
            [&](const Eigen::VectorXd& U) { return all_admissible(scheme.model(), U); }};
        NewtonResult r = newton_solve(problem, u_n, settings);
        sol.newton_iterations += r.iterations;
        sol.stage_residuals.push_back(residual(scheme, grid, view(r.x), lambda));
        sol.stages.push_back(std::move(r.x));
    }
    return sol;
}

StageSolution solve_coupled(const ButcherTableau& t, const FluxScheme& scheme,
                            const Grid1D& grid, const Eigen::VectorXd& u_n, double lambda,
                            const SolverSettings& settings) {
    const int s = t.stages();
    const int n = grid.n;
    auto stage_view = [n](const Eigen::VectorXd& X, int k) {
        return std::span<const double>(X.data() + static_cast<std::ptrdiff_t>(k) * n,
                                       static_cast<std::size_t>(n));
    };
    NewtonProblem problem{
        [&](const Eigen::VectorXd& X) {
            Eigen::VectorXd G(X.size());
            for (int k = 0; k < s; ++k)
                G.segment(k * n, n) = X.segment(k * n, n) - u_n;
            for (int j = 0; j < s; ++j) {
                const Eigen::VectorXd Rj = residual(scheme, grid, stage_view(X, j), lambda);
                for (int k = 0; k < s; ++k)
                    if (t.A(k, j) != 0.0) G.segment(k * n, n) += t.A(k, j) * Rj;
            }
            return G;
        },
        [&](const Eigen::VectorXd& X) {
            std::vector<Eigen::Triplet<double>> entries;
            entries.reserve(static_cast<std::size_t>(s * s * 3 * n + s * n));
            for (int i = 0; i < s * n; ++i) entries.emplace_back(i, i, 1.0);
            for (int j = 0; j < s; ++j) {
                const Eigen::SparseMatrix<double> Jj = residual_jacobian(
                    scheme, grid, stage_view(X, j), lambda, settings.jacobian);
                for (int k = 0; k < s; ++k) {
                    const double a = t.A(k, j);
                    if (a == 0.0) continue;
                    for (int col = 0; col < Jj.outerSize(); ++col)
                        for (Eigen::SparseMatrix<double>::InnerIterator it(Jj, col); it; ++it)
                            entries.emplace_back(k * n + static_cast<int>(it.row()),
                                                 j * n + static_cast<int>(it.col()),
                                                 a * it.value());
                }
            }
            Eigen::SparseMatrix<double> J(s * n, s * n);
            J.setFromTriplets(entries.begin(), entries.end());
            return J;
        },
        [&](const Eigen::VectorXd& X) { return all_admissible(scheme.model(), X); }};

    Eigen::VectorXd X0(s * n);
    for (int k = 0; k < s; ++k) X0.segment(k * n, n) = u_n;
    NewtonResult r = newton_solve(problem, std::move(X0), settings);

    StageSolution sol;
    sol.newton_iterations = r.iterations;
    for (int k = 0; k < s; ++k) {
        Eigen::VectorXd Uk = r.x.segment(k * n, n);
        sol.stage_residuals.push_back(residual(scheme, grid, view(Uk), lambda));
        sol.stages.push_back(std::move(Uk));
    }
    return sol;
}

}  // namespace

NewtonResult newton_solve(const NewtonProblem& problem, Eigen::VectorXd x0,
                          const SolverSettings& settings) {
    NewtonResult r;
    r.x = std::move(x0);
    r.defect = problem.residual(r.x);
    r.norm = r.defect.lpNorm<Eigen::Infinity>();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool pattern_ready = false;
    while (!(r.norm <= settings.newton_tol)) {
        if (r.iterations >= settings.max_newton_iters) throw NonConvergence(r.iterations, r.norm);
        Eigen::SparseMatrix<double> J = problem.jacobian(r.x);
        J.makeCompressed();
        if (!pattern_ready) {
            lu.analyzePattern(J);
            pattern_ready = true;
        }
        lu.factorize(J);
        if (lu.info() != Eigen::Success) throw NonConvergence(r.iterations, r.norm);
        const Eigen::VectorXd step = lu.solve(-r.defect);

        double scale = 1.0;
        bool accepted = false;
        for (int h = 0; h <= settings.max_halvings && !accepted; ++h, scale *= 0.5) {
            Eigen::VectorXd trial = r.x + scale * step;
            if (!problem.admissible(trial)) continue;
            try {
                Eigen::VectorXd G = problem.residual(trial);
                r.x = std::move(trial);
                r.defect = std::move(G);
                accepted = true;
            } catch (const DomainViolation&) {
            }
        }
        if (!accepted)
            throw DomainViolation("Newton iterate left the admissible domain", r.x.minCoeff());
        r.norm = r.defect.lpNorm<Eigen::Infinity>();
        ++r.iterations;
    }
    return r;
}

double stage_defect(const ButcherTableau& t, const Eigen::VectorXd& u_n,
                    const StageSolution& stages) {
    const int s = t.stages();
    double worst = 0.0;
    for (int k = 0; k < s; ++k) {
        Eigen::VectorXd d = stages.stages[k] - u_n;
        for (int j = 0; j < s; ++j) d += t.A(k, j) * stages.stage_residuals[j];
        worst = std::max(worst, d.lpNorm<Eigen::Infinity>());
    }
    return worst;
}

StageSolution solve_stages(const ButcherTableau& t, const FluxScheme& scheme, const Grid1D& grid,
                           const Eigen::VectorXd& u_n, double lambda,
                           const SolverSettings& settings) {
    if (u_n.size() != grid.n) throw ConfigError("state size does not match the grid");
    for (Eigen::Index i = 0; i < u_n.size(); ++i) scheme.model().require_admissible(u_n(i));

    StageStrategy strategy = settings.strategy;
    if (strategy == StageStrategy::Auto)
        strategy = t.lower_triangular() ? StageStrategy::Sequential : StageStrategy::Coupled;
    if (strategy == StageStrategy::Sequential && !t.lower_triangular())
        throw ConfigError("sequential stage solve requires a lower-triangular tableau");

    StageSolution sol = strategy == StageStrategy::Sequential
                            ? solve_sequential(t, scheme, grid, u_n, lambda, settings)
                            : solve_coupled(t, scheme, grid, u_n, lambda, settings);
    sol.converged_norm = stage_defect(t, u_n, sol);
    return sol;
}

StepResult rk_step(const ButcherTableau& t, const FluxScheme& scheme, const Grid1D& grid,
                   const Eigen::VectorXd& u_n, double lambda, const SolverSettings& settings) {
    StepResult r;
    r.stages = solve_stages(t, scheme, grid, u_n, lambda, settings);
    r.u_next = u_n;
    for (int k = 0; k < t.stages(); ++k) r.u_next -= t.b(k) * r.stages.stage_residuals[k];
    for (Eigen::Index i = 0; i < r.u_next.size(); ++i)
        scheme.model().require_admissible(r.u_next(i));
    return r;
}

}  // namespace esrk
