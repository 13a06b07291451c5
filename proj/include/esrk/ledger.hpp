#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "esrk/space.hpp"
#include "esrk/stage_solver.hpp"
#include "esrk/tableau.hpp"

namespace esrk {

/// Per-cell entropy balance of one time step:
///   d_eta + flux_sum = s_total = s_temporal + s_spatial.
struct StepLedger {
    Eigen::VectorXd d_eta;       // eta(U^{n+1}) - eta(U^n)
    Eigen::VectorXd flux_sum;    // lambda sum_k b_k (Phi^k_{i+1/2} - Phi^k_{i-1/2})
    Eigen::VectorXd s_total;
    Eigen::VectorXd s_temporal;
    Eigen::VectorXd s_spatial;
    double balance_defect = 0.0;  // max_i |d_eta + flux_sum - s_total|
};

/// B = v(b)(b - a) - (eta(b) - eta(a)) >= 0. Throws DomainViolation.
double jump_B(const EntropyModel& m, double a, double b);
/// E = (eta(b) - eta(a)) - v(a)(b - a) >= 0. Throws DomainViolation.
double jump_E(const EntropyModel& m, double a, double b);

struct LedgerStep {
    Eigen::VectorXd u_next;
    StepLedger ledger;
    StageSolution stages;
};

/// One Runge-Kutta step and its exact entropy ledger, with the temporal part
///   S^(t)_i = E_i - Δv_i^T B A^{-1} ΔU_i
/// and the spatial part ½ lambda sum_k b_k (Pi^k_{i+1/2} + Pi^k_{i-1/2}). Uses the
/// least-squares inverse when A is singular but [A; b^T] has full column rank, and
/// dispatches the Crank-Nicolson tableau to `cn_ledger`. Throws LedgerUnavailable
/// for any other singular tableau.
LedgerStep step_with_ledger(const ButcherTableau& t, const FluxScheme& scheme,
                            const Grid1D& grid, const Eigen::VectorXd& u_n, double lambda,
                            const SolverSettings& settings = {});

/// -½ ΔU_i^T Q ΔU_i per cell; `stage_increments[k]` holds U^(k) - U^n.
/// Throws NotQuadraticEntropy, or LedgerUnavailable if A is singular.
Eigen::VectorXd quadratic_form_check(const ButcherTableau& t, const EntropyModel& m,
                                     const std::vector<Eigen::VectorXd>& stage_increments);

/// General: S^(t) = ½(E - B) + ¼ (v^{n+1} - v^n)(R^{n+1} - R^n), fluxes from both ends.
/// MeanState: fluxes and production evaluated at Ū = ½(U^n + U^{n+1}); S^(t) collects
/// the remainder and vanishes for quadratic entropy with linear fluxes.
/// Auto picks MeanState for advection with quadratic entropy, General otherwise.
enum class CnSplit { Auto, General, MeanState };

LedgerStep cn_ledger(const FluxScheme& scheme, const Grid1D& grid, const Eigen::VectorXd& u_n,
                     double lambda, const SolverSettings& settings = {},
                     CnSplit split = CnSplit::Auto);

/// Generalized Crank-Nicolson: U^{n+1} = U^n - R(U(ṽ)) with ṽ the mean of v over
/// [U^n, U^{n+1}]. Its temporal production is identically zero.
LedgerStep gcn_step(const FluxScheme& scheme, const Grid1D& grid, const Eigen::VectorXd& u_n,
                    double lambda, const SolverSettings& settings = {});

/// State whose entropy variable is the mean of v over [a, b]: the arithmetic mean for
/// the quadratic entropy, the logarithmic mean for -log u.
double entropy_mean_state(const EntropyModel& m, double a, double b);

enum class NormKind { Spectral, Frobenius, Inf };

std::string_view to_string(NormKind kind);
NormKind parse_norm_kind(std::string_view text);
double matrix_norm(const Eigen::MatrixXd& X, NormKind kind);

/// Largest lambda satisfying the local entropy-stability sufficient condition
///   b_k D >= 6 K lambda (K^2 b_k / 2 + ||BA||) (B^2 + Q̃^2 + D^2)
/// for every stage k and every face between consecutive entries of `u_window`.
/// Throws NonPositiveWeights if some b_k <= 0.
double cfl_bound(const ButcherTableau& t, const FluxScheme& scheme,
                 std::span<const double> u_window, double K, NormKind norm = NormKind::Spectral);

/// Condition-number bound K of the mean inverse Hessians over the states in `u_window`.
double hessian_condition_bound(const EntropyModel& m, std::span<const double> u_window);

}  // namespace esrk
