#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace esrk {

enum class DiagonalKind { Explicit, Dirk, FullyImplicit };

std::string_view to_string(DiagonalKind kind);

/// Runge-Kutta coefficients (A, b, c) together with the design order.
struct ButcherTableau {
    std::string name;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    int order = 1;
    DiagonalKind kind = DiagonalKind::FullyImplicit;

    int stages() const { return static_cast<int>(b.size()); }
    bool lower_triangular() const { return kind != DiagonalKind::FullyImplicit; }
};

/// Builds a tableau and classifies its diagonal structure. Throws DegenerateTableau
/// on inconsistent dimensions.
ButcherTableau make_tableau(std::string name, Eigen::MatrixXd A, Eigen::VectorXd b,
                            Eigen::VectorXd c, int order);

/// be, cn, gauss2, gauss3, radau2, radau3, sdirk2, sdirk3. Throws UnknownScheme.
ButcherTableau builtin_tableau(std::string_view name);

const std::vector<std::string>& builtin_tableau_names();

/// The DIRK scheme equivalent to s consecutive Backward-Euler sub-steps of
/// fractions b_1, ..., b_s of the step. Throws DegenerateTableau if a weight is zero.
ButcherTableau dirk_chain(std::span<const double> weights);

enum class InverseKind { Exact, LeastSquares, NotInvertible };

/// Inverse used to recover stage residuals from stage increments.
///
/// Exact: `matrix` is A^{-1} (s x s) and acts on the s stage increments.
/// LeastSquares: A is singular but the enlarged matrix [A; b^T] has full column rank;
/// `matrix` is (Ã^T Ã)^{-1} Ã^T (s x (s+1)) and acts on the stage increments with
/// U^{n+1} - U^n appended.
/// NotInvertible: neither applies; `matrix` is empty.
struct StageInverse {
    InverseKind kind = InverseKind::NotInvertible;
    Eigen::MatrixXd matrix;
};

StageInverse invert_stage_matrix(const ButcherTableau& t);

struct StabilityReport {
    std::optional<Eigen::MatrixXd> Q;  // only when A is invertible
    Eigen::MatrixXd M;
    Eigen::VectorXd q_eigenvalues;  // ascending; empty when Q is absent
    Eigen::VectorXd m_eigenvalues;  // ascending
    bool b_nonnegative = false;
    bool algebraically_stable = false;
    bool a_invertible = false;
};

/// Eigenvalues >= -kPsdTolerance count as non-negative.
inline constexpr double kPsdTolerance = 1e-10;

StabilityReport stability_report(const ButcherTableau& t);

/// Ascending eigenvalues of the symmetric part (X + X^T)/2.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& X);

}  // namespace esrk
