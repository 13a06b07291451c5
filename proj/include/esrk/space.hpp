#pragma once

#include <span>
#include <string_view>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "esrk/entropy_model.hpp"

namespace esrk {

enum class BoundaryKind { Periodic, FixedGhost };

/// Uniform 1D grid of n cells on [x_min, x_max].
struct Grid1D {
    int n = 0;
    double x_min = 0.0;
    double x_max = 1.0;
    BoundaryKind bc = BoundaryKind::Periodic;
    double left_ghost = 0.0;   // FixedGhost only
    double right_ghost = 0.0;  // FixedGhost only

    /// Throw ConfigError unless n >= 4 and x_max > x_min.
    static Grid1D periodic(int n, double x_min, double x_max);
    static Grid1D fixed_ghost(int n, double x_min, double x_max, double left, double right);

    double dx() const noexcept { return (x_max - x_min) / n; }
    double x_center(int i) const noexcept { return x_min + (i + 0.5) * dx(); }
    /// Number of distinct faces: n for periodic grids, n + 1 otherwise.
    int face_count() const noexcept { return bc == BoundaryKind::Periodic ? n : n + 1; }

    /// States (left, right) across face j, j = 0..n, where face j is the left face of
    /// cell j. For periodic grids face n coincides with face 0.
    std::pair<double, double> face_states(std::span<const double> u, int j) const;
};

struct GridState {
    Eigen::VectorXd u;
    double t = 0.0;
};

enum class FluxForm { EcGeneric, BurgersQuadratic, BurgersLogarithmic, AdvectionViscous };

std::string_view to_string(FluxForm form);
FluxForm parse_flux_form(std::string_view text);

enum class JacobianKind { FiniteDifference, Analytic };

std::string_view to_string(JacobianKind kind);
JacobianKind parse_jacobian_kind(std::string_view text);

/// Entropy-conservative flux plus scalar dissipation mu.
///
/// `numerical_flux` is written in the orientation of the physical flux f of the model
/// (for advection, the face flux f_{j+1/2} of u_t = (f_{j+1/2} - f_{j-1/2}) / dx).
/// `fv_flux` is the flux F that enters dx dU/dt + F_{i+1/2} - F_{i-1/2} = 0, i.e.
/// `orientation() * numerical_flux`, with orientation -1 for advection and +1 for
/// Burgers.
class FluxScheme {
public:
    /// Throws ConfigError if mu < 0 or the form does not match the model pairing.
    FluxScheme(EntropyModel model, double mu, FluxForm form);

    const EntropyModel& model() const noexcept { return model_; }
    double mu() const noexcept { return mu_; }
    FluxForm form() const noexcept { return form_; }
    double orientation() const noexcept { return model_.law() == Law::Advection ? -1.0 : 1.0; }

    double fv_flux(double uL, double uR) const;
    /// d(fv_flux)/d(uL), d(fv_flux)/d(uR).
    std::pair<double, double> fv_flux_partials(double uL, double uR, JacobianKind kind) const;

private:
    EntropyModel model_;
    double mu_;
    FluxForm form_;
};

/// ΔΘ/Δv across a face, with the removable singularity at uL = uR resolved to
/// f((uL + uR)/2).
double ec_flux(const FluxScheme& scheme, double uL, double uR);

/// Entropy-conservative core plus the dissipation term of the selected form.
double numerical_flux(const FluxScheme& scheme, double uL, double uR);

struct InterfaceEntropy {
    double Phi;  // numerical entropy flux, v̄ F - Θ̄
    double Pi;   // numerical entropy production, Δv F - ΔΘ
};

/// Entropy flux and production of one face, in the finite-volume orientation.
InterfaceEntropy interface_entropy(const FluxScheme& scheme, double uL, double uR);

/// R_i = lambda (F_{i+1/2} - F_{i-1/2}); the update reads U^{n+1} = U^n - R.
Eigen::VectorXd residual(const FluxScheme& scheme, const Grid1D& grid,
                         std::span<const double> u, double lambda);

/// Sparse dR/du (tridiagonal plus periodic corner entries).
Eigen::SparseMatrix<double> residual_jacobian(const FluxScheme& scheme, const Grid1D& grid,
                                              std::span<const double> u, double lambda,
                                              JacobianKind kind);

struct LinearOperator {
    Eigen::MatrixXd L;              // U_t = L U
    Eigen::MatrixXd symmetric_part; // L + L^T
};

/// Throws UnsupportedOperator unless the law is advection on a periodic grid.
LinearOperator assemble_linear_operator(const FluxScheme& scheme, const Grid1D& grid);

/// Viscosity-form coefficients of a face: F(U_R) - F(U_L) = B Δv, Q̃ and D with
/// numerical flux = ½(f_L + f_R - Q̃ Δv) - ½ D Δv.
struct ViscosityForm {
    double B;
    double Qtilde;
    double D;
};

ViscosityForm viscosity_form(const FluxScheme& scheme, double uL, double uR);

}  // namespace esrk
