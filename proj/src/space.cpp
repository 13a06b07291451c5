#include "esrk/space.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "esrk/error.hpp"

namespace esrk {

namespace {

void validate_grid(const Grid1D& g) {
    if (g.n < 4) throw ConfigError("grid needs at least 4 cells");
    if (!(g.x_max > g.x_min)) throw ConfigError("grid needs x_max > x_min");
}

bool singular_jump(const EntropyModel& m, double uL, double uR, double dv) {
    const double vbar = 0.5 * (m.v(uL) + m.v(uR));
    return std::abs(dv) < 1e-12 * std::max(1.0, std::abs(vbar));
}

double model_flux(const FluxScheme& scheme, double uL, double uR) {
    const EntropyModel& m = scheme.model();
    const double mu = scheme.mu();
    switch (scheme.form()) {
        case FluxForm::AdvectionViscous:
            return 0.5 * (uR + uL) + mu * (uR - uL);
        case FluxForm::BurgersQuadratic:
            return (uR * uR + uR * uL + uL * uL) / 6.0 - mu * (uR - uL);
        case FluxForm::BurgersLogarithmic:
            m.require_admissible(uL);
            m.require_admissible(uR);
            return 0.5 * uR * uL - mu * (uR - uL) / (uR * uL);
        case FluxForm::EcGeneric:
            return ec_flux(scheme, uL, uR) - scheme.orientation() * mu * m.d_v(uL, uR);
    }
    return 0.0;
}

}  // namespace

Grid1D Grid1D::periodic(int n, double x_min, double x_max) {
    Grid1D g{n, x_min, x_max, BoundaryKind::Periodic, 0.0, 0.0};
    validate_grid(g);
    return g;
}

Grid1D Grid1D::fixed_ghost(int n, double x_min, double x_max, double left, double right) {
    Grid1D g{n, x_min, x_max, BoundaryKind::FixedGhost, left, right};
    validate_grid(g);
    return g;
}

std::pair<double, double> Grid1D::face_states(std::span<const double> u, int j) const {
    const bool periodic_bc = bc == BoundaryKind::Periodic;
    const double left = j == 0 ? (periodic_bc ? u[n - 1] : left_ghost) : u[j - 1];
    const double right = j == n ? (periodic_bc ? u[0] : right_ghost) : u[j];
    return {left, right};
}

std::string_view to_string(FluxForm form) {
    switch (form) {
        case FluxForm::EcGeneric: return "ec_generic";
        case FluxForm::BurgersQuadratic: return "burgers_quadratic";
        case FluxForm::BurgersLogarithmic: return "burgers_logarithmic";
        case FluxForm::AdvectionViscous: return "advection_viscous";
    }
    return "?";
}

FluxForm parse_flux_form(std::string_view text) {
    if (text == "ec_generic") return FluxForm::EcGeneric;
    if (text == "burgers_quadratic") return FluxForm::BurgersQuadratic;
    if (text == "burgers_logarithmic") return FluxForm::BurgersLogarithmic;
    if (text == "advection_viscous") return FluxForm::AdvectionViscous;
    throw ConfigError("unknown flux form: " + std::string(text));
}

std::string_view to_string(JacobianKind kind) {
    return kind == JacobianKind::Analytic ? "analytic" : "finite_difference";
}

JacobianKind parse_jacobian_kind(std::string_view text) {
    if (text == "analytic") return JacobianKind::Analytic;
    if (text == "finite_difference" || text == "fd") return JacobianKind::FiniteDifference;
    throw ConfigError("unknown jacobian kind: " + std::string(text));
}

FluxScheme::FluxScheme(EntropyModel model, double mu, FluxForm form)
    : model_(model), mu_(mu), form_(form) {
    if (!(mu >= 0.0)) throw ConfigError("dissipation coefficient mu must be >= 0");
    const bool ok = [&] {
        switch (form) {
            case FluxForm::EcGeneric: return true;
            case FluxForm::AdvectionViscous: return model.law() == Law::Advection;
            case FluxForm::BurgersQuadratic:
                return model.law() == Law::Burgers && model.quadratic();
            case FluxForm::BurgersLogarithmic:
                return model.law() == Law::Burgers && !model.quadratic();
        }
        return false;
    }();
    if (!ok)
        throw ConfigError("flux form " + std::string(to_string(form)) +
                          " does not match law/entropy " + std::string(to_string(model.law())) +
                          "/" + std::string(to_string(model.entropy())));
}

double FluxScheme::fv_flux(double uL, double uR) const {
    return orientation() * model_flux(*this, uL, uR);
}

std::pair<double, double> FluxScheme::fv_flux_partials(double uL, double uR,
                                                       JacobianKind kind) const {
    const double s = orientation();
    if (kind == JacobianKind::Analytic) {
        switch (form_) {
            case FluxForm::AdvectionViscous:
                return {s * (0.5 - mu_), s * (0.5 + mu_)};
            case FluxForm::BurgersQuadratic:
                return {(uR + 2.0 * uL) / 6.0 + mu_, (2.0 * uR + uL) / 6.0 - mu_};
            case FluxForm::BurgersLogarithmic:
                return {0.5 * uR + mu_ / (uL * uL), 0.5 * uL - mu_ / (uR * uR)};
            case FluxForm::EcGeneric:
                break;  // no closed form; fall through to differences
        }
    }
    const double base = fv_flux(uL, uR);
    const double eL = 1e-7 * std::max(1.0, std::abs(uL));
    const double eR = 1e-7 * std::max(1.0, std::abs(uR));
    return {(fv_flux(uL + eL, uR) - base) / eL, (fv_flux(uL, uR + eR) - base) / eR};
}

double ec_flux(const FluxScheme& scheme, double uL, double uR) {
    const EntropyModel& m = scheme.model();
    switch (scheme.form()) {
        case FluxForm::BurgersQuadratic:
            return (uR * uR + uR * uL + uL * uL) / 6.0;
        case FluxForm::BurgersLogarithmic:
            m.require_admissible(uL);
            m.require_admissible(uR);
            return 0.5 * uR * uL;
        case FluxForm::AdvectionViscous:
            return 0.5 * (uR + uL);
        case FluxForm::EcGeneric:
            break;
    }
    const double dv = m.d_v(uL, uR);
    if (singular_jump(m, uL, uR, dv)) return m.flux(0.5 * (uL + uR));
    return m.d_theta(uL, uR) / dv;
}

double numerical_flux(const FluxScheme& scheme, double uL, double uR) {
    return model_flux(scheme, uL, uR);
}

InterfaceEntropy interface_entropy(const FluxScheme& scheme, double uL, double uR) {
    const EntropyModel& m = scheme.model();
    const double F = model_flux(scheme, uL, uR);
    const double vbar = 0.5 * (m.v(uL) + m.v(uR));
    const double thetabar = 0.5 * (m.theta(uL) + m.theta(uR));
    const double s = scheme.orientation();
    return {s * (vbar * F - thetabar), s * (m.d_v(uL, uR) * F - m.d_theta(uL, uR))};
}

Eigen::VectorXd residual(const FluxScheme& scheme, const Grid1D& grid,
                         std::span<const double> u, double lambda) {
    const int n = grid.n;
    for (int i = 0; i < n; ++i) scheme.model().require_admissible(u[i]);
    std::vector<double> F(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j < grid.face_count(); ++j) {
        const auto [uL, uR] = grid.face_states(u, j);
        F[j] = scheme.fv_flux(uL, uR);
    }
    if (grid.bc == BoundaryKind::Periodic) F[n] = F[0];
    Eigen::VectorXd R(n);
    for (int i = 0; i < n; ++i) R(i) = lambda * (F[i + 1] - F[i]);
    return R;
}

Eigen::SparseMatrix<double> residual_jacobian(const FluxScheme& scheme, const Grid1D& grid,
                                              std::span<const double> u, double lambda,
                                              JacobianKind kind) {
    const int n = grid.n;
    std::vector<std::pair<double, double>> dF(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j < grid.face_count(); ++j) {
        const auto [uL, uR] = grid.face_states(u, j);
        dF[j] = scheme.fv_flux_partials(uL, uR, kind);
    }
    const bool periodic_bc = grid.bc == BoundaryKind::Periodic;
    if (periodic_bc) dF[n] = dF[0];

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(3 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // R_i = lambda (F_{i+1}(u_i, u_{i+1}) - F_i(u_{i-1}, u_i))
        entries.emplace_back(i, i, lambda * (dF[i + 1].first - dF[i].second));
        if (i + 1 < n || periodic_bc)
            entries.emplace_back(i, (i + 1) % n, lambda * dF[i + 1].second);
        if (i > 0 || periodic_bc)
            entries.emplace_back(i, (i + n - 1) % n, -lambda * dF[i].first);
    }
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(entries.begin(), entries.end());
    return J;
}

LinearOperator assemble_linear_operator(const FluxScheme& scheme, const Grid1D& grid) {
    if (scheme.model().law() != Law::Advection)
        throw UnsupportedOperator("linear operator requires the advection law");
    if (grid.bc != BoundaryKind::Periodic)
        throw UnsupportedOperator("linear operator requires periodic boundaries");
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(grid.n);
    const Eigen::SparseMatrix<double> J =
        residual_jacobian(scheme, grid, std::span<const double>(zero.data(), zero.size()), 1.0,
                          JacobianKind::Analytic);
    LinearOperator op;
    op.L = -Eigen::MatrixXd(J) / grid.dx();
    op.symmetric_part = op.L + op.L.transpose();
    return op;
}

ViscosityForm viscosity_form(const FluxScheme& scheme, double uL, double uR) {
    const EntropyModel& m = scheme.model();
    const double dv = m.d_v(uL, uR);
    const double D = 2.0 * scheme.mu();
    if (singular_jump(m, uL, uR, dv)) {
        const double ubar = 0.5 * (uL + uR);
        return {m.flux_prime(ubar) * m.H(ubar), 0.0, D};
    }
    const double fL = m.flux(uL);
    const double fR = m.flux(uR);
    const double B = (fR - fL) / dv;
    const double Qtilde = (fL + fR - 2.0 * ec_flux(scheme, uL, uR)) / dv;
    return {B, Qtilde, D};
}

}  // namespace esrk
