#include "esrk/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "esrk/error.hpp"

namespace esrk {

namespace {

std::span<const double> view(const Eigen::VectorXd& x) {
    return {x.data(), static_cast<std::size_t>(x.size())};
}

/// Per-cell entropy-flux difference and face production sum of one state.
struct SpatialTerms {
    Eigen::VectorXd flux_diff;   // Phi_{i+1/2} - Phi_{i-1/2}
    Eigen::VectorXd production;  // Pi_{i+1/2} + Pi_{i-1/2}
};

SpatialTerms spatial_terms(const FluxScheme& scheme, const Grid1D& grid,
                           const Eigen::VectorXd& u) {
    const int n = grid.n;
    std::vector<InterfaceEntropy> faces(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j < grid.face_count(); ++j) {
        const auto [uL, uR] = grid.face_states(view(u), j);
        faces[j] = interface_entropy(scheme, uL, uR);
    }
    if (grid.bc == BoundaryKind::Periodic) faces[n] = faces[0];
    SpatialTerms out{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        out.flux_diff(i) = faces[i + 1].Phi - faces[i].Phi;
        out.production(i) = faces[i + 1].Pi + faces[i].Pi;
    }
    return out;
}

StepLedger empty_ledger(int n) {
    StepLedger l;
    l.d_eta = Eigen::VectorXd::Zero(n);
    l.flux_sum = Eigen::VectorXd::Zero(n);
    l.s_temporal = Eigen::VectorXd::Zero(n);
    l.s_spatial = Eigen::VectorXd::Zero(n);
    l.s_total = Eigen::VectorXd::Zero(n);
    return l;
}

void close_ledger(StepLedger& l, const EntropyModel& m, const Eigen::VectorXd& u_n,
                  const Eigen::VectorXd& u_next) {
    for (Eigen::Index i = 0; i < u_n.size(); ++i) l.d_eta(i) = m.d_eta(u_n(i), u_next(i));
    l.s_total = l.s_temporal + l.s_spatial;
    l.balance_defect = (l.d_eta + l.flux_sum - l.s_total).lpNorm<Eigen::Infinity>();
}

/// d m / d b for the entropy mean state m(a, b).
double entropy_mean_derivative(const EntropyModel& m, double a, double b) {
    if (m.quadratic()) return 0.5;
    const double e = (b - a) / a;
    if (std::abs(e) < 1e-4) return 0.5 - e / 6.0;
    const double lt = std::log1p(e);
    return (lt - e / (1.0 + e)) / (lt * lt);
}

}  // namespace

double jump_B(const EntropyModel& m, double a, double b) {
    m.require_admissible(a);
    m.require_admissible(b);
    if (m.quadratic()) return 0.5 * (b - a) * (b - a);
    return x_minus_log1p((a - b) / b);
}

double jump_E(const EntropyModel& m, double a, double b) {
    m.require_admissible(a);
    m.require_admissible(b);
    if (m.quadratic()) return 0.5 * (b - a) * (b - a);
    return x_minus_log1p((b - a) / a);
}

LedgerStep step_with_ledger(const ButcherTableau& t, const FluxScheme& scheme,
                            const Grid1D& grid, const Eigen::VectorXd& u_n, double lambda,
                            const SolverSettings& settings) {
    const StageInverse inv = invert_stage_matrix(t);
    if (inv.kind == InverseKind::NotInvertible) {
        if (t.name == "cn") return cn_ledger(scheme, grid, u_n, lambda, settings);
        throw LedgerUnavailable("no entropy ledger for singular tableau " + t.name);
    }
    const EntropyModel& m = scheme.model();
    const int s = t.stages();
    const int n = grid.n;

    StepResult step = rk_step(t, scheme, grid, u_n, lambda, settings);
    LedgerStep out;
    out.ledger = empty_ledger(n);
    StepLedger& l = out.ledger;

    for (int k = 0; k < s; ++k) {
        const SpatialTerms sp = spatial_terms(scheme, grid, step.stages.stages[k]);
        l.flux_sum += lambda * t.b(k) * sp.flux_diff;
        l.s_spatial += 0.5 * lambda * t.b(k) * sp.production;
    }

    // One stage with A = b = 1 is backward Euler, whose temporal production is exactly -B.
    // The closed form keeps the sign free of the E - dv dU cancellation.
    if (s == 1 && t.A(0, 0) == 1.0 && t.b(0) == 1.0) {
        for (int i = 0; i < n; ++i) l.s_temporal(i) = -jump_B(m, u_n(i), step.u_next(i));
        close_ledger(l, m, u_n, step.u_next);
        out.u_next = std::move(step.u_next);
        out.stages = std::move(step.stages);
        return out;
    }

    const bool enlarged = inv.kind == InverseKind::LeastSquares;
    Eigen::VectorXd dU(enlarged ? s + 1 : s);
    Eigen::VectorXd dv(s);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < s; ++k) {
            const double uk = step.stages.stages[k](i);
            dU(k) = uk - u_n(i);
            dv(k) = m.d_v(u_n(i), uk);
        }
        if (enlarged) dU(s) = step.u_next(i) - u_n(i);
        // -Δv^T B A^{-1} ΔU, with A^{-1} ΔU = -R recovered from the stage increments
        const Eigen::VectorXd recovered = inv.matrix * dU;
        l.s_temporal(i) =
            jump_E(m, u_n(i), step.u_next(i)) - dv.dot(t.b.cwiseProduct(recovered));
    }
    close_ledger(l, m, u_n, step.u_next);
    out.u_next = std::move(step.u_next);
    out.stages = std::move(step.stages);
    return out;
}

Eigen::VectorXd quadratic_form_check(const ButcherTableau& t, const EntropyModel& m,
                                     const std::vector<Eigen::VectorXd>& stage_increments) {
    if (!m.quadratic()) throw NotQuadraticEntropy();
    const StabilityReport report = stability_report(t);
    if (!report.Q) throw LedgerUnavailable("Q requires an invertible stage matrix");
    const int s = t.stages();
    if (static_cast<int>(stage_increments.size()) != s)
        throw ConfigError("expected one increment vector per stage");
    const Eigen::Index n = stage_increments.front().size();
    Eigen::VectorXd out(n);
    Eigen::VectorXd dU(s);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int k = 0; k < s; ++k) dU(k) = stage_increments[k](i);
        out(i) = -0.5 * dU.dot(*report.Q * dU);
    }
    return out;
}

LedgerStep cn_ledger(const FluxScheme& scheme, const Grid1D& grid, const Eigen::VectorXd& u_n,
                     double lambda, const SolverSettings& settings, CnSplit split) {
    const EntropyModel& m = scheme.model();
    const int n = grid.n;
    if (split == CnSplit::Auto)
        split = (m.law() == Law::Advection && m.quadratic()) ? CnSplit::MeanState
                                                               : CnSplit::General;

    SolverSettings seq = settings;
    seq.strategy = StageStrategy::Sequential;
    StepResult step = rk_step(builtin_tableau("cn"), scheme, grid, u_n, lambda, seq);
    const Eigen::VectorXd& u1 = u_n;
    const Eigen::VectorXd& R_old = step.stages.stage_residuals[0];
    const Eigen::VectorXd& R_new = step.stages.stage_residuals[1];

    LedgerStep out;
    out.ledger = empty_ledger(n);
    StepLedger& l = out.ledger;

    if (split == CnSplit::General) {
        const SpatialTerms sp_old = spatial_terms(scheme, grid, u1);
        const SpatialTerms sp_new = spatial_terms(scheme, grid, step.stages.stages[1]);
        l.flux_sum = 0.5 * lambda * (sp_old.flux_diff + sp_new.flux_diff);
        l.s_spatial = 0.25 * lambda * (sp_old.production + sp_new.production);
        for (int i = 0; i < n; ++i) {
            const double a = u_n(i);
            const double b = step.u_next(i);
            l.s_temporal(i) = 0.5 * (jump_E(m, a, b) - jump_B(m, a, b)) +
                              0.25 * m.d_v(a, b) * (R_new(i) - R_old(i));
        }
    } else {
        const Eigen::VectorXd u_mid = 0.5 * (u_n + step.u_next);
        const SpatialTerms sp_mid = spatial_terms(scheme, grid, u_mid);
        const Eigen::VectorXd R_mid = residual(scheme, grid, view(u_mid), lambda);
        l.flux_sum = lambda * sp_mid.flux_diff;
        l.s_spatial = 0.5 * lambda * sp_mid.production;
        for (int i = 0; i < n; ++i) {
            const double a = u_n(i);
            const double b = step.u_next(i);
            const double vbar = 0.5 * (m.v(a) + m.v(b));
            const double Rbar = 0.5 * (R_old(i) + R_new(i));
            l.s_temporal(i) = 0.5 * (jump_E(m, a, b) - jump_B(m, a, b)) - vbar * Rbar +
                              m.v(u_mid(i)) * R_mid(i);
        }
    }
    close_ledger(l, m, u_n, step.u_next);
    out.u_next = std::move(step.u_next);
    out.stages = std::move(step.stages);
    return out;
}

double entropy_mean_state(const EntropyModel& m, double a, double b) {
    m.require_admissible(a);
    m.require_admissible(b);
    if (m.quadratic()) return 0.5 * (a + b);
    const double e = (b - a) / a;
    if (std::abs(e) < 1e-4) return a * (1.0 + e / 2.0 - e * e / 12.0 + e * e * e / 24.0);
    return (b - a) / std::log1p(e);
}

LedgerStep gcn_step(const FluxScheme& scheme, const Grid1D& grid, const Eigen::VectorXd& u_n,
                    double lambda, const SolverSettings& settings) {
    const EntropyModel& m = scheme.model();
    const int n = grid.n;
    if (u_n.size() != n) throw ConfigError("state size does not match the grid");
    for (int i = 0; i < n; ++i) m.require_admissible(u_n(i));

    auto mean_state = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd mid(n);
        for (int i = 0; i < n; ++i) mid(i) = entropy_mean_state(m, u_n(i), w(i));
        return mid;
    };
    NewtonProblem problem{
        [&](const Eigen::VectorXd& w) {
            const Eigen::VectorXd mid = mean_state(w);
            return Eigen::VectorXd(w - u_n + residual(scheme, grid, view(mid), lambda));
        },
        [&](const Eigen::VectorXd& w) {
            const Eigen::VectorXd mid = mean_state(w);
            Eigen::VectorXd dmid(n);
            for (int i = 0; i < n; ++i) dmid(i) = entropy_mean_derivative(m, u_n(i), w(i));
            Eigen::SparseMatrix<double> J =
                residual_jacobian(scheme, grid, view(mid), lambda, settings.jacobian) *
                dmid.asDiagonal();
            Eigen::SparseMatrix<double> I(n, n);
            I.setIdentity();
            return Eigen::SparseMatrix<double>(I + J);
        },
        [&](const Eigen::VectorXd& w) {
            for (int i = 0; i < n; ++i)
                if (!m.admissible(w(i))) return false;
            return true;
        }};
    NewtonResult r = newton_solve(problem, u_n, settings);

    LedgerStep out;
    out.u_next = r.x;
    const Eigen::VectorXd mid = mean_state(r.x);
    out.stages.stages = {mid};
    out.stages.stage_residuals = {residual(scheme, grid, view(mid), lambda)};
    out.stages.newton_iterations = r.iterations;
    out.stages.converged_norm = r.norm;

    out.ledger = empty_ledger(n);
    StepLedger& l = out.ledger;
    const SpatialTerms sp = spatial_terms(scheme, grid, mid);
    l.flux_sum = lambda * sp.flux_diff;
    l.s_spatial = 0.5 * lambda * sp.production;
    close_ledger(l, m, u_n, out.u_next);
    return out;
}

std::string_view to_string(NormKind kind) {
    switch (kind) {
        case NormKind::Spectral: return "spectral";
        case NormKind::Frobenius: return "frobenius";
        case NormKind::Inf: return "inf";
    }
    return "?";
}

NormKind parse_norm_kind(std::string_view text) {
    if (text == "spectral") return NormKind::Spectral;
    if (text == "frobenius") return NormKind::Frobenius;
    if (text == "inf") return NormKind::Inf;
    throw ConfigError("unknown norm: " + std::string(text));
}

double matrix_norm(const Eigen::MatrixXd& X, NormKind kind) {
    switch (kind) {
        case NormKind::Spectral: {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
            return svd.singularValues()(0);
        }
        case NormKind::Frobenius: return X.norm();
        case NormKind::Inf: return X.cwiseAbs().rowwise().sum().maxCoeff();
    }
    return 0.0;
}

double cfl_bound(const ButcherTableau& t, const FluxScheme& scheme,
                 std::span<const double> u_window, double K, NormKind norm) {
    if ((t.b.array() <= 0.0).any()) throw NonPositiveWeights();
    if (u_window.empty()) throw ConfigError("cfl_bound needs at least one state");
    const Eigen::MatrixXd BA = t.b.asDiagonal() * t.A;
    const double nBA = matrix_norm(BA, norm);

    double bound = std::numeric_limits<double>::infinity();
    const std::size_t faces = std::max<std::size_t>(1, u_window.size() - 1);
    for (std::size_t f = 0; f < faces; ++f) {
        const double uL = u_window[f];
        const double uR = u_window[std::min(f + 1, u_window.size() - 1)];
        const ViscosityForm vf = viscosity_form(scheme, uL, uR);
        const double size = vf.B * vf.B + vf.Qtilde * vf.Qtilde + vf.D * vf.D;
        if (size == 0.0) continue;
        for (int k = 0; k < t.stages(); ++k) {
            const double bk = t.b(k);
            bound = std::min(bound, bk * vf.D / (6.0 * K * (K * K * bk / 2.0 + nBA) * size));
        }
    }
    return bound;
}

double hessian_condition_bound(const EntropyModel& m, std::span<const double> u_window) {
    if (m.quadratic()) return 1.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double u : u_window) {
        m.require_admissible(u);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    return (hi * hi) / (lo * lo);
}

}  // namespace esrk
