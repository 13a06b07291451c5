#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "esrk/entropy_model.hpp"
#include "esrk/ledger.hpp"
#include "esrk/space.hpp"
#include "esrk/stage_solver.hpp"

namespace esrk {

enum class InitialCondition { Sine, Riemann };

/// Everything one run needs. Loaded from a sectioned key-value file; see
/// configs/*.cfg for the full schema.
struct RunConfig {
    // [problem]
    Law law = Law::Burgers;
    EntropyKind entropy = EntropyKind::Quadratic;
    InitialCondition initial = InitialCondition::Riemann;
    double left_state = 1.5;   // Riemann data, x <= discontinuity
    double right_state = 0.5;  // Riemann data, x > discontinuity
    double discontinuity = 0.0;

    // [grid]
    Grid1D grid = Grid1D::fixed_ghost(240, -1.0, 5.0, 1.5, 0.5);

    // [flux]
    FluxForm form = FluxForm::BurgersQuadratic;
    double mu = 0.1;

    // [scheme]
    std::string scheme = "sdirk2";  // builtin tableau name or "gcn"
    double lambda = 0.5;
    double t_end = 3.0;

    // [solver]
    SolverSettings solver;

    // [output]
    std::filesystem::path output_dir = "out";
    bool emit_plots = false;

    // [analysis]
    NormKind norm = NormKind::Spectral;
    double lambda0 = 0.8;        // coarsest level of convergence studies
    int levels = 7;              // number of dt levels (halvings + 1)
    bool accumulate = false;     // temporal convergence: whole-run sum instead of final step
    double stability_tol = 1e-12;  // max S_i above this counts as entropy unstable

    FluxScheme flux_scheme() const { return FluxScheme(EntropyModel(law, entropy), mu, form); }
    EntropyModel model() const { return EntropyModel(law, entropy); }
};

/// Throws ConfigError on an invalid combination.
void validate(const RunConfig& config);

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Linear advection of sin(pi x) on [-1, 1], periodic, n = 400, mu = 0.
RunConfig advection_config();
/// Right-moving Burgers shock (1.5 | 0.5) on [-1, 5] with n = 240, mu = 0.1, lambda = 0.5.
RunConfig burgers_config(EntropyKind entropy);

std::string to_string(InitialCondition ic);

}  // namespace esrk
