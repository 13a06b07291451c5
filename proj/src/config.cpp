#include "esrk/config.hpp"

#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "esrk/error.hpp"
#include "esrk/tableau.hpp"

namespace esrk {

namespace pt = boost::property_tree;

std::string to_string(InitialCondition ic) {
    return ic == InitialCondition::Sine ? "sine" : "riemann";
}

namespace {

InitialCondition parse_initial(const std::string& text) {
    if (text == "sine") return InitialCondition::Sine;
    if (text == "riemann") return InitialCondition::Riemann;
    throw ConfigError("unknown initial condition: " + text);
}

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
    try {
        return tree.get<T>(key, fallback);
    } catch (const pt::ptree_error& e) {
        throw ConfigError("bad value for " + key + ": " + e.what());
    }
}

}  // namespace

void validate(const RunConfig& c) {
    const FluxScheme scheme = c.flux_scheme();  // checks the pairing and mu
    if (!(c.lambda > 0.0)) throw ConfigError("scheme.lambda must be > 0");
    if (!(c.t_end >= 0.0)) throw ConfigError("scheme.t_end must be >= 0");
    if (!(c.solver.newton_tol > 0.0)) throw ConfigError("solver.newton_tol must be > 0");
    if (c.solver.max_newton_iters < 1) throw ConfigError("solver.max_iters must be >= 1");
    if (c.scheme != "gcn") (void)builtin_tableau(c.scheme);
    if (c.levels < 2) throw ConfigError("analysis.levels must be >= 2");
    const EntropyModel m = scheme.model();
    if (c.initial == InitialCondition::Riemann) {
        m.require_admissible(c.left_state);
        m.require_admissible(c.right_state);
    }
    if (c.grid.bc == BoundaryKind::FixedGhost) {
        m.require_admissible(c.grid.left_ghost);
        m.require_admissible(c.grid.right_ghost);
    }
}

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("cannot parse config: ") + e.what());
    }
    RunConfig c;
    c.law = parse_law(get<std::string>(tree, "problem.law", "burgers"));
    c.entropy = parse_entropy(get<std::string>(tree, "problem.entropy", "quadratic"));
    const bool advection = c.law == Law::Advection;
    c.initial = parse_initial(get<std::string>(tree, "problem.initial", advection ? "sine" : "riemann"));
    c.left_state = get(tree, "problem.left_state", 1.5);
    c.right_state = get(tree, "problem.right_state", 0.5);
    c.discontinuity = get(tree, "problem.discontinuity", 0.0);

    const int n = get(tree, "grid.n", advection ? 400 : 240);
    const double xmin = get(tree, "grid.xmin", -1.0);
    const double xmax = get(tree, "grid.xmax", advection ? 1.0 : 5.0);
    const std::string bc = get<std::string>(tree, "grid.bc", advection ? "periodic" : "fixed_ghost");
    if (bc == "periodic") {
        c.grid = Grid1D::periodic(n, xmin, xmax);
    } else if (bc == "fixed_ghost") {
        c.grid = Grid1D::fixed_ghost(n, xmin, xmax, get(tree, "grid.left", c.left_state),
                                     get(tree, "grid.right", c.right_state));
    } else {
        throw ConfigError("unknown boundary condition: " + bc);
    }

    const std::string default_form = advection ? "advection_viscous"
                                     : c.entropy == EntropyKind::Quadratic ? "burgers_quadratic"
                                                                           : "burgers_logarithmic";
    c.form = parse_flux_form(get<std::string>(tree, "flux.form", default_form));
    c.mu = get(tree, "flux.mu", advection ? 0.0 : 0.1);

    c.scheme = get<std::string>(tree, "scheme.name", "sdirk2");
    c.lambda = get(tree, "scheme.lambda", 0.5);
    c.t_end = get(tree, "scheme.t_end", advection ? 2.0 : 3.0);

    c.solver.newton_tol = get(tree, "solver.newton_tol", 1e-12);
    c.solver.max_newton_iters = get(tree, "solver.max_iters", 50);
    c.solver.jacobian =
        parse_jacobian_kind(get<std::string>(tree, "solver.jacobian", "finite_difference"));

    c.output_dir = get<std::string>(tree, "output.dir", "out");
    c.emit_plots = get(tree, "output.plots", false);

    c.norm = parse_norm_kind(get<std::string>(tree, "analysis.norm", "spectral"));
    c.lambda0 = get(tree, "analysis.lambda0", 0.8);
    c.levels = get(tree, "analysis.levels", 7);
    c.accumulate = get(tree, "analysis.accumulate", false);
    c.stability_tol = get(tree, "analysis.stability_tol", 1e-12);

    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

RunConfig advection_config() {
    RunConfig c;
    c.law = Law::Advection;
    c.entropy = EntropyKind::Quadratic;
    c.initial = InitialCondition::Sine;
    c.grid = Grid1D::periodic(400, -1.0, 1.0);
    c.form = FluxForm::AdvectionViscous;
    c.mu = 0.0;
    c.t_end = 2.0;
    return c;
}

RunConfig burgers_config(EntropyKind entropy) {
    RunConfig c;
    c.law = Law::Burgers;
    c.entropy = entropy;
    c.form = entropy == EntropyKind::Quadratic ? FluxForm::BurgersQuadratic
                                               : FluxForm::BurgersLogarithmic;
    return c;
}

}  // namespace esrk
