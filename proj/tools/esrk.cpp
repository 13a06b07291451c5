// Command-line driver: runs, convergence studies, CFL sweeps, entropy profiles and
// tableau inspection.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "esrk/config.hpp"
#include "esrk/csv.hpp"
#include "esrk/error.hpp"
#include "esrk/harness.hpp"
#include "esrk/tableau.hpp"

namespace fs = std::filesystem;
using namespace esrk;

namespace {

std::vector<double> parse_range(const std::string& text) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    if (std::sscanf(text.c_str(), "%lf%c%lf%c%lf", &a, &c1, &b, &c2, &step) != 5 || c1 != ':' ||
        c2 != ':' || !(step > 0) || !(b >= a))
        throw ConfigError("expected a:b:step with a <= b and step > 0, got " + text);
    std::vector<double> out;
    const int count = static_cast<int>((b - a) / step + 1e-9);
    for (int k = 0; k <= count; ++k) out.push_back(a + k * step);
    return out;
}

void print_matrix(const std::string& label, const Eigen::MatrixXd& X) {
    fmt::print("{}\n", label);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        fmt::print("  ");
        for (Eigen::Index j = 0; j < X.cols(); ++j) fmt::print("{:>14.10f}", X(i, j));
        fmt::print("\n");
    }
}

void print_vector(const std::string& label, const Eigen::VectorXd& v) {
    fmt::print("{:<4}", label);
    for (Eigen::Index i = 0; i < v.size(); ++i) fmt::print("{:>14.10f}", v[i]);
    fmt::print("\n");
}

int tableau_info(const std::string& name, const std::string& csv_path) {
    const ButcherTableau t = builtin_tableau(name);
    const StabilityReport r = stability_report(t);
    fmt::print("scheme {}  s = {}  p = {}  ({})\n", t.name, t.stages(), t.order,
               to_string(t.kind));
    print_matrix("A", t.A);
    print_vector("b", t.b);
    print_vector("c", t.c);
    const StageInverse inv = invert_stage_matrix(t);
    if (inv.kind == InverseKind::Exact) print_matrix("A^-1", inv.matrix);
    if (inv.kind == InverseKind::LeastSquares) print_matrix("A^+ (least squares)", inv.matrix);
    if (r.Q) {
        print_matrix("Q", *r.Q);
        print_vector("eig", r.q_eigenvalues);
    } else {
        fmt::print("Q   undefined (A singular)\n");
    }
    print_matrix("M", r.M);
    print_vector("eig", r.m_eigenvalues);
    fmt::print("b >= 0: {}  algebraically stable: {}\n", r.b_nonnegative ? "yes" : "no",
               r.algebraically_stable ? "yes" : "no");

    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw ConfigError("cannot write " + csv_path);
        const double qmin = r.q_eigenvalues.size() ? r.q_eigenvalues.minCoeff()
                                                   : std::numeric_limits<double>::quiet_NaN();
        out << "name,s,p,algebraically_stable,qmin_eig,mmin_eig\n"
            << fmt::format("{},{},{},{},{:.17g},{:.17g}\n", t.name, t.stages(), t.order,
                           r.algebraically_stable ? 1 : 0, qmin, r.m_eigenvalues.minCoeff());
    }
    return 0;
}

void print_convergence(const std::vector<ConvergenceRow>& rows) {
    fmt::print("{:>14} {:>14} {:>8}\n", "dt", "value", "order");
    for (const auto& r : rows) fmt::print("{:>14.6e} {:>14.6e} {:>8.3f}\n", r.dt, r.value, r.observed_order);
    fmt::print("fitted order {:.3f}\n", fitted_order(rows));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy ledgers for implicit Runge-Kutta finite-volume schemes"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir;
    bool plots = false;
    app.add_option("--out", out_dir, "Output directory (default: output.dir of the config)");
    app.add_flag("--plots", plots, "Also write gnuplot scripts next to the CSV files");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run a configuration and write state, ledger and summary CSVs");
    run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    std::string study;
    int levels = 0;
    double lambda0 = 0.0;
    bool accumulate = false;
    auto* conv_cmd = app.add_subcommand("converge", "Convergence study over halving time steps");
    conv_cmd->add_option("quantity", study, "entropy or temporal")
        ->required()
        ->check(CLI::IsMember({"entropy", "temporal"}));
    conv_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    conv_cmd->add_option("--levels", levels, "Number of time-step levels");
    conv_cmd->add_option("--lambda0", lambda0, "CFL number of the coarsest level");
    conv_cmd->add_flag("--accumulate", accumulate, "Temporal study: sum over the whole run");

    std::string range = "0.25:2.0:0.25";
    double resolution = 0.05;
    auto* sweep_cmd = app.add_subcommand("sweep", "Locate the entropy-stability threshold in lambda");
    sweep_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--lambda", range, "Grid a:b:step")->capture_default_str();
    sweep_cmd->add_option("--resolution", resolution, "Bisection width")->capture_default_str();

    auto* profile_cmd = app.add_subcommand("profile", "Per-cell entropy production at t_end");
    profile_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    std::string tableau_name, tableau_csv;
    auto* tableau_cmd = app.add_subcommand("tableau", "Butcher tableau utilities");
    tableau_cmd->require_subcommand(1);
    tableau_cmd->fallthrough();
    auto* info_cmd = tableau_cmd->add_subcommand("info", "Print coefficients and stability matrices");
    info_cmd->add_option("name", tableau_name, "Scheme name")
        ->required()
        ->check(CLI::IsMember(builtin_tableau_names()));
    info_cmd->add_option("--csv", tableau_csv, "Write a one-row summary CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (info_cmd->parsed()) return tableau_info(tableau_name, tableau_csv);

        RunConfig config = load_config(config_path);
        if (plots) config.emit_plots = true;
        const fs::path dir = out_dir.empty() ? config.output_dir : fs::path(out_dir);
        fs::create_directories(dir);

        if (run_cmd->parsed()) {
            const RunResult r = run_to_files(config, dir);
            fmt::print("steps {}  t = {}  entropy {:.15g} -> {:.15g}\n", r.steps.size(),
                       r.final_time, r.initial_entropy, r.final_entropy());
            fmt::print("max S_i {:.3e}  max balance defect {:.3e}\n", r.max_s_total,
                       r.max_balance_defect);
            fmt::print("wrote {}\n", dir.string());
        } else if (conv_cmd->parsed()) {
            const auto dts = halving_dt_list(config, lambda0 > 0 ? lambda0 : config.lambda0,
                                             levels > 0 ? levels : config.levels);
            const auto rows = study == "entropy"
                                  ? converge_global_entropy(config, dts)
                                  : converge_temporal_production(config, dts,
                                                                 accumulate || config.accumulate);
            print_convergence(rows);
            const fs::path csv = dir / fmt::format("convergence_{}.csv", study);
            write_convergence_csv(csv, rows);
            if (config.emit_plots)
                write_plot_script(dir / fmt::format("convergence_{}.gp", study), csv, "dt",
                                  {"value"}, {"dt", "value", "observed_order"}, true);
        } else if (sweep_cmd->parsed()) {
            const auto grid = parse_range(range);
            const SweepResult s = sweep_lambda(config, grid, resolution);
            fmt::print("{:>8} {:>14} {:>7}\n", "lambda", "max S_i", "stable");
            for (const auto& r : s.rows)
                fmt::print("{:>8.4f} {:>14.6e} {:>7}\n", r.lambda, r.max_s_total,
                           r.stable ? "yes" : "no");
            if (auto th = s.threshold())
                fmt::print("threshold lambda* = {:.3f} (stable {:.3f}, unstable {:.3f})\n", *th,
                           *s.stable_below, *s.unstable_above);
            else
                fmt::print("no stable/unstable bracket in the grid\n");
            write_sweep_csv(dir / "sweep.csv", s);
            if (config.emit_plots)
                write_plot_script(dir / "sweep.gp", dir / "sweep.csv", "lambda", {"max_s_total"},
                                  {"lambda", "max_s_total", "stable"});
        } else if (profile_cmd->parsed()) {
            const ProfileResult p = profile_entropy(config, dir);
            fmt::print("wrote {}\n", p.csv.string());
            if (p.plot_script) fmt::print("wrote {}\n", p.plot_script->string());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
