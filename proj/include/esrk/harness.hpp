#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esrk/config.hpp"
#include "esrk/ledger.hpp"

namespace esrk {

/// Cell values of the configured initial data (point values at cell centres).
Eigen::VectorXd initial_state(const RunConfig& config);

/// dx * sum_i eta(u_i).
double total_entropy(const EntropyModel& m, const Grid1D& grid, const Eigen::VectorXd& u);

/// Advances one step of the configured scheme (builtin tableau, "cn" or "gcn") with its
/// entropy ledger.
LedgerStep advance(const RunConfig& config, const Eigen::VectorXd& u_n, double lambda);

struct StepSummary {
    int step = 0;           // 1-based
    double time = 0.0;      // time at the end of the step
    double dt = 0.0;
    double total_entropy = 0.0;
    double total_s_temporal = 0.0;  // dx * sum_i S^(t)_i
    double total_s_spatial = 0.0;
    double max_s_total = 0.0;
    double max_s_temporal = 0.0;
    double balance_defect = 0.0;
    int newton_iterations = 0;
};

struct RunResult {
    Eigen::VectorXd initial;
    Eigen::VectorXd final_state;
    double final_time = 0.0;
    double initial_entropy = 0.0;
    std::vector<StepSummary> steps;
    std::optional<StepLedger> final_ledger;
    double max_s_total = -std::numeric_limits<double>::infinity();
    double max_balance_defect = 0.0;
    double accumulated_s_temporal = 0.0;  // dx * sum over steps and cells of S^(t)

    double final_entropy() const {
        return steps.empty() ? initial_entropy : steps.back().total_entropy;
    }
};

/// Called after every step with the state before the step and the step's ledger.
using StepObserver = std::function<void(const StepSummary&, const Eigen::VectorXd& u_before,
                                        const LedgerStep&)>;

/// Fixed dt = lambda * dx up to t_end; the last step is shortened to land on t_end.
/// Solver errors propagate with the failing step number in the message.
RunResult run(const RunConfig& config, const StepObserver& observer = {});

/// Runs and writes state.csv, ledger.csv and summary.csv under `dir`.
RunResult run_to_files(const RunConfig& config, const std::filesystem::path& dir);

struct ConvergenceRow {
    double dt = 0.0;
    double value = 0.0;
    double observed_order = std::numeric_limits<double>::quiet_NaN();  // vs previous row
};

/// dt_k = lambda0 * dx / 2^k, k = 0..levels-1.
std::vector<double> halving_dt_list(const RunConfig& config, double lambda0, int levels);

/// | integral of eta at t_end - integral at t = 0 | for each dt.
std::vector<ConvergenceRow> converge_global_entropy(const RunConfig& config,
                                                    std::span<const double> dt_list);

/// dx * sum_i S^(t)_i on the final step (or summed over the run when `accumulate`).
std::vector<ConvergenceRow> converge_temporal_production(const RunConfig& config,
                                                         std::span<const double> dt_list,
                                                         bool accumulate = false);

/// Least-squares slope of log|value| against log dt over the rows whose |value|
/// exceeds `floor`; NaN when fewer than two rows qualify.
double fitted_order(std::span<const ConvergenceRow> rows, double floor = 0.0);

struct SweepRow {
    double lambda = 0.0;
    double max_s_total = 0.0;
    bool stable = true;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by lambda, including refinement points
    std::optional<double> stable_below;   // largest stable lambda below the threshold
    std::optional<double> unstable_above; // smallest unstable lambda
    std::optional<double> threshold() const {
        if (!stable_below || !unstable_above) return std::nullopt;
        return 0.5 * (*stable_below + *unstable_above);
    }
};

/// Worst per-cell total entropy production over a whole run for each lambda, then
/// bisection of the first stable/unstable bracket down to `resolution`.
SweepResult sweep_lambda(const RunConfig& config, std::span<const double> lambda_grid,
                         double resolution = 0.05);

/// Index i of the steepest jump |u_{i+1} - u_i|.
int steepest_face(const Eigen::VectorXd& u);
/// x position of the face between cells i and i+1 for i = steepest_face(u).
double shock_location(const Grid1D& grid, const Eigen::VectorXd& u);

struct ProfileResult {
    RunResult run;
    std::filesystem::path csv;
    std::optional<std::filesystem::path> plot_script;
};

/// Per-cell S, S^(t), S^(x) of the final step, written to profile.csv under `dir`
/// (and profile.gp when config.emit_plots).
ProfileResult profile_entropy(const RunConfig& config, const std::filesystem::path& dir);

void write_convergence_csv(const std::filesystem::path& path,
                           std::span<const ConvergenceRow> rows);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);
/// Gnuplot script plotting columns `y_columns` of `csv` against column `x_column`.
void write_plot_script(const std::filesystem::path& path, const std::filesystem::path& csv,
                       const std::string& x_column, const std::vector<std::string>& y_columns,
                       const std::vector<std::string>& header, bool log_scale = false);

}  // namespace esrk
