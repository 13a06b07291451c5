#include "esrk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "esrk/csv.hpp"
#include "esrk/error.hpp"

namespace esrk {

Eigen::VectorXd initial_state(const RunConfig& config) {
    const Grid1D& g = config.grid;
    Eigen::VectorXd u(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x_center(i);
        if (config.initial == InitialCondition::Sine)
            u[i] = std::sin(std::numbers::pi * x);
        else
            u[i] = x <= config.discontinuity ? config.left_state : config.right_state;
    }
    return u;
}

double total_entropy(const EntropyModel& m, const Grid1D& grid, const Eigen::VectorXd& u) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) sum += m.eta(u[i]);
    return grid.dx() * sum;
}

LedgerStep advance(const RunConfig& config, const Eigen::VectorXd& u_n, double lambda) {
    const FluxScheme scheme = config.flux_scheme();
    if (config.scheme == "gcn") return gcn_step(scheme, config.grid, u_n, lambda, config.solver);
    if (config.scheme == "cn") return cn_ledger(scheme, config.grid, u_n, lambda, config.solver);
    return step_with_ledger(builtin_tableau(config.scheme), scheme, config.grid, u_n, lambda,
                            config.solver);
}

RunResult run(const RunConfig& config, const StepObserver& observer) {
    validate(config);
    const Grid1D& grid = config.grid;
    const EntropyModel model = config.model();
    const double dx = grid.dx();
    const double dt = config.lambda * dx;
    // The slack keeps t_end/dt = N + roundoff from adding a vanishing extra step.
    const int steps = config.t_end > 0.0
                          ? static_cast<int>(std::ceil(config.t_end / dt - 1e-9))
                          : 0;

    RunResult result;
    result.initial = initial_state(config);
    result.initial_entropy = total_entropy(model, grid, result.initial);
    result.steps.reserve(steps);

    Eigen::VectorXd u = result.initial;
    for (int k = 1; k <= steps; ++k) {
        const double t_prev = (k - 1) * dt;
        const double dt_k = k == steps ? config.t_end - t_prev : dt;
        LedgerStep step;
        try {
            step = advance(config, u, dt_k / dx);
        } catch (const Error& e) {
            throw RunAborted(k, e.what());
        }
        const StepLedger& L = step.ledger;

        StepSummary s;
        s.step = k;
        s.time = k == steps ? config.t_end : k * dt;
        s.dt = dt_k;
        s.total_entropy = total_entropy(model, grid, step.u_next);
        s.total_s_temporal = dx * L.s_temporal.sum();
        s.total_s_spatial = dx * L.s_spatial.sum();
        s.max_s_total = L.s_total.maxCoeff();
        s.max_s_temporal = L.s_temporal.maxCoeff();
        s.balance_defect = L.balance_defect;
        s.newton_iterations = step.stages.newton_iterations;

        result.max_s_total = std::max(result.max_s_total, s.max_s_total);
        result.max_balance_defect = std::max(result.max_balance_defect, s.balance_defect);
        result.accumulated_s_temporal += s.total_s_temporal;
        if (observer) observer(s, u, step);
        result.steps.push_back(s);
        u = step.u_next;
        if (k == steps) result.final_ledger = std::move(step.ledger);
    }
    result.final_state = u;
    result.final_time = steps > 0 ? config.t_end : 0.0;
    return result;
}

namespace {

void write_state(CsvWriter& out, const Grid1D& grid, int step, double time,
                 const Eigen::VectorXd& u) {
    for (int i = 0; i < grid.n; ++i)
        out.row({double(step), time, double(i), grid.x_center(i), u[i]});
}

}  // namespace

RunResult run_to_files(const RunConfig& config, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const Grid1D& grid = config.grid;
    CsvWriter state(dir / "state.csv", {"step", "time", "i", "x", "u"});
    CsvWriter ledger(dir / "ledger.csv", {"step", "time", "i", "x_center", "u", "d_eta",
                                          "flux_sum", "s_total", "s_temporal", "s_spatial"});
    CsvWriter summary(dir / "summary.csv",
                      {"step", "time", "dt", "total_entropy", "total_s_temporal",
                       "total_s_spatial", "max_s_total", "balance_defect", "newton_iterations"});

    write_state(state, grid, 0, 0.0, initial_state(config));
    auto observer = [&](const StepSummary& s, const Eigen::VectorXd&, const LedgerStep& step) {
        write_state(state, grid, s.step, s.time, step.u_next);
        const StepLedger& L = step.ledger;
        for (int i = 0; i < grid.n; ++i)
            ledger.row({double(s.step), s.time, double(i), grid.x_center(i), step.u_next[i],
                        L.d_eta[i], L.flux_sum[i], L.s_total[i], L.s_temporal[i],
                        L.s_spatial[i]});
        summary.row({double(s.step), s.time, s.dt, s.total_entropy, s.total_s_temporal,
                     s.total_s_spatial, s.max_s_total, s.balance_defect,
                     double(s.newton_iterations)});
    };
    RunResult result = run(config, observer);
    if (config.emit_plots) {
        write_plot_script(dir / "summary.gp", dir / "summary.csv", "time",
                          {"total_s_temporal", "total_s_spatial"}, summary.header());
    }
    return result;
}

std::vector<double> halving_dt_list(const RunConfig& config, double lambda0, int levels) {
    if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be > 0");
    if (levels < 1) throw ConfigError("levels must be >= 1");
    std::vector<double> out;
    double dt = lambda0 * config.grid.dx();
    for (int k = 0; k < levels; ++k, dt *= 0.5) out.push_back(dt);
    return out;
}

namespace {

void fill_orders(std::vector<ConvergenceRow>& rows) {
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double a = std::abs(rows[k - 1].value), b = std::abs(rows[k].value);
        if (a > 0.0 && b > 0.0)
            rows[k].observed_order = std::log(a / b) / std::log(rows[k - 1].dt / rows[k].dt);
    }
}

RunConfig with_dt(const RunConfig& config, double dt) {
    RunConfig c = config;
    c.lambda = dt / config.grid.dx();
    return c;
}

}  // namespace

std::vector<ConvergenceRow> converge_global_entropy(const RunConfig& config,
                                                    std::span<const double> dt_list) {
    std::vector<ConvergenceRow> rows;
    for (double dt : dt_list) {
        const RunResult r = run(with_dt(config, dt));
        rows.push_back({dt, std::abs(r.final_entropy() - r.initial_entropy)});
    }
    fill_orders(rows);
    return rows;
}

std::vector<ConvergenceRow> converge_temporal_production(const RunConfig& config,
                                                         std::span<const double> dt_list,
                                                         bool accumulate) {
    std::vector<ConvergenceRow> rows;
    for (double dt : dt_list) {
        const RunResult r = run(with_dt(config, dt));
        double value = r.accumulated_s_temporal;
        if (!accumulate) value = r.steps.empty() ? 0.0 : r.steps.back().total_s_temporal;
        rows.push_back({dt, value});
    }
    fill_orders(rows);
    return rows;
}

double fitted_order(std::span<const ConvergenceRow> rows, double floor) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
        if (std::abs(r.value) > floor && r.value != 0.0)
            pts.emplace_back(std::log(r.dt), std::log(std::abs(r.value)));
    if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) mx += x, my += y;
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
    return sxy / sxx;
}

namespace {

SweepRow sweep_point(const RunConfig& config, double lambda) {
    RunConfig c = config;
    c.lambda = lambda;
    SweepRow row{lambda, 0.0, true};
    try {
        row.max_s_total = run(c).max_s_total;
        row.stable = row.max_s_total <= config.stability_tol;
    } catch (const RunAborted&) {
        // A step the solver cannot complete is reported as unstable.
        row.max_s_total = std::numeric_limits<double>::infinity();
        row.stable = false;
    }
    return row;
}

}  // namespace

SweepResult sweep_lambda(const RunConfig& config, std::span<const double> lambda_grid,
                         double resolution) {
    SweepResult out;
    for (double lambda : lambda_grid) out.rows.push_back(sweep_point(config, lambda));
    std::sort(out.rows.begin(), out.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.lambda < b.lambda; });

    std::size_t first_unstable = out.rows.size();
    for (std::size_t k = 0; k < out.rows.size(); ++k)
        if (!out.rows[k].stable) {
            first_unstable = k;
            break;
        }
    if (first_unstable == out.rows.size()) {
        if (!out.rows.empty()) out.stable_below = out.rows.back().lambda;
        return out;
    }
    out.unstable_above = out.rows[first_unstable].lambda;
    if (first_unstable == 0) return out;
    out.stable_below = out.rows[first_unstable - 1].lambda;

    while (*out.unstable_above - *out.stable_below > resolution) {
        const double mid = 0.5 * (*out.stable_below + *out.unstable_above);
        const SweepRow row = sweep_point(config, mid);
        out.rows.push_back(row);
        (row.stable ? out.stable_below : out.unstable_above) = mid;
    }
    std::sort(out.rows.begin(), out.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.lambda < b.lambda; });
    return out;
}

int steepest_face(const Eigen::VectorXd& u) {
    int best = 0;
    double jump = -1.0;
    for (Eigen::Index i = 0; i + 1 < u.size(); ++i) {
        const double d = std::abs(u[i + 1] - u[i]);
        if (d > jump) jump = d, best = static_cast<int>(i);
    }
    return best;
}

double shock_location(const Grid1D& grid, const Eigen::VectorXd& u) {
    return grid.x_min + (steepest_face(u) + 1) * grid.dx();
}

ProfileResult profile_entropy(const RunConfig& config, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    ProfileResult out;
    out.run = run(config);
    out.csv = dir / "profile.csv";
    const Grid1D& g = config.grid;
    CsvWriter csv(out.csv, {"i", "x", "u", "s_total", "s_temporal", "s_spatial"});
    const Eigen::VectorXd& u = out.run.final_state;
    for (int i = 0; i < g.n; ++i) {
        const StepLedger* L = out.run.final_ledger ? &*out.run.final_ledger : nullptr;
        csv.row({double(i), g.x_center(i), u[i], L ? L->s_total[i] : 0.0,
                 L ? L->s_temporal[i] : 0.0, L ? L->s_spatial[i] : 0.0});
    }
    if (config.emit_plots) {
        out.plot_script = dir / "profile.gp";
        write_plot_script(*out.plot_script, out.csv, "x", {"s_total", "s_temporal", "s_spatial"},
                          csv.header());
    }
    return out;
}

void write_convergence_csv(const std::filesystem::path& path,
                           std::span<const ConvergenceRow> rows) {
    CsvWriter csv(path, {"dt", "value", "observed_order"});
    for (const auto& r : rows) csv.row({r.dt, r.value, r.observed_order});
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
    CsvWriter csv(path, {"lambda", "max_s_total", "stable"});
    for (const auto& r : sweep.rows) csv.row({r.lambda, r.max_s_total, r.stable ? 1.0 : 0.0});
}

void write_plot_script(const std::filesystem::path& path, const std::filesystem::path& csv,
                       const std::string& x_column, const std::vector<std::string>& y_columns,
                       const std::vector<std::string>& header, bool log_scale) {
    auto index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError("plot column not found: " + name);
        return static_cast<int>(it - header.begin()) + 1;  // gnuplot columns are 1-based
    };
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << fmt::format("set xlabel '{}'\n", x_column);
    if (log_scale) out << "set logscale xy\n";
    out << "plot ";
    const int x = index(x_column);
    for (std::size_t k = 0; k < y_columns.size(); ++k)
        out << (k ? ", \\\n     " : "")
            << fmt::format("'{}' using {}:{} with lines", csv.filename().string(), x,
                           index(y_columns[k]));
    out << "\npause mouse close\n";
}

}  // namespace esrk
