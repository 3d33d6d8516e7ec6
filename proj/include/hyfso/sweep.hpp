#pragma once

/// Scenario sweeps: transmit-power grids, per-state outage rows with their
/// asymptotes and optional Monte Carlo columns, CSV emission with a pinned
/// number format, and the log-log slope fit used to measure diversity order.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hyfso/mc.hpp"
#include "hyfso/outage.hpp"

namespace hyfso::sweep {

struct PowerGrid {
    double from_dbm = 0.0;
    double to_dbm = 0.0;
    int points = 1;
};

inline std::vector<double> power_grid_dbm(const PowerGrid& grid) {
    if (grid.points < 1) throw domain_error("power_grid: points must be >= 1");
    if (grid.points > 1 && !(grid.to_dbm > grid.from_dbm))
        throw domain_error("power_grid: to must exceed from when points > 1");
    std::vector<double> out;
    out.reserve(grid.points);
    if (grid.points == 1) {
        out.push_back(grid.from_dbm);
        return out;
    }
    const double step = (grid.to_dbm - grid.from_dbm) / (grid.points - 1);
    for (int i = 0; i < grid.points; ++i) out.push_back(grid.from_dbm + step * i);
    return out;
}

struct McOptions {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t batch = 0;
};

struct SweepRow {
    double p_t_dbm = 0.0;
    int state = 0;
    double analytic = 0.0;
    double asymptotic = 0.0;
    std::optional<mc::McResult> estimate;
};

inline std::vector<SweepRow> run_sweep(const outage::OutageModel& model,
                                       const std::vector<int>& states, const PowerGrid& grid,
                                       const std::optional<McOptions>& mc_opts = std::nullopt) {
    std::vector<SweepRow> rows;
    const auto powers = power_grid_dbm(grid);
    rows.reserve(powers.size() * states.size());
    for (double p : powers) {
        for (int state : states) {
            SweepRow row;
            row.p_t_dbm = p;
            row.state = state;
            row.analytic = model.state_outage(state, p);
            row.asymptotic = model.state_outage_asymptotic(state, p);
            if (mc_opts)
                row.estimate = mc::estimate_state_outage(model, state, p, mc_opts->samples,
                                                         mc_opts->seed, mc_opts->batch);
            rows.push_back(row);
        }
    }
    return rows;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                            bool with_mc) {
    out << "P_t_dbm,state,analytic_op,asymptotic_op";
    if (with_mc) out << ",mc_op,mc_stderr";
    out << "\n";
    for (const auto& row : rows) {
        out << detail::fmt(row.p_t_dbm) << "," << row.state << ","
            << detail::fmt(row.analytic) << "," << detail::fmt(row.asymptotic);
        if (with_mc) {
            if (!row.estimate)
                throw domain_error("write_sweep_csv: row missing its Monte Carlo estimate");
            out << "," << detail::fmt(row.estimate->p_hat) << ","
                << detail::fmt(row.estimate->std_error);
        }
        out << "\n";
    }
}

struct ValidationRow {
    int state = 0;
    double p_t_dbm = 0.0;
    double analytic = 0.0;
    mc::McResult estimate;
    mc::Flag flag = mc::Flag::ok;
};

/// Runs analytic vs Monte Carlo agreement over a grid; rows come back in
/// state-major order so each state's curve is contiguous.
inline std::vector<ValidationRow> run_validation(const outage::OutageModel& model,
                                                 const std::vector<int>& states,
                                                 const PowerGrid& grid, std::uint64_t samples,
                                                 std::uint64_t seed, std::uint64_t batch) {
    std::vector<ValidationRow> rows;
    const auto powers = power_grid_dbm(grid);
    rows.reserve(powers.size() * states.size());
    for (int state : states) {
        for (double p : powers) {
            ValidationRow row;
            row.state = state;
            row.p_t_dbm = p;
            row.analytic = model.state_outage(state, p);
            row.estimate = mc::estimate_state_outage(model, state, p, samples, seed, batch);
            row.flag = mc::compare_one(row.analytic, row.estimate);
            rows.push_back(row);
        }
    }
    return rows;
}

inline void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows) {
    out << "state,P_t_dbm,analytic,mc_p_hat,mc_stderr,flag\n";
    for (const auto& row : rows) {
        out << row.state << "," << detail::fmt(row.p_t_dbm) << "," << detail::fmt(row.analytic)
            << "," << detail::fmt(row.estimate.p_hat) << ","
            << detail::fmt(row.estimate.std_error) << "," << mc::flag_name(row.flag) << "\n";
    }
}

/// Least-squares slope of log10(outage) against log10(mean SNR) over the
/// final `decades` decades of SNR ending at power_to_dbm; the negated slope
/// estimates the diversity order. The SNR axis scales with power through the
/// state's snr_power_exponent, so the power window narrows accordingly.
inline double fit_diversity_order(const outage::OutageModel& model, int state,
                                  double power_to_dbm, double decades, int points) {
    if (!(decades > 0.0)) throw domain_error("fit_diversity_order: decades must be > 0");
    if (points < 2) throw domain_error("fit_diversity_order: points must be >= 2");
    const double kappa = outage::snr_power_exponent(model.scenario_ref(), state);
    PowerGrid grid{power_to_dbm - 10.0 * decades / kappa, power_to_dbm, points};
    const auto powers = power_grid_dbm(grid);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double p : powers) {
        const double op = model.state_outage(state, p);
        if (!(op > 0.0))
            throw numerical_error("fit_diversity_order", points, op,
                                  "outage underflowed to zero inside the fit window");
        const double x = kappa * p / 10.0; // log10 of the state's mean SNR, up to a constant
        const double y = std::log10(op);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(powers.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;
}

} // namespace hyfso::sweep
