// hyfso: scenario sweeps, Monte Carlo validation, and diversity-order fits
// for the hybrid optical/radio downlink outage models.
//
// Exit codes: 0 success, 1 validation found disagreements, 2 bad usage or
// bad scenario, 3 numerical evaluation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hyfso/hyfso.hpp>

namespace {

struct SweepArgs {
    std::string scenario_path;
    double power_from = 0.0;
    double power_to = 30.0;
    int points = 10;
    std::vector<int> states{0, 1, 2};
    std::string pointing = "auto";
    std::string out_path;
    bool with_mc = false;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> batch;
};

struct ValidateArgs {
    std::string scenario_path;
    double power_from = 0.0;
    double power_to = 30.0;
    int points = 10;
    std::vector<int> states{0, 1, 2};
    std::string pointing = "auto";
    std::string out_path;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> batch;
};

struct DiversityArgs {
    std::string scenario_path;
    int state = 0;
    double decades = 1.0;
    double power_to = 30.0;
    int points = 9;
    std::string pointing = "auto";
};

bool resolve_pointing(const hyfso::scenario::Scenario& sc, const std::string& mode) {
    if (mode == "off") return false;
    if (mode == "auto") return sc.pointing.has_value();
    if (mode == "on") {
        if (!sc.pointing)
            throw hyfso::scenario_error("--pointing on: scenario has no [pointing] section");
        return true;
    }
    throw hyfso::scenario_error("--pointing must be one of on, off, auto");
}

void check_states(const std::vector<int>& states) {
    if (states.empty()) throw hyfso::scenario_error("--states must not be empty");
    for (int s : states)
        if (s < 0 || s > 2) throw hyfso::scenario_error("--states entries must be 0, 1, or 2");
}

/// Writes to the path when given, otherwise to stdout.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw hyfso::scenario_error(path + ": cannot open output file");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int run_sweep_cmd(const SweepArgs& args) {
    const auto sc = hyfso::scenario::load_scenario_file(args.scenario_path);
    const bool pointing = resolve_pointing(sc, args.pointing);
    check_states(args.states);
    hyfso::outage::OutageModel model(sc, {}, pointing);

    hyfso::sweep::PowerGrid grid{args.power_from, args.power_to, args.points};
    std::optional<hyfso::sweep::McOptions> mc_opts;
    if (args.with_mc) {
        mc_opts = hyfso::sweep::McOptions{args.samples.value_or(sc.mc.samples),
                                          args.seed.value_or(sc.mc.seed),
                                          args.batch.value_or(sc.mc.batch)};
    }
    const auto rows = hyfso::sweep::run_sweep(model, args.states, grid, mc_opts);
    OutputTarget out(args.out_path);
    hyfso::sweep::write_sweep_csv(out.stream(), rows, args.with_mc);
    return 0;
}

int run_validate_cmd(const ValidateArgs& args) {
    const auto sc = hyfso::scenario::load_scenario_file(args.scenario_path);
    const bool pointing = resolve_pointing(sc, args.pointing);
    check_states(args.states);
    hyfso::outage::OutageModel model(sc, {}, pointing);

    hyfso::sweep::PowerGrid grid{args.power_from, args.power_to, args.points};
    const auto rows = hyfso::sweep::run_validation(
        model, args.states, grid, args.samples.value_or(sc.mc.samples),
        args.seed.value_or(sc.mc.seed), args.batch.value_or(sc.mc.batch));
    OutputTarget out(args.out_path);
    hyfso::sweep::write_validation_csv(out.stream(), rows);

    std::size_t flagged = 0;
    std::size_t insufficient = 0;
    for (const auto& row : rows) {
        if (row.flag == hyfso::mc::Flag::flagged) ++flagged;
        if (row.flag == hyfso::mc::Flag::insufficient) ++insufficient;
    }
    std::cerr << "validate: " << rows.size() << " rows, " << flagged << " flagged, "
              << insufficient << " below Monte Carlo resolution\n";
    return flagged == 0 ? 0 : 1;
}

int run_diversity_cmd(const DiversityArgs& args) {
    const auto sc = hyfso::scenario::load_scenario_file(args.scenario_path);
    const bool pointing = resolve_pointing(sc, args.pointing);
    hyfso::outage::OutageModel model(sc, {}, pointing);

    const double fitted = hyfso::sweep::fit_diversity_order(model, args.state, args.power_to,
                                                            args.decades, args.points);
    const double nominal = hyfso::outage::diversity_order(sc)[args.state];
    std::cout << "state = " << args.state << "\n";
    std::cout << "fitted_diversity = " << fitted << "\n";
    std::cout << "nominal_diversity = " << nominal << "\n";
    std::cout << "relative_error = " << (fitted - nominal) / nominal << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid optical/radio downlink outage calculator"};
    app.require_subcommand(1);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand(
        "sweep", "Analytic outage sweep over transmit power, CSV to stdout or --out");
    sweep->add_option("scenario", sweep_args.scenario_path, "Scenario file (.scn)")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--power-from", sweep_args.power_from, "Grid start, dBm");
    sweep->add_option("--power-to", sweep_args.power_to, "Grid end, dBm");
    sweep->add_option("--points", sweep_args.points, "Grid size");
    sweep->add_option("--states", sweep_args.states, "Weather states to sweep (0 1 2)");
    sweep->add_option("--pointing", sweep_args.pointing,
                      "Pointing error on the optical branch: on, off, auto");
    sweep->add_option("--out", sweep_args.out_path, "Output CSV path");
    sweep->add_flag("--mc", sweep_args.with_mc, "Add Monte Carlo columns");
    sweep->add_option("--samples", sweep_args.samples, "Monte Carlo samples per row");
    sweep->add_option("--seed", sweep_args.seed, "Monte Carlo master seed");
    sweep->add_option("--batch", sweep_args.batch, "Monte Carlo batch size");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand(
        "validate", "Monte Carlo vs analytic agreement; exit 1 on any flagged row");
    validate->add_option("scenario", validate_args.scenario_path, "Scenario file (.scn)")
        ->required()
        ->check(CLI::ExistingFile);
    validate->add_option("--power-from", validate_args.power_from, "Grid start, dBm");
    validate->add_option("--power-to", validate_args.power_to, "Grid end, dBm");
    validate->add_option("--points", validate_args.points, "Grid size");
    validate->add_option("--states", validate_args.states, "Weather states (0 1 2)");
    validate->add_option("--pointing", validate_args.pointing,
                         "Pointing error on the optical branch: on, off, auto");
    validate->add_option("--out", validate_args.out_path, "Output CSV path");
    validate->add_option("--samples", validate_args.samples, "Samples per row");
    validate->add_option("--seed", validate_args.seed, "Master seed");
    validate->add_option("--batch", validate_args.batch, "Batch size");

    DiversityArgs diversity_args;
    auto* diversity = app.add_subcommand(
        "diversity", "Fit the high-power outage slope against the state's SNR axis");
    diversity->add_option("scenario", diversity_args.scenario_path, "Scenario file (.scn)")
        ->required()
        ->check(CLI::ExistingFile);
    diversity->add_option("--state", diversity_args.state, "Weather state (0, 1, 2)")
        ->required()
        ->check(CLI::Range(0, 2));
    diversity->add_option("--decades", diversity_args.decades, "Fit window width in decades");
    diversity->add_option("--power-to", diversity_args.power_to, "Fit window end, dBm")
        ->required();
    diversity->add_option("--points", diversity_args.points, "Fit points");
    diversity->add_option("--pointing", diversity_args.pointing,
                          "Pointing error on the optical branch: on, off, auto");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) return run_sweep_cmd(sweep_args);
        if (validate->parsed()) return run_validate_cmd(validate_args);
        if (diversity->parsed()) return run_diversity_cmd(diversity_args);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const hyfso::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const hyfso::scenario_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hyfso::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
