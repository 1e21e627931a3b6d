#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "scenario_config.hpp"

// readout: dispersive qutrit-readout simulator.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-guard failure.

int main(int argc, char** argv) {
    using namespace readout::cli;

    CLI::App app{"dispersive qutrit readout simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<uint64_t> seed;
    std::optional<int> n_traj;
    std::optional<double> dt_seconds;
    std::optional<double> eta;
    bool steady_state = false;

    app.add_option("--config", config_path, "scenario file (key = value)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "override RNG seed");
    app.add_option("--traj", n_traj, "override trajectory count");
    app.add_option("--dt", dt_seconds, "override integrator step, seconds");
    app.add_option("--eta", eta, "override measurement efficiency");
    app.add_flag("--steady-state", steady_state, "freeze cavity amplitudes at alpha(inf)");

    auto* sub_amplitudes = app.add_subcommand("amplitudes", "cavity pointer-state transients");
    auto* sub_sme = app.add_subcommand("sme", "heterodyne trajectory ensemble");
    auto* sub_sweep = app.add_subcommand("sweep", "readout-frequency separation sweep");
    auto* sub_ramsey = app.add_subcommand("ramsey", "Ramsey fringe curves");
    auto* sub_filters = app.add_subcommand("filters", "dephasing filter functions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        ScenarioConfig cfg = ScenarioConfig::parse_file(config_path);
        if (seed) cfg.seed = *seed;
        if (n_traj) cfg.n_traj = *n_traj;
        if (dt_seconds) cfg.dt_ns = *dt_seconds * 1e9;
        if (eta) cfg.eta = *eta;
        if (steady_state) cfg.steady_state = true;
        cfg.validate();

        if (sub_amplitudes->parsed()) return cmd_amplitudes(cfg, out_dir);
        if (sub_sme->parsed()) return cmd_sme(cfg, out_dir);
        if (sub_sweep->parsed()) return cmd_sweep(cfg, out_dir);
        if (sub_ramsey->parsed()) return cmd_ramsey(cfg, out_dir);
        if (sub_filters->parsed()) return cmd_filters(cfg, out_dir);
        return 2;
    } catch (const readout::GuardError& e) {
        std::cerr << "numerical guard failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
