// unravel — collective-decay simulation toolkit
//
// Subcommands:
//   simulate --config <path>   run a backend, emit CSV series + summary
//   predict  --config <path>   closed-form peak/steady-state predictions
//   compare  --a <path> --b <path> --observable <name> --tol <x> [--abs]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-invariant
// failure (including a failed comparison).
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "unravel/errors.hpp"
#include "unravel/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"unravel: quantum-state-diffusion toolkit for collective radiative decay"};
    app.require_subcommand(1);

    std::string config_path, config_a, config_b, observable;
    double tol = 3.0;
    bool absolute = false;

    auto* simulate = app.add_subcommand("simulate", "run a simulation from a config file");
    simulate->add_option("--config", config_path, "run configuration file")->required();

    auto* predict = app.add_subcommand("predict", "closed-form peak and steady-state predictions");
    predict->add_option("--config", config_path, "run configuration file")->required();

    auto* compare = app.add_subcommand("compare", "run two configs and compare one observable");
    compare->add_option("--a", config_a, "first run configuration")->required();
    compare->add_option("--b", config_b, "second run configuration")->required();
    compare->add_option("--observable", observable, "series column to compare")->required();
    compare->add_option("--tol", tol, "tolerance (combined standard errors, or absolute with --abs)")
        ->required();
    compare->add_flag("--abs", absolute, "interpret the tolerance as an absolute deviation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            const unravel::RunConfig cfg = unravel::parse_config_file(config_path);
            const unravel::RunOutput out = unravel::run_simulation(cfg);
            if (!out.series.t.empty())
                std::cout << "series written to " << cfg.series_path << "\n";
            std::cout << "summary written to " << cfg.summary_path << "\n";
            return 0;
        }
        if (predict->parsed()) {
            const unravel::RunConfig cfg = unravel::parse_config_file(config_path);
            std::cout << unravel::predict_text(cfg);
            return 0;
        }
        const unravel::RunConfig a = unravel::parse_config_file(config_a);
        const unravel::RunConfig b = unravel::parse_config_file(config_b);
        const unravel::CompareReport rep =
            unravel::compare_backends(a, b, observable, tol, absolute);
        std::cout << rep.text;
        return rep.pass ? 0 : 3;
    } catch (const unravel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const unravel::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const unravel::CapacityError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const unravel::NumericsError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
