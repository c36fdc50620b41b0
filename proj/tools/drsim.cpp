//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drsim.cpp
//! Command-line front end for the demand-response experiments.
//---------------------------------------------------------------------------//
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "drb/errors.hpp"
#include "drb/experiments.hpp"
#include "drb/scenario.hpp"

namespace
{
enum ExitCode
{
    ok = 0,
    validation = 2,
    solver = 3,
    io = 4
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Demand-response baseline experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string scenario_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::size_t samples = 0;
    std::size_t events = 0;
    std::size_t workers = 1;

    app.add_option("--scenario", scenario_path, "Scenario file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
    auto* out_opt = app.add_option("--out", out_dir, "Output directory");
    auto* samples_opt
        = app.add_option("--samples", samples, "Monte Carlo sample count");
    auto* events_opt = app.add_option("--events", events, "Event count");
    app.add_option("--workers", workers, "Worker threads (0: all cores)");

    struct Command
    {
        char const* name;
        char const* help;
        drb::Experiment experiment;
    };
    Command const commands[] = {
        {"table2", "Baseline inflation per d", drb::Experiment::table2},
        {"fig3", "SO cost against calling probability", drb::Experiment::fig3},
        {"compare", "Self-report against averaging baseline",
         drb::Experiment::compare},
        {"event", "Per-event settlement", drb::Experiment::event},
        {"validate", "Load and check a scenario", drb::Experiment::validate},
    };
    for (auto const& c : commands)
        app.add_subcommand(c.name, c.help);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    drb::Experiment experiment = drb::Experiment::validate;
    for (auto const& c : commands)
    {
        if (app.got_subcommand(c.name))
            experiment = c.experiment;
    }

    drb::RunOptions options;
    if (*seed_opt)
        options.seed = seed;
    if (*out_opt)
        options.out_dir = out_dir;
    if (*samples_opt)
        options.samples = samples;
    if (*events_opt)
        options.events = events;
    options.workers
        = workers ? workers : std::max(1u, std::thread::hardware_concurrency());

    try
    {
        auto const scenario = drb::load_scenario(scenario_path);
        for (auto const& w : scenario.warnings)
            std::cerr << "warning: " << w << '\n';
        auto const result = drb::execute(experiment, scenario, options);
        if (experiment == drb::Experiment::validate)
        {
            std::cout << "scenario '" << scenario.name << "' is valid (hash "
                      << scenario.hash << ")\n";
        }
        for (auto const& path : result.outputs)
            std::cout << path << '\n';
        return ok;
    }
    catch (drb::IoError const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return io;
    }
    catch (drb::ValidationError const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    }
    catch (drb::SolverError const& e)
    {
        std::cerr << "error: " << e.what() << " (residual " << e.residual()
                  << ")\n";
        return solver;
    }
    catch (drb::RecruitmentError const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    }
}
