//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/experiments.hpp
//! Experiment drivers: each run_* computes a structured result, each *_table
//! renders it with the fixed CSV schema.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "baseline.hpp"
#include "csv.hpp"
#include "mechanism.hpp"
#include "scenario.hpp"

namespace drb
{
inline constexpr char const kVersion[] = "1.0.0";

//! Command-line overrides of scenario values.
struct RunOptions
{
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;  //!< Monte Carlo consumer-events
    std::optional<std::size_t> events;
    std::optional<std::string> out_dir;
    std::size_t workers{1};
};

std::uint64_t effective_seed(Scenario const& s, RunOptions const& options);

//---------------------------------------------------------------------------//
struct Table2Row
{
    double d{0};
    double theory{0};
    double numeric{0};
    double montecarlo{0};
    double montecarlo_stderr{0};
    std::size_t montecarlo_samples{0};
    double abs_error{0};  //!< |montecarlo - theory|
};

std::vector<Table2Row> run_table2(Scenario const& s, RunOptions const& options);
CsvTable table2_table(std::vector<Table2Row> const& rows);

//---------------------------------------------------------------------------//
struct Fig3Curve
{
    double d{0};
    GroupStats stats;
    SoCostCurve curve;
    bool interior{false};  //!< minimizer strictly inside the grid
};

struct Fig3Result
{
    double delta_q_star{0};
    bool delta_q_pinned{false};
    double pi_star{0};
    std::vector<Fig3Curve> curves;  //!< d-major, then pi_rec
};

Fig3Result run_fig3(Scenario const& s, RunOptions const& options);
CsvTable fig3_table(Fig3Result const& result);
CsvTable fig3_minimizer_table(Fig3Result const& result);

//---------------------------------------------------------------------------//
ComparisonReport run_comparison(Scenario const& s, RunOptions const& options);
CsvTable comparison_table(ComparisonReport const& report);

//! Horizon plan for the scenario (events evenly spread unless listed).
HorizonPlan horizon_plan(Scenario const& s);

//---------------------------------------------------------------------------//
struct EventRun
{
    Population population;
    GroupPlan plan;
    MechanismParams mech;
    double delta_q_star{0};
    std::vector<EventSettlement> events;
};

EventRun run_event(Scenario const& s, RunOptions const& options);
CsvTable event_table(EventRun const& run);

//! Population for the event experiment with reports per the scenario policy.
Population event_population(Scenario const& s, MechanismParams const& mech);

//---------------------------------------------------------------------------//
struct ExecutionResult
{
    std::vector<std::string> outputs;  //!< paths written, CSV then manifest
    std::string manifest_path;
};

//! Run, write CSVs under the output directory, and write manifest.json.
ExecutionResult execute(Experiment experiment,
                        Scenario const& s,
                        RunOptions const& options);

}  // namespace drb
