//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file experiments.cpp
//---------------------------------------------------------------------------//
#include "drb/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>

#include "json.hpp"

#include "drb/consumer.hpp"
#include "drb/errors.hpp"

namespace drb
{
namespace
{
ThetaSamplePlan sample_plan(Scenario const& s, RunOptions const& options)
{
    auto plan = s.sampling;
    plan.seed = effective_seed(s, options);
    return plan;
}

std::size_t ceil_div(std::size_t a, std::size_t b)
{
    return (a + b - 1) / b;
}
}  // namespace

std::uint64_t effective_seed(Scenario const& s, RunOptions const& options)
{
    return options.seed.value_or(s.sampling.seed);
}

//---------------------------------------------------------------------------//
// INFLATION TABLE
//---------------------------------------------------------------------------//
/*!
 * Inflation per d three ways. The Monte Carlo column settles events on a
 * homogeneous population reporting f*, each group sized to deliver the
 * target exactly, and averages (measured - true reduction) per called
 * consumer.
 */
std::vector<Table2Row> run_table2(Scenario const& s, RunOptions const& options)
{
    require_for(s, Experiment::table2);
    double const pi2 = resolve_pi2(s);
    auto const mech = s.mechanism(pi2);
    auto const plan = sample_plan(s, options);
    std::size_t const samples = options.samples.value_or(s.mc_samples);

    std::vector<Table2Row> rows;
    for (double d : s.d_values)
    {
        auto const params = s.consumer(d);
        auto const nodes = theta_nodes(params.theta_dist, plan);
        auto const solution = solve_optimal_report(params, mech, nodes);
        if (!solution.converged)
        {
            throw SolverError("table2: optimal report did not converge for d = "
                                  + format_number(d),
                              solution.residual);
        }

        Table2Row row;
        row.d = d;
        row.theory = closed_form_inflation(d, mech.penalty.lambda, mech.p, pi2);
        row.numeric = solution.expected_inflation;

        if (mech.p > 0 && pi2 > 0 && samples > 0)
        {
            Population pop;
            pop.unit = s.units;
            pop.consumers.assign(s.count, Member{params, solution.f_star});
            auto const n_groups
                = static_cast<std::size_t>(std::llround(1 / mech.p));
            std::size_t const per_group = s.count / n_groups;
            double const target = static_cast<double>(per_group) * d * pi2;
            auto const groups = build_groups(pop, mech.p, target, pi2);

            std::size_t const n_events = ceil_div(samples, per_group);
            auto const events = simulate_events(
                pop, groups, mech, plan.seed, 0, n_events, options.workers);
            std::vector<double> per_consumer;
            per_consumer.reserve(events.size());
            for (auto const& e : events)
            {
                per_consumer.push_back(
                    (e.measured_reduction - e.true_reduction)
                    / static_cast<double>(e.n_called));
            }
            auto const summary = summarize(per_consumer);
            row.montecarlo = summary.mean;
            row.montecarlo_stderr = summary.stderr_;
            row.montecarlo_samples = n_events * per_group;
        }
        row.abs_error = std::abs(row.montecarlo - row.theory);
        rows.push_back(row);
    }
    return rows;
}

CsvTable table2_table(std::vector<Table2Row> const& rows)
{
    CsvTable table({"d",
                    "delta_f_theory",
                    "delta_f_numeric",
                    "delta_f_montecarlo",
                    "abs_error"});
    for (auto const& r : rows)
    {
        table.add_row({format_number(r.d),
                       format_number(r.theory),
                       format_number(r.numeric),
                       format_number(r.montecarlo),
                       format_number(r.abs_error)});
    }
    return table;
}

//---------------------------------------------------------------------------//
// SO COST SWEEP
//---------------------------------------------------------------------------//
Fig3Result run_fig3(Scenario const& s, RunOptions const&)
{
    require_for(s, Experiment::fig3);
    Fig3Result result;
    result.delta_q_pinned = s.delta_q_star.has_value();
    result.delta_q_star = resolve_delta_q_star(s);
    result.pi_star = tmc_price(*s.market, result.delta_q_star);
    double const pi2 = resolve_pi2(s);
    auto const mech = s.mechanism(pi2);

    for (double d : s.d_values)
    {
        auto const stats
            = homogeneous_group_stats(result.delta_q_star, d, result.pi_star);
        for (double pi_rec : s.pi_rec)
        {
            Fig3Curve curve;
            curve.d = d;
            curve.stats = stats;
            curve.curve = sweep_probability(
                *s.market, stats, mech, result.delta_q_star, pi_rec, s.p_grid);
            curve.interior = curve.curve.minimizer_index > 0
                             && curve.curve.minimizer_index + 1
                                    < curve.curve.points.size();
            result.curves.push_back(std::move(curve));
        }
    }
    return result;
}

CsvTable fig3_table(Fig3Result const& result)
{
    CsvTable table({"d", "pi_rec", "p", "J_SO", "J_SO_no_recruit",
                    "recruitment_term"});
    for (auto const& c : result.curves)
    {
        for (auto const& point : c.curve.points)
        {
            table.add_row({format_number(c.d),
                           format_number(c.curve.pi_rec),
                           format_number(point.p),
                           format_number(point.terms.total),
                           format_number(point.terms.no_recruitment),
                           format_number(point.terms.recruitment_term)});
        }
    }
    return table;
}

CsvTable fig3_minimizer_table(Fig3Result const& result)
{
    CsvTable table({"d",
                    "pi_rec",
                    "minimizer_p",
                    "J_SO_min",
                    "interior",
                    "pi_star",
                    "delta_q_star",
                    "delta_q_source"});
    for (auto const& c : result.curves)
    {
        auto const& best = c.curve.points[c.curve.minimizer_index];
        table.add_row({format_number(c.d),
                       format_number(c.curve.pi_rec),
                       format_number(c.curve.minimizer_p),
                       format_number(best.terms.total),
                       format_flag(c.interior),
                       format_number(result.pi_star),
                       format_number(result.delta_q_star),
                       result.delta_q_pinned ? "pinned" : "foc"});
    }
    return table;
}

//---------------------------------------------------------------------------//
// BASELINE COMPARISON
//---------------------------------------------------------------------------//
HorizonPlan horizon_plan(Scenario const& s)
{
    if (!s.horizon)
        throw ValidationError("horizon section required for compare");
    auto const& h = *s.horizon;
    HorizonPlan plan;
    plan.n_days = h.days;
    plan.m = h.m;
    plan.event_days = h.event_days.empty()
                          ? even_event_schedule(h.days, h.events, h.m)
                          : h.event_days;
    plan.numerator_inflation = h.numerator_inflation;
    plan.denominator_deflation = h.denominator_deflation;
    plan.theta_per_day.assign(plan.n_days, 0.0);
    auto const errors = validate(plan);
    if (!errors.empty())
    {
        std::string joined;
        for (auto const& e : errors)
            joined += (joined.empty() ? "" : "; ") + e;
        throw ValidationError(joined);
    }
    return plan;
}

ComparisonReport run_comparison(Scenario const& s, RunOptions const& options)
{
    require_for(s, Experiment::compare);
    auto const mech = s.mechanism(resolve_pi2(s));
    return compare_methods(s.consumer(s.d_values.front()),
                           mech,
                           horizon_plan(s),
                           sample_plan(s, options),
                           s.horizon->replications,
                           options.workers);
}

CsvTable comparison_table(ComparisonReport const& report)
{
    CsvTable table({"method", "mean_inflation", "stderr", "lemma5_bound",
                    "dominance_flag"});
    table.add_row({"self-report",
                   format_number(report.selfreport_inflation),
                   format_number(0.0),
                   format_number(report.lemma5_bound),
                   format_flag(report.confident)});
    table.add_row({"caiso-mm-adjusted",
                   format_number(report.caiso.mean),
                   format_number(report.caiso.stderr_),
                   format_number(report.lemma5_bound),
                   format_flag(report.confident)});
    return table;
}

//---------------------------------------------------------------------------//
// EVENT SETTLEMENT
//---------------------------------------------------------------------------//
Population event_population(Scenario const& s, MechanismParams const& mech)
{
    auto d_list = s.population_d;
    if (d_list.empty())
        d_list.assign(s.count, s.d_values.front());

    // Reports depend only on d within a scenario
    std::map<double, double> report_for;
    Population pop;
    pop.unit = s.units;
    for (double d : d_list)
    {
        auto const params = s.consumer(d);
        auto it = report_for.find(d);
        if (it == report_for.end())
        {
            auto const nodes = theta_nodes(params.theta_dist, s.sampling);
            double f = mean_nonparticipant(params, mech.pi0, nodes);
            if (s.report == ReportPolicy::optimal)
            {
                auto const solution = solve_optimal_report(params, mech, nodes);
                if (!solution.converged)
                {
                    throw SolverError("event: optimal report did not converge",
                                      solution.residual);
                }
                f = solution.f_star;
            }
            it = report_for.emplace(d, f).first;
        }
        pop.consumers.push_back({params, it->second});
    }
    return pop;
}

EventRun run_event(Scenario const& s, RunOptions const& options)
{
    require_for(s, Experiment::event);
    EventRun run;
    run.mech = s.mechanism(resolve_pi2(s));
    run.delta_q_star = resolve_delta_q_star(s);
    run.population = event_population(s, run.mech);
    try
    {
        run.plan = build_groups(
            run.population, run.mech.p, run.delta_q_star, run.mech.pi2);
    }
    catch (RecruitmentError const& e)
    {
        throw ValidationError(e.what());
    }
    run.events = simulate_events(run.population,
                                 run.plan,
                                 run.mech,
                                 effective_seed(s, options),
                                 0,
                                 options.events.value_or(s.events),
                                 options.workers);
    return run;
}

CsvTable event_table(EventRun const& run)
{
    CsvTable table({"event_index", "selected_group", "delta_q_tilde",
                    "delta_q_true", "rewards", "penalties"});
    for (auto const& e : run.events)
    {
        table.add_row({format_number(static_cast<std::size_t>(e.event_index)),
                       format_number(e.selected_group),
                       format_number(e.measured_reduction),
                       format_number(e.true_reduction),
                       format_number(e.rewards_paid),
                       format_number(e.penalties_collected)});
    }
    return table;
}

//---------------------------------------------------------------------------//
// ORCHESTRATION
//---------------------------------------------------------------------------//
ExecutionResult execute(Experiment experiment,
                        Scenario const& s,
                        RunOptions const& options)
{
    auto const start = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, CsvTable>> tables;
    nlohmann::json extra = nlohmann::json::object();

    switch (experiment)
    {
        case Experiment::table2: {
            auto const rows = run_table2(s, options);
            tables.emplace_back("table2.csv", table2_table(rows));
            for (auto const& r : rows)
            {
                extra["montecarlo"].push_back(
                    {{"d", r.d},
                     {"stderr", r.montecarlo_stderr},
                     {"samples", r.montecarlo_samples}});
            }
            break;
        }
        case Experiment::fig3: {
            auto const result = run_fig3(s, options);
            tables.emplace_back("fig3.csv", fig3_table(result));
            tables.emplace_back("fig3_minimizers.csv",
                                fig3_minimizer_table(result));
            break;
        }
        case Experiment::compare: {
            auto const report = run_comparison(s, options);
            tables.emplace_back("compare.csv", comparison_table(report));
            extra["caiso_events"] = report.caiso.n;
            break;
        }
        case Experiment::event: {
            auto const run = run_event(s, options);
            tables.emplace_back("events.csv", event_table(run));
            extra["groups"] = run.plan.n_groups;
            extra["recruited"] = run.plan.n_total;
            extra["n_bar"] = run.plan.n_bar;
            break;
        }
        case Experiment::validate:
            require_for(s, experiment);
            return {};
    }

    std::filesystem::path const dir = options.out_dir.value_or(s.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw IoError("cannot create output directory '" + dir.string()
                      + "': " + ec.message());
    }

    ExecutionResult result;
    for (auto const& [name, table] : tables)
    {
        auto const path = (dir / name).string();
        table.write(path);
        result.outputs.push_back(path);
    }

    double const wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    nlohmann::json manifest;
    manifest["experiment"] = to_string(experiment);
    manifest["version"] = kVersion;
    manifest["scenario"] = {{"name", s.name},
                            {"hash", s.hash},
                            {"units", s.units},
                            {"resolved", s.resolved}};
    manifest["seed"] = effective_seed(s, options);
    manifest["workers"] = options.workers;
    manifest["warnings"] = s.warnings;
    manifest["outputs"] = nlohmann::json::array();
    for (auto const& [name, table] : tables)
        manifest["outputs"].push_back(name);
    manifest["details"] = extra;
    manifest["wall_clock_seconds"] = wall;

    result.manifest_path = (dir / ("manifest_" + to_string(experiment) + ".json")).string();
    std::ofstream out(result.manifest_path, std::ios::trunc);
    if (!out)
        throw IoError("cannot write '" + result.manifest_path + "'");
    out << manifest.dump(2) << '\n';
    result.outputs.push_back(result.manifest_path);
    return result;
}

}  // namespace drb
