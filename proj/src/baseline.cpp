//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file baseline.cpp
//---------------------------------------------------------------------------//
#include "drb/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "drb/consumer.hpp"
#include "drb/errors.hpp"
#include "drb/parallel.hpp"
#include "drb/philox.hpp"

namespace drb
{
namespace
{
double mean_over(std::vector<double> const& values,
                 std::vector<std::size_t> const& days)
{
    double sum = 0;
    for (auto day : days)
        sum += values[day];
    return sum / static_cast<double>(days.size());
}
}  // namespace

//---------------------------------------------------------------------------//
// BASELINE ARITHMETIC
//---------------------------------------------------------------------------//
double caiso_unadjusted_baseline(std::span<double const> consumptions,
                                 std::size_t m)
{
    if (m == 0 || consumptions.size() != m)
    {
        std::ostringstream os;
        os << "caiso_unadjusted_baseline: expected " << m << " values, got "
           << consumptions.size();
        throw ContractError(os.str());
    }
    double const sum
        = std::accumulate(consumptions.begin(), consumptions.end(), 0.0);
    return sum / static_cast<double>(m);
}

double adjustment_factor(double q_minus, double f_minus)
{
    if (!(f_minus > 0))
        throw DomainError("adjustment_factor: f_minus must be positive");
    return q_minus / f_minus;
}

double strategic_dayahead_consumption(ConsumerParams const& params,
                                      double pi0,
                                      double pi2,
                                      double f_c,
                                      double f_minus,
                                      double theta)
{
    if (!(f_minus > 0))
    {
        throw DomainError(
            "strategic_dayahead_consumption: f_minus must be positive");
    }
    return inverse_marginal_utility(params, pi0 - pi2 * f_c / f_minus, theta);
}

//---------------------------------------------------------------------------//
// HORIZON
//---------------------------------------------------------------------------//
std::vector<std::size_t>
even_event_schedule(std::size_t n_days, std::size_t n_events, std::size_t m)
{
    std::vector<std::size_t> days;
    if (n_events == 0)
        return days;
    std::size_t const spacing = n_days / n_events;
    // Needs m history days, their predecessors, and the day before
    std::size_t const earliest = m + 2;
    if (spacing == 0 || spacing - 1 < earliest)
    {
        std::ostringstream os;
        os << "even_event_schedule: " << n_events << " events in " << n_days
           << " days leave too little history for m = " << m;
        throw ValidationError(os.str());
    }
    for (std::size_t k = 0; k < n_events; ++k)
        days.push_back(spacing * (k + 1) - 1);
    return days;
}

std::vector<double> draw_horizon_thetas(ThetaDist const& dist,
                                        std::size_t n_days,
                                        std::uint64_t seed,
                                        std::uint32_t replication)
{
    std::vector<double> thetas(n_days);
    for (std::size_t day = 0; day < n_days; ++day)
    {
        CounterRng rng(seed,
                       rng_domain::horizon_theta,
                       replication,
                       static_cast<std::uint32_t>(day));
        thetas[day] = sample_theta(dist, rng);
    }
    return thetas;
}

//---------------------------------------------------------------------------//
/*!
 * T_N is the m most recent non-event days strictly before the announcement
 * day (event_day - 1), so the day-ahead consumption does not feed its own
 * numerator. T_E is the calendar day before each of those.
 */
BaselineWindows baseline_windows(HorizonPlan const& plan, std::size_t event_day)
{
    BaselineWindows windows;
    if (event_day < 2)
        return windows;
    for (std::size_t day = event_day - 1; day-- > 0;)
    {
        if (windows.numerator_days.size() == plan.m)
            break;
        if (std::binary_search(
                plan.event_days.begin(), plan.event_days.end(), day))
            continue;
        windows.numerator_days.push_back(day);
    }
    for (auto day : windows.numerator_days)
    {
        if (day > 0)
            windows.denominator_days.push_back(day - 1);
    }
    return windows;
}

std::vector<std::string> validate(HorizonPlan const& plan)
{
    std::vector<std::string> errors;
    if (plan.m == 0)
        errors.push_back("horizon: m must be positive");
    if (plan.theta_per_day.size() != plan.n_days)
        errors.push_back("horizon: need one theta per day");
    if (!std::is_sorted(plan.event_days.begin(), plan.event_days.end())
        || std::adjacent_find(plan.event_days.begin(), plan.event_days.end())
               != plan.event_days.end())
    {
        errors.push_back("horizon: event days must be strictly increasing");
        return errors;
    }
    for (auto day : plan.event_days)
    {
        std::ostringstream os;
        os << "horizon: event on day " << day;
        if (day >= plan.n_days)
        {
            errors.push_back(os.str() + " lies past the horizon");
            continue;
        }
        if (day == 0
            || std::binary_search(
                plan.event_days.begin(), plan.event_days.end(), day - 1))
        {
            errors.push_back(os.str()
                             + " has no non-event announcement day before it");
            continue;
        }
        auto const windows = baseline_windows(plan, day);
        if (windows.numerator_days.size() < plan.m
            || windows.denominator_days.size() < plan.m)
        {
            errors.push_back(os.str() + " has fewer than m = "
                             + std::to_string(plan.m)
                             + " prior non-event days with predecessors");
        }
    }
    return errors;
}

//---------------------------------------------------------------------------//
/*!
 * Day-by-day consumption facing the adjusted averaging baseline.
 *
 * Event days consume q^c. A non-event day consumes mu^-1(pi0 - h), where h
 * is the marginal reward of one more unit today through future baselines:
 * pi2 f_c / f^- on the announcement day, and with the toggles +pi2/m for each
 * upcoming event whose numerator window holds the day and -pi2/m for each
 * whose denominator window holds it. The window terms are linearized at
 * C_f = 1 since they are chosen before the announcement.
 */
HorizonResult simulate_caiso_horizon(ConsumerParams const& params,
                                     double pi0,
                                     double pi2,
                                     HorizonPlan const& plan)
{
    auto const errors = validate(plan);
    if (!errors.empty())
    {
        std::string joined;
        for (auto const& e : errors)
            joined += (joined.empty() ? "" : "; ") + e;
        throw ValidationError(joined);
    }

    std::size_t const n = plan.n_days;
    std::vector<BaselineWindows> windows;
    std::vector<double> history_weight(n, 0.0);
    std::vector<std::ptrdiff_t> announces(n, -1);
    std::vector<bool> is_event(n, false);
    double const per_day = 1.0 / static_cast<double>(plan.m);
    for (std::size_t e = 0; e < plan.event_days.size(); ++e)
    {
        auto const day = plan.event_days[e];
        windows.push_back(baseline_windows(plan, day));
        is_event[day] = true;
        announces[day - 1] = static_cast<std::ptrdiff_t>(e);
        if (plan.numerator_inflation)
        {
            for (auto d : windows.back().numerator_days)
                history_weight[d] += per_day;
        }
        if (plan.denominator_deflation)
        {
            for (auto d : windows.back().denominator_days)
                history_weight[d] -= per_day;
        }
    }

    HorizonResult result;
    result.consumption.assign(n, 0.0);
    auto& q = result.consumption;
    for (std::size_t day = 0; day < n; ++day)
    {
        double const theta = plan.theta_per_day[day];
        if (is_event[day])
        {
            auto const e = static_cast<std::size_t>(announces[day - 1]);
            auto const& w = windows[e];
            CaisoEventRecord record;
            record.day = day;
            record.q_minus = q[day - 1];
            record.baseline.f_c = mean_over(q, w.numerator_days);
            record.baseline.f_minus = mean_over(q, w.denominator_days);
            record.baseline.c_f
                = adjustment_factor(record.q_minus, record.baseline.f_minus);
            record.baseline.f_bar_c = record.baseline.f_c * record.baseline.c_f;
            record.q_a = consumption_nonparticipant(params, pi0, theta);
            record.q_event = consumption_called(params, pi0, pi2, theta);
            record.inflation = record.baseline.f_bar_c - record.q_a;
            q[day] = record.q_event;
            result.events.push_back(record);
            continue;
        }

        double const price = pi0 - pi2 * history_weight[day];
        if (announces[day] >= 0)
        {
            auto const& w = windows[static_cast<std::size_t>(announces[day])];
            q[day] = strategic_dayahead_consumption(params,
                                                    price,
                                                    pi2,
                                                    mean_over(q, w.numerator_days),
                                                    mean_over(q, w.denominator_days),
                                                    theta);
        }
        else
        {
            q[day] = inverse_marginal_utility(params, price, theta);
        }
    }
    return result;
}

InflationSample summarize(std::vector<double> const& values)
{
    InflationSample sample;
    sample.n = values.size();
    if (values.empty())
        return sample;
    double const n = static_cast<double>(values.size());
    sample.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1)
    {
        double ss = 0;
        for (double v : values)
            ss += (v - sample.mean) * (v - sample.mean);
        sample.stderr_ = std::sqrt(ss / (n - 1) / n);
    }
    return sample;
}

ComparisonReport compare_methods(ConsumerParams const& params,
                                 MechanismParams const& mech,
                                 HorizonPlan const& plan_template,
                                 ThetaSamplePlan const& sample_plan,
                                 std::size_t replications,
                                 std::size_t workers)
{
    if (replications == 0)
        throw ContractError("compare_methods: need at least one replication");

    std::vector<std::vector<double>> per_rep(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
        auto plan = plan_template;
        plan.theta_per_day = draw_horizon_thetas(params.theta_dist,
                                                 plan.n_days,
                                                 sample_plan.seed,
                                                 static_cast<std::uint32_t>(r));
        auto const horizon
            = simulate_caiso_horizon(params, mech.pi0, mech.pi2, plan);
        for (auto const& event : horizon.events)
            per_rep[r].push_back(event.inflation);
    });
    std::vector<double> inflations;
    for (auto const& rep : per_rep)
        inflations.insert(inflations.end(), rep.begin(), rep.end());

    ComparisonReport report;
    report.caiso = summarize(inflations);
    report.lemma5_bound = params.d * mech.pi2;

    auto const nodes = theta_nodes(params.theta_dist, sample_plan);
    report.selfreport_inflation
        = solve_optimal_report(params, mech, nodes).expected_inflation;

    report.dominance = report.selfreport_inflation < report.lemma5_bound
                       && report.lemma5_bound < report.caiso.mean;
    report.confident = report.selfreport_inflation < report.lemma5_bound
                       && report.lemma5_bound < report.caiso.lower();
    return report;
}

}  // namespace drb
