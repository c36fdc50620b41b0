//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/baseline.hpp
//! Averaging baseline with a day-ahead adjustment factor, and a strategic
//! consumer facing it.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "model.hpp"

namespace drb
{
//---------------------------------------------------------------------------//
// TYPES
//---------------------------------------------------------------------------//
struct HorizonPlan
{
    std::size_t n_days{0};
    std::vector<std::size_t> event_days;  //!< sorted, each announced a day ahead
    std::size_t m{10};  //!< averaging window length
    std::vector<double> theta_per_day;
    //! Consumer raises use on days that only enter a future numerator.
    bool numerator_inflation{true};
    //! Consumer lowers use on days that only enter a future denominator.
    bool denominator_deflation{true};
};

//! Numerator days T_N and denominator days T_E for one event.
struct BaselineWindows
{
    std::vector<std::size_t> numerator_days;
    std::vector<std::size_t> denominator_days;
};

struct CaisoBaseline
{
    double f_c{0};  //!< unadjusted m-day average
    double f_minus{0};  //!< average over the days before the window
    double c_f{1};  //!< adjustment q^- / f^-
    double f_bar_c{0};  //!< f_c * c_f
};

struct CaisoEventRecord
{
    std::size_t day{0};
    double q_minus{0};  //!< consumption on the day before the event
    CaisoBaseline baseline;
    double q_a{0};  //!< true baseline on the event day
    double q_event{0};  //!< consumption on the event day
    double inflation{0};  //!< f_bar_c - q_a
};

struct HorizonResult
{
    std::vector<double> consumption;  //!< per day
    std::vector<CaisoEventRecord> events;
};

struct InflationSample
{
    double mean{0};
    double stderr_{0};
    std::size_t n{0};

    //! One-sided lower confidence bound at the given z.
    double lower(double z = 1.6448536269514722) const { return mean - z * stderr_; }
};

struct ComparisonReport
{
    InflationSample caiso;
    double selfreport_inflation{0};  //!< E[f* - q^a]
    double lemma5_bound{0};  //!< d pi2
    bool dominance{false};  //!< selfreport < bound < caiso mean
    bool confident{false};  //!< as dominance, with the 95% lower bound
};

//---------------------------------------------------------------------------//
// BASELINE ARITHMETIC
//---------------------------------------------------------------------------//
double caiso_unadjusted_baseline(std::span<double const> consumptions,
                                 std::size_t m);
double adjustment_factor(double q_minus, double f_minus);
double strategic_dayahead_consumption(ConsumerParams const& params,
                                      double pi0,
                                      double pi2,
                                      double f_c,
                                      double f_minus,
                                      double theta);

//---------------------------------------------------------------------------//
// HORIZON
//---------------------------------------------------------------------------//
//! n_events evenly spaced events, the first after enough history for m.
std::vector<std::size_t>
even_event_schedule(std::size_t n_days, std::size_t n_events, std::size_t m);

//! Draw a theta for every day of the horizon.
std::vector<double> draw_horizon_thetas(ThetaDist const& dist,
                                        std::size_t n_days,
                                        std::uint64_t seed,
                                        std::uint32_t replication);

BaselineWindows
baseline_windows(HorizonPlan const& plan, std::size_t event_day);

std::vector<std::string> validate(HorizonPlan const& plan);

HorizonResult simulate_caiso_horizon(ConsumerParams const& params,
                                     double pi0,
                                     double pi2,
                                     HorizonPlan const& plan);

InflationSample summarize(std::vector<double> const& values);

//! Self-report vs averaging baseline. Runs `replications` horizons with
//! independent theta paths drawn from params.theta_dist.
ComparisonReport compare_methods(ConsumerParams const& params,
                                 MechanismParams const& mech,
                                 HorizonPlan const& plan_template,
                                 ThetaSamplePlan const& sample_plan,
                                 std::size_t replications = 1,
                                 std::size_t workers = 1);

}  // namespace drb
