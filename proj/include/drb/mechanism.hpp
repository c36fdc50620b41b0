//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/mechanism.hpp
//! Recruitment into 1/p groups, per-event settlement, and SO cost.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "market.hpp"
#include "model.hpp"

namespace drb
{
//---------------------------------------------------------------------------//
// TYPES
//---------------------------------------------------------------------------//
struct Member
{
    ConsumerParams params;
    double report{0};  //!< self-reported baseline f
};

struct Population
{
    std::vector<Member> consumers;
    std::string unit{"kWh-scale"};
};

//! Integer group count n and the probability 1/n it implies.
struct AdmissibleProbability
{
    std::size_t n_groups{1};
    double p{1};
    bool rounded{false};
};

struct GroupPlan
{
    std::size_t n_groups{0};
    double p{1};  //!< 1 / n_groups
    std::vector<std::vector<std::size_t>> groups;
    std::vector<double> per_group_capacity;  //!< sum of d_i pi2 per group
    double n_bar{0};  //!< mean consumers per group
    std::size_t n_total{0};  //!< recruited consumers
};

enum class Role
{
    called,
    not_called,
    not_recruited
};

struct ConsumerSettlement
{
    Role role{Role::not_recruited};
    double theta{0};
    double q{0};
    double reward{0};  //!< paid to the consumer
    double penalty{0};  //!< collected from the consumer
};

struct EventSettlement
{
    std::uint64_t event_index{0};
    std::size_t selected_group{0};
    std::size_t n_called{0};
    double measured_reduction{0};  //!< sum over called of f - q
    double true_reduction{0};  //!< sum over called of q^a(theta) - q
    double rewards_paid{0};
    double penalties_collected{0};
    std::vector<ConsumerSettlement> per_consumer;
};

//! Mean group size and mean d used by the closed-form SO cost.
struct GroupStats
{
    double n_bar{0};
    double d_bar{0};
};

struct SoCostTerms
{
    double pi_star{0};
    double j_star{0};  //!< cost at p -> 0, epsilon -> 0
    double inflation_term{0};
    double deadband_term{0};
    double recruitment_term{0};
    double no_recruitment{0};  //!< j_star + inflation + deadband
    double total{0};
};

struct SoCostPoint
{
    double p;
    SoCostTerms terms;
};

struct SoCostCurve
{
    std::vector<SoCostPoint> points;
    double j_star{0};
    double pi_rec{0};
    double minimizer_p{0};
    std::size_t minimizer_index{0};
};

//---------------------------------------------------------------------------//
// RECRUITMENT AND SELECTION
//---------------------------------------------------------------------------//
AdmissibleProbability admissible_probability(double p);

GroupPlan build_groups(Population const& pop,
                       double p,
                       double delta_q_star,
                       double pi2);

std::size_t
select_group(GroupPlan const& plan, std::uint64_t seed, std::uint64_t event_index);

//---------------------------------------------------------------------------//
// SETTLEMENT
//---------------------------------------------------------------------------//
//! One theta per consumer for the given event.
std::vector<double> draw_event_thetas(Population const& pop,
                                      std::uint64_t seed,
                                      std::uint64_t event_index);

EventSettlement run_dr_event(Population const& pop,
                             GroupPlan const& plan,
                             MechanismParams const& mech,
                             std::vector<double> const& thetas,
                             std::uint64_t seed,
                             std::uint64_t event_index);

//! Events [first, first + count), evaluated on `workers` threads; the
//! result is ordered by event index and independent of `workers`.
std::vector<EventSettlement> simulate_events(Population const& pop,
                                             GroupPlan const& plan,
                                             MechanismParams const& mech,
                                             std::uint64_t seed,
                                             std::uint64_t first,
                                             std::size_t count,
                                             std::size_t workers,
                                             bool keep_per_consumer = false);

//! SO cost for one settled event: wholesale purchase plus DR payment at the
//! measured reduction, less retail revenue.
double so_cost_from_settlement(MarketModel const& market,
                               double pi0,
                               EventSettlement const& event);

//---------------------------------------------------------------------------//
// CLOSED-FORM SO COST
//---------------------------------------------------------------------------//
//! N = dQ* / (d pi*) homogeneous consumers per group.
GroupStats homogeneous_group_stats(double delta_q_star, double d, double pi_star);

SoCostTerms so_cost_terms(MarketModel const& market,
                          GroupStats const& stats,
                          MechanismParams const& mech,
                          double delta_q_star,
                          double pi_rec);

double so_cost_no_recruitment(MarketModel const& market,
                              GroupStats const& stats,
                              MechanismParams const& mech,
                              double delta_q_star);

double so_cost_with_recruitment(MarketModel const& market,
                                GroupStats const& stats,
                                MechanismParams const& mech,
                                double delta_q_star,
                                double pi_rec);

SoCostCurve sweep_probability(MarketModel const& market,
                              GroupStats const& stats,
                              MechanismParams const& mech_template,
                              double delta_q_star,
                              double pi_rec,
                              std::vector<double> const& p_grid);

}  // namespace drb
