//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file mechanism.cpp
//---------------------------------------------------------------------------//
#include "drb/mechanism.hpp"

#include <cmath>
#include <sstream>

#include "drb/consumer.hpp"
#include "drb/errors.hpp"
#include "drb/parallel.hpp"
#include "drb/philox.hpp"

namespace drb
{
namespace
{
// Relative slack when comparing accumulated capacity with the target
constexpr double kCapacitySlack = 1e-12;

std::uint32_t low_word(std::uint64_t v)
{
    return static_cast<std::uint32_t>(v);
}

std::uint32_t high_word(std::uint64_t v)
{
    return static_cast<std::uint32_t>(v >> 32);
}
}  // namespace

//---------------------------------------------------------------------------//
// RECRUITMENT AND SELECTION
//---------------------------------------------------------------------------//
AdmissibleProbability admissible_probability(double p)
{
    if (!(p > 0 && p <= 1))
    {
        throw ContractError("admissible_probability: p must lie in (0, 1]");
    }
    AdmissibleProbability result;
    auto const n = std::llround(1 / p);
    result.n_groups = static_cast<std::size_t>(std::max<long long>(n, 1));
    result.p = 1.0 / static_cast<double>(result.n_groups);
    result.rounded = std::abs(result.n_groups * p - 1) > 1e-12;
    return result;
}

//---------------------------------------------------------------------------//
/*!
 * Partition the population into n = 1/p disjoint groups, each able to
 * deliver delta_q_star at reward pi2.
 *
 * Consumers are taken in input order; a group closes as soon as its
 * expected reduction sum(d_i pi2) reaches the target, so the last member may
 * overshoot. Consumers left over after n groups are not recruited.
 */
GroupPlan build_groups(Population const& pop,
                       double p,
                       double delta_q_star,
                       double pi2)
{
    auto const admissible = admissible_probability(p);
    if (admissible.rounded)
    {
        std::ostringstream os;
        os << "build_groups: 1/p must be an integer, got p = " << p;
        throw ContractError(os.str());
    }
    if (!(delta_q_star > 0))
        throw ContractError("build_groups: delta_q_star must be positive");
    if (!(pi2 > 0))
        throw ContractError("build_groups: pi2 must be positive");

    GroupPlan plan;
    plan.n_groups = admissible.n_groups;
    plan.p = admissible.p;
    plan.groups.resize(plan.n_groups);
    plan.per_group_capacity.assign(plan.n_groups, 0.0);

    double const target = delta_q_star * (1 - kCapacitySlack);
    std::size_t next = 0;
    for (std::size_t g = 0; g < plan.n_groups; ++g)
    {
        auto& capacity = plan.per_group_capacity[g];
        while (capacity < target && next < pop.consumers.size())
        {
            plan.groups[g].push_back(next);
            capacity += pop.consumers[next].params.d * pi2;
            ++next;
        }
        if (capacity < target)
        {
            double const shortfall
                = delta_q_star * static_cast<double>(plan.n_groups - g)
                  - capacity;
            std::ostringstream os;
            os.precision(12);
            os << "build_groups: population of " << pop.consumers.size()
               << " cannot fill " << plan.n_groups << " groups of "
               << delta_q_star << "; filled " << g << " and short by "
               << shortfall;
            throw RecruitmentError(os.str(), shortfall);
        }
        plan.n_total += plan.groups[g].size();
    }
    plan.n_bar = static_cast<double>(plan.n_total)
                 / static_cast<double>(plan.n_groups);
    return plan;
}

std::size_t
select_group(GroupPlan const& plan, std::uint64_t seed, std::uint64_t event_index)
{
    if (plan.n_groups == 0)
        throw ContractError("select_group: empty plan");
    if (plan.n_groups == 1)
        return 0;
    CounterRng rng(seed,
                   rng_domain::group_select,
                   low_word(event_index),
                   high_word(event_index));
    return static_cast<std::size_t>(rng.below(plan.n_groups));
}

//---------------------------------------------------------------------------//
// SETTLEMENT
//---------------------------------------------------------------------------//
std::vector<double> draw_event_thetas(Population const& pop,
                                      std::uint64_t seed,
                                      std::uint64_t event_index)
{
    std::vector<double> thetas(pop.consumers.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
        // Event index is folded to 32 bits; horizons are far shorter
        CounterRng rng(seed,
                       rng_domain::event_theta,
                       low_word(event_index),
                       static_cast<std::uint32_t>(i));
        thetas[i] = sample_theta(pop.consumers[i].params.theta_dist, rng);
    }
    return thetas;
}

EventSettlement run_dr_event(Population const& pop,
                             GroupPlan const& plan,
                             MechanismParams const& mech,
                             std::vector<double> const& thetas,
                             std::uint64_t seed,
                             std::uint64_t event_index)
{
    if (thetas.size() != pop.consumers.size())
    {
        throw ContractError("run_dr_event: need one theta per consumer");
    }
    EventSettlement result;
    result.event_index = event_index;
    result.selected_group = select_group(plan, seed, event_index);
    result.per_consumer.resize(pop.consumers.size());

    for (std::size_t g = 0; g < plan.n_groups; ++g)
    {
        auto const role = g == result.selected_group ? Role::called
                                                     : Role::not_called;
        for (auto i : plan.groups[g])
            result.per_consumer[i].role = role;
    }

    for (std::size_t i = 0; i < pop.consumers.size(); ++i)
    {
        auto const& member = pop.consumers[i];
        auto& entry = result.per_consumer[i];
        double const theta = thetas[i];
        double const f = member.report;
        entry.theta = theta;
        switch (entry.role)
        {
            case Role::called: {
                double const q_a
                    = consumption_nonparticipant(member.params, mech.pi0, theta);
                entry.q = consumption_called(
                    member.params, mech.pi0, mech.pi2, theta);
                entry.reward = mech.pi2 * (f - entry.q);
                result.measured_reduction += f - entry.q;
                result.true_reduction += q_a - entry.q;
                result.rewards_paid += entry.reward;
                ++result.n_called;
                break;
            }
            case Role::not_called:
                entry.q = consumption_not_called(member.params, mech, f, theta);
                entry.penalty = penalty_value(mech.penalty, f - entry.q);
                result.penalties_collected += entry.penalty;
                break;
            case Role::not_recruited:
                entry.q
                    = consumption_nonparticipant(member.params, mech.pi0, theta);
                break;
        }
    }
    return result;
}

std::vector<EventSettlement> simulate_events(Population const& pop,
                                             GroupPlan const& plan,
                                             MechanismParams const& mech,
                                             std::uint64_t seed,
                                             std::uint64_t first,
                                             std::size_t count,
                                             std::size_t workers,
                                             bool keep_per_consumer)
{
    std::vector<EventSettlement> events(count);
    parallel_for(count, workers, [&](std::size_t k) {
        std::uint64_t const index = first + k;
        auto const thetas = draw_event_thetas(pop, seed, index);
        events[k] = run_dr_event(pop, plan, mech, thetas, seed, index);
        if (!keep_per_consumer)
        {
            events[k].per_consumer.clear();
            events[k].per_consumer.shrink_to_fit();
        }
    });
    return events;
}

double so_cost_from_settlement(MarketModel const& market,
                               double pi0,
                               EventSettlement const& event)
{
    double const q = market.q0 - event.true_reduction;
    double const price = supply_price(market, q);
    return (price - pi0) * q + price * event.measured_reduction;
}

//---------------------------------------------------------------------------//
// CLOSED-FORM SO COST
//---------------------------------------------------------------------------//
GroupStats homogeneous_group_stats(double delta_q_star, double d, double pi_star)
{
    if (!(d > 0 && pi_star > 0))
    {
        throw DomainError(
            "homogeneous_group_stats: d and pi* must be positive");
    }
    return {delta_q_star / (d * pi_star), d};
}

//---------------------------------------------------------------------------//
/*!
 * SO cost when one group delivering delta_q_star is called.
 *
 * Each called consumer inflates the measured reduction by its expected
 * baseline inflation (d + lambda) p pi2 / (1 - p), plus up to epsilon with a
 * deadband; the SO pays pi* on that excess. Recruitment adds pi_rec per
 * customer over n = 1/p groups.
 */
SoCostTerms so_cost_terms(MarketModel const& market,
                          GroupStats const& stats,
                          MechanismParams const& mech,
                          double delta_q_star,
                          double pi_rec)
{
    if (!(mech.p >= 0 && mech.p < 1))
        throw DomainError("so_cost: p must lie in [0, 1)");
    if (pi_rec < 0)
        throw DomainError("so_cost: pi_rec must be nonnegative");
    if (pi_rec > 0 && mech.p == 0)
    {
        throw DomainError(
            "so_cost_with_recruitment: p = 0 makes the recruitment cost "
            "unbounded");
    }

    SoCostTerms terms;
    double const q = market.q0 - delta_q_star;
    terms.pi_star = tmc_price(market, delta_q_star);
    terms.j_star = (terms.pi_star - mech.pi0) * q + terms.pi_star * delta_q_star;
    terms.inflation_term = terms.pi_star * stats.n_bar
                           * (stats.d_bar + mech.penalty.lambda) * mech.p
                           * mech.pi2 / (1 - mech.p);
    terms.deadband_term = terms.pi_star * stats.n_bar * mech.penalty.epsilon;
    terms.recruitment_term = pi_rec > 0 ? pi_rec * stats.n_bar / mech.p : 0.0;
    terms.no_recruitment = terms.j_star + terms.inflation_term
                           + terms.deadband_term;
    terms.total = terms.no_recruitment + terms.recruitment_term;
    return terms;
}

double so_cost_no_recruitment(MarketModel const& market,
                              GroupStats const& stats,
                              MechanismParams const& mech,
                              double delta_q_star)
{
    return so_cost_terms(market, stats, mech, delta_q_star, 0).no_recruitment;
}

double so_cost_with_recruitment(MarketModel const& market,
                                GroupStats const& stats,
                                MechanismParams const& mech,
                                double delta_q_star,
                                double pi_rec)
{
    if (mech.p == 0)
    {
        throw DomainError(
            "so_cost_with_recruitment: p = 0 makes the recruitment cost "
            "unbounded");
    }
    return so_cost_terms(market, stats, mech, delta_q_star, pi_rec).total;
}

SoCostCurve sweep_probability(MarketModel const& market,
                              GroupStats const& stats,
                              MechanismParams const& mech_template,
                              double delta_q_star,
                              double pi_rec,
                              std::vector<double> const& p_grid)
{
    if (p_grid.empty())
        throw ContractError("sweep_probability: empty probability grid");

    SoCostCurve curve;
    curve.pi_rec = pi_rec;
    curve.points.reserve(p_grid.size());
    for (double p : p_grid)
    {
        if (!(p > 0 && p < 1))
            throw ContractError("sweep_probability: grid must lie in (0, 1)");
        auto mech = mech_template;
        mech.p = p;
        curve.points.push_back(
            {p, so_cost_terms(market, stats, mech, delta_q_star, pi_rec)});
    }
    curve.j_star = curve.points.front().terms.j_star;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
    {
        if (curve.points[i].terms.total
            < curve.points[curve.minimizer_index].terms.total)
        {
            curve.minimizer_index = i;
        }
    }
    curve.minimizer_p = curve.points[curve.minimizer_index].p;
    return curve;
}

}  // namespace drb
