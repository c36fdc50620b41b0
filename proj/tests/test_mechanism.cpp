//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_mechanism.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <set>

#include "doctest.h"
#include "drb/consumer.hpp"
#include "drb/errors.hpp"
#include "drb/mechanism.hpp"

using namespace drb;

namespace
{
Population homogeneous(std::size_t n, double d, double report, ThetaDist dist)
{
    Population pop;
    pop.consumers.assign(n, Member{{0.5, d, dist}, report});
    return pop;
}

MarketModel fitted()
{
    return {-0.0415, 8.3e-6, 5000, 8000, 8000};
}
}  // namespace

TEST_CASE("admissible probability")
{
    auto const third = admissible_probability(0.3);
    CHECK(third.n_groups == 3);
    CHECK(third.p == doctest::Approx(1.0 / 3));
    CHECK(third.rounded);
    auto const tenth = admissible_probability(0.1);
    CHECK(tenth.n_groups == 10);
    CHECK_FALSE(tenth.rounded);
    CHECK(admissible_probability(1).n_groups == 1);
    CHECK_THROWS_AS(admissible_probability(0), ContractError);
}

TEST_CASE("group construction")
{
    SUBCASE("disjoint groups that each reach the target")
    {
        Population pop;
        double const ds[] = {0.1, 0.3, 0.2, 0.4, 0.1, 0.1, 0.5, 0.2, 0.3};
        for (double d : ds)
            pop.consumers.push_back({{0.5, d, {}}, 0});
        auto const plan = build_groups(pop, 1.0 / 3, 0.02, 0.05);
        REQUIRE(plan.groups.size() == 3);
        std::set<std::size_t> seen;
        for (std::size_t g = 0; g < 3; ++g)
        {
            double cap = 0;
            for (auto i : plan.groups[g])
            {
                CHECK(seen.insert(i).second);
                cap += ds[i] * 0.05;
            }
            CHECK(cap >= 0.02 - 1e-15);
            CHECK(cap == doctest::Approx(plan.per_group_capacity[g]));
        }
        CHECK(plan.n_total == seen.size());
        CHECK(plan.n_bar == doctest::Approx(seen.size() / 3.0));
    }
    SUBCASE("shortfall is reported")
    {
        auto const pop = homogeneous(5, 0.1, 0, {});
        try
        {
            build_groups(pop, 0.5, 0.015, 0.05);
            FAIL("expected RecruitmentError");
        }
        catch (RecruitmentError const& e)
        {
            // group 0 takes 3 (0.015), group 1 has 2 (0.010)
            CHECK(e.shortfall() == doctest::Approx(0.005));
        }
    }
    SUBCASE("non-integer group count is refused")
    {
        auto const pop = homogeneous(10, 0.1, 0, {});
        CHECK_THROWS_AS(build_groups(pop, 0.3, 0.01, 0.05), ContractError);
    }
}

TEST_CASE("group selection is uniform and reproducible")
{
    auto const pop = homogeneous(40, 0.1, 0, {});
    auto const plan = build_groups(pop, 0.1, 0.02, 0.05);
    std::size_t counts[10] = {};
    int const n = 100000;
    for (int e = 0; e < n; ++e)
    {
        auto const g = select_group(plan, 42, e);
        REQUIRE(g < 10);
        ++counts[g];
        if (e < 100)
            CHECK(g == select_group(plan, 42, e));
    }
    double chi2 = 0;
    for (auto c : counts)
        chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
    // 9 dof, 99.9% quantile 27.88
    CHECK(chi2 < 27.88);
}

TEST_CASE("event settlement")
{
    MechanismParams const mech{0.12, 0.05, 0.1, {0.1, 0}};

    SUBCASE("truthful reports with a known theta")
    {
        ConsumerParams const params{0.5, 0.1, {}};
        double const q_a = consumption_nonparticipant(params, mech.pi0, 0);
        auto pop = homogeneous(20, 0.1, q_a, {});
        pop.consumers.push_back({params, q_a});  // left unrecruited
        auto const plan = build_groups(pop, 0.1, 0.01, 0.05);
        auto const thetas = draw_event_thetas(pop, 1, 0);
        auto const e = run_dr_event(pop, plan, mech, thetas, 1, 0);
        CHECK(e.penalties_collected == 0);
        CHECK(e.measured_reduction == doctest::Approx(e.true_reduction));
        CHECK(e.n_called == 2);
        // Each called consumer cuts d pi2
        CHECK(e.true_reduction == doctest::Approx(2 * 0.1 * 0.05));
        CHECK(e.rewards_paid == doctest::Approx(0.05 * e.measured_reduction));
        CHECK(e.per_consumer.back().role == Role::not_recruited);
        CHECK(e.per_consumer.back().q == q_a);
    }
    SUBCASE("inflated reports pay for themselves through penalties")
    {
        auto const dist = ThetaDist::uniform_on(-0.05, 0.05);
        ConsumerParams const params{0.5, 0.1, dist};
        double const f = 0.038 + 0.01;
        auto const pop = homogeneous(30, 0.1, f, dist);
        auto const plan = build_groups(pop, 0.1, 0.015, 0.05);
        auto const thetas = draw_event_thetas(pop, 9, 4);
        auto const e = run_dr_event(pop, plan, mech, thetas, 9, 4);
        double penalties = 0;
        for (std::size_t i = 0; i < pop.consumers.size(); ++i)
        {
            auto const& c = e.per_consumer[i];
            CHECK(c.theta == thetas[i]);
            if (c.role == Role::not_called)
            {
                double const q = consumption_not_called(params, mech, f, c.theta);
                CHECK(c.q == q);
                penalties += penalty_value(mech.penalty, f - q);
            }
        }
        CHECK(e.penalties_collected == doctest::Approx(penalties));
        CHECK(e.measured_reduction > e.true_reduction);
    }
    SUBCASE("results do not depend on the worker count")
    {
        auto const dist = ThetaDist::uniform_on(-0.05, 0.05);
        auto const pop = homogeneous(50, 0.1, 0.04, dist);
        auto const plan = build_groups(pop, 0.1, 0.025, 0.05);
        auto const one = simulate_events(pop, plan, mech, 3, 0, 257, 1);
        auto const many = simulate_events(pop, plan, mech, 3, 0, 257, 7);
        REQUIRE(one.size() == many.size());
        for (std::size_t k = 0; k < one.size(); ++k)
        {
            CHECK(one[k].selected_group == many[k].selected_group);
            CHECK(one[k].measured_reduction == many[k].measured_reduction);
            CHECK(one[k].penalties_collected == many[k].penalties_collected);
        }
        // A later window reproduces the same events
        auto const tail = simulate_events(pop, plan, mech, 3, 200, 57, 3);
        CHECK(tail[0].measured_reduction == one[200].measured_reduction);
    }
}

TEST_CASE("SO cost")
{
    auto const market = fitted();
    MechanismParams mech{120, 101.592, 0.1, {0.001, 0}};
    double const dq = 1200;
    double const pi_star = tmc_price(market, dq);
    auto const stats = homogeneous_group_stats(dq, 0.1, pi_star);
    CHECK(stats.n_bar == doctest::Approx(1200 / (0.1 * pi_star)));

    SUBCASE("terms by hand")
    {
        auto const t = so_cost_terms(market, stats, mech, dq, 2);
        double const j = (pi_star - 120) * 6800 + pi_star * 1200;
        CHECK(t.j_star == doctest::Approx(j));
        CHECK(t.inflation_term
              == doctest::Approx(pi_star * stats.n_bar * 0.101 * 0.1 * mech.pi2
                                 / 0.9));
        CHECK(t.recruitment_term == doctest::Approx(2 * stats.n_bar / 0.1));
        CHECK(t.total
              == doctest::Approx(j + t.inflation_term + t.recruitment_term));
    }
    SUBCASE("excess over J* scales as p / (1 - p)")
    {
        double ref = 0;
        for (double p : {0.05, 0.1, 0.2, 0.4})
        {
            mech.p = p;
            double const excess
                = (so_cost_no_recruitment(market, stats, mech, dq)
                   - so_cost_terms(market, stats, mech, dq, 0).j_star)
                  * (1 - p) / p;
            if (ref == 0)
                ref = excess;
            CHECK(excess == doctest::Approx(ref).epsilon(1e-10));
        }
    }
    SUBCASE("recruitment difference is linear in pi_rec")
    {
        mech.p = 0.2;
        double const diff = so_cost_with_recruitment(market, stats, mech, dq, 10)
                            - so_cost_with_recruitment(market, stats, mech, dq, 2);
        CHECK(diff == doctest::Approx(8 * stats.n_bar / 0.2));
        mech.p = 0;
        CHECK_THROWS_AS(so_cost_with_recruitment(market, stats, mech, dq, 2),
                        DomainError);
    }
    SUBCASE("grid minimizer sits next to the analytic optimum")
    {
        std::vector<double> grid;
        for (int i = 1; i <= 5000; ++i)
            grid.push_back(i * 1e-4);
        auto const curve = sweep_probability(market, stats, mech, dq, 2, grid);
        // J = J* + A p/(1-p) + B/p  =>  p/(1-p) = sqrt(B/A)
        double const a = pi_star * stats.n_bar * (0.1 + 0.001) * mech.pi2;
        double const b = 2 * stats.n_bar;
        double const r = std::sqrt(b / a);
        CHECK(curve.minimizer_p == doctest::Approx(r / (1 + r)).epsilon(1e-3));
        CHECK_THROWS_AS(sweep_probability(market, stats, mech, dq, 2, {}),
                        ContractError);
        CHECK_THROWS_AS(sweep_probability(market, stats, mech, dq, 2, {1.0}),
                        ContractError);
    }
    SUBCASE("settlement cost by hand")
    {
        EventSettlement e;
        e.true_reduction = 1000;
        e.measured_reduction = 1010;
        double const price = supply_price(market, 7000);
        CHECK(so_cost_from_settlement(market, 120, e)
              == doctest::Approx((price - 120) * 7000 + price * 1010));
    }
}
