//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_consumer.cpp
//---------------------------------------------------------------------------//
#include <cmath>

#include "doctest.h"
#include "drb/consumer.hpp"
#include "drb/errors.hpp"
#include "drb/philox.hpp"
#include "oracles.hpp"

using namespace drb;

namespace
{
ConsumerParams consumer(double d, ThetaDist dist = ThetaDist::degenerate_at(0))
{
    return {0.5, d, dist};
}

MechanismParams mechanism(double p = 0.1, double lambda = 0.1, double eps = 0)
{
    return {0.12, 0.05, p, {lambda, eps}};
}

// Reference H(f) evaluated by minimizing each second-stage cost numerically
double brute_expected_cost(ConsumerParams const& params,
                           MechanismParams const& mech,
                           double f,
                           std::vector<ThetaNode> const& nodes)
{
    double total = 0;
    for (auto const& node : nodes)
    {
        double const t = node.theta;
        double const top = params.d * (params.c + t);
        auto jc = [&](double q) {
            return mech.pi0 * q - utility_value(params, q, t)
                   - mech.pi2 * (f - q);
        };
        auto jb = [&](double q) {
            return mech.pi0 * q - utility_value(params, q, t)
                   + penalty_value(mech.penalty, f - q);
        };
        double const qc = test::golden_min(jc, 0, top + 1);
        double const qb = test::golden_min(jb, 0, top + 1);
        total += node.weight * (mech.p * jc(qc) + (1 - mech.p) * jb(qb));
    }
    return total;
}
}  // namespace

//---------------------------------------------------------------------------//
TEST_CASE("second-stage consumption minimizes the realized cost")
{
    CounterRng rng(11, 99, 0);
    for (int i = 0; i < 300; ++i)
    {
        double const d = 0.05 + 0.5 * rng.uniform();
        double const lambda = 0.01 + 0.5 * rng.uniform();
        double const eps = rng.uniform() < 0.5 ? 0 : 0.02 * rng.uniform();
        double const theta = -0.05 + 0.1 * rng.uniform();
        auto const params = consumer(d);
        auto const mech = mechanism(0.1, lambda, eps);
        double const q_a = consumption_nonparticipant(params, mech.pi0, theta);
        double const f = q_a + (rng.uniform() - 0.5) * 0.1;
        if (f < 0)
            continue;
        double const top = d * (params.c + theta);
        auto jb = [&](double q) {
            return cost_not_called(params, mech, f, q, theta);
        };
        auto jc = [&](double q) { return cost_called(params, mech, f, q, theta); };
        auto ja = [&](double q) {
            return cost_nonparticipant(params, mech.pi0, q, theta);
        };
        CHECK(consumption_not_called(params, mech, f, theta)
              == doctest::Approx(test::golden_min(jb, 0, top + 1)).epsilon(1e-7));
        CHECK(consumption_called(params, mech.pi0, mech.pi2, theta)
              == doctest::Approx(test::golden_min(jc, 0, top + 1)).epsilon(1e-7));
        CHECK(q_a == doctest::Approx(test::golden_min(ja, 0, top + 1)).epsilon(1e-7));
    }
}

TEST_CASE("uncalled consumption closed form for the quadratic penalty")
{
    auto const params = consumer(0.3);
    auto const mech = mechanism(0.1, 0.2);
    double const theta = 0.01;
    double const q_a = consumption_nonparticipant(params, mech.pi0, theta);
    double const f = q_a + 0.04;
    // Weighted mean (lambda q_a + d f) / (d + lambda)
    CHECK(consumption_not_called(params, mech, f, theta)
          == doctest::Approx((0.2 * q_a + 0.3 * f) / 0.5));
    CHECK(consumption_not_called(params, mech, q_a, theta) == q_a);
    CHECK_THROWS_AS(consumption_not_called(params, mech, -1, theta), DomainError);

    auto none = mech;
    none.penalty = PenaltySpec::none();
    CHECK(consumption_not_called(params, none, f, theta) == q_a);
}

TEST_CASE("envelope identity: dH/df = (1 - p) * stationarity residual")
{
    ThetaSamplePlan plan;
    auto const params = consumer(0.2, ThetaDist::uniform_on(-0.05, 0.05));
    for (double eps : {0.0, 0.004})
    {
        auto const mech = mechanism(0.2, 0.15, eps);
        auto const nodes = theta_nodes(params.theta_dist, plan);
        for (double f : {0.07, 0.08, 0.09})
        {
            auto const h = [&](double x) {
                return expected_cost(params, mech, x, nodes);
            };
            CHECK(test::central_diff(h, f, 1e-6)
                  == doctest::Approx(
                         (1 - mech.p)
                         * stationarity_residual(params, mech, f, nodes))
                         .epsilon(1e-6)
                         .scale(1e-9));
        }
    }
}

TEST_CASE("expected cost agrees with brute-force second-stage minimization")
{
    ThetaSamplePlan plan;
    plan.n_points = 8;
    auto const params = consumer(0.3, ThetaDist::uniform_on(-0.05, 0.05));
    auto const mech = mechanism(0.1, 0.1, 0.003);
    auto const nodes = theta_nodes(params.theta_dist, plan);
    for (double f : {0.09, 0.115, 0.14})
    {
        CHECK(expected_cost(params, mech, f, nodes)
              == doctest::Approx(brute_expected_cost(params, mech, f, nodes))
                     .epsilon(1e-9)
                     .scale(1e-6));
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("optimal report")
{
    ThetaSamplePlan plan;

    SUBCASE("closed form (0.1 + 0.1) 0.1 0.05 / 0.9")
    {
        CHECK(closed_form_inflation(0.1, 0.1, 0.1, 0.05)
              == doctest::Approx(0.0011111111111111).epsilon(1e-12));
        auto const sol
            = solve_optimal_report(consumer(0.1), mechanism(), plan, 1e-12);
        CHECK(sol.converged);
        CHECK(sol.expected_inflation
              == doctest::Approx(0.0011111111111).epsilon(1e-8));
        CHECK(sol.measurable_inflation
              == doctest::Approx(0.1 * 0.1 * 0.05 / 0.9).epsilon(1e-8));
    }

    SUBCASE("matches golden-section minimization of H")
    {
        auto const params = consumer(0.25, ThetaDist::uniform_on(-0.05, 0.05));
        for (double eps : {0.0, 0.00125, 0.01})
        {
            auto const mech = mechanism(0.2, 0.05, eps);
            auto const nodes = theta_nodes(params.theta_dist, plan);
            auto const sol = solve_optimal_report(params, mech, nodes);
            auto const h = [&](double f) {
                return expected_cost(params, mech, f, nodes);
            };
            double const ref = test::golden_min(h, 0.05, 0.2);
            // H is flat to second order, so compare costs as well as points
            CHECK(sol.f_star == doctest::Approx(ref).epsilon(1e-6));
            CHECK(h(sol.f_star) <= h(ref) + 1e-15);
        }
    }

    SUBCASE("expected marginal utility equals pi0 at f*")
    {
        auto const params = consumer(0.3, ThetaDist::uniform_on(-0.05, 0.05));
        auto const mech = mechanism(0.25, 0.3);
        auto const nodes = theta_nodes(params.theta_dist, plan);
        auto const sol = solve_optimal_report(params, mech, nodes);
        CHECK(std::abs(expected_marginal_utility(params, mech, sol.f_star, nodes)
                       - mech.pi0)
              < 1e-10);
    }

    SUBCASE("p = 0 gives the truthful report")
    {
        auto const params = consumer(0.3, ThetaDist::uniform_on(-0.05, 0.05));
        auto const sol = solve_optimal_report(params, mechanism(0), plan, 1e-12);
        CHECK(std::abs(sol.expected_inflation) < 1e-10);
    }

    SUBCASE("no penalty has no finite optimum")
    {
        auto mech = mechanism();
        mech.penalty = PenaltySpec::none();
        CHECK_THROWS_AS(
            solve_optimal_report(consumer(0.1), mech, plan, 1e-10), SolverError);
    }

    SUBCASE("contracts")
    {
        CHECK_THROWS_AS(
            optimal_report_closed_form(consumer(0.1), mechanism(0.1, 0.1, 0.01)),
            ContractError);
        auto const wide = consumer(0.1, ThetaDist::uniform_on(-0.05, 0.05));
        // spread of q^a is d * 0.05 = 0.005
        CHECK_THROWS_AS(inflation_bound_deadband(wide, mechanism(0.1, 0.1, 0.004)),
                        ContractError);
        CHECK(inflation_bound_deadband(wide, mechanism(0.1, 0.1, 0.005))
              == doctest::Approx(0.0011111111111 + 0.005));
        SolverOptions bad;
        bad.tol = 0;
        CHECK_THROWS_AS(solve_optimal_report(consumer(0.1), mechanism(),
                                             theta_nodes({}, plan), bad),
                        ContractError);
    }
}

TEST_CASE("closed-form report uses the exact theta mean")
{
    auto const params
        = consumer(0.2, ThetaDist::truncated_normal(0.01, 0.03, -0.05, 0.05));
    auto const mech = mechanism(0.1, 0.1);
    auto const report = optimal_report_closed_form(params, mech);
    ThetaSamplePlan plan;
    plan.n_points = 40;
    auto const sol = solve_optimal_report(params, mech, plan, 1e-12);
    CHECK(report.f_star == doctest::Approx(sol.f_star).epsilon(1e-9));
    CHECK(report.delta_f_tilde
          == doctest::Approx(sol.measurable_inflation).epsilon(1e-8));
}

TEST_CASE("individual rationality and excess payment")
{
    ThetaSamplePlan plan;
    auto const params = consumer(0.1, ThetaDist::uniform_on(-0.05, 0.05));
    auto const mech = mechanism(0.1, 0.1, 0.005);
    auto const sol = solve_optimal_report(params, mech, plan, 1e-12);
    auto const ir = check_individual_rationality(params, mech, sol.f_star, plan);
    CHECK(ir.rational);
    CHECK(ir.participant_cost <= ir.outside_cost);

    auto const nodes = theta_nodes(params.theta_dist, plan);
    double const eqa = mean_nonparticipant(params, mech.pi0, nodes);
    double const eqc = expectation(nodes, [&](double t) {
        return consumption_called(params, mech.pi0, mech.pi2, t);
    });
    double const f = eqa + 0.002;
    // Paid reward per unit of true reduction
    CHECK(excess_payment_rate(params, mech, f, plan)
          == doctest::Approx(mech.pi2 * (f - eqc) / (eqa - eqc)));
    auto zero = mech;
    zero.pi2 = 0;
    CHECK_THROWS_AS(excess_payment_rate(params, zero, f, plan), DomainError);
}
