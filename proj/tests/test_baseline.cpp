//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_baseline.cpp
//---------------------------------------------------------------------------//
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "drb/baseline.hpp"
#include "drb/errors.hpp"

using namespace drb;

namespace
{
HorizonPlan plan_for(std::size_t days,
                     std::vector<std::size_t> events,
                     bool toggles,
                     double theta = 0)
{
    HorizonPlan plan;
    plan.n_days = days;
    plan.event_days = std::move(events);
    plan.m = 10;
    plan.theta_per_day.assign(days, theta);
    plan.numerator_inflation = toggles;
    plan.denominator_deflation = toggles;
    return plan;
}
}  // namespace

TEST_CASE("baseline arithmetic")
{
    std::vector<double> const q{1, 2, 3, 4};
    CHECK(caiso_unadjusted_baseline(q, 4) == 2.5);
    CHECK_THROWS_AS(caiso_unadjusted_baseline(q, 3), ContractError);
    CHECK(adjustment_factor(3, 2) == 1.5);
    CHECK_THROWS_AS(adjustment_factor(1, 0), DomainError);

    ConsumerParams const p{0.5, 0.1, {}};
    // mu^-1(pi0 - pi2 f_c / f^-) with f_c / f^- = 1.2
    CHECK(strategic_dayahead_consumption(p, 0.12, 0.05, 1.2, 1.0, 0)
          == doctest::Approx(0.1 * (0.5 - 0.12 + 0.06)));
}

TEST_CASE("event schedule and windows")
{
    auto const days = even_event_schedule(400, 20, 10);
    REQUIRE(days.size() == 20);
    CHECK(days.front() == 19);
    CHECK(days.back() == 399);
    CHECK_THROWS_AS(even_event_schedule(40, 10, 10), ValidationError);

    auto const plan = plan_for(100, {30, 45, 60}, true);
    auto const w = baseline_windows(plan, 60);
    // Strictly before day 59, skipping event day 45
    std::vector<std::size_t> const expected{58, 57, 56, 55, 54, 53, 52, 51, 50, 49};
    CHECK(w.numerator_days == expected);
    for (std::size_t i = 0; i < w.numerator_days.size(); ++i)
        CHECK(w.denominator_days[i] == w.numerator_days[i] - 1);
    auto const w2 = baseline_windows(plan, 45);
    CHECK(std::find(w2.numerator_days.begin(), w2.numerator_days.end(), 30)
          == w2.numerator_days.end());
    CHECK(std::find(w2.numerator_days.begin(), w2.numerator_days.end(), 44)
          == w2.numerator_days.end());
}

TEST_CASE("horizon validation")
{
    CHECK(validate(plan_for(100, {30, 60}, true)).empty());
    CHECK_FALSE(validate(plan_for(100, {60, 30}, true)).empty());
    CHECK_FALSE(validate(plan_for(100, {30, 31}, true)).empty());
    CHECK_FALSE(validate(plan_for(100, {5}, true)).empty());
    CHECK_FALSE(validate(plan_for(100, {120}, true)).empty());
    ConsumerParams const p{0.5, 0.1, {}};
    CHECK_THROWS_AS(simulate_caiso_horizon(p, 0.12, 0.05, plan_for(100, {5}, true)),
                    ValidationError);
}

TEST_CASE("horizon simulation with a known theta")
{
    ConsumerParams const p{0.5, 0.1, {}};
    double const pi0 = 0.12;
    double const pi2 = 0.05;
    double const q_a = 0.1 * (0.5 - pi0);

    SUBCASE("history channels off: inflation is exactly d pi2")
    {
        auto const r = simulate_caiso_horizon(
            p, pi0, pi2, plan_for(400, even_event_schedule(400, 20, 10), false));
        REQUIRE(r.events.size() == 20);
        for (auto const& e : r.events)
        {
            CHECK(e.baseline.f_c == doctest::Approx(q_a));
            CHECK(e.baseline.f_minus == doctest::Approx(q_a));
            // q^- = d (c - pi0 + pi2)
            CHECK(e.q_minus == doctest::Approx(q_a + 0.1 * pi2));
            CHECK(e.inflation == doctest::Approx(0.1 * pi2).epsilon(1e-12));
            CHECK(e.q_event == doctest::Approx(0.1 * (0.5 - pi0 - pi2)));
        }
    }
    SUBCASE("history channels on: numerator up, denominator down")
    {
        auto const r = simulate_caiso_horizon(
            p, pi0, pi2, plan_for(400, even_event_schedule(400, 20, 10), true));
        for (auto const& e : r.events)
        {
            // Days in only one window shift by d pi2 / m
            CHECK(e.baseline.f_c > q_a);
            CHECK(e.baseline.f_minus < q_a);
            CHECK(e.inflation > 0.1 * pi2);
        }
        auto const& first = r.events.front();
        // Windows 8..17 and 7..16 share 8..16; only 17 and 7 differ
        CHECK(first.baseline.f_c
              == doctest::Approx(q_a + 0.1 * pi2 / 10 / 10).epsilon(1e-12));
        CHECK(first.baseline.f_minus
              == doctest::Approx(q_a - 0.1 * pi2 / 10 / 10).epsilon(1e-12));
    }
}

TEST_CASE("summary statistics")
{
    auto const s = summarize({1, 2, 3, 4});
    CHECK(s.mean == 2.5);
    CHECK(s.stderr_ == doctest::Approx(std::sqrt(5.0 / 3 / 4)));
    CHECK(s.lower() == doctest::Approx(2.5 - 1.6448536269514722 * s.stderr_));
    CHECK(summarize({}).n == 0);
}

TEST_CASE("method comparison")
{
    ConsumerParams const p{0.5, 0.1, ThetaDist::uniform_on(-0.05, 0.05)};
    MechanismParams const mech{0.12, 0.05, 0.1, {0.1, 0}};
    auto const plan = plan_for(400, even_event_schedule(400, 20, 10), true);
    ThetaSamplePlan sample;
    sample.seed = 17;
    auto const one = compare_methods(p, mech, plan, sample, 12, 1);
    auto const many = compare_methods(p, mech, plan, sample, 12, 5);
    CHECK(one.caiso.mean == many.caiso.mean);
    CHECK(one.caiso.stderr_ == many.caiso.stderr_);
    CHECK(one.caiso.n == 240);
    CHECK(one.lemma5_bound == doctest::Approx(0.005));
    CHECK(one.selfreport_inflation == doctest::Approx(0.0011111111).epsilon(1e-8));

    auto zero = mech;
    zero.pi2 = 0;
    auto const vacuous = compare_methods(p, zero, plan, sample, 40, 1);
    CHECK(vacuous.lemma5_bound == 0);
    CHECK(std::abs(vacuous.selfreport_inflation) < 1e-12);
    CHECK(std::abs(vacuous.caiso.mean) < 1e-3);
    CHECK_FALSE(vacuous.dominance);
}
