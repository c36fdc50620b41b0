//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_market.cpp
//---------------------------------------------------------------------------//
#include "doctest.h"
#include "drb/errors.hpp"
#include "drb/market.hpp"
#include "oracles.hpp"

using namespace drb;

namespace
{
MarketModel fitted()
{
    return {-0.0415, 8.3e-6, 5000, 8000, 8000};
}
}  // namespace

TEST_CASE("supply price on the fitted curve")
{
    auto const m = fitted();
    // Hand arithmetic: a Q + b Q^2
    CHECK(supply_price(m, 5000) == doctest::Approx(0).scale(1));
    CHECK(supply_price(m, 6800) == doctest::Approx(-282.2 + 383.792));
    CHECK(supply_price(m, 8000) == doctest::Approx(-332 + 531.2));
    CHECK(tmc_price(m, 1200) == doctest::Approx(101.592));

    for (double q : {4000.0, 6000.0, 7900.0})
    {
        auto const pi = [&](double x) { return supply_price(m, x); };
        CHECK(supply_price_derivative(m, q)
              == doctest::Approx(test::central_diff(pi, q, 1e-2)).epsilon(1e-9));
    }
    CHECK(supply_price_derivative(m, 5000) == doctest::Approx(0.0415));
}

TEST_CASE("first-order reduction")
{
    auto const m = fitted();
    auto const sol = optimal_reduction(m, 120);
    // Pi'(q_clear) = pi0 / Q0
    CHECK(supply_price_derivative(m, sol.q_clear)
          == doctest::Approx(120.0 / 8000).epsilon(1e-12));
    CHECK(sol.q_clear == doctest::Approx(3403.61).epsilon(1e-5));
    CHECK(sol.delta_q_star == doctest::Approx(8000 - sol.q_clear));
    CHECK(sol.pi_star == doctest::Approx(supply_price(m, sol.q_clear)));
    CHECK_FALSE(sol.in_range);

    auto linear = m;
    linear.b = 0;
    CHECK_THROWS_AS(optimal_reduction(linear, 120), DomainError);
    linear.a = 120.0 / 8000;
    CHECK(optimal_reduction(linear, 120).delta_q_star == 0);
}

TEST_CASE("market validation")
{
    CHECK(validate_market(fitted()).empty());

    auto wide = fitted();
    wide.q_lo = 1000;
    auto errors = validate_market(wide);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].find("monotonicity") != std::string::npos);

    auto concave = fitted();
    concave.b = -1e-6;
    errors = validate_market(concave);
    bool convexity = false;
    for (auto const& e : errors)
        convexity |= e.find("convexity") != std::string::npos;
    CHECK(convexity);

    auto outside = fitted();
    outside.q0 = 9000;
    CHECK(validate_market(outside).size() == 1);
}
