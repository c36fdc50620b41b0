//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file market.cpp
//---------------------------------------------------------------------------//
#include "drb/market.hpp"

#include <sstream>

#include "drb/errors.hpp"

namespace drb
{
double supply_price(MarketModel const& m, double q)
{
    return m.a * q + m.b * q * q;
}

double supply_price_derivative(MarketModel const& m, double q)
{
    return m.a + 2 * m.b * q;
}

ReductionSolution optimal_reduction(MarketModel const& m, double pi0)
{
    double const target = pi0 / m.q0;
    ReductionSolution result;
    if (m.b == 0)
    {
        // Pi' is constant; the condition holds everywhere or nowhere
        if (target != m.a)
        {
            throw DomainError(
                "optimal_reduction: linear supply curve has no point with "
                "Pi'(Q) = pi0 / Q0");
        }
        result.q_clear = m.q0;
    }
    else
    {
        result.q_clear = (target - m.a) / (2 * m.b);
    }
    result.delta_q_star = m.q0 - result.q_clear;
    result.pi_star = tmc_price(m, result.delta_q_star);
    result.in_range = result.q_clear >= m.q_lo && result.q_clear <= m.q_hi;
    return result;
}

double tmc_price(MarketModel const& m, double delta_q)
{
    return supply_price(m, m.q0 - delta_q);
}

std::vector<std::string> validate_market(MarketModel const& m)
{
    std::vector<std::string> errors;
    auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(12);
        os << v;
        return os.str();
    };
    if (!(m.q_lo < m.q_hi))
    {
        errors.push_back("market: range requires q_lo < q_hi");
    }
    if (m.b < 0)
    {
        errors.push_back("market: convexity violated (b = " + fmt(m.b)
                         + " < 0)");
    }
    // Pi' is affine, so positivity at both ends covers the whole range
    for (double q : {m.q_lo, m.q_hi})
    {
        double const slope = supply_price_derivative(m, q);
        if (!(slope > 0))
        {
            errors.push_back("market: monotonicity violated (Pi'(" + fmt(q)
                             + ") = " + fmt(slope) + " <= 0)");
        }
    }
    if (!(m.q0 >= m.q_lo && m.q0 <= m.q_hi))
    {
        errors.push_back("market: peak load q0 = " + fmt(m.q0)
                         + " outside range [" + fmt(m.q_lo) + ", "
                         + fmt(m.q_hi) + "]");
    }
    return errors;
}

}  // namespace drb
