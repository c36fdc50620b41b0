//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/market.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

namespace drb
{
//! Wholesale inverse supply curve Pi(Q) = a Q + b Q^2 around peak load q0.
struct MarketModel
{
    double a{0};
    double b{0};
    double q_lo{0};  //!< lower end of the range the curve was fitted on
    double q_hi{0};
    double q0{0};  //!< peak load before any reduction
};

struct ReductionSolution
{
    double delta_q_star{0};
    double q_clear{0};  //!< q0 - delta_q_star
    double pi_star{0};  //!< threshold market clearing price Pi(q_clear)
    bool in_range{false};
};

double supply_price(MarketModel const& m, double q);
double supply_price_derivative(MarketModel const& m, double q);

//! Reduction satisfying Pi'(q0 - dQ) q0 = pi0, with its clearing price.
ReductionSolution optimal_reduction(MarketModel const& m, double pi0);

//! Price after reducing the peak by delta_q.
double tmc_price(MarketModel const& m, double delta_q);

std::vector<std::string> validate_market(MarketModel const& m);

}  // namespace drb
