//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/scenario.hpp
//! Scenario files: an INI-style key tree with sections [consumer], [theta],
//! [mechanism], [market], [sampling], [horizon] and [output].
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "market.hpp"
#include "model.hpp"

namespace drb
{
enum class Experiment
{
    table2,
    fig3,
    compare,
    event,
    validate
};

std::string to_string(Experiment e);

enum class ReportPolicy
{
    optimal,  //!< each consumer reports its f*
    truthful  //!< each consumer reports E q^a
};

struct HorizonSpec
{
    std::size_t days{400};
    std::size_t events{20};
    std::vector<std::size_t> event_days;  //!< explicit; overrides `events`
    std::size_t m{10};
    bool numerator_inflation{true};
    bool denominator_deflation{true};
    std::size_t replications{1};
};

struct Scenario
{
    std::string name;
    std::string units{"kWh-scale"};

    // [consumer]
    double c{0};
    std::vector<double> d_values;
    std::size_t count{100};
    std::vector<double> population_d;  //!< explicit heterogeneous population
    ReportPolicy report{ReportPolicy::optimal};

    // [theta]
    ThetaDist theta;

    // [mechanism]
    double pi0{0};
    std::optional<double> pi2;  //!< empty: derive from the market
    double p_requested{0};
    double p{0};  //!< effective, 1/n for integer n
    PenaltySpec penalty;
    std::vector<double> pi_rec;
    std::vector<double> p_grid;
    std::optional<double> delta_q_star;  //!< empty: first-order condition
    std::size_t events{1};

    // [market]
    std::optional<MarketModel> market;

    // [sampling]
    ThetaSamplePlan sampling;
    std::size_t mc_samples{100000};

    // [horizon]
    std::optional<HorizonSpec> horizon;

    // [output]
    std::string out_dir{"out"};

    //! Every resolved field, defaults included, as "section.key" -> text.
    std::map<std::string, std::string> resolved;
    std::vector<std::string> warnings;
    std::string hash;  //!< SHA-256 of the resolved fields

    ConsumerParams consumer(double d) const;
    MechanismParams mechanism(double pi2_value) const;
};

//! Parse and validate; throws ValidationError (bad values, unknown keys) or
//! std::runtime_error subclasses for unreadable files.
Scenario load_scenario(std::string const& path);
Scenario parse_scenario(std::string const& text, std::string const& origin);

//! Check the sections and values an experiment needs.
void require_for(Scenario const& scenario, Experiment experiment);

//! Reward rate: the pinned pi2, or the TMC price at the target reduction.
double resolve_pi2(Scenario const& scenario);
//! Target reduction: pinned, or from the market's first-order condition.
double resolve_delta_q_star(Scenario const& scenario);

std::string sha256_hex(std::string const& text);

}  // namespace drb
