//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/model.hpp
//! Primitive consumer and penalty objects shared by every other module.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace drb
{
//---------------------------------------------------------------------------//
// TYPES
//---------------------------------------------------------------------------//
//! Distribution of the additive marginal-utility shock theta.
struct ThetaDist
{
    enum class Kind
    {
        degenerate,
        uniform,
        truncated_normal
    };

    Kind kind{Kind::degenerate};
    double value{0};  //!< point mass location (degenerate)
    double lo{0};  //!< support lower bound (uniform, truncated normal)
    double hi{0};  //!< support upper bound
    double location{0};  //!< untruncated mean (truncated normal)
    double scale{1};  //!< untruncated standard deviation (truncated normal)

    static ThetaDist degenerate_at(double v);
    static ThetaDist uniform_on(double lo, double hi);
    static ThetaDist truncated_normal(double loc, double sd, double lo, double hi);

    double mean() const;
    double support_min() const;
    double support_max() const;
};

std::string to_string(ThetaDist::Kind kind);

//! Quadratic utility u = (c + theta) q - q^2 / (2d).
struct ConsumerParams
{
    double c{0};  //!< marginal-utility intercept
    double d{1};  //!< inverse rate of diminishing marginal utility, > 0
    ThetaDist theta_dist;
};

//! Penalty phi: quadratic x^2/(2 lambda), or with a deadband of half-width
//! epsilon, (|x| - epsilon)^2 / (2 lambda) outside the band and zero inside.
//! phi(x) = max(|x| - epsilon, 0)^2 / (2 lambda); infinite lambda is no
//! penalty at all.
struct PenaltySpec
{
    double lambda{1};
    double epsilon{0};

    static PenaltySpec none()
    {
        return {std::numeric_limits<double>::infinity(), 0};
    }

    bool has_deadband() const { return epsilon > 0; }
    bool is_none() const { return std::isinf(lambda); }
};

struct MechanismParams
{
    double pi0{0};  //!< retail price
    double pi2{0};  //!< reward per unit of measured reduction
    double p{0};  //!< calling probability
    PenaltySpec penalty;
};

struct ThetaSamplePlan
{
    enum class Method
    {
        quadrature,
        monte_carlo
    };

    Method method{Method::quadrature};
    std::size_t n_points{16};
    std::uint64_t seed{0};
};

struct ThetaNode
{
    double theta;
    double weight;
};

//---------------------------------------------------------------------------//
// VALIDATION
//---------------------------------------------------------------------------//
// Each returns human-readable violations; empty means valid.
std::vector<std::string> validate(ThetaDist const& dist);
std::vector<std::string> validate(ConsumerParams const& params);
std::vector<std::string> validate(PenaltySpec const& spec);
std::vector<std::string> validate(MechanismParams const& mech);

//! Violations of "q^c(theta) > 0 over the theta support".
std::vector<std::string>
validate_participation(ConsumerParams const& params, MechanismParams const& mech);

//---------------------------------------------------------------------------//
// UTILITY
//---------------------------------------------------------------------------//
double utility_value(ConsumerParams const& params, double q, double theta);
double marginal_utility(ConsumerParams const& params, double q, double theta);
double
inverse_marginal_utility(ConsumerParams const& params, double x, double theta);

//---------------------------------------------------------------------------//
// PENALTY
//---------------------------------------------------------------------------//
double penalty_value(PenaltySpec const& spec, double x);
double penalty_derivative(PenaltySpec const& spec, double x);
// Inverse on the strictly increasing branch; for a deadband this is the
// right edge lambda*y + epsilon.
double penalty_derivative_inverse(PenaltySpec const& spec, double y);

//---------------------------------------------------------------------------//
// EXPECTATION NODES
//---------------------------------------------------------------------------//
std::vector<ThetaNode>
theta_nodes(ThetaDist const& dist, ThetaSamplePlan const& plan);

//! Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n,
                    std::vector<double>& nodes,
                    std::vector<double>& weights);

//! Single draw of theta from a stream (used by per-consumer simulation).
class CounterRng;
double sample_theta(ThetaDist const& dist, CounterRng& rng);

//! Weighted sum of f(theta) over nodes.
template<class F>
double expectation(std::vector<ThetaNode> const& nodes, F&& f)
{
    double sum = 0;
    for (auto const& node : nodes)
    {
        sum += node.weight * f(node.theta);
    }
    return sum;
}

}  // namespace drb
