//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file model.cpp
//---------------------------------------------------------------------------//
#include "drb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "drb/errors.hpp"
#include "drb/philox.hpp"

namespace drb
{
namespace
{
double std_normal_pdf(double z)
{
    return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
}

double std_normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

template<class T>
std::string str(T const& value)
{
    std::ostringstream os;
    os.precision(12);
    os << value;
    return os.str();
}
}  // namespace

//---------------------------------------------------------------------------//
// THETA DISTRIBUTION
//---------------------------------------------------------------------------//
ThetaDist ThetaDist::degenerate_at(double v)
{
    ThetaDist result;
    result.kind = Kind::degenerate;
    result.value = v;
    result.lo = v;
    result.hi = v;
    return result;
}

ThetaDist ThetaDist::uniform_on(double lo, double hi)
{
    ThetaDist result;
    result.kind = Kind::uniform;
    result.lo = lo;
    result.hi = hi;
    return result;
}

ThetaDist
ThetaDist::truncated_normal(double loc, double sd, double lo, double hi)
{
    ThetaDist result;
    result.kind = Kind::truncated_normal;
    result.location = loc;
    result.scale = sd;
    result.lo = lo;
    result.hi = hi;
    return result;
}

double ThetaDist::mean() const
{
    switch (kind)
    {
        case Kind::degenerate:
            return value;
        case Kind::uniform:
            return 0.5 * (lo + hi);
        case Kind::truncated_normal: {
            double const alpha = (lo - location) / scale;
            double const beta = (hi - location) / scale;
            double const mass = std_normal_cdf(beta) - std_normal_cdf(alpha);
            return location
                   + scale * (std_normal_pdf(alpha) - std_normal_pdf(beta))
                         / mass;
        }
    }
    return value;
}

double ThetaDist::support_min() const
{
    return kind == Kind::degenerate ? value : lo;
}

double ThetaDist::support_max() const
{
    return kind == Kind::degenerate ? value : hi;
}

std::string to_string(ThetaDist::Kind kind)
{
    switch (kind)
    {
        case ThetaDist::Kind::degenerate:
            return "degenerate";
        case ThetaDist::Kind::uniform:
            return "uniform";
        case ThetaDist::Kind::truncated_normal:
            return "truncated-normal";
    }
    return "unknown";
}

//---------------------------------------------------------------------------//
// VALIDATION
//---------------------------------------------------------------------------//
std::vector<std::string> validate(ThetaDist const& dist)
{
    std::vector<std::string> errors;
    if (dist.kind == ThetaDist::Kind::degenerate)
    {
        if (!std::isfinite(dist.value))
            errors.push_back("theta: degenerate value must be finite");
        return errors;
    }
    if (!(std::isfinite(dist.lo) && std::isfinite(dist.hi)))
        errors.push_back("theta: support bounds must be finite");
    else if (!(dist.lo < dist.hi))
        errors.push_back("theta: support requires lo < hi");
    if (dist.kind == ThetaDist::Kind::truncated_normal && !(dist.scale > 0))
        errors.push_back("theta: truncated-normal scale must be positive");
    return errors;
}

std::vector<std::string> validate(ConsumerParams const& params)
{
    std::vector<std::string> errors;
    if (!std::isfinite(params.c))
        errors.push_back("consumer: c must be finite");
    if (!(params.d > 0) || !std::isfinite(params.d))
        errors.push_back("consumer: d must be strictly positive, got "
                         + str(params.d));
    auto theta_errors = validate(params.theta_dist);
    errors.insert(errors.end(), theta_errors.begin(), theta_errors.end());
    return errors;
}

std::vector<std::string> validate(PenaltySpec const& spec)
{
    std::vector<std::string> errors;
    if (!(spec.lambda > 0))
        errors.push_back("penalty: lambda must be strictly positive, got "
                         + str(spec.lambda));
    if (!(spec.epsilon >= 0) || !std::isfinite(spec.epsilon))
        errors.push_back("penalty: epsilon must be nonnegative, got "
                         + str(spec.epsilon));
    return errors;
}

std::vector<std::string> validate(MechanismParams const& mech)
{
    std::vector<std::string> errors;
    if (!(mech.pi0 > 0))
        errors.push_back("mechanism: pi0 must be positive");
    if (!(mech.pi2 >= 0))
        errors.push_back("mechanism: pi2 must be nonnegative");
    if (!(mech.p >= 0 && mech.p < 1))
        errors.push_back("mechanism: p must lie in [0, 1), got "
                         + str(mech.p));
    auto penalty_errors = validate(mech.penalty);
    errors.insert(errors.end(), penalty_errors.begin(), penalty_errors.end());
    return errors;
}

std::vector<std::string>
validate_participation(ConsumerParams const& params, MechanismParams const& mech)
{
    std::vector<std::string> errors;
    double const theta_min = params.theta_dist.support_min();
    double const margin = params.c + theta_min - mech.pi0 - mech.pi2;
    if (!(margin > 0))
    {
        errors.push_back(
            "consumer: c + theta_min - pi0 - pi2 must be positive so that "
            "called consumption stays positive, got "
            + str(margin));
    }
    return errors;
}

//---------------------------------------------------------------------------//
// UTILITY
//---------------------------------------------------------------------------//
double utility_value(ConsumerParams const& params, double q, double theta)
{
    if (q < 0)
        throw DomainError("utility_value: negative consumption " + str(q));
    return (params.c + theta) * q - q * q / (2 * params.d);
}

double marginal_utility(ConsumerParams const& params, double q, double theta)
{
    if (q < 0)
        throw DomainError("marginal_utility: negative consumption " + str(q));
    return (params.c + theta) - q / params.d;
}

double
inverse_marginal_utility(ConsumerParams const& params, double x, double theta)
{
    double const intercept = params.c + theta;
    if (x > intercept)
    {
        throw DomainError("inverse_marginal_utility: price " + str(x)
                          + " exceeds intercept c + theta = " + str(intercept)
                          + " (consumption would be negative)");
    }
    return params.d * (intercept - x);
}

//---------------------------------------------------------------------------//
// PENALTY
//---------------------------------------------------------------------------//
double penalty_value(PenaltySpec const& spec, double x)
{
    double const excess = std::max(std::abs(x) - spec.epsilon, 0.0);
    return excess * excess / (2 * spec.lambda);
}

double penalty_derivative(PenaltySpec const& spec, double x)
{
    double const excess = std::max(std::abs(x) - spec.epsilon, 0.0);
    return std::copysign(excess, x) / spec.lambda;
}

double penalty_derivative_inverse(PenaltySpec const& spec, double y)
{
    if (!(y > 0))
    {
        throw DomainError("penalty_derivative_inverse: requires y > 0, got "
                          + str(y));
    }
    return spec.lambda * y + spec.epsilon;
}

//---------------------------------------------------------------------------//
// EXPECTATION NODES
//---------------------------------------------------------------------------//
void gauss_legendre(std::size_t n,
                    std::vector<double>& nodes,
                    std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i)
    {
        // Chebyshev-like initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k)
            {
                double const p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double const dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double const w = 2 / ((1 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
    {
        nodes[n / 2] = 0;
    }
}

double sample_theta(ThetaDist const& dist, CounterRng& rng)
{
    switch (dist.kind)
    {
        case ThetaDist::Kind::degenerate:
            return dist.value;
        case ThetaDist::Kind::uniform:
            return dist.lo + (dist.hi - dist.lo) * rng.uniform();
        case ThetaDist::Kind::truncated_normal: {
            // Rejection against the uniform envelope on the support
            double const mode = std::clamp(dist.location, dist.lo, dist.hi);
            double const zmode = (mode - dist.location) / dist.scale;
            for (;;)
            {
                double const x = dist.lo + (dist.hi - dist.lo) * rng.uniform();
                double const z = (x - dist.location) / dist.scale;
                double const accept = std::exp(-0.5 * (z * z - zmode * zmode));
                if (rng.uniform() < accept)
                    return x;
            }
        }
    }
    return dist.value;
}

std::vector<ThetaNode>
theta_nodes(ThetaDist const& dist, ThetaSamplePlan const& plan)
{
    if (plan.n_points == 0)
        throw ContractError("theta_nodes: n_points must be positive");
    if (dist.kind == ThetaDist::Kind::degenerate)
        return {{dist.value, 1.0}};

    std::vector<ThetaNode> result;
    result.reserve(plan.n_points);
    if (plan.method == ThetaSamplePlan::Method::monte_carlo)
    {
        CounterRng rng(plan.seed, rng_domain::theta_plan, 0);
        double const w = 1.0 / static_cast<double>(plan.n_points);
        for (std::size_t i = 0; i < plan.n_points; ++i)
        {
            result.push_back({sample_theta(dist, rng), w});
        }
        return result;
    }

    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(plan.n_points, x, w);
    double const half = 0.5 * (dist.hi - dist.lo);
    double const mid = 0.5 * (dist.hi + dist.lo);
    double total = 0;
    for (std::size_t i = 0; i < plan.n_points; ++i)
    {
        double const theta = mid + half * x[i];
        double density = 1;
        if (dist.kind == ThetaDist::Kind::truncated_normal)
        {
            density = std_normal_pdf((theta - dist.location) / dist.scale);
        }
        result.push_back({theta, w[i] * density});
        total += w[i] * density;
    }
    for (auto& node : result)
    {
        node.weight /= total;
    }
    return result;
}

}  // namespace drb
