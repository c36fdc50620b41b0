//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file consumer.cpp
//---------------------------------------------------------------------------//
#include "drb/consumer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "drb/errors.hpp"

namespace drb
{
namespace
{
std::string describe_interval(double lo, double hi)
{
    std::ostringstream os;
    os.precision(15);
    os << "[" << lo << ", " << hi << "]";
    return os.str();
}

double reward_threshold(MechanismParams const& mech)
{
    return mech.p * mech.pi2 / (1 - mech.p);
}
}  // namespace

//---------------------------------------------------------------------------//
// SECOND STAGE
//---------------------------------------------------------------------------//
double consumption_nonparticipant(ConsumerParams const& params,
                                  double pi0,
                                  double theta)
{
    return inverse_marginal_utility(params, pi0, theta);
}

double consumption_called(ConsumerParams const& params,
                          double pi0,
                          double pi2,
                          double theta)
{
    return inverse_marginal_utility(params, pi0 + pi2, theta);
}

//---------------------------------------------------------------------------//
/*!
 * Uncalled participant's consumption.
 *
 * The first-order condition pi0 - mu(q) - phi'(f - q) = 0 is affine in q on
 * each of the three pieces of phi'. With the deadband shifting the report to
 * f -/+ epsilon, the outer pieces give the weighted mean
 * (lambda q^a + d (f -/+ epsilon)) / (d + lambda); the inner piece gives q^a.
 * Exactly one piece is self-consistent; a tie on the kink is the inner one.
 */
double consumption_not_called(ConsumerParams const& params,
                              MechanismParams const& mech,
                              double f,
                              double theta)
{
    if (f < 0)
    {
        throw DomainError("consumption_not_called: negative report");
    }
    double const q_a = consumption_nonparticipant(params, mech.pi0, theta);
    double const d = params.d;
    double const lambda = mech.penalty.lambda;
    double const eps = mech.penalty.epsilon;

    if (mech.penalty.is_none())
        return q_a;

    double target = q_a;
    if (f - eps > q_a)
    {
        target = f - eps;
    }
    else if (f + eps < q_a)
    {
        target = f + eps;
    }
    else
    {
        return q_a;
    }
    return (lambda * q_a + d * target) / (d + lambda);
}

SecondStageResult second_stage(ConsumerParams const& params,
                               MechanismParams const& mech,
                               double f,
                               double theta)
{
    SecondStageResult result;
    result.q_a = consumption_nonparticipant(params, mech.pi0, theta);
    result.q_b = consumption_not_called(params, mech, f, theta);
    result.q_c = consumption_called(params, mech.pi0, mech.pi2, theta);
    result.theta = theta;
    result.f = f;
    return result;
}

double cost_nonparticipant(ConsumerParams const& params,
                           double pi0,
                           double q,
                           double theta)
{
    return pi0 * q - utility_value(params, q, theta);
}

double cost_not_called(ConsumerParams const& params,
                       MechanismParams const& mech,
                       double f,
                       double q,
                       double theta)
{
    return cost_nonparticipant(params, mech.pi0, q, theta)
           + penalty_value(mech.penalty, f - q);
}

double cost_called(ConsumerParams const& params,
                   MechanismParams const& mech,
                   double f,
                   double q,
                   double theta)
{
    return cost_nonparticipant(params, mech.pi0, q, theta)
           - mech.pi2 * (f - q);
}

//---------------------------------------------------------------------------//
// FIRST STAGE
//---------------------------------------------------------------------------//
double mean_nonparticipant(ConsumerParams const& params,
                           double pi0,
                           std::vector<ThetaNode> const& nodes)
{
    return expectation(nodes, [&](double theta) {
        return consumption_nonparticipant(params, pi0, theta);
    });
}

double expected_cost(ConsumerParams const& params,
                     MechanismParams const& mech,
                     double f,
                     std::vector<ThetaNode> const& nodes)
{
    double const called = expectation(nodes, [&](double theta) {
        double const q = consumption_called(params, mech.pi0, mech.pi2, theta);
        return cost_called(params, mech, f, q, theta);
    });
    double const not_called = expectation(nodes, [&](double theta) {
        double const q = consumption_not_called(params, mech, f, theta);
        return cost_not_called(params, mech, f, q, theta);
    });
    return mech.p * called + (1 - mech.p) * not_called;
}

double expected_cost(ConsumerParams const& params,
                     MechanismParams const& mech,
                     double f,
                     ThetaSamplePlan const& plan)
{
    return expected_cost(params, mech, f, theta_nodes(params.theta_dist, plan));
}

double expected_marginal_utility(ConsumerParams const& params,
                                 MechanismParams const& mech,
                                 double f,
                                 std::vector<ThetaNode> const& nodes)
{
    double const called = expectation(nodes, [&](double theta) {
        double const q = consumption_called(params, mech.pi0, mech.pi2, theta);
        return marginal_utility(params, q, theta);
    });
    double const not_called = expectation(nodes, [&](double theta) {
        double const q = consumption_not_called(params, mech, f, theta);
        return marginal_utility(params, q, theta);
    });
    return mech.p * called + (1 - mech.p) * not_called;
}

double expected_marginal_utility(ConsumerParams const& params,
                                 MechanismParams const& mech,
                                 double f,
                                 ThetaSamplePlan const& plan)
{
    return expected_marginal_utility(
        params, mech, f, theta_nodes(params.theta_dist, plan));
}

double stationarity_residual(ConsumerParams const& params,
                             MechanismParams const& mech,
                             double f,
                             std::vector<ThetaNode> const& nodes)
{
    double const slope = expectation(nodes, [&](double theta) {
        double const q = consumption_not_called(params, mech, f, theta);
        return penalty_derivative(mech.penalty, f - q);
    });
    return slope - reward_threshold(mech);
}

//---------------------------------------------------------------------------//
/*!
 * Minimize H(f) by bisection on its derivative.
 *
 * By the envelope theorem H'(f) = (1 - p) * residual(f), and the residual is
 * nondecreasing in f because d q^b / d f lies in [0, 1). The initial bracket
 * starts at E q^a and extends past the quadratic closed form plus the
 * deadband; either end is pushed outward until the residual changes sign.
 */
ReportSolution solve_optimal_report(ConsumerParams const& params,
                                    MechanismParams const& mech,
                                    std::vector<ThetaNode> const& nodes,
                                    SolverOptions const& options)
{
    if (!(options.tol > 0))
        throw ContractError("solve_optimal_report: tol must be positive");
    if (!(mech.p >= 0 && mech.p < 1))
        throw ContractError("solve_optimal_report: p must lie in [0, 1)");
    if (!(mech.penalty.lambda > 0))
        throw ContractError(
            "solve_optimal_report: penalty must be strictly convex outside "
            "the deadband (lambda > 0)");

    if (mech.penalty.is_none() && reward_threshold(mech) > 0)
    {
        // H falls with slope -p pi2 everywhere
        throw SolverError("solve_optimal_report: without a penalty the "
                          "expected cost decreases without bound in f",
                          -reward_threshold(mech));
    }

    auto residual = [&](double f) {
        return stationarity_residual(params, mech, f, nodes);
    };

    double const mean_qa = mean_nonparticipant(params, mech.pi0, nodes);
    double const guess
        = mech.penalty.is_none()
              ? 0.0
              : closed_form_inflation(
                    params.d, mech.penalty.lambda, mech.p, mech.pi2)
                    + mech.penalty.epsilon;
    double const scale = std::max(1.0, std::abs(mean_qa));
    double margin = std::max(0.5 * guess, 1e-6 * scale);

    double lo = mean_qa;
    double hi = mean_qa + guess + margin;
    double r_lo = residual(lo);
    double r_hi = residual(hi);

    int expansions = 0;
    while (r_lo > 0 && expansions < options.max_expansions)
    {
        double const next = std::max(0.0, lo - margin);
        if (next == lo)
            break;
        hi = lo;
        r_hi = r_lo;
        lo = next;
        r_lo = residual(lo);
        margin *= 2;
        ++expansions;
    }
    while (r_hi < 0 && expansions < options.max_expansions)
    {
        lo = hi;
        r_lo = r_hi;
        hi += margin;
        r_hi = residual(hi);
        margin *= 2;
        ++expansions;
    }
    if (r_lo > 0 || r_hi < 0)
    {
        throw SolverError("solve_optimal_report: failed to bracket the "
                              "stationarity condition on "
                              + describe_interval(lo, hi),
                          r_lo > 0 ? r_lo : r_hi);
    }

    ReportSolution result;
    double f = 0.5 * (lo + hi);
    double r = residual(f);
    int iter = 0;
    for (; iter < options.max_iterations; ++iter)
    {
        f = 0.5 * (lo + hi);
        r = residual(f);
        if (r == 0)
            break;
        if (r < 0)
            lo = f;
        else
            hi = f;
        if (hi - lo <= options.f_tol * std::max(1.0, std::abs(f)))
        {
            f = 0.5 * (lo + hi);
            r = residual(f);
            ++iter;
            break;
        }
    }
    result.f_star = f;
    result.residual = r;
    result.iterations = iter;
    result.converged = std::abs(r) <= options.tol;
    if (!result.converged && iter >= options.max_iterations)
    {
        throw SolverError("solve_optimal_report: no convergence after "
                              + std::to_string(iter) + " iterations on "
                              + describe_interval(lo, hi),
                          r);
    }
    result.expected_cost = expected_cost(params, mech, f, nodes);
    result.expected_inflation = f - mean_qa;
    result.measurable_inflation = expectation(nodes, [&](double theta) {
        return f - consumption_not_called(params, mech, f, theta);
    });
    return result;
}

ReportSolution solve_optimal_report(ConsumerParams const& params,
                                    MechanismParams const& mech,
                                    ThetaSamplePlan const& plan,
                                    double tol)
{
    SolverOptions options;
    options.tol = tol;
    return solve_optimal_report(
        params, mech, theta_nodes(params.theta_dist, plan), options);
}

double closed_form_inflation(double d, double lambda, double p, double pi2)
{
    return (d + lambda) * p * pi2 / (1 - p);
}

InflationReport optimal_report_closed_form(ConsumerParams const& params,
                                           MechanismParams const& mech)
{
    if (mech.penalty.epsilon != 0)
    {
        throw ContractError(
            "optimal_report_closed_form: requires a pure quadratic penalty; "
            "use inflation_bound_deadband for epsilon > 0");
    }
    if (!(mech.p >= 0 && mech.p < 1))
        throw ContractError("optimal_report_closed_form: p must lie in [0, 1)");

    double const threshold = mech.p * mech.pi2 / (1 - mech.p);
    double const mean_qa
        = params.d * (params.c + params.theta_dist.mean() - mech.pi0);

    InflationReport report;
    report.delta_f
        = closed_form_inflation(params.d, mech.penalty.lambda, mech.p, mech.pi2);
    report.delta_f_tilde = mech.penalty.lambda * threshold;
    report.f_star = mean_qa + report.delta_f;
    report.theory_value = report.delta_f;
    report.theory_bound = report.delta_f;
    return report;
}

double inflation_bound_deadband(ConsumerParams const& params,
                                MechanismParams const& mech)
{
    auto const& dist = params.theta_dist;
    double const q_min
        = consumption_nonparticipant(params, mech.pi0, dist.support_min());
    double const q_max
        = consumption_nonparticipant(params, mech.pi0, dist.support_max());
    double const mean_qa = params.d * (params.c + dist.mean() - mech.pi0);
    double const spread = std::max(q_max - mean_qa, mean_qa - q_min);
    // Allow for rounding in the spread itself
    double const slack = 1e-12 * std::max(1.0, std::abs(mean_qa));
    if (mech.penalty.epsilon + slack < spread)
    {
        std::ostringstream os;
        os.precision(12);
        os << "inflation_bound_deadband: deadband " << mech.penalty.epsilon
           << " does not cover the baseline spread " << spread
           << "; bound and individual rationality not guaranteed";
        throw ContractError(os.str());
    }
    return closed_form_inflation(params.d, mech.penalty.lambda, mech.p, mech.pi2)
           + mech.penalty.epsilon;
}

RationalityCheck check_individual_rationality(ConsumerParams const& params,
                                              MechanismParams const& mech,
                                              double f,
                                              ThetaSamplePlan const& plan)
{
    auto const nodes = theta_nodes(params.theta_dist, plan);
    RationalityCheck result;
    result.participant_cost = expected_cost(params, mech, f, nodes);
    result.outside_cost = expectation(nodes, [&](double theta) {
        double const q = consumption_nonparticipant(params, mech.pi0, theta);
        return cost_nonparticipant(params, mech.pi0, q, theta);
    });
    result.rational = result.participant_cost <= result.outside_cost;
    return result;
}

double excess_payment_rate(ConsumerParams const& params,
                           MechanismParams const& mech,
                           double f,
                           ThetaSamplePlan const& plan)
{
    auto const nodes = theta_nodes(params.theta_dist, plan);
    double const mean_qa = mean_nonparticipant(params, mech.pi0, nodes);
    double const mean_qc = expectation(nodes, [&](double theta) {
        return consumption_called(params, mech.pi0, mech.pi2, theta);
    });
    double const reduction = mean_qa - mean_qc;
    if (!(reduction > 0))
    {
        throw DomainError(
            "excess_payment_rate: expected reduction E q^a - E q^c must be "
            "positive");
    }
    return mech.pi2 + mech.pi2 * (f - mean_qa) / reduction;
}

}  // namespace drb
