//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/consumer.hpp
//! Consumer's two-stage problem: second-stage consumptions and the optimal
//! baseline report.
//---------------------------------------------------------------------------//
#pragma once

#include <vector>

#include "model.hpp"

namespace drb
{
//---------------------------------------------------------------------------//
// TYPES
//---------------------------------------------------------------------------//
struct SecondStageResult
{
    double q_a;  //!< non-participant consumption (true baseline)
    double q_b;  //!< participant, not called
    double q_c;  //!< participant, called
    double theta;
    double f;  //!< report used for q_b
};

struct ReportSolution
{
    double f_star{0};
    double expected_cost{0};
    double expected_inflation{0};  //!< f* - E q^a
    double measurable_inflation{0};  //!< E[f* - q^b(f*)]
    double residual{0};  //!< E phi'(f* - q^b) - p pi2 / (1 - p)
    bool converged{false};
    int iterations{0};
};

struct InflationReport
{
    double delta_f{0};  //!< f* - E q^a
    double delta_f_tilde{0};  //!< E[f* - q^b]
    double f_star{0};
    double theory_value{0};  //!< closed form, quadratic penalty
    double theory_bound{0};  //!< upper bound, deadband penalty
};

struct RationalityCheck
{
    bool rational{false};
    double participant_cost{0};  //!< H(f)
    double outside_cost{0};  //!< E min_q J^a
};

struct SolverOptions
{
    double tol{1e-10};  //!< stationarity tolerance on E phi' - p pi2/(1-p)
    double f_tol{1e-12};  //!< bracket width, relative to max(1, |f|)
    int max_iterations{400};
    int max_expansions{60};
};

//---------------------------------------------------------------------------//
// SECOND STAGE
//---------------------------------------------------------------------------//
double consumption_nonparticipant(ConsumerParams const& params,
                                  double pi0,
                                  double theta);
double consumption_called(ConsumerParams const& params,
                          double pi0,
                          double pi2,
                          double theta);
double consumption_not_called(ConsumerParams const& params,
                              MechanismParams const& mech,
                              double f,
                              double theta);

SecondStageResult second_stage(ConsumerParams const& params,
                               MechanismParams const& mech,
                               double f,
                               double theta);

//! Realized costs at given consumption.
double cost_nonparticipant(ConsumerParams const& params,
                           double pi0,
                           double q,
                           double theta);
double cost_not_called(ConsumerParams const& params,
                       MechanismParams const& mech,
                       double f,
                       double q,
                       double theta);
double cost_called(ConsumerParams const& params,
                   MechanismParams const& mech,
                   double f,
                   double q,
                   double theta);

//---------------------------------------------------------------------------//
// FIRST STAGE
//---------------------------------------------------------------------------//
double mean_nonparticipant(ConsumerParams const& params,
                           double pi0,
                           std::vector<ThetaNode> const& nodes);

// H(f) = p E J^c + (1 - p) E J^b
double expected_cost(ConsumerParams const& params,
                     MechanismParams const& mech,
                     double f,
                     std::vector<ThetaNode> const& nodes);
double expected_cost(ConsumerParams const& params,
                     MechanismParams const& mech,
                     double f,
                     ThetaSamplePlan const& plan);

// M(f) = p E mu(q^c) + (1 - p) E mu(q^b(f))
double expected_marginal_utility(ConsumerParams const& params,
                                 MechanismParams const& mech,
                                 double f,
                                 std::vector<ThetaNode> const& nodes);
double expected_marginal_utility(ConsumerParams const& params,
                                 MechanismParams const& mech,
                                 double f,
                                 ThetaSamplePlan const& plan);

//! E phi'(f - q^b(f, theta)) - p pi2 / (1 - p); zero at the optimal report.
double stationarity_residual(ConsumerParams const& params,
                             MechanismParams const& mech,
                             double f,
                             std::vector<ThetaNode> const& nodes);

ReportSolution solve_optimal_report(ConsumerParams const& params,
                                    MechanismParams const& mech,
                                    std::vector<ThetaNode> const& nodes,
                                    SolverOptions const& options = {});
ReportSolution solve_optimal_report(ConsumerParams const& params,
                                    MechanismParams const& mech,
                                    ThetaSamplePlan const& plan,
                                    double tol);

InflationReport optimal_report_closed_form(ConsumerParams const& params,
                                           MechanismParams const& mech);

//! Closed-form inflation (d + lambda) p pi2 / (1 - p) as a bare formula.
double closed_form_inflation(double d, double lambda, double p, double pi2);

double inflation_bound_deadband(ConsumerParams const& params,
                                MechanismParams const& mech);

RationalityCheck check_individual_rationality(ConsumerParams const& params,
                                              MechanismParams const& mech,
                                              double f,
                                              ThetaSamplePlan const& plan);

double excess_payment_rate(ConsumerParams const& params,
                           MechanismParams const& mech,
                           double f,
                           ThetaSamplePlan const& plan);

}  // namespace drb
