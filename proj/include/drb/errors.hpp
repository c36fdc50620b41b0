//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/errors.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <stdexcept>
#include <string>

namespace drb
{
//! Argument outside the mathematical domain (e.g. would give q < 0).
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Operation called outside its contract (wrong penalty family, bad sizes).
class ContractError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

//! Scenario or model parameters violate a stated invariant.
class ValidationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Input or output file could not be read or written.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Root finder failed to bracket or converge.
class SolverError : public std::runtime_error
{
  public:
    SolverError(std::string const& what, double residual)
        : std::runtime_error(what), residual_(residual)
    {
    }

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

//! Population cannot supply the requested groups.
class RecruitmentError : public std::runtime_error
{
  public:
    RecruitmentError(std::string const& what, double shortfall)
        : std::runtime_error(what), shortfall_(shortfall)
    {
    }

    double shortfall() const noexcept { return shortfall_; }

  private:
    double shortfall_;
};

}  // namespace drb
