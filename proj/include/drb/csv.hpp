//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file drb/csv.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace drb
{
//! Fixed 12-significant-digit text so equal doubles give equal bytes.
std::string format_number(double value);
std::string format_number(std::size_t value);
std::string format_flag(bool value);

class CsvTable
{
  public:
    explicit CsvTable(std::vector<std::string> header);

    //! Row width must match the header.
    void add_row(std::vector<std::string> row);

    std::vector<std::string> const& header() const { return header_; }
    std::size_t size() const { return rows_.size(); }

    std::string str() const;

    //! Throws IoError if the file cannot be written.
    void write(std::string const& path) const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace drb
