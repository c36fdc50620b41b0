//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file csv.cpp
//---------------------------------------------------------------------------//
#include "drb/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "drb/errors.hpp"

namespace drb
{
std::string format_number(double value)
{
    if (value == 0)
        value = 0;  // fold -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string format_number(std::size_t value)
{
    return std::to_string(value);
}

std::string format_flag(bool value)
{
    return value ? "true" : "false";
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header))
{
}

void CsvTable::add_row(std::vector<std::string> row)
{
    if (row.size() != header_.size())
        throw ContractError("CsvTable: row width does not match header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const
{
    std::string out;
    auto append = [&out](std::vector<std::string> const& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append(header_);
    for (auto const& row : rows_)
        append(row);
    return out;
}

void CsvTable::write(std::string const& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    auto const text = str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

}  // namespace drb
