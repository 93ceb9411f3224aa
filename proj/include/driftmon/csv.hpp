#pragma once

#include <iosfwd>
#include <string>

#include "driftmon/data_model.hpp"

namespace driftmon {

// Header row must match the schema field names exactly (case-sensitive).
// Numeric fields are parsed as decimal; an empty cell is a missing value.
Dataset read_csv(std::istream& in, const Schema& schema);
Dataset read_csv_file(const std::string& path, const Schema& schema);

// Numbers are written in shortest round-trip form, so output is byte-stable.
void write_csv(std::ostream& out, const Dataset& dataset);
void write_csv_file(const std::string& path, const Dataset& dataset);

// Shortest round-trip formatting for one double (shared by report writers).
std::string format_number(double v);

}  // namespace driftmon
