#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ndec {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Writes a header row and numeric rows, every value in shortest round-trip form.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Reads a numeric CSV with the given header; returns one vector per column.
std::vector<std::vector<double>> read_csv(std::istream& in, const std::vector<std::string>& header);

}  // namespace ndec
