#include "ndec/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "ndec/error.hpp"

namespace ndec {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  require(ec == std::errc(), Errc::InvalidArgument, "number formatting failed");
  return {buf.data(), end};
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  require(header.size() == columns.size(), Errc::InvalidArgument, "header and column count differ");
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    require(col.size() == rows, Errc::InvalidArgument, "CSV columns have different lengths");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c][r]);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_csv(std::istream& in, const std::vector<std::string>& header) {
  std::string line;
  require(bool(std::getline(in, line)), Errc::InvalidArgument, "CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string expected;
  for (std::size_t c = 0; c < header.size(); ++c) expected += (c ? "," : "") + header[c];
  require(line == expected, Errc::InvalidArgument, "CSV header must be '" + expected + "'");

  std::vector<std::vector<double>> columns(header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::size_t c = 0;
    while (std::getline(fields, field, ',')) {
      require(c < header.size(), Errc::InvalidArgument, "too many fields on CSV line " + std::to_string(row));
      double v = 0.0;
      const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      require(ec == std::errc() && end == field.data() + field.size(), Errc::InvalidArgument,
              "bad number '" + field + "' on CSV line " + std::to_string(row));
      columns[c++].push_back(v);
    }
    require(c == header.size(), Errc::InvalidArgument, "too few fields on CSV line " + std::to_string(row));
  }
  return columns;
}

}  // namespace ndec
