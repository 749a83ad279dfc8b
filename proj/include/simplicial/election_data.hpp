#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "simplicial/errors.hpp"
#include "simplicial/math.hpp"

namespace simplicial {

struct ElectionDataset {
  std::vector<std::string> state_codes;  // 48 two-letter codes
  Eigen::MatrixXd predictors;  // 48 x 3: latitude, longitude, log population,
                               // each standardized to mean 0, unit variance
  Eigen::VectorXi labels;      // 1 = Trump, 0 = Clinton
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_double_field(const std::string& text, long row, const char* column) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  double value = 0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw parse_error("election csv row " + std::to_string(row) + ", column " + column +
                      ": not a number: '" + text + "'");
  return value;
}

}  // namespace detail

// Expected layout: header `state_code,latitude,longitude,population,label`,
// then exactly 48 winner-take-all state rows. Population is log-transformed,
// then all three predictor columns are standardized (sample variance, n-1).
inline ElectionDataset load_election_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("election csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw parse_error("election csv: empty file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "state_code,latitude,longitude,population,label")
    throw parse_error("election csv: bad header '" + line + "'");

  constexpr Index kRows = 48;
  ElectionDataset data;
  Eigen::MatrixXd raw(kRows, 3);
  data.labels.resize(kRows);
  std::set<std::string> seen;
  long row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto fields = detail::split_csv_row(line);
    if (fields.size() != 5)
      throw parse_error("election csv row " + std::to_string(row) + ": expected 5 columns, got " +
                        std::to_string(fields.size()));
    if (row > kRows)
      throw parse_error("election csv: more than 48 data rows");
    const std::string& code = fields[0];
    if (code.size() != 2 || !std::isupper(static_cast<unsigned char>(code[0])) ||
        !std::isupper(static_cast<unsigned char>(code[1])))
      throw parse_error("election csv row " + std::to_string(row) +
                        ", column state_code: bad code '" + code + "'");
    if (!seen.insert(code).second)
      throw parse_error("election csv row " + std::to_string(row) +
                        ": duplicate state code '" + code + "'");
    const Index i = row - 1;
    raw(i, 0) = detail::parse_double_field(fields[1], row, "latitude");
    raw(i, 1) = detail::parse_double_field(fields[2], row, "longitude");
    const double population = detail::parse_double_field(fields[3], row, "population");
    if (!(population > 0) || population != std::floor(population))
      throw parse_error("election csv row " + std::to_string(row) +
                        ", column population: expected positive integer, got '" + fields[3] + "'");
    raw(i, 2) = std::log(population);
    if (fields[4] == "0")
      data.labels(i) = 0;
    else if (fields[4] == "1")
      data.labels(i) = 1;
    else
      throw parse_error("election csv row " + std::to_string(row) +
                        ", column label: expected 0 or 1, got '" + fields[4] + "'");
    data.state_codes.push_back(code);
  }
  if (row != kRows)
    throw parse_error("election csv: expected 48 data rows, got " + std::to_string(row));

  data.predictors.resize(kRows, 3);
  for (Index j = 0; j < 3; ++j) {
    const double mean = raw.col(j).mean();
    const double var = (raw.col(j).array() - mean).square().sum() / (kRows - 1);
    if (!(var > 0))
      throw parse_error("election csv: constant predictor column " + std::to_string(j));
    data.predictors.col(j) = (raw.col(j).array() - mean) / std::sqrt(var);
  }
  return data;
}

}  // namespace simplicial
