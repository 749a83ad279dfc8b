#include "harness/results.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "simplicial/errors.hpp"
#include "simplicial/version.hpp"

namespace simplicial::harness {

namespace {

constexpr const char* kCoreColumns[] = {"mean_ess",  "min_ess",         "mean_esss",
                                        "min_esss",  "acceptance_rate", "wall_seconds"};

struct GroupKey {
  std::string algorithm;
  long dimension;
  std::string cell;
  auto operator<=>(const GroupKey&) const = default;
};

double median_of_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

nlohmann::ordered_json stat_summary(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  nlohmann::ordered_json out;
  out["mean"] = mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out["se"] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  } else {
    out["se"] = nullptr;
  }
  out["median"] = median_of_sorted(values);
  return out;
}

// Sentinel -1 means the error threshold was never reached within the budget;
// censor at the budget so summaries read as lower bounds.
double censor_unreached(const std::string& name, double value, const ReplicateRow& row) {
  if (value >= 0.0) return value;
  if (name == "its_to_err10") return static_cast<double>(row.iterations);
  if (name == "secs_to_err10") return row.wall_seconds;
  return value;
}

void append_csv_value(std::string& line, double value) {
  line += format_double(value);
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw impossible_state_error("format_double: buffer too small");
  return std::string(buffer, end);
}

nlohmann::ordered_json compute_aggregates(const std::vector<ReplicateRow>& rows) {
  std::map<GroupKey, std::vector<const ReplicateRow*>> groups;
  for (const ReplicateRow& row : rows)
    groups[{row.algorithm, row.dimension, row.cell}].push_back(&row);

  nlohmann::ordered_json aggregates = nlohmann::ordered_json::array();
  for (const auto& [key, members] : groups) {
    nlohmann::ordered_json entry;
    entry["algorithm"] = key.algorithm;
    entry["dimension"] = key.dimension;
    if (!key.cell.empty()) entry["cell"] = key.cell;
    entry["replicates"] = members.size();

    nlohmann::ordered_json stats;
    auto collect = [&](const std::string& name, auto getter) {
      std::vector<double> values;
      values.reserve(members.size());
      for (const ReplicateRow* row : members) values.push_back(getter(*row));
      stats[name] = stat_summary(values);
    };
    collect("mean_ess", [](const ReplicateRow& r) { return r.mean_ess; });
    collect("min_ess", [](const ReplicateRow& r) { return r.min_ess; });
    collect("mean_esss", [](const ReplicateRow& r) { return r.mean_esss; });
    collect("min_esss", [](const ReplicateRow& r) { return r.min_esss; });
    collect("acceptance_rate", [](const ReplicateRow& r) { return r.acceptance_rate; });
    collect("wall_seconds", [](const ReplicateRow& r) { return r.wall_seconds; });
    for (std::size_t i = 0; i < members.front()->extras.size(); ++i) {
      const std::string& name = members.front()->extras[i].first;
      std::vector<double> values;
      values.reserve(members.size());
      for (const ReplicateRow* row : members) {
        if (row->extras.size() <= i || row->extras[i].first != name)
          throw invalid_argument_error("compute_aggregates: rows disagree on extra columns");
        values.push_back(censor_unreached(name, row->extras[i].second, *row));
      }
      stats[name] = stat_summary(values);
    }
    entry["stats"] = stats;
    aggregates.push_back(entry);
  }
  return aggregates;
}

nlohmann::ordered_json result_document(const ExperimentResult& result) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["library_version"] = kVersionString;
  doc["experiment"] = result.experiment;
  doc["kind"] = kind_name(result.kind);
  doc["config"] = result.config;
  doc["aggregates"] = compute_aggregates(result.rows);
  doc["summary"] = result.summary;

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReplicateRow& row : result.rows) {
    nlohmann::ordered_json entry;
    entry["algorithm"] = row.algorithm;
    entry["dimension"] = row.dimension;
    entry["replicate"] = row.replicate;
    entry["seed"] = row.seed;
    entry["iterations"] = row.iterations;
    entry["mean_ess"] = row.mean_ess;
    entry["min_ess"] = row.min_ess;
    entry["mean_esss"] = row.mean_esss;
    entry["min_esss"] = row.min_esss;
    entry["acceptance_rate"] = row.acceptance_rate;
    entry["wall_seconds"] = row.wall_seconds;
    if (!row.cell.empty()) entry["cell"] = row.cell;
    for (const auto& [name, value] : row.extras) entry[name] = value;
    rows.push_back(entry);
  }
  doc["rows"] = rows;
  return doc;
}

std::string result_csv(const ExperimentResult& result) {
  if (result.rows.empty()) throw invalid_argument_error("result_csv: no rows to write");
  const std::vector<std::pair<std::string, double>>& first = result.rows.front().extras;

  std::string csv =
      "experiment,algorithm,dimension,replicate,seed,iterations,mean_ess,min_ess,"
      "mean_esss,min_esss,acceptance_rate,wall_seconds";
  for (const auto& [name, value] : first) {
    csv += ',';
    csv += name;
  }
  csv += '\n';

  for (const ReplicateRow& row : result.rows) {
    if (row.extras.size() != first.size())
      throw invalid_argument_error("result_csv: rows disagree on extra columns");
    std::string line = result.experiment;
    line += ',';
    line += row.algorithm;
    line += ',';
    line += std::to_string(row.dimension);
    line += ',';
    line += std::to_string(row.replicate);
    line += ',';
    line += std::to_string(row.seed);
    line += ',';
    line += std::to_string(row.iterations);
    for (double value : {row.mean_ess, row.min_ess, row.mean_esss, row.min_esss,
                         row.acceptance_rate, row.wall_seconds}) {
      line += ',';
      append_csv_value(line, value);
    }
    for (std::size_t i = 0; i < row.extras.size(); ++i) {
      if (row.extras[i].first != first[i].first)
        throw invalid_argument_error("result_csv: rows disagree on extra columns");
      line += ',';
      append_csv_value(line, row.extras[i].second);
    }
    line += '\n';
    csv += line;
  }
  return csv;
}

std::vector<std::filesystem::path> write_results(const ExperimentResult& result,
                                                 const std::filesystem::path& directory,
                                                 bool force) {
  if (result.rows.empty() && result.artifacts.empty())
    throw invalid_argument_error("write_results: experiment produced no rows");

  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec)
    throw std::runtime_error("write_results: cannot create " + directory.string() + ": " +
                             ec.message());

  std::vector<std::pair<std::filesystem::path, std::string>> outputs;
  outputs.emplace_back(directory / "result.json", result_document(result).dump(2) + "\n");
  if (!result.rows.empty()) outputs.emplace_back(directory / "result.csv", result_csv(result));
  for (const auto& [name, content] : result.artifacts)
    outputs.emplace_back(directory / name, content);

  if (!force) {
    for (const auto& [path, content] : outputs)
      if (std::filesystem::exists(path))
        throw config_error("refusing to overwrite " + path.string() +
                           " (pass --force to replace existing results)");
  }

  std::vector<std::filesystem::path> written;
  for (const auto& [path, content] : outputs) {
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) throw std::runtime_error("write_results: cannot open " + path.string());
    stream << content;
    if (!stream) throw std::runtime_error("write_results: short write to " + path.string());
    written.push_back(path);
  }
  return written;
}

nlohmann::ordered_json read_result(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw parse_error(path.string() + ": cannot open result file");
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(stream);
  } catch (const nlohmann::json::parse_error& error) {
    throw parse_error(path.string() + ": " + error.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version") ||
      doc["schema_version"].get<int>() != 1)
    throw parse_error(path.string() + ": not a version-1 result document");
  return doc;
}

void summarize_result(const nlohmann::ordered_json& document, std::ostream& out) {
  out << "experiment: " << document.value("experiment", std::string("?")) << " ("
      << document.value("kind", std::string("?")) << ")\n";
  out << "library:    " << document.value("library_version", std::string("?")) << "\n";
  if (document.contains("config")) {
    const auto& config = document["config"];
    out << "run:        " << config.value("iterations", 0L) << " iterations x "
        << config.value("replicates", 0L) << " replicates, seed "
        << config.value("seed", 0UL) << ", clock " << config.value("clock", std::string("?"))
        << (config.value("quick", false) ? ", quick preset" : "") << "\n";
  }
  if (document.contains("rows")) out << "rows:       " << document["rows"].size() << "\n";

  if (document.contains("aggregates") && !document["aggregates"].empty()) {
    out << "\n" << std::left << std::setw(14) << "algorithm" << std::setw(6) << "dim"
        << std::setw(14) << "cell" << std::setw(5) << "n";
    const auto& first_stats = document["aggregates"].front()["stats"];
    std::vector<std::string> stat_names;
    for (const auto& item : first_stats.items()) stat_names.push_back(item.key());
    for (const std::string& name : stat_names) out << std::setw(15) << name;
    out << "\n";
    for (const auto& entry : document["aggregates"]) {
      out << std::left << std::setw(14) << entry.value("algorithm", std::string("?"))
          << std::setw(6) << entry.value("dimension", 0L) << std::setw(14)
          << entry.value("cell", std::string("-")) << std::setw(5)
          << entry.value("replicates", 0UL);
      for (const std::string& name : stat_names) {
        std::ostringstream field;
        if (entry["stats"].contains(name))
          field << std::setprecision(5) << entry["stats"][name]["mean"].get<double>();
        else
          field << "-";
        out << std::setw(15) << field.str();
      }
      out << "\n";
    }
  }

  if (document.contains("summary") && !document["summary"].empty())
    out << "\nsummary:\n" << document["summary"].dump(2) << "\n";
}

}  // namespace simplicial::harness
