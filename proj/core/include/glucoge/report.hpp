#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glucoge/evolver.hpp"
#include "glucoge/fitness.hpp"
#include "glucoge/series.hpp"

namespace glucoge {

inline constexpr int kReportSchemaVersion = 1;

/// Everything needed to re-check a run offline: re-simulating `expression`
/// over the dataset reproduces `gl_hat` exactly.
struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string patient_id;
  std::string grammar_id;
  Objective objective = Objective::average_error;
  std::uint64_t seed = 0;
  GaConfig config;
  std::vector<int> best_codons;
  std::string phenotype;
  std::string expression;
  Fitness fitness;
  double pae = 0.0;
  std::vector<double> gl;
  std::vector<double> gl_hat;
  std::vector<Fitness> history_best;
  std::vector<double> history_mean;
  /// Volatile, non-reproducible fields (creation time). Excluded from
  /// determinism checks.
  nlohmann::json metadata = nlohmann::json::object();

  bool operator==(const RunReport&) const = default;
};

RunReport make_report(const RunResult& result, const PatientSeries& actual);

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& doc);

/// Serialised report with sorted keys and two-space indentation.
std::string report_text(const RunReport& report);

void write_report(const RunReport& report, const std::filesystem::path& path);
void write_report(const RunResult& result, const PatientSeries& actual, const std::filesystem::path& path);
/// Throws DatasetError(parse_error) on malformed or wrong-version files.
RunReport read_report(const std::filesystem::path& path);

/// `{patient}_{grammar}_{objective}_{run}.report`.
std::string report_file_name(const std::string& patient, const std::string& grammar, Objective objective,
                             std::size_t run);

}  // namespace glucoge
