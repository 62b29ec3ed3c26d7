#include "glucoge/report.hpp"

#include <cmath>
#include <limits>

#include "glucoge/dataset.hpp"

namespace glucoge {

namespace {

using nlohmann::json;

json fitness_json(const Fitness& f) { return f.is_worst() ? json("worst") : json(f.value()); }

Fitness fitness_from(const json& j) {
  if (j.is_string() && j.get<std::string>() == "worst") return Fitness::worst();
  return Fitness(j.get<double>());
}

// JSON has no NaN/inf; they are written as null (or a tag) and mapped back.
json real_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double real_from(const json& j, double null_value) { return j.is_null() ? null_value : j.get<double>(); }

json config_json(const GaConfig& c) {
  return {
      {"population_size", c.population_size},
      {"generations", c.generations},
      {"chromosome_length", c.chromosome_length},
      {"codon_size", c.codon_size},
      {"max_wraps", c.max_wraps},
      {"crossover_prob", c.crossover_prob},
      {"mutation_prob", c.mutation_prob},
      {"mutation_mode", c.mutation_mode == MutationMode::per_individual ? "per-individual" : "per-codon"},
      {"tournament_size", c.tournament_size},
      {"elitism", c.elitism},
      {"seed", c.seed},
  };
}

GaConfig config_from(const json& j) {
  GaConfig c;
  c.population_size = j.at("population_size").get<std::size_t>();
  c.generations = j.at("generations").get<std::size_t>();
  c.chromosome_length = j.at("chromosome_length").get<std::size_t>();
  c.codon_size = j.at("codon_size").get<std::size_t>();
  c.max_wraps = j.at("max_wraps").get<std::size_t>();
  c.crossover_prob = j.at("crossover_prob").get<double>();
  c.mutation_prob = j.at("mutation_prob").get<double>();
  c.mutation_mode = j.at("mutation_mode").get<std::string>() == "per-codon" ? MutationMode::per_codon
                                                                             : MutationMode::per_individual;
  c.tournament_size = j.at("tournament_size").get<std::size_t>();
  c.elitism = j.at("elitism").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

RunReport make_report(const RunResult& result, const PatientSeries& actual) {
  RunReport r;
  r.patient_id = result.patient_id.empty() ? actual.patient_id : result.patient_id;
  r.grammar_id = result.grammar_id;
  r.objective = result.objective;
  r.seed = result.config.seed;
  r.config = result.config;
  r.config.threads = 1;
  for (auto c : result.best_chromosome.codons) r.best_codons.push_back(c);
  r.phenotype = result.best_phenotype;
  r.expression = result.best_expression;
  r.fitness = result.best_fitness;
  r.pae = result.best_pae;
  r.gl = actual.gl;
  r.gl_hat = result.best_estimate.gl_hat;
  for (const auto& h : result.history) {
    r.history_best.push_back(h.best);
    r.history_mean.push_back(h.mean);
  }
  return r;
}

json to_json(const RunReport& r) {
  json table = json::array();
  for (std::size_t i = 0; i < r.gl.size(); ++i) {
    table.push_back({i + 1, r.gl[i], i < r.gl_hat.size() ? real_json(r.gl_hat[i]) : json(nullptr)});
  }
  json best = json::array();
  for (const auto& f : r.history_best) best.push_back(fitness_json(f));
  json mean = json::array();
  for (double m : r.history_mean) mean.push_back(real_json(m));

  return {
      {"schema", "glucoge.run-report"},
      {"schema_version", r.schema_version},
      {"patient", r.patient_id},
      {"grammar", r.grammar_id},
      {"objective", objective_code(r.objective)},
      {"seed", r.seed},
      {"config", config_json(r.config)},
      {"best",
       {
           {"codons", r.best_codons},
           {"phenotype", r.phenotype},
           {"expression", r.expression},
           {"fitness", fitness_json(r.fitness)},
           {"pae_percent", real_json(r.pae)},
       }},
      {"series", {{"columns", {"k", "GL", "GL_hat"}}, {"rows", table}}},
      {"history", {{"best", best}, {"mean", mean}}},
      {"metadata", r.metadata},
  };
}

RunReport report_from_json(const json& doc) {
  RunReport r;
  r.schema_version = doc.at("schema_version").get<int>();
  if (r.schema_version != kReportSchemaVersion) {
    throw DatasetError(DatasetError::Kind::parse_error, 0,
                       "unsupported report schema version " + std::to_string(r.schema_version));
  }
  r.patient_id = doc.at("patient").get<std::string>();
  r.grammar_id = doc.at("grammar").get<std::string>();
  auto objective = parse_objective(doc.at("objective").get<std::string>());
  if (!objective) throw DatasetError(DatasetError::Kind::parse_error, 0, "unknown objective in report");
  r.objective = *objective;
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.config = config_from(doc.at("config"));
  const auto& best = doc.at("best");
  r.best_codons = best.at("codons").get<std::vector<int>>();
  r.phenotype = best.at("phenotype").get<std::string>();
  r.expression = best.at("expression").get<std::string>();
  r.fitness = fitness_from(best.at("fitness"));
  r.pae = real_from(best.at("pae_percent"), std::numeric_limits<double>::infinity());
  for (const auto& row : doc.at("series").at("rows")) {
    r.gl.push_back(row.at(1).get<double>());
    r.gl_hat.push_back(real_from(row.at(2), std::numeric_limits<double>::quiet_NaN()));
  }
  const auto& history = doc.at("history");
  for (const auto& b : history.at("best")) r.history_best.push_back(fitness_from(b));
  for (const auto& m : history.at("mean")) {
    r.history_mean.push_back(real_from(m, std::numeric_limits<double>::quiet_NaN()));
  }
  r.metadata = doc.value("metadata", json::object());
  return r;
}

std::string report_text(const RunReport& report) { return to_json(report).dump(2) + "\n"; }

void write_report(const RunReport& report, const std::filesystem::path& path) {
  write_text_file(path, report_text(report));
}

void write_report(const RunResult& result, const PatientSeries& actual, const std::filesystem::path& path) {
  write_report(make_report(result, actual), path);
}

RunReport read_report(const std::filesystem::path& path) {
  auto text = read_text_file(path);
  try {
    return report_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw DatasetError(DatasetError::Kind::parse_error, 0, path.string() + ": " + e.what());
  }
}

std::string report_file_name(const std::string& patient, const std::string& grammar, Objective objective,
                             std::size_t run) {
  return patient + "_" + grammar + "_" + std::string(objective_code(objective)) + "_" + std::to_string(run) +
         ".report";
}

}  // namespace glucoge
