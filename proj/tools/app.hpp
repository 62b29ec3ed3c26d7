#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glucoge/evolver.hpp"
#include "glucoge/expression.hpp"
#include "glucoge/fitness.hpp"
#include "glucoge/grammar.hpp"
#include "glucoge/mapper.hpp"
#include "glucoge/report.hpp"
#include "glucoge/series.hpp"

namespace glucoge::app {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kWrappedOut = 2,
  kPartialFailure = 3,
  kUsage = 64,
};

struct NamedGrammar {
  std::string id;
  Grammar grammar;
};

/// Resolves G10..G13 / FIG1 to the bundled assets, or loads `grammar_file`
/// when given (its id is the file stem).
NamedGrammar resolve_grammar(const std::string& id, const std::optional<std::filesystem::path>& grammar_file = {});

// --- train -----------------------------------------------------------------

struct TrainSpec {
  std::vector<std::filesystem::path> datasets;
  std::vector<std::string> grammars{"G11"};
  std::optional<std::filesystem::path> grammar_file;
  std::vector<Objective> objectives{Objective::mad};
  std::size_t runs = 30;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir = "out";
  GaConfig ga;
  std::size_t jobs = 1;
  bool timestamps = true;
  std::ostream* log = nullptr;
};

struct CellSummary {
  std::string patient;
  std::string grammar;
  Objective objective = Objective::average_error;
  std::size_t runs = 0;
  std::size_t invalid = 0;
  double fitness_mean = 0.0;
  double fitness_std = 0.0;
  double pae_mean = 0.0;
  double pae_std = 0.0;
  double pae_best = 0.0;
};

struct TrainOutcome {
  std::vector<std::filesystem::path> reports;
  std::vector<CellSummary> summary;
  std::vector<std::string> failures;
};

/// Seed of run `run` in every cell.
constexpr std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) { return base_seed + run; }

/// Runs every dataset x grammar x objective x run cell, writes one report
/// per run plus `summary.csv` and `summary.txt` under `out_dir`.
TrainOutcome cmd_train(const TrainSpec& spec);

/// Groups reports by (patient, grammar, objective): mean and sample
/// standard deviation of best fitness and PAE.
std::vector<CellSummary> summarize(const std::vector<RunReport>& reports);
std::vector<RunReport> load_reports(const std::filesystem::path& dir);
std::string summary_csv(const std::vector<CellSummary>& cells);
/// Per-patient tables of PAE mean/std (objectives as rows, grammars as columns).
std::string summary_table(const std::vector<CellSummary>& cells);

// --- eval ------------------------------------------------------------------

struct EvalOutcome {
  Expr model;
  PatientSeries dataset;
  EstimatedSeries estimate;
  std::array<Fitness, 5> objectives;
  double pae = 0.0;
};

/// `model` is phenotype text, rendered text, or a path to a .report file.
EvalOutcome cmd_eval(const std::string& model, const std::filesystem::path& dataset);
std::string format_eval(const EvalOutcome& outcome);
/// `k,GL,GL_hat` plot data.
std::string plot_csv(const PatientSeries& actual, const EstimatedSeries& estimate);

// --- map -------------------------------------------------------------------

struct MapOutcome {
  MappingOutcome mapping;
  std::string phenotype;
  std::string rendered;
};

/// Throws std::invalid_argument on an empty codon list.
MapOutcome cmd_map(const Grammar& grammar, const std::vector<int>& codons, std::size_t max_wraps);

}  // namespace glucoge::app
