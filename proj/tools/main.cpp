#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "app.hpp"
#include "glucoge/dataset.hpp"

namespace fs = std::filesystem;
using namespace glucoge;

namespace {

std::vector<int> split_codons(const std::vector<std::string>& args) {
  std::vector<int> codons;
  for (auto arg : args) {
    for (auto& c : arg) {
      if (c == ',' || c == '-') c = ' ';
    }
    std::istringstream in(arg);
    std::string word;
    while (in >> word) {
      std::size_t used = 0;
      int v = std::stoi(word, &used);
      if (used != word.size()) throw std::invalid_argument("bad codon '" + word + "'");
      codons.push_back(v);
    }
  }
  return codons;
}

std::vector<Objective> parse_objectives(const std::vector<std::string>& names) {
  std::vector<Objective> out;
  for (const auto& n : names) {
    if (n == "all") return {std::begin(kAllObjectives), std::end(kAllObjectives)};
    auto o = parse_objective(n);
    if (!o) throw CLI::ValidationError("--objective", "unknown objective '" + n + "' (use f1..f5 or all)");
    out.push_back(*o);
  }
  return out;
}

std::vector<std::string> expand_grammars(const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) {
    if (id == "all" || id == "ALL") return {"G10", "G11", "G12", "G13"};
    out.push_back(id);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Grammatical evolution of personalised glucose models"};
  cli.require_subcommand(1);

  // train
  app::TrainSpec train;
  std::vector<std::string> train_grammars{"G11"};
  std::vector<std::string> train_objectives{"f5"};
  std::string train_grammar_file;
  std::string mutation_mode = "per-individual";
  bool no_timestamp = false;
  bool quiet = false;
  auto* train_cmd = cli.add_subcommand("train", "Evolve models for each dataset x grammar x objective cell");
  train_cmd->add_option("--dataset", train.datasets, "Patient dataset CSV (k,GL,CH,IS,IL)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--grammar", train_grammars, "G10 | G11 | G12 | G13 | all")->capture_default_str();
  train_cmd->add_option("--grammar-file", train_grammar_file, "Custom BNF grammar (overrides --grammar)")->check(CLI::ExistingFile);
  train_cmd->add_option("--objective", train_objectives, "f1 | f2 | f3 | f4 | f5 | all")->capture_default_str();
  train_cmd->add_option("--runs", train.runs, "Independent runs per cell")->capture_default_str();
  train_cmd->add_option("--seed", train.base_seed, "Base seed; run i uses seed + i")->capture_default_str();
  train_cmd->add_option("--generations", train.ga.generations)->capture_default_str();
  train_cmd->add_option("--population", train.ga.population_size)->capture_default_str();
  train_cmd->add_option("--chromosome-length", train.ga.chromosome_length)->capture_default_str();
  train_cmd->add_option("--max-wraps", train.ga.max_wraps)->capture_default_str();
  train_cmd->add_option("--crossover", train.ga.crossover_prob, "Crossover probability")->capture_default_str();
  train_cmd->add_option("--mutation", train.ga.mutation_prob, "Mutation probability")->capture_default_str();
  train_cmd->add_option("--mutation-mode", mutation_mode, "per-individual | per-codon")
      ->check(CLI::IsMember({"per-individual", "per-codon"}))
      ->capture_default_str();
  train_cmd->add_option("--tournament", train.ga.tournament_size)->capture_default_str();
  train_cmd->add_option("--elitism", train.ga.elitism)->capture_default_str();
  train_cmd->add_option("--threads", train.ga.threads, "Fitness evaluation threads per run")->capture_default_str();
  train_cmd->add_option("--jobs", train.jobs, "Runs executed concurrently")->capture_default_str();
  train_cmd->add_option("--out", train.out_dir, "Output directory")->capture_default_str();
  train_cmd->add_flag("--no-timestamp", no_timestamp, "Omit metadata.created_utc from reports");
  train_cmd->add_flag("--quiet", quiet, "Do not print per-run lines");

  // eval
  std::string eval_model;
  std::string eval_dataset;
  std::string eval_out;
  auto* eval_cmd = cli.add_subcommand("eval", "Simulate a fixed model on a dataset");
  eval_cmd->add_option("--model", eval_model, "Phenotype text or a .report file")->required();
  eval_cmd->add_option("--dataset", eval_dataset)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "Write k,GL,GL_hat plot data to this file");

  // map
  std::string map_grammar = "G11";
  std::string map_grammar_file;
  std::vector<std::string> map_codons;
  std::size_t map_wraps = 3;
  bool map_trace = false;
  auto* map_cmd = cli.add_subcommand("map", "Map a codon list to its phenotype");
  map_cmd->add_option("--grammar", map_grammar, "FIG1 | G10 | G11 | G12 | G13")->capture_default_str();
  map_cmd->add_option("--grammar-file", map_grammar_file)->check(CLI::ExistingFile);
  map_cmd->add_option("--max-wraps", map_wraps)->capture_default_str();
  map_cmd->add_flag("--trace", map_trace, "Print the per-expansion trace");
  map_cmd->add_option("codons", map_codons, "Codons, space or comma separated");

  // summarize
  std::string summary_dir;
  auto* summarize_cmd = cli.add_subcommand("summarize", "Aggregate .report files into summary tables");
  summarize_cmd->add_option("--out,dir", summary_dir, "Directory holding .report files")->required()->check(CLI::ExistingDirectory);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return app::kUsage;
  }

  try {
    if (*train_cmd) {
      train.grammars = expand_grammars(train_grammars);
      train.objectives = parse_objectives(train_objectives);
      if (!train_grammar_file.empty()) train.grammar_file = fs::path(train_grammar_file);
      train.ga.mutation_mode = mutation_mode == "per-codon" ? MutationMode::per_codon : MutationMode::per_individual;
      train.timestamps = !no_timestamp;
      if (!quiet) train.log = &std::cout;
      auto outcome = app::cmd_train(train);
      std::cout << "\n" << app::summary_table(outcome.summary);
      std::cout << outcome.reports.size() << " report(s) written to " << train.out_dir.string() << "\n";
      if (!outcome.failures.empty()) {
        std::cerr << outcome.failures.size() << " run(s) failed:\n";
        for (const auto& f : outcome.failures) std::cerr << "  " << f << "\n";
        return app::kPartialFailure;
      }
      return app::kSuccess;
    }

    if (*eval_cmd) {
      auto outcome = app::cmd_eval(eval_model, eval_dataset);
      std::cout << app::format_eval(outcome);
      if (!eval_out.empty()) {
        write_text_file(eval_out, app::plot_csv(outcome.dataset, outcome.estimate));
        std::cout << "plot data: " << eval_out << "\n";
      }
      return app::kSuccess;
    }

    if (*map_cmd) {
      auto codons = split_codons(map_codons);
      if (codons.empty()) {
        std::cerr << "map: at least one codon is required\n" << map_cmd->help();
        return app::kUsage;
      }
      std::optional<fs::path> file;
      if (!map_grammar_file.empty()) file = fs::path(map_grammar_file);
      auto grammar = app::resolve_grammar(map_grammar, file);
      auto outcome = app::cmd_map(grammar.grammar, codons, map_wraps);
      if (map_trace) std::cout << format_trace(outcome.mapping.trace);
      if (!outcome.mapping.ok()) {
        std::cerr << "WrappedOut: non-terminals remain after " << outcome.mapping.codons_consumed
                  << " codons (" << map_wraps << " wraps)\n";
        return app::kWrappedOut;
      }
      std::cout << outcome.phenotype << "\n";
      std::cout << "codons_consumed=" << outcome.mapping.codons_consumed
                << " wraps_used=" << outcome.mapping.wraps_used << "\n";
      if (!outcome.rendered.empty()) std::cout << "expression=" << outcome.rendered << "\n";
      return app::kSuccess;
    }

    if (*summarize_cmd) {
      auto cells = app::summarize(app::load_reports(summary_dir));
      write_text_file(fs::path(summary_dir) / "summary.csv", app::summary_csv(cells));
      std::cout << app::summary_table(cells);
      return app::kSuccess;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return app::kFailure;
  }
  return app::kUsage;
}
