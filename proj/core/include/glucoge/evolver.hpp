#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glucoge/expression.hpp"
#include "glucoge/fitness.hpp"
#include "glucoge/grammar.hpp"
#include "glucoge/mapper.hpp"
#include "glucoge/rng.hpp"
#include "glucoge/simulate.hpp"

namespace glucoge {

enum class MutationMode {
  per_individual,  // with probability p, replace one random codon
  per_codon,       // every codon independently with probability p
};

struct GaConfig {
  std::size_t population_size = 100;
  std::size_t generations = 2500;
  std::size_t chromosome_length = 100;
  std::size_t codon_size = kCodonSize;
  std::size_t max_wraps = 3;
  double crossover_prob = 0.6;
  double mutation_prob = 0.2;
  std::size_t tournament_size = 2;
  std::uint64_t seed = 0;
  std::size_t elitism = 1;
  MutationMode mutation_mode = MutationMode::per_individual;
  /// Worker threads for fitness evaluation. Results do not depend on it.
  std::size_t threads = 1;

  /// Throws ConfigInvalid.
  void validate() const;

  friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

class ConfigInvalid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GenerationStats {
  std::size_t generation = 0;
  Fitness best;
  /// Mean over individuals that did not get the worst sentinel; NaN if none.
  double mean = 0.0;
  std::size_t invalid = 0;
  std::size_t population = 0;
};

struct RunResult {
  Chromosome best_chromosome;
  std::string best_phenotype;   // mapper output, e.g. `GL[k_00] + CH[k_01] - ...`
  std::string best_expression;  // render() of the lowered model
  Fitness best_fitness;
  double best_pae = 0.0;
  EstimatedSeries best_estimate;
  std::vector<GenerationStats> history;
  GaConfig config;
  std::string grammar_id;
  Objective objective = Objective::average_error;
  std::string patient_id;
};

using ProgressSink = std::function<void(const GenerationStats&)>;

/// map -> lower -> simulate -> objective for one genotype. Mapping failure
/// or a non-finite estimate yields Fitness::worst().
Fitness evaluate_individual(const Grammar& grammar, const Chromosome& chrom, std::size_t max_wraps,
                            Objective objective, const PatientSeries& series);

/// Generational GA with elitism, tournament selection, one-point crossover
/// and point mutation. All randomness comes from one generator seeded with
/// config.seed, consumed in a fixed order: initial codons (individual by
/// individual), then per offspring pair: tournament draws for both parents,
/// crossover draws, mutation draws for each child.
RunResult run(const GaConfig& config, const Grammar& grammar, Objective objective, const PatientSeries& series,
              std::string grammar_id = {}, const ProgressSink& progress = {});

/// Draws `size` distinct indices (capped at the population) and returns the
/// one with strictly best fitness; ties keep the earlier draw.
std::size_t tournament_select(std::span<const Fitness> fitnesses, std::size_t size, Rng& rng);

/// With probability `prob` cuts both parents at one point in [1, L-1] and
/// swaps tails; otherwise returns copies. Throws std::invalid_argument on
/// length mismatch.
std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& a, const Chromosome& b, double prob,
                                                      Rng& rng);
/// Same, with the cut point fixed by the caller.
std::pair<Chromosome, Chromosome> one_point_crossover_at(const Chromosome& a, const Chromosome& b,
                                                         std::size_t cut);

/// Replacement codons are uniform over the 255 values different from the
/// old one.
Chromosome point_mutate(Chromosome c, double prob, Rng& rng,
                        MutationMode mode = MutationMode::per_individual);

}  // namespace glucoge
