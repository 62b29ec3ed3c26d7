#include "glucoge/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

namespace glucoge {

void GaConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigInvalid(what);
  };
  require(population_size >= 1, "population_size must be >= 1");
  require(generations >= 1, "generations must be >= 1");
  require(chromosome_length >= 1, "chromosome_length must be >= 1");
  require(codon_size == kCodonSize, "codon_size must be 256");
  require(tournament_size >= 1, "tournament_size must be >= 1");
  require(crossover_prob >= 0.0 && crossover_prob <= 1.0, "crossover_prob must be in [0, 1]");
  require(mutation_prob >= 0.0 && mutation_prob <= 1.0, "mutation_prob must be in [0, 1]");
  require(elitism <= population_size, "elitism cannot exceed population_size");
  require(threads >= 1, "threads must be >= 1");
}

Fitness evaluate_individual(const Grammar& grammar, const Chromosome& chrom, std::size_t max_wraps,
                            Objective objective, const PatientSeries& series) {
  auto outcome = map_genotype(grammar, chrom, max_wraps);
  if (!outcome.ok()) return Fitness::worst();
  Expr expr;
  try {
    expr = from_derivation(*outcome.tree);
  } catch (const MalformedTree&) {
    return Fitness::worst();
  }
  auto estimate = simulate(Program(expr), series);
  if (!estimate.finite) return Fitness::worst();
  return evaluate(objective, error_series(series, estimate), series);
}

std::size_t tournament_select(std::span<const Fitness> fitnesses, std::size_t size, Rng& rng) {
  const auto n = fitnesses.size();
  if (n == 0) throw std::invalid_argument("tournament over an empty population");
  size = std::min(size, n);
  if (size == n && n == 1) return 0;
  std::vector<std::size_t> drawn;
  drawn.reserve(size);
  while (drawn.size() < size) {
    auto i = rng.below(n);
    if (std::find(drawn.begin(), drawn.end(), i) == drawn.end()) drawn.push_back(i);
  }
  std::size_t best = drawn.front();
  for (std::size_t j = 1; j < drawn.size(); ++j) {
    if (fitnesses[drawn[j]] < fitnesses[best]) best = drawn[j];
  }
  return best;
}

std::pair<Chromosome, Chromosome> one_point_crossover_at(const Chromosome& a, const Chromosome& b,
                                                         std::size_t cut) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover parents differ in length");
  if (cut > a.size()) throw std::out_of_range("crossover cut beyond chromosome length");
  Chromosome c1 = a;
  Chromosome c2 = b;
  std::swap_ranges(c1.codons.begin() + static_cast<std::ptrdiff_t>(cut), c1.codons.end(),
                   c2.codons.begin() + static_cast<std::ptrdiff_t>(cut));
  return {std::move(c1), std::move(c2)};
}

std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& a, const Chromosome& b, double prob,
                                                      Rng& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover parents differ in length");
  if (!rng.chance(prob) || a.size() < 2) return {a, b};
  const auto cut = 1 + rng.below(a.size() - 1);
  return one_point_crossover_at(a, b, cut);
}

namespace {

void replace_codon(Chromosome& c, std::size_t pos, Rng& rng) {
  auto v = static_cast<std::size_t>(rng.below(kCodonSize - 1));
  if (v >= c.codons[pos]) ++v;
  c.codons[pos] = static_cast<Codon>(v);
}

}  // namespace

Chromosome point_mutate(Chromosome c, double prob, Rng& rng, MutationMode mode) {
  if (c.size() == 0) return c;
  if (mode == MutationMode::per_individual) {
    if (rng.chance(prob)) replace_codon(c, rng.below(c.size()), rng);
  } else {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (rng.chance(prob)) replace_codon(c, i, rng);
    }
  }
  return c;
}

namespace {

struct Individual {
  Chromosome chrom;
  std::optional<Fitness> fitness;  // carried over when the genotype is unchanged
};

void evaluate_population(std::vector<Individual>& pop, const GaConfig& config, const Grammar& grammar,
                         Objective objective, const PatientSeries& series) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!pop[i].fitness) todo.push_back(i);
  }
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      auto& ind = pop[todo[t]];
      ind.fitness = evaluate_individual(grammar, ind.chrom, config.max_wraps, objective, series);
    }
  };
  const auto workers = std::min(config.threads, todo.size());
  if (workers <= 1) {
    work(0, todo.size());
    return;
  }
  std::vector<std::jthread> pool;
  const auto chunk = (todo.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const auto begin = w * chunk;
    const auto end = std::min(todo.size(), begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
}

}  // namespace

RunResult run(const GaConfig& config, const Grammar& grammar, Objective objective, const PatientSeries& series,
              std::string grammar_id, const ProgressSink& progress) {
  config.validate();
  series.validate();

  Rng rng(config.seed);
  const auto pop_size = config.population_size;
  const auto length = config.chromosome_length;

  std::vector<Individual> pop(pop_size);
  for (auto& ind : pop) {
    ind.chrom.codons.resize(length);
    for (auto& codon : ind.chrom.codons) codon = static_cast<Codon>(rng.below(kCodonSize));
  }

  RunResult result;
  result.config = config;
  result.grammar_id = std::move(grammar_id);
  result.objective = objective;
  result.patient_id = series.patient_id;
  result.history.reserve(config.generations);

  std::optional<Chromosome> best_chrom;
  Fitness best_fit = Fitness::worst();
  std::vector<Fitness> fitnesses(pop_size);

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    evaluate_population(pop, config, grammar, objective, series);

    GenerationStats stats;
    stats.generation = gen;
    stats.population = pop.size();
    double sum = 0.0;
    std::size_t valid = 0;
    std::size_t gen_best = 0;
    for (std::size_t i = 0; i < pop_size; ++i) {
      fitnesses[i] = *pop[i].fitness;
      if (fitnesses[i].is_worst()) {
        ++stats.invalid;
      } else {
        sum += fitnesses[i].value();
        ++valid;
      }
      if (fitnesses[i] < fitnesses[gen_best]) gen_best = i;
    }
    stats.best = fitnesses[gen_best];
    stats.mean = valid > 0 ? sum / static_cast<double>(valid) : std::numeric_limits<double>::quiet_NaN();
    if (!best_chrom || fitnesses[gen_best] < best_fit) {
      best_fit = fitnesses[gen_best];
      best_chrom = pop[gen_best].chrom;
    }
    result.history.push_back(stats);
    if (progress) progress(stats);

    if (gen + 1 == config.generations) break;

    std::vector<std::size_t> order(pop_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitnesses[a] < fitnesses[b]; });

    std::vector<Individual> next;
    next.reserve(pop_size);
    for (std::size_t e = 0; e < config.elitism; ++e) next.push_back(pop[order[e]]);

    while (next.size() < pop_size) {
      const auto i = tournament_select(fitnesses, config.tournament_size, rng);
      const auto j = tournament_select(fitnesses, config.tournament_size, rng);
      auto [c1, c2] = one_point_crossover(pop[i].chrom, pop[j].chrom, config.crossover_prob, rng);
      c1 = point_mutate(std::move(c1), config.mutation_prob, rng, config.mutation_mode);
      c2 = point_mutate(std::move(c2), config.mutation_prob, rng, config.mutation_mode);

      auto carry = [&](Chromosome&& child, std::size_t parent) {
        Individual ind{std::move(child), std::nullopt};
        if (ind.chrom == pop[parent].chrom) ind.fitness = pop[parent].fitness;
        next.push_back(std::move(ind));
      };
      carry(std::move(c1), i);
      if (next.size() < pop_size) carry(std::move(c2), j);
    }
    pop = std::move(next);
  }

  result.best_chromosome = *best_chrom;
  result.best_fitness = best_fit;
  auto outcome = map_genotype(grammar, result.best_chromosome, config.max_wraps);
  if (outcome.ok()) {
    result.best_phenotype = phenotype_text(outcome);
    auto expr = from_derivation(*outcome.tree);
    result.best_expression = render(expr);
    result.best_estimate = simulate(expr, series);
    result.best_pae = percentage_average_error(series, result.best_estimate);
  } else {
    result.best_pae = std::numeric_limits<double>::infinity();
  }
  return result;
}

}  // namespace glucoge
