#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glucoge/grammar.hpp"

namespace glucoge {

using Codon = std::uint8_t;
inline constexpr std::size_t kCodonSize = 256;

/// Fixed-length integer genotype. The codon type bounds values to [0, 255].
struct Chromosome {
  std::vector<Codon> codons;

  Chromosome() = default;
  explicit Chromosome(std::vector<Codon> c) : codons(std::move(c)) {}
  /// Throws std::out_of_range if any value is outside [0, 255].
  static Chromosome from_values(std::span<const int> values);

  std::size_t size() const noexcept { return codons.size(); }
  Codon operator[](std::size_t i) const { return codons[i]; }

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

/// Node of a derivation tree. Non-terminal nodes store the chosen choice
/// index; variable nodes with an embedded `<idx>` own one child for it.
struct DerivationNode {
  Symbol symbol;
  int choice = -1;
  std::vector<std::size_t> children;
};

struct MappingOutcome;
class DerivationTree;

class DerivationTree {
 public:
  static constexpr std::size_t root_index = 0;

  const DerivationNode& node(std::size_t i) const { return nodes_[i]; }
  const DerivationNode& root() const { return nodes_[root_index]; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<DerivationNode>& nodes() const noexcept { return nodes_; }

  /// Terminal leaves read left to right. Variable nodes contribute a single
  /// composite token such as `GL[k_05]` or `K`.
  std::vector<std::string> leaves() const;
  /// Composite token text for node `i` if it is a variable node.
  std::string variable_token(std::size_t i) const;

 private:
  friend MappingOutcome map_genotype(const Grammar&, const Chromosome&, std::size_t, bool);
  std::vector<DerivationNode> nodes_;
};

/// One expansion step for the trace dump.
struct MappingStep {
  std::size_t step = 0;
  std::size_t codon_index = 0;
  Codon codon_value = 0;
  std::string non_terminal;
  std::size_t n_choices = 0;
  std::size_t chosen = 0;
};

enum class MappingFailure { none, wrapped_out };

struct MappingOutcome {
  std::optional<DerivationTree> tree;
  MappingFailure failure = MappingFailure::none;
  std::size_t codons_consumed = 0;
  std::size_t wraps_used = 0;
  std::vector<MappingStep> trace;

  bool ok() const noexcept { return tree.has_value(); }
};

class NotMapped : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Leftmost-first genotype to phenotype mapping. Every expansion consumes
/// one codon (single-choice rules included); choice = codon mod n_choices.
/// When codons run out the read restarts at codon 0; after `max_wraps`
/// restarts the mapping fails with `wrapped_out`.
MappingOutcome map_genotype(const Grammar& grammar, const Chromosome& chrom, std::size_t max_wraps,
                            bool record_trace = false);

/// Leaves joined with canonical spacing: binary operators `+ - * /` are
/// surrounded by single spaces, everything else is concatenated.
/// Throws NotMapped on a failed outcome.
std::string phenotype_text(const MappingOutcome& outcome);
std::string phenotype_text(const DerivationTree& tree);

/// `step,codon_index,codon_value,non_terminal,n_choices,chosen` lines.
std::string format_trace(std::span<const MappingStep> trace);

}  // namespace glucoge
