#include "glucoge/mapper.hpp"

#include <sstream>

namespace glucoge {

namespace {

bool is_binary_operator(const std::string& token) {
  return token == "+" || token == "-" || token == "*" || token == "/";
}

}  // namespace

Chromosome Chromosome::from_values(std::span<const int> values) {
  std::vector<Codon> codons;
  codons.reserve(values.size());
  for (int v : values) {
    if (v < 0 || v >= static_cast<int>(kCodonSize)) {
      throw std::out_of_range("codon value " + std::to_string(v) + " outside [0, 255]");
    }
    codons.push_back(static_cast<Codon>(v));
  }
  return Chromosome(std::move(codons));
}

std::string DerivationTree::variable_token(std::size_t i) const {
  const auto& n = nodes_[i];
  const auto& sym = n.symbol;
  if (sym.lag_rule.empty() && sym.lag_digits.empty()) return sym.text;
  std::string token = sym.text + "[k_";
  if (!sym.lag_rule.empty()) {
    // The embedded index subtree's leaves are the lag digits.
    std::vector<std::size_t> stack(n.children.rbegin(), n.children.rend());
    while (!stack.empty()) {
      auto j = stack.back();
      stack.pop_back();
      const auto& c = nodes_[j];
      if (c.symbol.kind == SymbolKind::terminal) token += c.symbol.text;
      stack.insert(stack.end(), c.children.rbegin(), c.children.rend());
    }
  } else {
    token += sym.lag_digits;
  }
  token += ']';
  return token;
}

std::vector<std::string> DerivationTree::leaves() const {
  std::vector<std::string> out;
  if (nodes_.empty()) return out;
  std::vector<std::size_t> stack{root_index};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    const auto& n = nodes_[i];
    switch (n.symbol.kind) {
      case SymbolKind::terminal:
        out.push_back(n.symbol.text);
        break;
      case SymbolKind::variable_ref:
        out.push_back(variable_token(i));
        break;
      case SymbolKind::non_terminal:
        stack.insert(stack.end(), n.children.rbegin(), n.children.rend());
        break;
    }
  }
  return out;
}

MappingOutcome map_genotype(const Grammar& grammar, const Chromosome& chrom, std::size_t max_wraps,
                            bool record_trace) {
  if (chrom.size() == 0) throw std::invalid_argument("chromosome must have at least one codon");
  MappingOutcome outcome;
  const std::size_t length = chrom.size();
  const std::size_t budget = length * (max_wraps + 1);

  DerivationTree tree;
  auto& nodes = tree.nodes_;
  nodes.push_back({Symbol::non_terminal(grammar.start_symbol()), -1, {}});

  // Indices of nodes awaiting expansion; the back is the leftmost.
  std::vector<std::size_t> pending{DerivationTree::root_index};
  std::size_t consumed = 0;

  while (!pending.empty()) {
    const auto current = pending.back();
    pending.pop_back();

    if (consumed >= budget) {
      outcome.failure = MappingFailure::wrapped_out;
      outcome.codons_consumed = consumed;
      outcome.wraps_used = max_wraps;
      return outcome;
    }

    const std::string nt = nodes[current].symbol.text;
    const Rule& rule = grammar.rule(nt);
    const std::size_t n_choices = rule.choices.size();
    const std::size_t codon_index = consumed % length;
    const Codon codon = chrom[codon_index];
    const std::size_t chosen = codon % n_choices;
    if (record_trace) {
      outcome.trace.push_back({consumed + 1, codon_index, codon, nt, n_choices, chosen});
    }
    ++consumed;
    nodes[current].choice = static_cast<int>(chosen);

    const Choice& choice = rule.choices[chosen];
    std::vector<std::size_t> expandable;
    for (const auto& sym : choice) {
      const auto child = nodes.size();
      nodes.push_back({sym, -1, {}});
      nodes[current].children.push_back(child);
      if (sym.kind == SymbolKind::non_terminal) {
        expandable.push_back(child);
      } else if (sym.kind == SymbolKind::variable_ref && !sym.lag_rule.empty()) {
        const auto idx = nodes.size();
        nodes.push_back({Symbol::non_terminal(sym.lag_rule), -1, {}});
        nodes[child].children.push_back(idx);
        expandable.push_back(idx);
      }
    }
    pending.insert(pending.end(), expandable.rbegin(), expandable.rend());
  }

  outcome.codons_consumed = consumed;
  outcome.wraps_used = (consumed == 0 || length == 0) ? 0 : (consumed - 1) / length;
  outcome.tree = std::move(tree);
  return outcome;
}

std::string phenotype_text(const DerivationTree& tree) {
  std::string text;
  for (const auto& leaf : tree.leaves()) {
    if (is_binary_operator(leaf)) {
      text += ' ';
      text += leaf;
      text += ' ';
    } else {
      text += leaf;
    }
  }
  return text;
}

std::string phenotype_text(const MappingOutcome& outcome) {
  if (!outcome.ok()) throw NotMapped("mapping failed: codons wrapped out");
  return phenotype_text(*outcome.tree);
}

std::string format_trace(std::span<const MappingStep> trace) {
  std::ostringstream out;
  out << "step,codon_index,codon_value,non_terminal,n_choices,chosen\n";
  for (const auto& s : trace) {
    out << s.step << ',' << s.codon_index << ',' << static_cast<int>(s.codon_value) << ','
        << s.non_terminal << ',' << s.n_choices << ',' << s.chosen << '\n';
  }
  return out.str();
}

}  // namespace glucoge
