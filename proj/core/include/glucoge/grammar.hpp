#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glucoge {

enum class SymbolKind { terminal, non_terminal, variable_ref };

/// One grammar symbol as written in a production choice.
///
/// `variable_ref` covers the `#{NAME[k_<idx>]}` / `#{NAME[k_00]}` / `#{K}`
/// tokens. The lag of a variable is either a literal digit string
/// (`lag_digits`) or a non-terminal (`lag_rule`) that the mapper expands
/// like any other non-terminal. `#{K}` carries neither.
struct Symbol {
  SymbolKind kind = SymbolKind::terminal;
  std::string text;
  std::string lag_digits;
  std::string lag_rule;

  bool is_non_terminal() const { return kind == SymbolKind::non_terminal; }
  bool needs_expansion() const {
    return kind == SymbolKind::non_terminal ||
           (kind == SymbolKind::variable_ref && !lag_rule.empty());
  }

  static Symbol terminal(std::string text) { return {SymbolKind::terminal, std::move(text), {}, {}}; }
  static Symbol non_terminal(std::string name) { return {SymbolKind::non_terminal, std::move(name), {}, {}}; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

using Choice = std::vector<Symbol>;

struct Rule {
  std::string lhs;
  std::vector<Choice> choices;
  std::size_t line = 0;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.lhs == b.lhs && a.choices == b.choices;
  }
};

class GrammarError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_non_terminal, duplicate_rule };

  GrammarError(Kind kind, std::string symbol, std::size_t line, const std::string& what)
      : std::runtime_error(what), kind_(kind), symbol_(std::move(symbol)), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& symbol() const noexcept { return symbol_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::string symbol_;
  std::size_t line_;
};

/// The {N, T, P, S} tuple of a BNF specification. Rules keep source order,
/// and choices within a rule keep source order; the mapper depends on both.
class Grammar {
 public:
  const std::string& start_symbol() const noexcept { return start_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const std::set<std::string>& non_terminals() const noexcept { return non_terminals_; }
  const std::set<std::string>& terminals() const noexcept { return terminals_; }

  bool has_rule(std::string_view nt) const;
  /// Throws GrammarError(unknown_non_terminal) when `nt` has no rule.
  const Rule& rule(std::string_view nt) const;
  std::size_t rule_index(std::string_view nt) const;

  friend bool operator==(const Grammar& a, const Grammar& b) {
    return a.start_ == b.start_ && a.rules_ == b.rules_ && a.terminals_ == b.terminals_ &&
           a.non_terminals_ == b.non_terminals_;
  }

 private:
  friend Grammar parse_grammar(std::string_view source);

  std::string start_;
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::set<std::string> non_terminals_;
  std::set<std::string> terminals_;
};

/// Parses BNF text (`<lhs> ::= a | b`, continuation lines, optional roman
/// numeral labels, optional `N=`/`T=`/`S=`/`P=` header lines). The first
/// rule's left-hand side is the start symbol.
Grammar parse_grammar(std::string_view source);

std::size_t choice_count(const Grammar& grammar, std::string_view nt);

/// Canonical one-rule-per-line text. parse_grammar(to_text(g)) == g.
std::string to_text(const Grammar& grammar);

/// Text of one symbol in grammar notation (`<expr>`, `#{GL[k_<idx>]}`, `+`).
std::string symbol_text(const Symbol& symbol);

/// Bundled grammar assets: FIG1, G10, G11, G12, G13 (case-insensitive).
std::optional<std::string_view> bundled_grammar_source(std::string_view id);
std::vector<std::string> bundled_grammar_ids();

/// Parses a bundled grammar; throws std::invalid_argument for unknown ids.
Grammar bundled_grammar(std::string_view id);

}  // namespace glucoge
