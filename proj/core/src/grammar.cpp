#include "glucoge/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace glucoge {

namespace {

constexpr std::string_view kVariableNames[] = {"GL", "CH", "IS", "IL", "K"};

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

[[noreturn]] void syntax_error(std::size_t line, std::string_view symbol, const std::string& msg) {
  throw GrammarError(GrammarError::Kind::syntax, std::string(symbol), line,
                     "line " + std::to_string(line) + ": " + msg);
}

// `N = {...}` style header lines from the published listings.
bool is_header_line(std::string_view line) {
  line = trim(line);
  if (line.size() < 2 || std::string_view("NTSP").find(line[0]) == std::string_view::npos) return false;
  return trim(line.substr(1)).starts_with('=');
}

bool is_roman_label(std::string_view word) {
  return !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
    return std::string_view("IVXLCDM").find(c) != std::string_view::npos;
  });
}

struct RuleStart {
  std::string lhs;
  std::string body;
};

// Matches `[label] <lhs> ::= body`.
std::optional<RuleStart> match_rule_start(std::string_view line, std::size_t line_no) {
  auto rest = trim(line);
  auto first_space = rest.find_first_of(" \t");
  if (!rest.starts_with('<') && first_space != std::string_view::npos &&
      is_roman_label(rest.substr(0, first_space))) {
    rest = trim(rest.substr(first_space));
  }
  if (!rest.starts_with('<')) return std::nullopt;
  auto close = rest.find('>');
  if (close == std::string_view::npos) return std::nullopt;
  auto after = trim(rest.substr(close + 1));
  if (!after.starts_with("::=")) return std::nullopt;
  auto name = trim(rest.substr(1, close - 1));
  if (name.empty()) syntax_error(line_no, "<>", "empty non-terminal name");
  return RuleStart{std::string(name), std::string(after.substr(3))};
}

std::vector<std::string_view> split_alternatives(std::string_view body, std::size_t line_no,
                                                 std::string_view lhs) {
  std::vector<std::string_view> out;
  int angle = 0;
  int brace = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '<') ++angle;
    else if (c == '>' && angle > 0) --angle;
    else if (c == '{') ++brace;
    else if (c == '}' && brace > 0) --brace;
    else if (c == '|' && angle == 0 && brace == 0) {
      out.push_back(body.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  out.push_back(body.substr(begin));
  for (auto alt : out) {
    if (is_blank(alt)) syntax_error(line_no, lhs, "empty choice in rule <" + std::string(lhs) + ">");
  }
  return out;
}

// `#{NAME}` or `#{NAME[k_00]}` or `#{NAME[k_<idx>]}`; `inner` excludes the braces.
Symbol parse_variable(std::string_view inner, std::size_t line_no) {
  inner = trim(inner);
  auto bracket = inner.find('[');
  std::string name(trim(inner.substr(0, bracket)));
  if (std::find(std::begin(kVariableNames), std::end(kVariableNames), name) == std::end(kVariableNames)) {
    syntax_error(line_no, name, "unknown variable '" + name + "' (expected GL, CH, IS, IL or K)");
  }
  Symbol sym{SymbolKind::variable_ref, name, {}, {}};
  if (bracket == std::string_view::npos) {
    if (name != "K") syntax_error(line_no, name, "variable '" + name + "' needs an index [k_..]");
    return sym;
  }
  if (name == "K") syntax_error(line_no, name, "K takes no index");
  if (!inner.ends_with(']')) syntax_error(line_no, name, "unterminated index in #{" + std::string(inner) + "}");
  auto index = trim(inner.substr(bracket + 1, inner.size() - bracket - 2));
  if (!index.starts_with("k_")) syntax_error(line_no, name, "index must start with k_");
  index.remove_prefix(2);
  if (index.starts_with('<') && index.ends_with('>') && index.size() > 2) {
    sym.lag_rule = std::string(index.substr(1, index.size() - 2));
  } else if (!index.empty() &&
             std::all_of(index.begin(), index.end(), [](unsigned char c) { return std::isdigit(c); })) {
    sym.lag_digits = std::string(index);
  } else {
    syntax_error(line_no, name, "bad index '" + std::string(index) + "'");
  }
  return sym;
}

Choice tokenize_choice(std::string_view text, std::size_t line_no) {
  Choice choice;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '<') {
      auto close = text.find('>', i);
      if (close == std::string_view::npos) syntax_error(line_no, text.substr(i), "unterminated '<'");
      auto name = trim(text.substr(i + 1, close - i - 1));
      if (name.empty()) syntax_error(line_no, "<>", "empty non-terminal name");
      choice.push_back(Symbol::non_terminal(std::string(name)));
      i = close + 1;
    } else if (c == '#' && i + 1 < text.size() && text[i + 1] == '{') {
      auto close = text.find('}', i);
      if (close == std::string_view::npos) syntax_error(line_no, text.substr(i), "unterminated '#{'");
      choice.push_back(parse_variable(text.substr(i + 2, close - i - 2), line_no));
      i = close + 1;
    } else if (is_word_char(c)) {
      auto j = i;
      while (j < text.size() && is_word_char(text[j])) ++j;
      choice.push_back(Symbol::terminal(std::string(text.substr(i, j - i))));
      i = j;
    } else {
      choice.push_back(Symbol::terminal(std::string(1, c)));
      ++i;
    }
  }
  if (choice.empty()) syntax_error(line_no, "", "empty choice");
  return choice;
}

}  // namespace

bool Grammar::has_rule(std::string_view nt) const { return index_.find(nt) != index_.end(); }

std::size_t Grammar::rule_index(std::string_view nt) const {
  auto it = index_.find(nt);
  if (it == index_.end()) {
    throw GrammarError(GrammarError::Kind::unknown_non_terminal, std::string(nt), 0,
                       "no rule for non-terminal <" + std::string(nt) + ">");
  }
  return it->second;
}

const Rule& Grammar::rule(std::string_view nt) const { return rules_[rule_index(nt)]; }

Grammar parse_grammar(std::string_view source) {
  if (is_blank(source)) syntax_error(0, "", "empty grammar source");

  struct Pending {
    std::string lhs;
    std::string body;
    std::size_t line;
  };
  std::vector<Pending> pending;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto eol = source.find('\n', pos);
    if (eol == std::string_view::npos) eol = source.size();
    auto line = source.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (is_blank(line) || is_header_line(line)) continue;
    if (auto start = match_rule_start(line, line_no)) {
      pending.push_back({std::move(start->lhs), std::move(start->body), line_no});
    } else if (!pending.empty()) {
      pending.back().body += ' ';
      pending.back().body += line;
    } else {
      syntax_error(line_no, trim(line), "expected '<name> ::= ...'");
    }
  }
  if (pending.empty()) syntax_error(line_no, "", "no rules found");

  Grammar g;
  for (auto& p : pending) {
    if (g.index_.contains(p.lhs)) {
      throw GrammarError(GrammarError::Kind::duplicate_rule, p.lhs, p.line,
                         "line " + std::to_string(p.line) + ": rule <" + p.lhs + "> defined twice");
    }
    Rule rule{p.lhs, {}, p.line};
    for (auto alt : split_alternatives(p.body, p.line, p.lhs)) {
      rule.choices.push_back(tokenize_choice(alt, p.line));
    }
    g.index_.emplace(rule.lhs, g.rules_.size());
    g.non_terminals_.insert(rule.lhs);
    g.rules_.push_back(std::move(rule));
  }
  g.start_ = g.rules_.front().lhs;

  for (const auto& rule : g.rules_) {
    for (const auto& choice : rule.choices) {
      for (const auto& sym : choice) {
        std::string_view referenced;
        if (sym.kind == SymbolKind::non_terminal) referenced = sym.text;
        else if (sym.kind == SymbolKind::variable_ref) {
          g.terminals_.insert(sym.text);
          referenced = sym.lag_rule;
        } else {
          g.terminals_.insert(sym.text);
        }
        if (!referenced.empty() && !g.index_.contains(referenced)) {
          throw GrammarError(GrammarError::Kind::unknown_non_terminal, std::string(referenced), rule.line,
                             "line " + std::to_string(rule.line) + ": <" + std::string(referenced) +
                                 "> is used in <" + rule.lhs + "> but has no rule");
        }
      }
    }
  }
  return g;
}

std::size_t choice_count(const Grammar& grammar, std::string_view nt) {
  return grammar.rule(nt).choices.size();
}

std::string symbol_text(const Symbol& symbol) {
  switch (symbol.kind) {
    case SymbolKind::non_terminal:
      return "<" + symbol.text + ">";
    case SymbolKind::variable_ref:
      if (!symbol.lag_rule.empty()) return "#{" + symbol.text + "[k_<" + symbol.lag_rule + ">]}";
      if (!symbol.lag_digits.empty()) return "#{" + symbol.text + "[k_" + symbol.lag_digits + "]}";
      return "#{" + symbol.text + "}";
    case SymbolKind::terminal:
      break;
  }
  return symbol.text;
}

std::string to_text(const Grammar& grammar) {
  std::ostringstream out;
  for (const auto& rule : grammar.rules()) {
    out << '<' << rule.lhs << "> ::=";
    for (std::size_t c = 0; c < rule.choices.size(); ++c) {
      if (c > 0) out << " |";
      for (const auto& sym : rule.choices[c]) out << ' ' << symbol_text(sym);
    }
    out << '\n';
  }
  return out.str();
}

Grammar bundled_grammar(std::string_view id) {
  auto source = bundled_grammar_source(id);
  if (!source) throw std::invalid_argument("unknown grammar id '" + std::string(id) + "'");
  return parse_grammar(*source);
}

}  // namespace glucoge
