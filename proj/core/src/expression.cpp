#include "glucoge/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace glucoge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<UnaryFn> function_named(std::string_view name) {
  auto n = lower(name);
  if (n == "sin") return UnaryFn::sin;
  if (n == "cos") return UnaryFn::cos;
  if (n == "tan") return UnaryFn::tan;
  if (n == "exp") return UnaryFn::exp;
  if (n == "abs") return UnaryFn::abs;
  return std::nullopt;
}

std::optional<Series> series_named(std::string_view name) {
  if (name == "GL") return Series::GL;
  if (name == "CH") return Series::CH;
  if (name == "IS") return Series::IS;
  if (name == "IL") return Series::IL;
  return std::nullopt;
}

std::optional<BinaryOp> operator_named(std::string_view s) {
  if (s == "+") return BinaryOp::add;
  if (s == "-") return BinaryOp::sub;
  if (s == "*") return BinaryOp::mul;
  if (s == "/") return BinaryOp::div;
  return std::nullopt;
}

bool is_decimal_literal(std::string_view s) {
  if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  bool dot = false;
  for (char c : s) {
    if (c == '.') {
      if (dot) return false;
      dot = true;
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return std::isdigit(static_cast<unsigned char>(s.back()));
}

double apply(UnaryFn fn, double x) {
  switch (fn) {
    case UnaryFn::sin: return std::sin(x);
    case UnaryFn::cos: return std::cos(x);
    case UnaryFn::tan: return std::tan(x);
    case UnaryFn::exp: return std::exp(x);
    case UnaryFn::abs: return std::fabs(x);
  }
  return kNaN;
}

double apply(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::add: return a + b;
    case BinaryOp::sub: return a - b;
    case BinaryOp::mul: return a * b;
    case BinaryOp::div: return a / b;
  }
  return kNaN;
}

double read_series(Series s, unsigned lag, const EvalContext& ctx) {
  const std::size_t step = ctx.k > lag ? ctx.k - lag : 1;
  const std::size_t i = step - 1;
  if (s == Series::GL) return i < ctx.gl_hat.size() ? ctx.gl_hat[i] : kNaN;
  if (ctx.series == nullptr) return kNaN;
  const std::vector<double>* column = nullptr;
  switch (s) {
    case Series::CH: column = &ctx.series->ch; break;
    case Series::IS: column = &ctx.series->is; break;
    case Series::IL: column = &ctx.series->il; break;
    case Series::GL: break;
  }
  return (column != nullptr && i < column->size()) ? (*column)[i] : kNaN;
}

// ---------------------------------------------------------------------------
// Token stream shared by the text reader and the derivation lowering.

struct Token {
  enum class Kind { number, variable, time_k, symbol, function, op, lparen, rparen, end };
  Kind kind = Kind::end;
  std::string text;
  Series series = Series::GL;
  unsigned lag = 0;
  BinaryOp op = BinaryOp::add;
  UnaryFn fn = UnaryFn::sin;
  std::size_t position = 0;
};

template <class Error>
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    Token end;
    end.position = tokens_.empty() ? 0 : tokens_.back().position + 1;
    tokens_.push_back(end);
  }

  Expr parse() {
    auto e = sum();
    if (peek().kind != Token::Kind::end) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    if constexpr (std::is_same_v<Error, PhenotypeParseError>) {
      throw PhenotypeParseError("at " + std::to_string(peek().position) + ": " + msg, peek().position);
    } else {
      throw Error(msg);
    }
  }

  bool at_op(BinaryOp a, BinaryOp b) const {
    return peek().kind == Token::Kind::op && (peek().op == a || peek().op == b);
  }

  Expr sum() {
    auto lhs = product();
    while (at_op(BinaryOp::add, BinaryOp::sub)) {
      auto op = next().op;
      lhs = Expr::binary(op, std::move(lhs), product());
    }
    return lhs;
  }

  Expr product() {
    auto lhs = factor();
    while (at_op(BinaryOp::mul, BinaryOp::div)) {
      auto op = next().op;
      lhs = Expr::binary(op, std::move(lhs), factor());
    }
    return lhs;
  }

  Expr parenthesised() {
    if (peek().kind != Token::Kind::lparen) fail("expected '('");
    next();
    auto e = sum();
    if (peek().kind != Token::Kind::rparen) fail("expected ')'");
    next();
    return e;
  }

  Expr factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::number: {
        auto text = next().text;
        return Expr::constant(std::move(text));
      }
      case Token::Kind::variable: {
        const auto& v = next();
        return Expr::variable(v.series, v.lag);
      }
      case Token::Kind::time_k:
        next();
        return Expr::time_k();
      case Token::Kind::symbol: {
        auto text = next().text;
        return Expr::symbol(std::move(text));
      }
      case Token::Kind::function: {
        const auto& f = next();
        auto fn = f.fn;
        auto spelling = f.text;
        return Expr::unary(fn, std::move(spelling), parenthesised());
      }
      case Token::Kind::lparen:
        return parenthesised();
      case Token::Kind::end:
        fail("unexpected end of expression");
      default:
        fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

Token word_token(std::string_view word, std::size_t position) {
  Token t;
  t.text = std::string(word);
  t.position = position;
  if (auto fn = function_named(word)) {
    t.kind = Token::Kind::function;
    t.fn = *fn;
  } else if (word == "k" || word == "K") {
    t.kind = Token::Kind::time_k;
  } else {
    t.kind = Token::Kind::symbol;
  }
  return t;
}

// Lexes a variable index following `GL`: `[k_05]`, `[k-5]`, `[k]`, `(k-1)`.
std::optional<unsigned> lex_lag(std::string_view text, std::size_t& i) {
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto save = i;
  skip_ws();
  if (i >= text.size() || (text[i] != '[' && text[i] != '(')) {
    i = save;
    return std::nullopt;
  }
  const char close = text[i] == '[' ? ']' : ')';
  ++i;
  skip_ws();
  if (i >= text.size() || (text[i] != 'k' && text[i] != 'K')) {
    i = save;
    return std::nullopt;
  }
  ++i;
  skip_ws();
  unsigned lag = 0;
  if (i < text.size() && (text[i] == '_' || text[i] == '-')) {
    ++i;
    skip_ws();
    auto begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (begin == i) throw PhenotypeParseError("missing lag digits", begin);
    std::from_chars(text.data() + begin, text.data() + i, lag);
    skip_ws();
  }
  if (i >= text.size() || text[i] != close) {
    throw PhenotypeParseError(std::string("expected '") + close + "' after variable index", i);
  }
  ++i;
  return lag;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const std::size_t start = i;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
      auto literal = text.substr(start, i - start);
      if (!is_decimal_literal(literal)) {
        throw PhenotypeParseError("bad number '" + std::string(literal) + "'", start);
      }
      Token t;
      t.kind = Token::Kind::number;
      t.text = std::string(literal);
      t.position = start;
      tokens.push_back(std::move(t));
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      auto word = text.substr(start, i - start);
      if (auto s = series_named(word)) {
        auto lag = lex_lag(text, i);
        if (!lag) throw PhenotypeParseError("variable " + std::string(word) + " needs an index", i);
        Token t;
        t.kind = Token::Kind::variable;
        t.text = std::string(text.substr(start, i - start));
        t.series = *s;
        t.lag = *lag;
        t.position = start;
        tokens.push_back(std::move(t));
      } else {
        tokens.push_back(word_token(word, start));
      }
    } else if (auto op = operator_named(text.substr(i, 1))) {
      Token t;
      t.kind = Token::Kind::op;
      t.op = *op;
      t.text = std::string(1, c);
      t.position = start;
      tokens.push_back(std::move(t));
      ++i;
    } else if (c == '(' || c == ')') {
      Token t;
      t.kind = c == '(' ? Token::Kind::lparen : Token::Kind::rparen;
      t.text = std::string(1, c);
      t.position = start;
      tokens.push_back(std::move(t));
      ++i;
    } else {
      throw PhenotypeParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  return tokens;
}

// Derivation lowering: one token per terminal leaf, except digit-only
// subtrees (constants) and variable nodes, which become a single token.
class TreeTokenizer {
 public:
  explicit TreeTokenizer(const DerivationTree& tree) : tree_(tree), numeric_(tree.size(), false) {
    // Children are always created after their parent, so a reverse sweep
    // sees every child before its parent.
    for (std::size_t i = tree.size(); i-- > 0;) {
      const auto& n = tree.node(i);
      switch (n.symbol.kind) {
        case SymbolKind::terminal:
          numeric_[i] = n.symbol.text == "." ||
                        std::all_of(n.symbol.text.begin(), n.symbol.text.end(),
                                    [](unsigned char c) { return std::isdigit(c); });
          break;
        case SymbolKind::variable_ref:
          numeric_[i] = false;
          break;
        case SymbolKind::non_terminal:
          numeric_[i] = !n.children.empty() &&
                        std::all_of(n.children.begin(), n.children.end(),
                                    [&](std::size_t c) { return static_cast<bool>(numeric_[c]); });
          break;
      }
    }
  }

  std::vector<Token> tokens() {
    visit(DerivationTree::root_index);
    return std::move(tokens_);
  }

 private:
  void append_digits(std::size_t i, std::string& out) const {
    const auto& n = tree_.node(i);
    if (n.symbol.kind == SymbolKind::terminal) {
      out += n.symbol.text;
      return;
    }
    for (auto c : n.children) append_digits(c, out);
  }

  void visit(std::size_t i) {
    const auto& n = tree_.node(i);
    const auto position = tokens_.size();
    if (numeric_[i]) {
      Token t;
      append_digits(i, t.text);
      if (!is_decimal_literal(t.text)) throw MalformedTree("bad numeric leaf sequence '" + t.text + "'");
      t.kind = Token::Kind::number;
      t.position = position;
      tokens_.push_back(std::move(t));
      return;
    }
    switch (n.symbol.kind) {
      case SymbolKind::non_terminal:
        if (n.choice < 0) throw MalformedTree("unexpanded non-terminal <" + n.symbol.text + ">");
        for (auto c : n.children) visit(c);
        return;
      case SymbolKind::variable_ref: {
        Token t;
        t.position = position;
        if (n.symbol.text == "K") {
          t.kind = Token::Kind::time_k;
          t.text = "K";
        } else {
          auto series = series_named(n.symbol.text);
          if (!series) throw MalformedTree("unknown variable '" + n.symbol.text + "'");
          std::string digits = n.symbol.lag_digits;
          if (!n.symbol.lag_rule.empty()) {
            if (n.children.empty()) throw MalformedTree("variable index was never expanded");
            for (auto c : n.children) append_digits(c, digits);
          }
          if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                             [](unsigned char c) { return std::isdigit(c); })) {
            throw MalformedTree("bad variable index '" + digits + "'");
          }
          t.kind = Token::Kind::variable;
          t.series = *series;
          std::from_chars(digits.data(), digits.data() + digits.size(), t.lag);
          t.text = tree_.variable_token(i);
        }
        tokens_.push_back(std::move(t));
        return;
      }
      case SymbolKind::terminal: {
        const auto& text = n.symbol.text;
        Token t;
        t.text = text;
        t.position = position;
        if (auto op = operator_named(text)) {
          t.kind = Token::Kind::op;
          t.op = *op;
        } else if (text == "(") {
          t.kind = Token::Kind::lparen;
        } else if (text == ")") {
          t.kind = Token::Kind::rparen;
        } else if (!text.empty() && (std::isalpha(static_cast<unsigned char>(text[0])) || text[0] == '_') &&
                   std::all_of(text.begin(), text.end(),
                               [](unsigned char c) { return std::isalnum(c) || c == '_'; })) {
          if (series_named(text)) throw MalformedTree("bare series name '" + text + "' without index");
          t = word_token(text, position);
        } else {
          throw MalformedTree("unknown terminal '" + text + "'");
        }
        tokens_.push_back(std::move(t));
        return;
      }
    }
  }

  const DerivationTree& tree_;
  std::vector<bool> numeric_;
  std::vector<Token> tokens_;
};

}  // namespace

// ---------------------------------------------------------------------------

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::binary;
  e.op = op;
  e.args.reserve(2);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::unary(UnaryFn fn, Expr arg) { return unary(fn, std::string(to_string(fn)), std::move(arg)); }

Expr Expr::unary(UnaryFn fn, std::string spelling, Expr arg) {
  Expr e;
  e.kind = ExprKind::unary;
  e.fn = fn;
  e.text = std::move(spelling);
  e.args.push_back(std::move(arg));
  return e;
}

Expr Expr::variable(Series series, unsigned lag) {
  Expr e;
  e.kind = ExprKind::variable;
  e.series = series;
  e.lag = lag;
  return e;
}

Expr Expr::time_k() {
  Expr e;
  e.kind = ExprKind::time_k;
  return e;
}

Expr Expr::constant(std::string text) {
  if (!is_decimal_literal(text)) throw std::invalid_argument("bad constant literal '" + text + "'");
  Expr e;
  e.kind = ExprKind::constant;
  std::from_chars(text.data(), text.data() + text.size(), e.value);
  e.text = std::move(text);
  return e;
}

Expr Expr::symbol(std::string name) {
  Expr e;
  e.kind = ExprKind::symbol;
  e.text = std::move(name);
  return e;
}

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (const auto& a : args) n += a.node_count();
  return n;
}

std::size_t Expr::depth() const {
  std::size_t d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return d + 1;
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
  }
  return "?";
}

std::string_view to_string(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::sin: return "sin";
    case UnaryFn::cos: return "cos";
    case UnaryFn::tan: return "tan";
    case UnaryFn::exp: return "exp";
    case UnaryFn::abs: return "abs";
  }
  return "?";
}

std::string_view to_string(Series s) {
  switch (s) {
    case Series::GL: return "GL";
    case Series::CH: return "CH";
    case Series::IS: return "IS";
    case Series::IL: return "IL";
  }
  return "?";
}

Expr from_derivation(const DerivationTree& tree) {
  if (tree.size() == 0) throw MalformedTree("empty derivation tree");
  return Parser<MalformedTree>(TreeTokenizer(tree).tokens()).parse();
}

Expr parse_expression(std::string_view text) { return Parser<PhenotypeParseError>(lex(text)).parse(); }

double eval(const Expr& expr, const EvalContext& ctx) {
  switch (expr.kind) {
    case ExprKind::binary:
      return apply(expr.op, eval(expr.args[0], ctx), eval(expr.args[1], ctx));
    case ExprKind::unary:
      return apply(expr.fn, eval(expr.args[0], ctx));
    case ExprKind::variable:
      return read_series(expr.series, expr.lag, ctx);
    case ExprKind::time_k:
      return static_cast<double>(ctx.k);
    case ExprKind::constant:
      return expr.value;
    case ExprKind::symbol:
      return ctx.symbol_value;
  }
  return kNaN;
}

std::string render(const Expr& expr) {
  switch (expr.kind) {
    case ExprKind::binary:
      return "(" + render(expr.args[0]) + " " + std::string(to_string(expr.op)) + " " + render(expr.args[1]) + ")";
    case ExprKind::unary:
      return expr.text + "(" + render(expr.args[0]) + ")";
    case ExprKind::variable: {
      std::string s(to_string(expr.series));
      s += expr.lag == 0 ? "[k]" : "[k-" + std::to_string(expr.lag) + "]";
      return s;
    }
    case ExprKind::time_k:
      return "k";
    case ExprKind::constant:
    case ExprKind::symbol:
      return expr.text;
  }
  return {};
}

// ---------------------------------------------------------------------------

Program::Program(const Expr& expr) { emit(expr, 1); }

void Program::emit(const Expr& e, std::size_t depth) {
  max_stack_ = std::max(max_stack_, depth);
  switch (e.kind) {
    case ExprKind::binary: {
      emit(e.args[0], depth);
      emit(e.args[1], depth + 1);
      static constexpr std::array<Op, 4> ops{Op::add, Op::sub, Op::mul, Op::div};
      code_.push_back({ops[static_cast<std::size_t>(e.op)]});
      break;
    }
    case ExprKind::unary:
      emit(e.args[0], depth);
      code_.push_back({Op::call, e.fn});
      break;
    case ExprKind::variable:
      code_.push_back({Op::push_var, UnaryFn::sin, e.series, e.lag});
      break;
    case ExprKind::time_k:
      code_.push_back({Op::push_k});
      break;
    case ExprKind::constant:
      code_.push_back({Op::push_const, UnaryFn::sin, Series::GL, 0, e.value});
      break;
    case ExprKind::symbol:
      code_.push_back({Op::push_symbol});
      break;
  }
}

double Program::run(const EvalContext& ctx) const {
  if (code_.empty()) return kNaN;
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack;
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_stack_ > kInline) {
    heap_stack.resize(max_stack_);
    stack = heap_stack.data();
  }
  std::size_t sp = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::push_const: stack[sp++] = in.value; break;
      case Op::push_var: stack[sp++] = read_series(in.series, in.lag, ctx); break;
      case Op::push_k: stack[sp++] = static_cast<double>(ctx.k); break;
      case Op::push_symbol: stack[sp++] = ctx.symbol_value; break;
      case Op::add: --sp; stack[sp - 1] = stack[sp - 1] + stack[sp]; break;
      case Op::sub: --sp; stack[sp - 1] = stack[sp - 1] - stack[sp]; break;
      case Op::mul: --sp; stack[sp - 1] = stack[sp - 1] * stack[sp]; break;
      case Op::div: --sp; stack[sp - 1] = stack[sp - 1] / stack[sp]; break;
      case Op::call: stack[sp - 1] = apply(in.fn, stack[sp - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace glucoge
