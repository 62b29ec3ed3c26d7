#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glucoge/mapper.hpp"
#include "glucoge/series.hpp"

namespace glucoge {

enum class ExprKind { binary, unary, variable, time_k, constant, symbol };
enum class BinaryOp { add, sub, mul, div };
enum class UnaryFn { sin, cos, tan, exp, abs };
enum class Series { GL, CH, IS, IL };

/// Glucose model AST. `args` holds two operands for binary nodes and one
/// for unary nodes. Constants keep the digit text they were built from so
/// rendering is exact; unary nodes keep the function's spelling.
struct Expr {
  ExprKind kind = ExprKind::constant;
  BinaryOp op = BinaryOp::add;
  UnaryFn fn = UnaryFn::sin;
  Series series = Series::GL;
  unsigned lag = 0;
  double value = 0.0;
  std::string text;
  std::vector<Expr> args;

  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr unary(UnaryFn fn, Expr arg);
  static Expr unary(UnaryFn fn, std::string spelling, Expr arg);
  static Expr variable(Series series, unsigned lag);
  static Expr time_k();
  /// `text` must be a plain decimal literal such as `14.33`.
  static Expr constant(std::string text);
  static Expr symbol(std::string name);

  std::size_t node_count() const;
  std::size_t depth() const;

  friend bool operator==(const Expr&, const Expr&) = default;
};

std::string_view to_string(BinaryOp op);
std::string_view to_string(UnaryFn fn);
std::string_view to_string(Series s);

/// Evaluation state at step k. `gl_hat` holds estimated glucose for steps
/// 1..k (at least); CH/IS/IL come from `series`. Free symbols such as the
/// `X` of a plain symbolic-regression grammar read `symbol_value`.
struct EvalContext {
  std::size_t k = 1;
  std::span<const double> gl_hat;
  const PatientSeries* series = nullptr;
  double symbol_value = std::numeric_limits<double>::quiet_NaN();
};

class MalformedTree : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhenotypeParseError : public std::runtime_error {
 public:
  PhenotypeParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Lowers a derivation tree to an Expr. Digit-only subtrees become
/// constants, `#{...}` nodes become variables or `k`, and operator grouping
/// follows ordinary infix precedence (`*` `/` over `+` `-`, left to right)
/// with the grammar's parentheses respected.
Expr from_derivation(const DerivationTree& tree);

/// Parses phenotype or rendered text: `GL[k_01]`, `GL[k-1]`, `GL(k-1)`,
/// `GL[k]`, `k`/`K`, decimals, sin/cos/tan/exp/abs calls, `+ - * /` and
/// parentheses. parse_expression(render(e)) == e.
Expr parse_expression(std::string_view text);

/// Tree-walking evaluator. Non-finite results propagate; nothing throws.
/// Variables read step max(k - lag, 1).
double eval(const Expr& expr, const EvalContext& ctx);

/// Fully parenthesised canonical text, e.g. `(cos(GL[k-11]) * 46.98)`.
std::string render(const Expr& expr);

/// Flattened postfix form of an Expr for the simulation hot loop. Produces
/// bit-identical results to eval().
class Program {
 public:
  Program() = default;
  explicit Program(const Expr& expr);

  double run(const EvalContext& ctx) const;
  std::size_t size() const noexcept { return code_.size(); }

 private:
  enum class Op : unsigned char { push_const, push_var, push_k, push_symbol, add, sub, mul, div, call };
  struct Instr {
    Op op;
    UnaryFn fn = UnaryFn::sin;
    Series series = Series::GL;
    unsigned lag = 0;
    double value = 0.0;
  };

  void emit(const Expr& e, std::size_t depth);

  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
};

}  // namespace glucoge
