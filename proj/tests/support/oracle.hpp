#pragma once

#include <cmath>
#include <cstring>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "glucoge/expression.hpp"
#include "glucoge/series.hpp"

namespace glucoge::test {

/// Straight-line view of the recursion state used by the oracle. Indices
/// are 1-based like the model notation.
struct OracleState {
  std::size_t k = 1;
  const std::vector<double>* gl_hat = nullptr;
  const PatientSeries* series = nullptr;
};

using OracleFn = std::function<double(const OracleState&)>;

/// An expression generated twice: once as an Expr for the library and once
/// as a closure tree for the oracle. Neither is derived from the other.
struct OracleCase {
  Expr expr;
  OracleFn fn;
};

inline double oracle_read(const std::vector<double>& column, std::size_t k, unsigned lag) {
  std::size_t step = 1;
  if (k > lag) step = k - lag;
  return column.at(step - 1);
}

class RandomModel {
 public:
  explicit RandomModel(std::uint32_t seed, unsigned max_lag = 3) : gen_(seed), max_lag_(max_lag) {}

  OracleCase make(std::size_t max_depth) { return node(max_depth); }

  Expr make_expr(std::size_t max_depth) { return node(max_depth).expr; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }

  OracleCase leaf() {
    switch (pick(3)) {
      case 0: {
        const auto s = static_cast<Series>(pick(4));
        const auto lag = static_cast<unsigned>(pick(static_cast<int>(max_lag_) + 1));
        return {Expr::variable(s, lag), [s, lag](const OracleState& st) {
                  switch (s) {
                    case Series::GL: return oracle_read(*st.gl_hat, st.k, lag);
                    case Series::CH: return oracle_read(st.series->ch, st.k, lag);
                    case Series::IS: return oracle_read(st.series->is, st.k, lag);
                    case Series::IL: return oracle_read(st.series->il, st.k, lag);
                  }
                  return 0.0;
                }};
      }
      case 1:
        return {Expr::time_k(), [](const OracleState& st) { return static_cast<double>(st.k); }};
      default: {
        std::string text = std::to_string(pick(10)) + std::to_string(pick(10)) + "." + std::to_string(pick(10)) +
                           std::to_string(pick(10));
        const double v = std::stod(text);
        return {Expr::constant(text), [v](const OracleState&) { return v; }};
      }
    }
  }

  OracleCase node(std::size_t depth) {
    if (depth <= 1 || pick(4) == 0) return leaf();
    if (pick(3) == 0) {
      auto a = node(depth - 1);
      const auto fn = static_cast<UnaryFn>(pick(4));
      OracleFn f = a.fn;
      OracleFn g;
      switch (fn) {
        case UnaryFn::sin: g = [f](const OracleState& s) { return std::sin(f(s)); }; break;
        case UnaryFn::cos: g = [f](const OracleState& s) { return std::cos(f(s)); }; break;
        case UnaryFn::tan: g = [f](const OracleState& s) { return std::tan(f(s)); }; break;
        case UnaryFn::exp: g = [f](const OracleState& s) { return std::exp(f(s)); }; break;
        case UnaryFn::abs: g = [f](const OracleState& s) { return std::fabs(f(s)); }; break;
      }
      return {Expr::unary(fn, std::move(a.expr)), g};
    }
    auto l = node(depth - 1);
    auto r = node(depth - 1);
    const auto op = static_cast<BinaryOp>(pick(4));
    OracleFn a = l.fn;
    OracleFn b = r.fn;
    OracleFn g;
    switch (op) {
      case BinaryOp::add: g = [a, b](const OracleState& s) { return a(s) + b(s); }; break;
      case BinaryOp::sub: g = [a, b](const OracleState& s) { return a(s) - b(s); }; break;
      case BinaryOp::mul: g = [a, b](const OracleState& s) { return a(s) * b(s); }; break;
      case BinaryOp::div: g = [a, b](const OracleState& s) { return a(s) / b(s); }; break;
    }
    return {Expr::binary(op, std::move(l.expr), std::move(r.expr)), g};
  }

  std::mt19937 gen_;
  unsigned max_lag_;
};

/// The one-step-ahead recursion written out directly: seed with GL(1), then
/// append f evaluated at k for k = 1..N-1.
inline std::vector<double> oracle_simulate(const OracleFn& f, const PatientSeries& series) {
  std::vector<double> gl_hat;
  gl_hat.reserve(series.gl.size());
  gl_hat.push_back(series.gl.front());
  for (std::size_t k = 1; k < series.gl.size(); ++k) {
    OracleState st{k, &gl_hat, &series};
    const double next = f(st);
    gl_hat.push_back(next);
  }
  return gl_hat;
}

/// Ten steps of made-up but plausible inputs.
inline PatientSeries synthetic_series(std::size_t n = 10) {
  PatientSeries s;
  s.patient_id = "synthetic";
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    s.gl.push_back(120.0 + 15.0 * std::sin(x / 3.0) + x);
    s.ch.push_back(i % 4 == 1 ? 30.0 : 0.0);
    s.is.push_back(i % 5 == 0 ? 3.0 : 0.0);
    s.il.push_back(i == 7 ? 18.0 : 0.25 * x);
  }
  return s;
}

inline bool same_bits(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace glucoge::test
