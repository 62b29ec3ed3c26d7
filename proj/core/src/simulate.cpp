#include "glucoge/simulate.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

namespace glucoge {

void PatientSeries::validate() const {
  const auto n = gl.size();
  if (n == 0) throw std::invalid_argument("patient series is empty");
  if (ch.size() != n || is.size() != n || il.size() != n) {
    throw std::invalid_argument("patient series columns differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gl[i] > 0.0)) throw std::invalid_argument("GL must be positive at k=" + std::to_string(i + 1));
    if (!(ch[i] >= 0.0) || !(is[i] >= 0.0) || !(il[i] >= 0.0)) {
      throw std::invalid_argument("CH, IS and IL must be non-negative at k=" + std::to_string(i + 1));
    }
  }
}

namespace {

template <class Evaluate>
EstimatedSeries run_recursion(const PatientSeries& series, Evaluate&& evaluate) {
  EstimatedSeries out;
  const auto n = series.size();
  if (n == 0) return out;
  out.gl_hat.resize(n);
  out.gl_hat[0] = series.gl[0];
  EvalContext ctx;
  ctx.series = &series;
  for (std::size_t k = 1; k < n; ++k) {
    ctx.k = k;
    ctx.gl_hat = std::span<const double>(out.gl_hat.data(), k);
    const double next = evaluate(ctx);
    out.gl_hat[k] = next;
    if (!std::isfinite(next)) out.finite = false;
  }
  return out;
}

}  // namespace

EstimatedSeries simulate(const Expr& expr, const PatientSeries& series) {
  return run_recursion(series, [&](const EvalContext& ctx) { return eval(expr, ctx); });
}

EstimatedSeries simulate(const Program& program, const PatientSeries& series) {
  return run_recursion(series, [&](const EvalContext& ctx) { return program.run(ctx); });
}

}  // namespace glucoge
