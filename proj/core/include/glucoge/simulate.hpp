#pragma once

#include <vector>

#include "glucoge/expression.hpp"
#include "glucoge/series.hpp"

namespace glucoge {

/// Model output aligned with the input steps. `finite` is false iff any
/// produced value is NaN or infinite.
struct EstimatedSeries {
  std::vector<double> gl_hat;
  bool finite = true;

  std::size_t size() const noexcept { return gl_hat.size(); }
};

/// One-step-ahead recursion: gl_hat(1) = GL(1), and for k = 1..N-1
/// gl_hat(k+1) = model evaluated at step k. Glucose variables read the
/// estimate, CH/IS/IL read the recorded inputs. Non-finite values are
/// carried forward, never truncated.
EstimatedSeries simulate(const Expr& expr, const PatientSeries& series);
EstimatedSeries simulate(const Program& program, const PatientSeries& series);

}  // namespace glucoge
