#include "glucoge/fitness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace glucoge {

std::optional<Objective> parse_objective(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto o : kAllObjectives) {
    if (t == objective_code(o) || t == objective_name(o)) return o;
  }
  if (t == "rsme") return Objective::rmse;
  return std::nullopt;
}

std::string_view objective_code(Objective o) {
  switch (o) {
    case Objective::least_squares: return "f1";
    case Objective::average_error: return "f2";
    case Objective::max_error: return "f3";
    case Objective::rmse: return "f4";
    case Objective::mad: return "f5";
  }
  return "?";
}

std::string_view objective_name(Objective o) {
  switch (o) {
    case Objective::least_squares: return "least-squares";
    case Objective::average_error: return "average-error";
    case Objective::max_error: return "max-error";
    case Objective::rmse: return "rmse";
    case Objective::mad: return "mad";
  }
  return "?";
}

std::vector<double> error_series(const PatientSeries& actual, const EstimatedSeries& estimated) {
  if (actual.size() != estimated.size()) {
    throw FitnessError(FitnessError::Kind::length_mismatch,
                       "actual has " + std::to_string(actual.size()) + " steps, estimate has " +
                           std::to_string(estimated.size()));
  }
  std::vector<double> e(actual.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::fabs(actual.gl[k] - estimated.gl_hat[k]);
  return e;
}

Fitness evaluate(Objective objective, std::span<const double> errors, const PatientSeries& actual) {
  if (errors.empty()) throw FitnessError(FitnessError::Kind::empty_series, "error series is empty");
  if (objective == Objective::mad && actual.size() < errors.size()) {
    throw FitnessError(FitnessError::Kind::length_mismatch, "F5 needs GL for every error term");
  }
  for (double e : errors) {
    if (!std::isfinite(e)) return Fitness::worst();
  }
  const auto n = static_cast<double>(errors.size());
  double result = 0.0;
  switch (objective) {
    case Objective::least_squares:
      for (double e : errors) result += e * e;
      break;
    case Objective::average_error:
      for (double e : errors) result += e;
      result /= n;
      break;
    case Objective::max_error:
      result = *std::max_element(errors.begin(), errors.end());
      break;
    case Objective::rmse:
      for (double e : errors) result += e * e;
      result = std::sqrt(result / n);
      break;
    case Objective::mad:
      for (std::size_t k = 0; k < errors.size(); ++k) result += errors[k] / actual.gl[k];
      result /= n;
      break;
  }
  if (!std::isfinite(result)) return Fitness::worst();
  return Fitness(result);
}

double glucose_range(const PatientSeries& actual) {
  if (actual.empty()) throw FitnessError(FitnessError::Kind::empty_series, "patient series is empty");
  auto [lo, hi] = std::minmax_element(actual.gl.begin(), actual.gl.end());
  return *hi - *lo;
}

double percentage_average_error(const PatientSeries& actual, const EstimatedSeries& estimated) {
  const double range = glucose_range(actual);
  if (!(range > 0.0)) {
    throw FitnessError(FitnessError::Kind::degenerate_range, "glucose range is zero; PAE undefined");
  }
  auto errors = error_series(actual, estimated);
  auto f2 = evaluate(Objective::average_error, errors, actual);
  if (f2.is_worst()) return std::numeric_limits<double>::infinity();
  return 100.0 * f2.value() / range;
}

}  // namespace glucoge
