#pragma once

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glucoge/series.hpp"
#include "glucoge/simulate.hpp"

namespace glucoge {

/// The five minimisation objectives over the error series e_k.
enum class Objective {
  least_squares,  // F1: sum e^2
  average_error,  // F2: mean e
  max_error,      // F3: max e
  rmse,           // F4: sqrt(mean e^2)
  mad,            // F5: mean e / GL
};

inline constexpr Objective kAllObjectives[] = {Objective::least_squares, Objective::average_error,
                                               Objective::max_error, Objective::rmse, Objective::mad};

/// `f1`..`f5`, case-insensitive; also accepts the long names.
std::optional<Objective> parse_objective(std::string_view text);
std::string_view objective_code(Objective o);  // "f1".."f5"
std::string_view objective_name(Objective o);  // "least-squares", ...

/// A fitness value, or the worst sentinel given to unmappable or
/// numerically broken individuals. Every finite value orders strictly
/// before the sentinel; two sentinels compare equal.
class Fitness {
 public:
  constexpr Fitness() = default;
  constexpr explicit Fitness(double value) : value_(value), worst_(false) {}
  static constexpr Fitness worst() { return Fitness(); }

  constexpr bool is_worst() const noexcept { return worst_; }
  /// Undefined for the sentinel; check is_worst() first.
  constexpr double value() const noexcept { return value_; }

  friend constexpr std::partial_ordering operator<=>(const Fitness& a, const Fitness& b) {
    if (a.worst_ != b.worst_) return a.worst_ ? std::partial_ordering::greater : std::partial_ordering::less;
    if (a.worst_) return std::partial_ordering::equivalent;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(const Fitness& a, const Fitness& b) {
    return (a.worst_ && b.worst_) || (!a.worst_ && !b.worst_ && a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool worst_ = true;
};

class FitnessError : public std::invalid_argument {
 public:
  enum class Kind { length_mismatch, empty_series, degenerate_range };
  FitnessError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// e_k = |GL(k) - gl_hat(k)| for k = 1..N.
std::vector<double> error_series(const PatientSeries& actual, const EstimatedSeries& estimated);

/// Objective value over `errors`; the worst sentinel if any e_k is not
/// finite. `actual` supplies GL(k) for F5.
Fitness evaluate(Objective objective, std::span<const double> errors, const PatientSeries& actual);

/// 100 * F2 / (max GL - min GL). +inf when the estimate is not finite.
double percentage_average_error(const PatientSeries& actual, const EstimatedSeries& estimated);

/// max GL - min GL.
double glucose_range(const PatientSeries& actual);

}  // namespace glucoge
