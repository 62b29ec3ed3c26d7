#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "glucoge/dataset.hpp"
#include "glucoge/fitness.hpp"
#include "support/fixtures.hpp"

namespace glucoge {
namespace {

PatientSeries flat(std::vector<double> gl) {
  PatientSeries s;
  s.patient_id = "t";
  s.gl = std::move(gl);
  s.ch.assign(s.gl.size(), 0.0);
  s.is.assign(s.gl.size(), 0.0);
  s.il.assign(s.gl.size(), 0.0);
  return s;
}

double value(Objective o, const std::vector<double>& e, const PatientSeries& s) {
  auto f = evaluate(o, e, s);
  EXPECT_FALSE(f.is_worst());
  return f.value();
}

TEST(Fitness, ErrorSeries) {
  auto s = flat({100, 110});
  EXPECT_EQ(error_series(s, {{100, 100}, true}), (std::vector<double>{0, 10}));
  EXPECT_EQ(error_series(s, {{100, 110}, true}), (std::vector<double>{0, 0}));
  EXPECT_EQ(error_series(s, {{90, 130}, true}), (std::vector<double>{10, 20}));
}

TEST(Fitness, ErrorAgainstSeededConstant) {
  auto s = load_patient(test::joy_wilson_path());
  EstimatedSeries est{std::vector<double>(s.size(), 209.1453), true};
  auto e = error_series(s, est);
  EXPECT_EQ(e[0], 0.0);
  EXPECT_NEAR(e[23], 40.36357, 1e-9);
}

TEST(Fitness, HandComputedObjectives) {
  auto s = flat({100, 100});
  std::vector<double> e{3, 4};
  EXPECT_DOUBLE_EQ(value(Objective::least_squares, e, s), 25.0);
  EXPECT_DOUBLE_EQ(value(Objective::average_error, e, s), 3.5);
  EXPECT_DOUBLE_EQ(value(Objective::max_error, e, s), 4.0);
  EXPECT_DOUBLE_EQ(value(Objective::rmse, e, s), std::sqrt(12.5));
  EXPECT_NEAR(value(Objective::rmse, e, s), 3.5355, 1e-4);
  EXPECT_DOUBLE_EQ(value(Objective::mad, e, s), 0.035);
}

TEST(Fitness, ZeroErrors) {
  auto s = flat({100, 120, 80});
  std::vector<double> e(3, 0.0);
  for (auto o : kAllObjectives) EXPECT_EQ(value(o, e, s), 0.0);
}

TEST(Fitness, NonFiniteErrorsGiveWorst) {
  auto s = flat({100, 120});
  for (auto o : kAllObjectives) {
    EXPECT_TRUE(evaluate(o, std::vector<double>{1.0, INFINITY}, s).is_worst());
    EXPECT_TRUE(evaluate(o, std::vector<double>{NAN, 1.0}, s).is_worst());
  }
}

TEST(Fitness, Errors) {
  auto s = flat({100, 120});
  try {
    error_series(s, {{100.0}, true});
    FAIL();
  } catch (const FitnessError& e) {
    EXPECT_EQ(e.kind(), FitnessError::Kind::length_mismatch);
  }
  try {
    evaluate(Objective::average_error, std::vector<double>{}, s);
    FAIL();
  } catch (const FitnessError& e) {
    EXPECT_EQ(e.kind(), FitnessError::Kind::empty_series);
  }
  auto level = flat({100, 100});
  try {
    percentage_average_error(level, {{100, 100}, true});
    FAIL();
  } catch (const FitnessError& e) {
    EXPECT_EQ(e.kind(), FitnessError::Kind::degenerate_range);
  }
}

TEST(Fitness, PercentageAverageError) {
  auto s = load_patient(test::joy_wilson_path());
  EXPECT_NEAR(glucose_range(s), 154.18167, 1e-9);
  EXPECT_EQ(percentage_average_error(s, {s.gl, true}), 0.0);

  // A constant offset of 15.418167 on every step.
  EstimatedSeries est{s.gl, true};
  for (std::size_t i = 0; i < est.size(); ++i) est.gl_hat[i] += 15.418167;
  EXPECT_NEAR(percentage_average_error(s, est), 10.0, 1e-9);

  est.gl_hat[5] = NAN;
  est.finite = false;
  EXPECT_TRUE(std::isinf(percentage_average_error(s, est)));
}

TEST(Fitness, SentinelOrdering) {
  auto worst = Fitness::worst();
  EXPECT_TRUE(worst.is_worst());
  EXPECT_LT(Fitness(1e308), worst);
  EXPECT_LT(Fitness(INFINITY), worst);
  EXPECT_GT(worst, Fitness(0.0));
  EXPECT_EQ(worst, Fitness::worst());
  EXPECT_FALSE(worst < Fitness::worst());
  EXPECT_LT(Fitness(1.0), Fitness(2.0));
  EXPECT_EQ(Fitness(2.0), Fitness(2.0));
  EXPECT_NE(Fitness(2.0), worst);
}

TEST(Fitness, ObjectiveNames) {
  EXPECT_EQ(parse_objective("f5"), Objective::mad);
  EXPECT_EQ(parse_objective("F4"), Objective::rmse);
  EXPECT_EQ(parse_objective("rsme"), Objective::rmse);
  EXPECT_EQ(parse_objective("least-squares"), Objective::least_squares);
  EXPECT_FALSE(parse_objective("f6").has_value());
  for (auto o : kAllObjectives) {
    EXPECT_EQ(parse_objective(objective_code(o)), o);
    EXPECT_EQ(parse_objective(objective_name(o)), o);
  }
}

class FitnessProperty : public ::testing::Test {
 protected:
  std::mt19937_64 gen{41};

  std::vector<double> errors(std::size_t n) {
    std::uniform_real_distribution<double> d(0.0, 200.0);
    std::vector<double> e(n);
    for (auto& x : e) x = d(gen);
    return e;
  }
  PatientSeries glucose(std::size_t n) {
    std::uniform_real_distribution<double> d(40.0, 400.0);
    std::vector<double> gl(n);
    for (auto& x : gl) x = d(gen);
    return flat(std::move(gl));
  }
  std::size_t length() { return std::uniform_int_distribution<std::size_t>(1, 120)(gen); }
};

TEST_F(FitnessProperty, RmseSquaredTimesNIsLeastSquares) {
  for (int i = 0; i < 1000; ++i) {
    auto n = length();
    auto e = errors(n);
    auto s = glucose(n);
    const double f1 = value(Objective::least_squares, e, s);
    const double f4 = value(Objective::rmse, e, s);
    EXPECT_NEAR(f4 * f4 * static_cast<double>(n), f1, 1e-9 * f1);
  }
}

TEST_F(FitnessProperty, AverageAtMostMaximum) {
  for (int i = 0; i < 1000; ++i) {
    auto n = length();
    auto e = errors(n);
    auto s = glucose(n);
    const double f2 = value(Objective::average_error, e, s);
    const double f3 = value(Objective::max_error, e, s);
    EXPECT_LE(f2, f3);
    for (auto o : kAllObjectives) EXPECT_GE(value(o, e, s), 0.0);
  }
}

TEST_F(FitnessProperty, ConstantErrors) {
  std::uniform_real_distribution<double> d(0.0, 200.0);
  for (int i = 0; i < 1000; ++i) {
    auto n = length();
    const double c = d(gen);
    std::vector<double> e(n, c);
    auto s = glucose(n);
    EXPECT_NEAR(value(Objective::average_error, e, s), c, 1e-9 * c);
    EXPECT_EQ(value(Objective::max_error, e, s), c);
    EXPECT_NEAR(value(Objective::rmse, e, s), c, 1e-9 * c);
  }
}

TEST_F(FitnessProperty, Scaling) {
  std::uniform_real_distribution<double> d(0.1, 10.0);
  for (int i = 0; i < 1000; ++i) {
    auto n = length();
    auto e = errors(n);
    auto s = glucose(n);
    const double c = d(gen);
    auto scaled = e;
    for (auto& x : scaled) x *= c;
    auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    EXPECT_TRUE(rel(value(Objective::average_error, scaled, s), c * value(Objective::average_error, e, s)));
    EXPECT_TRUE(rel(value(Objective::max_error, scaled, s), c * value(Objective::max_error, e, s)));
    EXPECT_TRUE(rel(value(Objective::rmse, scaled, s), c * value(Objective::rmse, e, s)));
    EXPECT_TRUE(rel(value(Objective::least_squares, scaled, s), c * c * value(Objective::least_squares, e, s)));
  }
}

TEST_F(FitnessProperty, ZeroOnlyForPerfectEstimates) {
  for (int i = 0; i < 200; ++i) {
    auto n = length();
    auto s = glucose(n);
    std::vector<double> e(n, 0.0);
    e[std::uniform_int_distribution<std::size_t>(0, n - 1)(gen)] = 0.5;
    for (auto o : {Objective::least_squares, Objective::average_error, Objective::rmse, Objective::mad}) {
      EXPECT_GT(value(o, e, s), 0.0);
    }
  }
}

}  // namespace
}  // namespace glucoge
