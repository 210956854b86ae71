#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "symbiolife/population.hpp"

namespace symbiolife {

struct TestResult {
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool significant = false;  // p < 0.05
  bool degenerate = false;   // both samples had zero variance
};

double mean(std::span<const double> xs);
/// n - 1 denominator.
double sample_variance(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

/// Two-tailed Welch test for unequal variances. With both variances zero the result
/// is flagged degenerate: p = 1 for equal means, otherwise 0.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct Correlation {
  double r = 0.0;
  TestResult test;  // t = r sqrt((n - 2) / (1 - r^2)), n - 2 degrees of freedom
};

/// Throws LengthMismatch, InvalidSample (n < 3) or ConstantSample.
Correlation pearson_significance(std::span<const double> x, std::span<const double> y);

/// Two-tailed p for a Student t statistic.
double student_t_two_tailed(double t, double degrees_of_freedom);

struct CurveSummary {
  std::vector<double> mean;
  std::vector<double> stddev;  // zero for a single run
};

/// Pointwise mean and sample std-dev across runs of equal length.
CurveSummary aggregate_curves(const std::vector<std::vector<double>>& runs);

struct FusionSummary {
  int attempts = 0;
  int evaluated = 0;  // attempts that reached whole-vs-parts evaluation
  int accepted = 0;
  std::array<int, 3> counts{};  // indexed by FusionClass
  /// Shares of `evaluated`, in percent. Empty when nothing was evaluated.
  std::optional<std::array<double, 3>> percent;
};

FusionSummary fusion_event_summary(std::span<const FusionEvent> events);

}  // namespace symbiolife
