#include "symbiolife/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "symbiolife/errors.hpp"

namespace symbiolife {

namespace {

constexpr double kAlpha = 0.05;

void require_size(std::span<const double> xs, std::size_t n, const char* what) {
  if (xs.size() < n) throw InvalidSample(std::string(what) + " needs at least " + std::to_string(n) + " values");
}

void require_finite(std::span<const double> xs) {
  for (double v : xs)
    if (!std::isfinite(v)) throw InvalidSample("sample contains a non-finite value");
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InvalidSample("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  require_size(xs, 2, "variance");
  const double m = mean(xs);
  double ss = 0.0;
  for (double v : xs) ss += (v - m) * (v - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double sample_stddev(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double student_t_two_tailed(double t, double degrees_of_freedom) {
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(degrees_of_freedom);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return std::clamp(p, 0.0, 1.0);
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  require_size(a, 2, "welch_t_test");
  require_size(b, 2, "welch_t_test");
  require_finite(a);
  require_finite(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = mean(a), mb = mean(b);
  const double va = sample_variance(a) / na, vb = sample_variance(b) / nb;

  TestResult r;
  if (va + vb == 0.0) {
    r.degenerate = true;
    r.degrees_of_freedom = na + nb - 2.0;
    if (ma == mb) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
  } else {
    r.statistic = (ma - mb) / std::sqrt(va + vb);
    // Welch-Satterthwaite.
    r.degrees_of_freedom = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p_value = student_t_two_tailed(r.statistic, r.degrees_of_freedom);
  }
  r.significant = r.p_value < kAlpha;
  return r;
}

Correlation pearson_significance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch("correlation samples differ in length");
  require_size(x, 3, "pearson_significance");
  require_finite(x);
  require_finite(y);
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ConstantSample("correlation with a constant sample");

  Correlation c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(x.size()) - 2.0;
  c.test.degrees_of_freedom = df;
  if (std::fabs(c.r) == 1.0) {
    c.test.statistic = c.r * std::numeric_limits<double>::infinity();
    c.test.p_value = 0.0;
  } else {
    c.test.statistic = c.r * std::sqrt(df / (1.0 - c.r * c.r));
    c.test.p_value = student_t_two_tailed(c.test.statistic, df);
  }
  c.test.significant = c.test.p_value < kAlpha;
  return c;
}

CurveSummary aggregate_curves(const std::vector<std::vector<double>>& runs) {
  CurveSummary s;
  if (runs.empty()) return s;
  const std::size_t len = runs.front().size();
  for (const auto& r : runs)
    if (r.size() != len) throw LengthMismatch("curves differ in length");
  s.mean.resize(len);
  s.stddev.assign(len, 0.0);
  std::vector<double> column(runs.size());
  for (std::size_t g = 0; g < len; ++g) {
    for (std::size_t k = 0; k < runs.size(); ++k) column[k] = runs[k][g];
    s.mean[g] = mean(column);
    if (runs.size() > 1) s.stddev[g] = sample_stddev(column);
  }
  return s;
}

FusionSummary fusion_event_summary(std::span<const FusionEvent> events) {
  FusionSummary s;
  for (const auto& e : events) {
    ++s.attempts;
    s.accepted += e.accepted ? 1 : 0;
    if (e.classification) {
      ++s.evaluated;
      ++s.counts[static_cast<std::size_t>(*e.classification)];
    }
  }
  if (s.evaluated > 0) {
    std::array<double, 3> pct{};
    for (std::size_t i = 0; i < 3; ++i) pct[i] = 100.0 * s.counts[i] / s.evaluated;
    s.percent = pct;
  }
  return s;
}

}  // namespace symbiolife
