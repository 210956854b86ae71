#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "symbiolife/errors.hpp"
#include "symbiolife/stats.hpp"

using namespace symbiolife;

namespace {

struct ReferenceCase {
  std::string kind;
  std::vector<double> a, b;
  double statistic, second, p;  // second: dof for welch, r for pearson
};

std::vector<double> split_values(const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(field);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<ReferenceCase> load_reference() {
  std::ifstream in(SYMBIOLIFE_TEST_DATA_DIR "/stats_reference.txt");
  REQUIRE(in.good());
  std::vector<ReferenceCase> out;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ';')) f.push_back(item);
    REQUIRE(f.size() == 6);
    out.push_back({f[0], split_values(f[1]), split_values(f[2]), std::stod(f[3]), std::stod(f[4]), std::stod(f[5])});
  }
  return out;
}

bool close(double got, double want, double tol = 1e-6) {
  return std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want));
}

}  // namespace

TEST_CASE("Welch and Pearson match the scipy reference") {
  const auto cases = load_reference();
  int welch = 0, pearson = 0;
  for (const auto& c : cases) {
    if (c.kind == "welch") {
      const TestResult r = welch_t_test(c.a, c.b);
      CHECK(close(r.statistic, c.statistic));
      CHECK(close(r.degrees_of_freedom, c.second));
      CHECK(std::fabs(r.p_value - c.p) < 1e-6);
      CHECK(r.significant == (c.p < 0.05));
      ++welch;
    } else {
      const Correlation r = pearson_significance(c.a, c.b);
      CHECK(std::fabs(r.r - c.second) < 1e-9);
      CHECK(close(r.test.statistic, c.statistic));
      CHECK(std::fabs(r.test.p_value - c.p) < 1e-6);
      ++pearson;
    }
  }
  CHECK(welch == 101);
  CHECK(pearson == 100);
}

TEST_CASE("Welch antisymmetry") {
  const auto cases = load_reference();
  for (const auto& c : cases) {
    if (c.kind != "welch") continue;
    const TestResult ab = welch_t_test(c.a, c.b);
    const TestResult ba = welch_t_test(c.b, c.a);
    CHECK(ab.statistic == -ba.statistic);
    CHECK(ab.p_value == ba.p_value);
    CHECK(ab.degrees_of_freedom == ba.degrees_of_freedom);
  }
}

TEST_CASE("Pearson symmetry and affine invariance") {
  const auto cases = load_reference();
  for (const auto& c : cases) {
    if (c.kind != "pearson") continue;
    const Correlation xy = pearson_significance(c.a, c.b);
    const Correlation yx = pearson_significance(c.b, c.a);
    CHECK(xy.r == yx.r);
    // Power-of-two scaling is exact in floating point, so r must not move at all.
    std::vector<double> scaled(c.a.size()), affine(c.a.size());
    for (std::size_t i = 0; i < c.a.size(); ++i) {
      scaled[i] = 4.0 * c.a[i];
      affine[i] = 2.7 * c.a[i] + 3.1;
    }
    CHECK(pearson_significance(scaled, c.b).r == xy.r);
    CHECK(pearson_significance(c.a, scaled).r == pearson_significance(c.a, c.a).r);
    CHECK(std::fabs(pearson_significance(affine, c.b).r - xy.r) < 1e-12);
  }
}

TEST_CASE("Welch edge cases") {
  const std::vector<double> a{1, 2, 3, 4};
  const TestResult same = welch_t_test(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(!same.significant);

  const TestResult zero = welch_t_test(std::vector<double>{0, 0, 0, 0}, std::vector<double>{1, 1, 1, 1});
  CHECK(zero.degenerate);
  CHECK(zero.p_value == 0.0);
  CHECK(zero.significant);

  const TestResult flat = welch_t_test(std::vector<double>{2, 2}, std::vector<double>{2, 2, 2});
  CHECK(flat.degenerate);
  CHECK(flat.p_value == 1.0);

  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1}, a), InvalidSample);
}

TEST_CASE("Pearson edge cases") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> neg{-1, -2, -3, -4, -5};
  const Correlation same = pearson_significance(x, x);
  CHECK(same.r == 1.0);
  CHECK(same.test.p_value < 1e-12);
  CHECK(pearson_significance(x, neg).r == -1.0);
  CHECK_THROWS_AS(pearson_significance(x, std::vector<double>{1, 1, 1, 1, 1}), ConstantSample);
  CHECK_THROWS_AS(pearson_significance(x, std::vector<double>{1, 2}), LengthMismatch);
  CHECK_THROWS_AS(pearson_significance(std::vector<double>{1, 2}, std::vector<double>{2, 1}), InvalidSample);
}

TEST_CASE("Student t tail is monotone and bounded") {
  double prev = 1.0;
  for (double t = 0.0; t < 10.0; t += 0.25) {
    const double p = student_t_two_tailed(t, 7.5);
    CHECK(p <= prev);
    CHECK(p >= 0.0);
    prev = p;
  }
  CHECK(student_t_two_tailed(0.0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("aggregate_curves") {
  const CurveSummary one = aggregate_curves({{0.1, 0.2, 0.3}});
  CHECK(one.mean == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(one.stddev == std::vector<double>{0.0, 0.0, 0.0});

  const CurveSummary two = aggregate_curves({{0.4, 0.4}, {0.6, 0.6}});
  for (int g = 0; g < 2; ++g) {
    CHECK(two.mean[g] == doctest::Approx(0.5));
    CHECK(two.stddev[g] == doctest::Approx(std::sqrt(0.02)));
  }

  // Twelve synthetic runs against a direct two-pass computation.
  std::vector<std::vector<double>> runs;
  for (int k = 0; k < 12; ++k) {
    std::vector<double> r;
    for (int g = 0; g < 5; ++g) r.push_back(std::sin(k * 1.3 + g) + 0.1 * g);
    runs.push_back(r);
  }
  const CurveSummary s = aggregate_curves(runs);
  for (int g = 0; g < 5; ++g) {
    double m = 0.0;
    for (const auto& r : runs) m += r[g];
    m /= 12.0;
    double ss = 0.0;
    for (const auto& r : runs) ss += (r[g] - m) * (r[g] - m);
    CHECK(s.mean[g] == doctest::Approx(m));
    CHECK(s.stddev[g] == doctest::Approx(std::sqrt(ss / 11.0)));
  }

  CHECK_THROWS_AS(aggregate_curves({{1.0, 2.0}, {1.0}}), LengthMismatch);
}

TEST_CASE("fusion_event_summary") {
  CHECK(!fusion_event_summary({}).percent.has_value());

  std::vector<FusionEvent> events(7);
  events[0].classification = FusionClass::BothPartsBenefit;
  events[0].accepted = true;
  events[1].classification = FusionClass::OnePartBenefits;
  events[1].accepted = true;
  events[2].classification = FusionClass::OnePartBenefits;
  events[3].classification = FusionClass::NoPartsBenefit;
  events[3].rejection = FusionRejection::NoMutualBenefit;
  events[4].rejection = FusionRejection::AreaLimit;
  events[5].classification = FusionClass::NoPartsBenefit;
  events[6].classification = FusionClass::NoPartsBenefit;
  const FusionSummary s = fusion_event_summary(events);
  CHECK(s.attempts == 7);
  CHECK(s.evaluated == 6);
  CHECK(s.accepted == 2);
  CHECK(s.counts == std::array<int, 3>{3, 2, 1});
  REQUIRE(s.percent.has_value());
  CHECK((*s.percent)[0] + (*s.percent)[1] + (*s.percent)[2] == doctest::Approx(100.0));
  CHECK((*s.percent)[2] == doctest::Approx(100.0 / 6.0));
}
