// Copyright 2026 The MCM Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcm/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "mcm/error.h"
#include "test_util.h"

namespace mcm {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

TEST(IncompleteBeta, MatchesBoost) {
  for (double a : {0.5, 1.0, 2.5, 10.0, 49.0}) {
    for (double b : {0.5, 1.0, 3.0, 20.0}) {
      for (double x : {0.0, 1e-6, 0.1, 0.37, 0.5, 0.83, 0.999, 1.0}) {
        const double expect = boost::math::ibeta(a, b, x);
        EXPECT_NEAR(regularized_incomplete_beta(a, b, x), expect, 1e-12 + 1e-10 * expect)
            << a << " " << b << " " << x;
      }
    }
  }
  EXPECT_THROW(regularized_incomplete_beta(1, 1, 1.5), Error);
  EXPECT_THROW(regularized_incomplete_beta(0, 1, 0.5), Error);
}

TEST(StudentT, CdfMatchesQuadratureOfDensity) {
  for (double dof : {1.0, 5.0, 30.0, 98.0}) {
    const double c = std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) /
                     std::sqrt(dof * M_PI);
    auto pdf = [&](double t) { return c * std::pow(1 + t * t / dof, -(dof + 1) / 2); };
    for (int i = 0; i < 20; ++i) {
      const double t = -6.0 + 12.0 * i / 19.0;
      // CDF(t) = 1/2 + integral_0^t pdf, integrated independently.
      const double integral =
          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, 0.0, t, 15, 1e-14);
      EXPECT_NEAR(student_t_cdf(t, dof), 0.5 + integral, 1e-8) << dof << " " << t;
    }
  }
}

TEST(StudentT, SymmetryAndTails) {
  EXPECT_EQ(student_t_cdf(0.0, 7.0), 0.5);
  EXPECT_NEAR(student_t_cdf(1.3, 4) + student_t_cdf(-1.3, 4), 1.0, 1e-14);
  EXPECT_EQ(student_t_two_tailed_p(0.0, 10), 1.0);
  EXPECT_EQ(student_t_two_tailed_p(INFINITY, 10), 0.0);
  // dof = 1 is Cauchy: P(|T| > 1) = 1/2.
  EXPECT_NEAR(student_t_two_tailed_p(1.0, 1.0), 0.5, 1e-12);
}

TEST(Pearson, Examples) {
  std::vector<double> x{1, 2, 3}, y{2, 4, 6}, z{3, 2, 1};
  EXPECT_NEAR(pearson(x, y), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, z), -1.0, 1e-15);
  // Closed form: sxy = 5.5, sxx = 5, syy = 8.75 -> 5.5 / sqrt(43.75).
  std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 5};
  EXPECT_NEAR(pearson(a, b), 0.8315218406202999, 1e-15);
}

TEST(Pearson, Errors) {
  std::vector<double> two{1, 2}, three{1, 2, 3}, four{1, 2, 3, 4}, flat{2, 2, 2};
  EXPECT_EQ(code_of([&] { pearson(two, two); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of([&] { pearson(three, four); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(code_of([&] { pearson(three, flat); }), ErrorCode::kZeroVariance);
  std::vector<double> bad{1, NAN, 3};
  EXPECT_THROW(pearson(three, bad), Error);
}

TEST(Pearson, SymmetricAndAffineInvariant) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 3 + i % 18;
    auto x = testing::random_values(rng, n);
    auto y = testing::random_values(rng, n);
    const double r = pearson(x, y);
    EXPECT_NEAR(r, pearson(y, x), 1e-12);
    auto ax = x;
    for (auto& v : ax) v = 3.7 * v - 12.0;
    EXPECT_NEAR(r, pearson(ax, y), 1e-9);
    EXPECT_LE(std::abs(r), 1.0);
  }
}

TEST(PearsonP, ExamplesAndMonotonicity) {
  EXPECT_NEAR(pearson_p(0.0, 10), 1.0, 1e-14);
  EXPECT_EQ(pearson_p(1.0, 10), 0.0);
  EXPECT_EQ(pearson_p(-1.0, 10), 0.0);
  double prev = 1.0;
  for (double r = 0.05; r < 1.0; r += 0.05) {
    const double p = pearson_p(r, 30);
    EXPECT_LT(p, prev);
    EXPECT_NEAR(p, pearson_p(-r, 30), 1e-15);
    prev = p;
  }
  EXPECT_EQ(code_of([] { pearson_p(0.5, 2); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of([] { pearson_p(1.5, 10); }), ErrorCode::kInvalidInput);
}

TEST(PearsonP, AgreesWithTStatisticRoute) {
  for (double r : {0.1, 0.3, 0.6, 0.73, 0.88}) {
    for (std::size_t n : {5u, 20u, 100u}) {
      const double t = r * std::sqrt((n - 2) / (1 - r * r));
      const double expect = boost::math::ibeta((n - 2) / 2.0, 0.5, (n - 2) / (n - 2 + t * t));
      EXPECT_NEAR(pearson_p(r, n), expect, 1e-10 * expect + 1e-300) << r << " " << n;
    }
  }
}

TEST(Stars, Boundaries) {
  EXPECT_EQ(significance_stars(0.03), 1);
  EXPECT_EQ(significance_stars(0.0005), 3);
  EXPECT_EQ(significance_stars(0.05), 0);
  EXPECT_EQ(significance_stars(0.01), 1);
  EXPECT_EQ(significance_stars(0.001), 2);
  EXPECT_EQ(significance_stars(std::nextafter(0.001, 0.0)), 3);
  EXPECT_EQ(significance_stars(1.0), 0);
}

TEST(Correlate, Report) {
  std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 5};
  auto rep = correlate(a, b);
  EXPECT_EQ(rep.n, 4u);
  EXPECT_NEAR(rep.r, 0.8315218406202999, 1e-15);
  EXPECT_NEAR(rep.p_two_tailed, pearson_p(rep.r, 4), 1e-15);
  EXPECT_EQ(rep.stars, 0);
}

TEST(Welch, IdenticalSamples) {
  std::vector<double> x{1, 4, 2, 8};
  auto rep = welch_t_test(x, x);
  EXPECT_EQ(rep.t_stat, 0.0);
  EXPECT_EQ(rep.p_two_tailed, 1.0);
}

TEST(Welch, HandEvaluatedFormula) {
  // means 0.25 / 10.25, variances 0.25 each, n = 4:
  // t = -10 / sqrt(0.125) = -28.2842712474619, dof = 0.125^2 / (2 * 0.0625^2 / 3) = 6.
  std::vector<double> x{0, 0, 0, 1}, y{10, 10, 10, 11};
  auto rep = welch_t_test(x, y);
  EXPECT_NEAR(rep.t_stat, -28.2842712474619, 1e-12);
  EXPECT_NEAR(rep.dof, 6.0, 1e-12);
  EXPECT_NEAR(rep.p_two_tailed, 1.2927505965951296e-07, 1e-18);
  EXPECT_NEAR(rep.std_x, 0.5, 1e-15);
  EXPECT_FALSE(rep.pooled);
}

TEST(Welch, PermutationOracleAgreesOnSignificance) {
  // All 70 relabelings of 8 values into 4/4 groups: the observed split is the most
  // extreme, so the exact two-sided permutation p is 2/70.
  std::vector<double> x{0, 0, 0, 1}, y{10, 10, 10, 11};
  std::vector<double> all{0, 0, 0, 1, 10, 10, 10, 11};
  const double observed = std::abs(welch_t_test(x, y).t_stat);
  std::vector<int> mask{0, 0, 0, 0, 1, 1, 1, 1};
  int extreme = 0, total = 0;
  do {
    std::vector<double> gx, gy;
    for (int i = 0; i < 8; ++i) (mask[i] ? gy : gx).push_back(all[i]);
    ++total;
    if (std::abs(welch_t_test(gx, gy).t_stat) >= observed - 1e-9) ++extreme;
  } while (std::next_permutation(mask.begin(), mask.end()));
  EXPECT_EQ(total, 70);
  EXPECT_EQ(extreme, 2);
  EXPECT_LT(welch_t_test(x, y).p_two_tailed, double(extreme) / total);
}

TEST(Welch, SwapFlipsSign) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 20; ++i) {
    auto x = testing::random_values(rng, 3 + i % 5);
    auto y = testing::random_values(rng, 2 + i % 7, 0.0, 2.0);
    auto a = welch_t_test(x, y);
    auto b = welch_t_test(y, x);
    EXPECT_NEAR(a.t_stat, -b.t_stat, 1e-12);
    EXPECT_NEAR(a.p_two_tailed, b.p_two_tailed, 1e-12);
    EXPECT_NEAR(a.dof, b.dof, 1e-12);
  }
}

TEST(Welch, ZeroVarianceAndErrors) {
  std::vector<double> a{1, 1, 1}, b{2, 2};
  auto rep = welch_t_test(a, b);
  EXPECT_TRUE(std::isinf(rep.t_stat));
  EXPECT_EQ(rep.p_two_tailed, 0.0);
  std::vector<double> one{1};
  EXPECT_EQ(code_of([&] { welch_t_test(one, b); }), ErrorCode::kInsufficientData);
}

TEST(PooledT, EqualSizesMatchWelchT) {
  std::vector<double> x{1, 2, 3, 5}, y{2, 4, 6, 9};
  auto w = welch_t_test(x, y);
  auto p = pooled_t_test(x, y);
  EXPECT_NEAR(w.t_stat, p.t_stat, 1e-12);
  EXPECT_EQ(p.dof, 6.0);
  EXPECT_TRUE(p.pooled);
}

TEST(Afinn, ParseAndValidate) {
  std::istringstream in("good\t3\nbad\t-3\ncan't stand\t-3\nnice\t2\nevil\t-3\n");
  auto lex = parse_afinn(in);
  EXPECT_EQ(lex.size(), 5u);
  EXPECT_EQ(lex.at("can't stand"), -3);

  std::vector<std::string> dos{"good", "nice", "walk"}, donts{"bad", "evil", "run"};
  auto v = afinn_validate(dos, donts, lex, false);
  EXPECT_NEAR(v.test.mean_x, 5.0 / 3, 1e-12);
  EXPECT_NEAR(v.test.mean_y, -2.0, 1e-12);
  EXPECT_EQ(v.rated_dos, 2u);
  auto dropped = afinn_validate(dos, donts, lex, true);
  EXPECT_EQ(dropped.test.n_x, 2u);
  EXPECT_NEAR(dropped.test.mean_x, 2.5, 1e-12);
}

TEST(Afinn, Edges) {
  Lexicon lex{{"good", 3}, {"bad", -3}};
  std::vector<std::string> dos{"x", "y"}, donts{"z", "w"};
  auto v = afinn_validate(dos, donts, lex, false);
  EXPECT_EQ(v.test.mean_x, 0.0);
  EXPECT_EQ(v.test.mean_y, 0.0);
  EXPECT_EQ(v.test.t_stat, 0.0);
  std::vector<std::string> one_do{"good", "x"}, one_dont{"bad", "y"};
  EXPECT_EQ(code_of([&] { afinn_validate(one_do, one_dont, lex, true); }),
            ErrorCode::kInsufficientData);
  EXPECT_EQ(code_of([&] { afinn_validate(dos, donts, lex, true); }), ErrorCode::kEmptyAfterFilter);
  std::istringstream bad("good 3\n");
  EXPECT_THROW(parse_afinn(bad), Error);
}

}  // namespace
}  // namespace mcm
