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

#ifndef MCM_STATS_H_
#define MCM_STATS_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mcm {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction
// (convergence 1e-12, at most 500 iterations).
double regularized_incomplete_beta(double a, double b, double x);

// Student t with `dof` degrees of freedom (dof > 0, need not be an integer).
double student_t_cdf(double t, double dof);
double student_t_two_tailed_p(double t, double dof);

// Standard product-moment correlation; n >= 3, both samples non-constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Two-tailed p of r under H0 with n - 2 degrees of freedom; |r| == 1 gives 0.
double pearson_p(double r, std::size_t n);

// 3 if p < 0.001, 2 if p < 0.01, 1 if p < 0.05, else 0.
int significance_stars(double p);

struct CorrelationReport {
  double r = 0.0;
  std::size_t n = 0;
  double t_stat = 0.0;
  double p_two_tailed = 1.0;
  int stars = 0;
};

CorrelationReport correlate(std::span<const double> x, std::span<const double> y);

struct TTestReport {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double std_x = 0.0;  // sample std, n - 1 denominator
  double std_y = 0.0;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  double t_stat = 0.0;
  double p_two_tailed = 1.0;
  double dof = 0.0;
  bool pooled = false;
};

// Unequal-variance t with Welch-Satterthwaite degrees of freedom.
TTestReport welch_t_test(std::span<const double> x, std::span<const double> y);

// Classic Student t with pooled variance and n_x + n_y - 2 degrees of freedom.
TTestReport pooled_t_test(std::span<const double> x, std::span<const double> y);

using Lexicon = std::map<std::string, int>;

// Tab-separated "entry<TAB>rating" per line; the entry may contain spaces.
Lexicon parse_afinn(std::istream& in);
Lexicon load_afinn(const std::filesystem::path& path);

struct AfinnValidation {
  TTestReport test;
  std::vector<double> ratings_dos;
  std::vector<double> ratings_donts;
  std::size_t rated_dos = 0;    // words found in the lexicon
  std::size_t rated_donts = 0;
};

// Exact lookup. Unrated words count as 0, or are dropped when drop_unrated.
AfinnValidation afinn_validate(std::span<const std::string> dos,
                               std::span<const std::string> donts, const Lexicon& lexicon,
                               bool drop_unrated, bool pooled = false);

}  // namespace mcm

#endif  // MCM_STATS_H_
