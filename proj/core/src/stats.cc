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
#include <stdexcept>
#include <fstream>
#include <limits>
#include <string>

#include "mcm/error.h"

namespace mcm {
namespace {

constexpr double kBetaEps = 1e-12;
constexpr int kBetaMaxIter = 500;
constexpr double kTiny = 1e-300;

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "sample contains NaN or infinity");
  }
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kBetaEps) break;
  }
  return h;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // n - 1 denominator
};

Moments moments(std::span<const double> v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(v.size() - 1);
  return m;
}

TTestReport t_test(std::span<const double> x, std::span<const double> y, bool pooled) {
  if (x.size() < 2 || y.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "t-test needs at least 2 values per group");
  }
  require_finite(x);
  require_finite(y);
  const auto mx = moments(x);
  const auto my = moments(y);
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());

  TTestReport r;
  r.mean_x = mx.mean;
  r.mean_y = my.mean;
  r.std_x = std::sqrt(mx.var);
  r.std_y = std::sqrt(my.var);
  r.n_x = x.size();
  r.n_y = y.size();
  r.pooled = pooled;

  double se2;
  if (pooled) {
    r.dof = nx + ny - 2.0;
    const double sp2 = ((nx - 1.0) * mx.var + (ny - 1.0) * my.var) / r.dof;
    se2 = sp2 * (1.0 / nx + 1.0 / ny);
  } else {
    const double vx = mx.var / nx;
    const double vy = my.var / ny;
    se2 = vx + vy;
    const double denom = vx * vx / (nx - 1.0) + vy * vy / (ny - 1.0);
    r.dof = denom > 0.0 ? se2 * se2 / denom : nx + ny - 2.0;
  }

  const double diff = mx.mean - my.mean;
  if (se2 <= 0.0) {
    if (diff == 0.0) {
      r.t_stat = 0.0;
      r.p_two_tailed = 1.0;
    } else {
      r.t_stat = std::copysign(std::numeric_limits<double>::infinity(), diff);
      r.p_two_tailed = 0.0;
    }
    return r;
  }
  r.t_stat = diff / std::sqrt(se2);
  r.p_two_tailed = student_t_two_tailed_p(r.t_stat, r.dof);
  return r;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "incomplete beta needs a, b > 0 and 0 <= x <= 1");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double dof) {
  if (!(dof > 0.0) || std::isnan(t)) throw Error(ErrorCode::kInvalidInput, "bad t or dof");
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

double student_t_cdf(double t, double dof) {
  const double tail = student_t_two_tailed_p(t, dof) / 2.0;
  return t < 0.0 ? tail : 1.0 - tail;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " values");
  }
  if (x.size() < 3) throw Error(ErrorCode::kInvalidInput, "correlation needs n >= 3");
  require_finite(x);
  require_finite(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::kZeroVariance, "a sample is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_p(double r, std::size_t n) {
  if (n < 3 || !(std::abs(r) <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "pearson_p needs n >= 3 and |r| <= 1");
  }
  if (std::abs(r) == 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  // I_{dof/(dof+t^2)}(dof/2, 1/2) with t^2 = r^2 dof / (1 - r^2) simplifies to x = 1 - r^2.
  return regularized_incomplete_beta(dof / 2.0, 0.5, 1.0 - r * r);
}

int significance_stars(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidInput, "p must lie in [0, 1]");
  if (p < 0.001) return 3;
  if (p < 0.01) return 2;
  if (p < 0.05) return 1;
  return 0;
}

CorrelationReport correlate(std::span<const double> x, std::span<const double> y) {
  CorrelationReport rep;
  rep.r = pearson(x, y);
  rep.n = x.size();
  const double one_minus = 1.0 - rep.r * rep.r;
  rep.t_stat = one_minus > 0.0
                   ? rep.r * std::sqrt(static_cast<double>(rep.n - 2) / one_minus)
                   : std::copysign(std::numeric_limits<double>::infinity(), rep.r);
  rep.p_two_tailed = pearson_p(rep.r, rep.n);
  rep.stars = significance_stars(rep.p_two_tailed);
  return rep;
}

TTestReport welch_t_test(std::span<const double> x, std::span<const double> y) {
  return t_test(x, y, false);
}

TTestReport pooled_t_test(std::span<const double> x, std::span<const double> y) {
  return t_test(x, y, true);
}

Lexicon parse_afinn(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kFormat, "AFINN line " + std::to_string(line_no) + " lacks a tab");
    }
    int rating = 0;
    try {
      std::size_t used = 0;
      rating = std::stoi(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kFormat, "AFINN line " + std::to_string(line_no) + ": bad rating");
    }
    lex[line.substr(0, tab)] = rating;
  }
  return lex;
}

Lexicon load_afinn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_afinn(in);
}

AfinnValidation afinn_validate(std::span<const std::string> dos,
                               std::span<const std::string> donts, const Lexicon& lexicon,
                               bool drop_unrated, bool pooled) {
  if (dos.empty() || donts.empty()) throw Error(ErrorCode::kEmptyInput, "word lists are empty");
  AfinnValidation out;
  const auto rate = [&](std::span<const std::string> words, std::vector<double>& ratings,
                        std::size_t& rated) {
    for (const auto& w : words) {
      auto it = lexicon.find(w);
      if (it != lexicon.end()) {
        ratings.push_back(it->second);
        ++rated;
      } else if (!drop_unrated) {
        ratings.push_back(0.0);
      }
    }
  };
  rate(dos, out.ratings_dos, out.rated_dos);
  rate(donts, out.ratings_donts, out.rated_donts);
  if (out.ratings_dos.empty() || out.ratings_donts.empty()) {
    throw Error(ErrorCode::kEmptyAfterFilter, "no rated words left in a group");
  }
  out.test = t_test(out.ratings_dos, out.ratings_donts, pooled);
  return out;
}

}  // namespace mcm
