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

#include "mcm/vector.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mcm/error.h"
#include "mcm/format.h"
#include "test_util.h"

namespace mcm {
namespace {

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    FAIL() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(EmbeddingVector, RejectsEmptyAndNonFinite) {
  expect_code(ErrorCode::kEmptyInput, [] { EmbeddingVector(std::vector<double>{}); });
  expect_code(ErrorCode::kNonFinite, [] { EmbeddingVector({1.0, NAN}); });
  expect_code(ErrorCode::kNonFinite, [] { EmbeddingVector({INFINITY}); });
}

TEST(Cosine, Examples) {
  EXPECT_EQ(cosine({1, 0, 0}, {1, 0, 0}), 1.0);
  EXPECT_EQ(cosine({1, 0}, {0, 1}), 0.0);
  EXPECT_NEAR(cosine({1, 2, 2}, {2, 1, 2}), 8.0 / 9.0, 1e-15);
}

TEST(Cosine, Errors) {
  expect_code(ErrorCode::kDimensionMismatch, [] { cosine({1, 0}, {1, 0, 0}); });
  expect_code(ErrorCode::kZeroVector, [] { cosine({0, 0}, {1, 0}); });
  expect_code(ErrorCode::kZeroVector, [] { cosine({1, 0}, {1e-13, 0}); });
}

TEST(Cosine, PropertiesOnRandomVectors) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto u = testing::random_vector(rng, 1 + i % 9);
    auto v = testing::random_vector(rng, u.dim());
    const double c = cosine(u, v);
    EXPECT_LE(std::abs(c), 1.0);
    EXPECT_NEAR(c, cosine(v, u), 1e-15);
    EXPECT_NEAR(c, cosine(scale(u, 3.5), scale(v, 0.25)), 1e-12);
    EXPECT_NEAR(cosine(u, u), 1.0, 1e-12);
  }
}

TEST(Cosine, ClampsRoundingOvershoot) {
  EmbeddingVector u{0.1, 0.2, 0.3};
  EXPECT_LE(cosine(u, scale(u, 1e6)), 1.0);
  EXPECT_GE(cosine(u, scale(u, -1e6)), -1.0);
}

TEST(MeanEmbedding, Examples) {
  std::vector<EmbeddingVector> one{{1, 1}};
  EXPECT_EQ(mean_embedding(one), (EmbeddingVector{1, 1}));
  std::vector<EmbeddingVector> two{{0, 0}, {2, 4}};
  EXPECT_EQ(mean_embedding(two), (EmbeddingVector{1, 2}));
  std::vector<EmbeddingVector> basis{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  auto m = mean_embedding(basis);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(m[i], 1.0 / 3.0, 1e-15);
}

TEST(MeanEmbedding, Errors) {
  expect_code(ErrorCode::kEmptyInput, [] { mean_embedding(std::span<const EmbeddingVector>{}); });
  std::vector<EmbeddingVector> mixed{{1, 0}, {1, 0, 0}};
  expect_code(ErrorCode::kDimensionMismatch, [&] { mean_embedding(mixed); });
}

TEST(Normalize, Examples) {
  auto n = normalize({3, 4});
  EXPECT_NEAR(n[0], 0.6, 1e-15);
  EXPECT_NEAR(n[1], 0.8, 1e-15);
  EXPECT_EQ(normalize({1, 0, 0}), (EmbeddingVector{1, 0, 0}));
  expect_code(ErrorCode::kZeroVector, [] { normalize({0, 0}); });
}

TEST(Normalize, UnitLengthAndIdempotent) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto v = testing::random_vector(rng, 1 + i % 12);
    auto n = normalize(v);
    EXPECT_NEAR(norm(n), 1.0, 1e-12);
    auto nn = normalize(n);
    for (std::size_t k = 0; k < n.dim(); ++k) EXPECT_NEAR(nn[k], n[k], 1e-15);
  }
}

TEST(Arithmetic, AddSubtractScale) {
  EXPECT_EQ(add({1, 2}, {3, 4}), (EmbeddingVector{4, 6}));
  EXPECT_EQ(subtract({1, 2}, {3, 4}), (EmbeddingVector{-2, -2}));
  EXPECT_EQ(scale({1, -2}, 2.0), (EmbeddingVector{2, -4}));
  EXPECT_EQ(dot({1, 2, 3}, {4, 5, 6}), 32.0);
  expect_code(ErrorCode::kDimensionMismatch, [] { add({1}, {1, 2}); });
}

TEST(Format, ShortestRoundTrip) {
  std::mt19937_64 rng(3);
  for (double v : testing::random_values(rng, 500, -1e6, 1e6)) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  expect_code(ErrorCode::kFormat, [] { parse_double("1.5x"); });
  expect_code(ErrorCode::kFormat, [] { parse_double(""); });
}

}  // namespace
}  // namespace mcm
