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

#ifndef MCM_PROVIDER_H_
#define MCM_PROVIDER_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcm/vector.h"

namespace mcm {

enum class TextKind { kWord, kSentence };

// A text to embed. Lookups use `text` verbatim; no case folding or trimming.
struct TextItem {
  std::string text;
  TextKind kind = TextKind::kSentence;
};

std::vector<TextItem> as_items(std::span<const std::string> texts,
                               TextKind kind = TextKind::kSentence);

// Behavioral contract for anything that turns text into vectors. Implementations
// must be deterministic per instance and safe to call from several threads.
class EmbeddingSource {
 public:
  virtual ~EmbeddingSource() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;

  // One vector per item, in input order. Items are already validated nonempty.
  virtual std::vector<EmbeddingVector> embed(std::span<const TextItem> items) const = 0;
};

// Validates the batch, delegates to the source and checks count and dimension
// of what comes back.
std::vector<EmbeddingVector> embed_batch(const EmbeddingSource& source,
                                         std::span<const TextItem> items);
std::vector<EmbeddingVector> embed_batch(const EmbeddingSource& source,
                                         std::span<const std::string> texts,
                                         TextKind kind = TextKind::kSentence);
EmbeddingVector embed_one(const EmbeddingSource& source, const std::string& text,
                          TextKind kind = TextKind::kSentence);

// Throws DimensionMismatch if the sources disagree on dimension.
void require_same_dim(std::span<const EmbeddingSource* const> sources);

// ---------------------------------------------------------------------------
// In-memory store and the canonical JSON Lines file format.

class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return order_.size(); }

  // Throws FormatError on a duplicate key, DimensionMismatch on a bad vector.
  void insert(std::string text, EmbeddingVector vector);
  const EmbeddingVector* find(const std::string& text) const;

  // Keys in insertion order.
  const std::vector<std::string>& texts() const noexcept { return order_; }

 private:
  std::size_t dim_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, EmbeddingVector> entries_;
};

struct EmbeddingFile {
  std::string source_name;
  EmbeddingStore store;
};

// Header line:  {"format":"mcm-embeddings","version":1,"dim":<d>,"source":"<name>"}
// Record lines: {"text":"<verbatim>","vector":[<d floats>]}
EmbeddingFile read_embedding_file(const std::filesystem::path& path);
EmbeddingFile parse_embedding_lines(std::istream& in);
std::string format_embedding_file(const EmbeddingStore& store, const std::string& source_name);
void write_embedding_file(const std::filesystem::path& path, const EmbeddingStore& store,
                          const std::string& source_name);

// ---------------------------------------------------------------------------
// Sources.

// Backed by an in-memory store; fixtures and embedding files both use it.
class StoreSource : public EmbeddingSource {
 public:
  StoreSource(std::string name, EmbeddingStore store);
  static StoreSource from_map(std::string name,
                              const std::map<std::string, EmbeddingVector>& entries);
  static StoreSource from_file(const std::filesystem::path& path);

  std::string name() const override { return name_; }
  std::size_t dim() const override { return store_.dim(); }
  std::vector<EmbeddingVector> embed(std::span<const TextItem> items) const override;

  const EmbeddingStore& store() const noexcept { return store_; }

 private:
  std::string name_;
  EmbeddingStore store_;
};

// Deterministic bag-of-tokens embedding used as a stand-in for real encoders.
//
// Tokenizer: ASCII-lowercase the text, split on whitespace (space, \t, \n, \v,
// \f, \r). Token key: FNV-1a 64 of the token bytes XOR splitmix64(seed).
// Generator: a splitmix64 stream started at the key; component i is
// (next() >> 11) * 2^-53 * 2 - 1, the token vector is then unit-normalized.
// Sentence vector: normalize(sum of token vectors). If the sum cancels to zero
// (or there are no tokens), the whole lowercased string is hashed as a single
// token with the key additionally XORed by kWholeStringSalt.
EmbeddingVector hash_embed(const TextItem& item, std::size_t dim, std::uint64_t seed);

inline constexpr std::uint64_t kWholeStringSalt = 0x5bd1e9955bd1e995ULL;

class HashSource : public EmbeddingSource {
 public:
  HashSource(std::size_t dim, std::uint64_t seed);

  std::string name() const override;
  std::size_t dim() const override { return dim_; }
  std::vector<EmbeddingVector> embed(std::span<const TextItem> items) const override;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Write-once cache keyed by (source name, text). Readers share a lock;
// concurrent writers of one key keep the first stored value.
class EmbeddingCache {
 public:
  std::optional<EmbeddingVector> lookup(const std::string& source, const std::string& text) const;
  // Returns the value that ends up stored (the existing one if already present).
  EmbeddingVector insert(const std::string& source, const std::string& text,
                         EmbeddingVector vector);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::string, std::string>, EmbeddingVector> entries_;
};

class CachedSource : public EmbeddingSource {
 public:
  explicit CachedSource(std::shared_ptr<const EmbeddingSource> inner,
                        std::shared_ptr<EmbeddingCache> cache = nullptr);

  std::string name() const override { return inner_->name(); }
  std::size_t dim() const override { return inner_->dim(); }
  std::vector<EmbeddingVector> embed(std::span<const TextItem> items) const override;

  const EmbeddingCache& cache() const noexcept { return *cache_; }

 private:
  std::shared_ptr<const EmbeddingSource> inner_;
  std::shared_ptr<EmbeddingCache> cache_;
};

inline std::shared_ptr<CachedSource> cached(std::shared_ptr<const EmbeddingSource> inner) {
  return std::make_shared<CachedSource>(std::move(inner));
}

// ---------------------------------------------------------------------------
// HTTP contract: POST <endpoint>/embed with {"texts":[...]}, answered by
// 200 {"dim":d,"vectors":[[...],...]} or 4xx/5xx {"error":"..."}.

inline constexpr std::size_t kRemoteChunkSize = 64;

struct RemoteOptions {
  std::chrono::milliseconds timeout{10000};
  std::size_t chunk_size = kRemoteChunkSize;
};

std::vector<EmbeddingVector> remote_embed(const std::string& endpoint,
                                          std::span<const TextItem> items,
                                          const RemoteOptions& options = {});

class RemoteSource : public EmbeddingSource {
 public:
  // With expected_dim == 0 the dimension is learned from the first response
  // (dim() issues a one-text probe if nothing has been fetched yet).
  explicit RemoteSource(std::string endpoint, RemoteOptions options = {},
                        std::size_t expected_dim = 0);

  std::string name() const override { return "remote:" + endpoint_; }
  std::size_t dim() const override;
  std::vector<EmbeddingVector> embed(std::span<const TextItem> items) const override;

 private:
  std::string endpoint_;
  RemoteOptions options_;
  mutable std::mutex mutex_;
  mutable std::size_t dim_;
};

}  // namespace mcm

#endif  // MCM_PROVIDER_H_
