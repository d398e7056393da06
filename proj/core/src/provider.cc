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

#include "mcm/provider.h"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/format.h"

namespace mcm {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "mcm-embeddings";
constexpr int kFormatVersion = 1;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t splitmix64(std::uint64_t x) { return splitmix64_next(x); }

std::vector<double> token_vector(std::uint64_t key, std::size_t dim) {
  std::vector<double> v(dim);
  std::uint64_t state = key;
  double sq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double u = static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
    v[i] = 2.0 * u - 1.0;
    sq += v[i] * v[i];
  }
  const double n = std::sqrt(sq);
  if (n >= kZeroNormThreshold) {
    for (double& x : v) x /= n;
  }
  return v;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

void check_items(std::span<const TextItem> items) {
  if (items.empty()) throw Error(ErrorCode::kEmptyInput, "no texts to embed");
  for (const auto& item : items) {
    if (item.text.empty()) throw Error(ErrorCode::kEmptyText, "cannot embed an empty text");
  }
}

EmbeddingVector vector_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) throw Error(ErrorCode::kFormat, "vector must be a JSON array");
  std::vector<double> values;
  values.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorCode::kFormat, "vector entries must be numbers");
    values.push_back(x.get<double>());
  }
  if (values.size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "vector has " + std::to_string(values.size()) +
                                                   " components, header says " +
                                                   std::to_string(dim));
  }
  return EmbeddingVector(std::move(values));
}

}  // namespace

std::vector<TextItem> as_items(std::span<const std::string> texts, TextKind kind) {
  std::vector<TextItem> items;
  items.reserve(texts.size());
  for (const auto& t : texts) items.push_back({t, kind});
  return items;
}

std::vector<EmbeddingVector> embed_batch(const EmbeddingSource& source,
                                         std::span<const TextItem> items) {
  check_items(items);
  auto out = source.embed(items);
  if (out.size() != items.size()) {
    throw Error(ErrorCode::kProtocol, source.name() + " returned " + std::to_string(out.size()) +
                                          " vectors for " + std::to_string(items.size()) +
                                          " texts");
  }
  require_dim(out, source.dim());
  return out;
}

std::vector<EmbeddingVector> embed_batch(const EmbeddingSource& source,
                                         std::span<const std::string> texts, TextKind kind) {
  const auto items = as_items(texts, kind);
  return embed_batch(source, items);
}

EmbeddingVector embed_one(const EmbeddingSource& source, const std::string& text,
                          TextKind kind) {
  const TextItem item{text, kind};
  return embed_batch(source, std::span<const TextItem>(&item, 1)).front();
}

void require_same_dim(std::span<const EmbeddingSource* const> sources) {
  if (sources.empty()) return;
  const std::size_t dim = sources.front()->dim();
  for (const auto* s : sources) {
    if (s->dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, s->name() + " has dim " +
                                                     std::to_string(s->dim()) + ", expected " +
                                                     std::to_string(dim));
    }
  }
}

// ---------------------------------------------------------------------------

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidInput, "store dimension must be positive");
}

void EmbeddingStore::insert(std::string text, EmbeddingVector vector) {
  if (vector.dim() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "\"" + text + "\" has dim " +
                                                   std::to_string(vector.dim()) + ", store has " +
                                                   std::to_string(dim_));
  }
  if (entries_.count(text)) {
    throw Error(ErrorCode::kFormat, "duplicate text \"" + text + "\"");
  }
  order_.push_back(text);
  entries_.emplace(std::move(text), std::move(vector));
}

const EmbeddingVector* EmbeddingStore::find(const std::string& text) const {
  auto it = entries_.find(text);
  return it == entries_.end() ? nullptr : &it->second;
}

EmbeddingFile parse_embedding_lines(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<EmbeddingFile> file;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!file) {
      if (!j.is_object() || j.value("format", "") != kFormatName ||
          j.value("version", 0) != kFormatVersion || !j.contains("dim") ||
          !j["dim"].is_number_unsigned()) {
        throw Error(ErrorCode::kFormat, "missing or invalid mcm-embeddings v1 header");
      }
      file.emplace(EmbeddingFile{j.value("source", ""), EmbeddingStore(j["dim"].get<std::size_t>())});
      continue;
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string() || !j.contains("vector")) {
      throw Error(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": expected {text, vector}");
    }
    try {
      file->store.insert(j["text"].get<std::string>(),
                         vector_from_json(j["vector"], file->store.dim()));
    } catch (const Error& e) {
      throw Error(e.code() == ErrorCode::kDimensionMismatch ? e.code() : ErrorCode::kFormat,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!file) throw Error(ErrorCode::kFormat, "empty embedding file");
  return std::move(*file);
}

EmbeddingFile read_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_embedding_lines(in);
}

std::string format_embedding_file(const EmbeddingStore& store, const std::string& source_name) {
  nlohmann::ordered_json header = {{"format", kFormatName},
                                    {"version", kFormatVersion},
                                    {"dim", store.dim()},
                                    {"source", source_name}};
  std::string out = header.dump() + "\n";
  for (const auto& text : store.texts()) {
    out += "{\"text\":" + json(text).dump() + ",\"vector\":[";
    out += join_doubles(store.find(text)->components(), ",");
    out += "]}\n";
  }
  return out;
}

void write_embedding_file(const std::filesystem::path& path, const EmbeddingStore& store,
                          const std::string& source_name) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << format_embedding_file(store, source_name);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------

StoreSource::StoreSource(std::string name, EmbeddingStore store)
    : name_(std::move(name)), store_(std::move(store)) {}

StoreSource StoreSource::from_map(std::string name,
                                  const std::map<std::string, EmbeddingVector>& entries) {
  if (entries.empty()) throw Error(ErrorCode::kEmptyInput, "fixture has no entries");
  EmbeddingStore store(entries.begin()->second.dim());
  for (const auto& [text, v] : entries) store.insert(text, v);
  return StoreSource(std::move(name), std::move(store));
}

StoreSource StoreSource::from_file(const std::filesystem::path& path) {
  auto file = read_embedding_file(path);
  std::string name = file.source_name.empty() ? "file:" + path.filename().string()
                                              : file.source_name;
  return StoreSource(std::move(name), std::move(file.store));
}

std::vector<EmbeddingVector> StoreSource::embed(std::span<const TextItem> items) const {
  std::vector<EmbeddingVector> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    const auto* v = store_.find(item.text);
    if (!v) throw MissingEmbedding(item.text);
    out.push_back(*v);
  }
  return out;
}

// ---------------------------------------------------------------------------

EmbeddingVector hash_embed(const TextItem& item, std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw Error(ErrorCode::kInvalidInput, "hash embedding needs dim >= 2");
  if (item.text.empty()) throw Error(ErrorCode::kEmptyText, "cannot embed an empty text");
  const std::string lowered = ascii_lower(item.text);
  const std::uint64_t seed_mix = splitmix64(seed);

  std::vector<double> sum(dim, 0.0);
  std::size_t pos = 0;
  while (pos < lowered.size()) {
    while (pos < lowered.size() && is_space(lowered[pos])) ++pos;
    std::size_t end = pos;
    while (end < lowered.size() && !is_space(lowered[end])) ++end;
    if (end > pos) {
      const auto tv = token_vector(fnv1a64(std::string_view(lowered).substr(pos, end - pos)) ^ seed_mix, dim);
      for (std::size_t i = 0; i < dim; ++i) sum[i] += tv[i];
    }
    pos = end;
  }
  double sq = 0.0;
  for (double x : sum) sq += x * x;
  if (std::sqrt(sq) < kZeroNormThreshold) {
    sum = token_vector(fnv1a64(lowered) ^ seed_mix ^ kWholeStringSalt, dim);
  }
  return normalize(EmbeddingVector(std::move(sum)));
}

HashSource::HashSource(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 2) throw Error(ErrorCode::kInvalidInput, "hash embedding needs dim >= 2");
}

std::string HashSource::name() const {
  return "hash:" + std::to_string(seed_) + ":" + std::to_string(dim_);
}

std::vector<EmbeddingVector> HashSource::embed(std::span<const TextItem> items) const {
  std::vector<EmbeddingVector> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(hash_embed(item, dim_, seed_));
  return out;
}

// ---------------------------------------------------------------------------

std::optional<EmbeddingVector> EmbeddingCache::lookup(const std::string& source,
                                                      const std::string& text) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find({source, text});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

EmbeddingVector EmbeddingCache::insert(const std::string& source, const std::string& text,
                                       EmbeddingVector vector) {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.try_emplace({source, text}, std::move(vector));
  return it->second;
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

CachedSource::CachedSource(std::shared_ptr<const EmbeddingSource> inner,
                           std::shared_ptr<EmbeddingCache> cache)
    : inner_(std::move(inner)),
      cache_(cache ? std::move(cache) : std::make_shared<EmbeddingCache>()) {
  if (!inner_) throw Error(ErrorCode::kInvalidInput, "cached source needs an inner source");
}

std::vector<EmbeddingVector> CachedSource::embed(std::span<const TextItem> items) const {
  const std::string source = inner_->name();
  std::vector<std::optional<EmbeddingVector>> found(items.size());
  std::vector<TextItem> misses;
  std::unordered_set<std::string> queued;
  for (std::size_t i = 0; i < items.size(); ++i) {
    found[i] = cache_->lookup(source, items[i].text);
    if (!found[i] && queued.insert(items[i].text).second) misses.push_back(items[i]);
  }
  if (!misses.empty()) {
    // Inner failures propagate before anything is stored.
    auto fetched = embed_batch(*inner_, misses);
    std::unordered_map<std::string, EmbeddingVector> stored;
    for (std::size_t i = 0; i < misses.size(); ++i) {
      stored.emplace(misses[i].text, cache_->insert(source, misses[i].text, std::move(fetched[i])));
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!found[i]) found[i] = stored.at(items[i].text);
    }
  }
  std::vector<EmbeddingVector> out;
  out.reserve(items.size());
  for (auto& v : found) out.push_back(std::move(*v));
  return out;
}

}  // namespace mcm
