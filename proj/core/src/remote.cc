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

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/provider.h"

namespace mcm {
namespace {

using nlohmann::json;

std::string strip_trailing_slash(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

std::vector<EmbeddingVector> post_chunk(httplib::Client& client, std::span<const TextItem> chunk,
                                        std::size_t& dim) {
  json request = {{"texts", json::array()}};
  for (const auto& item : chunk) request["texts"].push_back(item.text);

  auto res = client.Post("/embed", request.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kTransport, "POST /embed failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    std::string message = res->body;
    try {
      auto body = json::parse(res->body);
      if (body.is_object() && body.contains("error") && body["error"].is_string()) {
        message = body["error"].get<std::string>();
      }
    } catch (const json::exception&) {
    }
    throw Error(ErrorCode::kTransport,
                "server answered " + std::to_string(res->status) + ": " + message);
  }

  json body;
  try {
    body = json::parse(res->body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("malformed response body: ") + e.what());
  }
  if (!body.is_object() || !body.contains("dim") || !body["dim"].is_number_unsigned() ||
      !body.contains("vectors") || !body["vectors"].is_array()) {
    throw Error(ErrorCode::kProtocol, "response must be {\"dim\":d,\"vectors\":[...]}");
  }
  const auto reported = body["dim"].get<std::size_t>();
  if (reported == 0) throw Error(ErrorCode::kProtocol, "response dim is zero");
  if (dim == 0) dim = reported;
  if (reported != dim) {
    throw Error(ErrorCode::kProtocol, "response dim " + std::to_string(reported) +
                                          " differs from " + std::to_string(dim));
  }
  const auto& vectors = body["vectors"];
  if (vectors.size() != chunk.size()) {
    throw Error(ErrorCode::kProtocol, "got " + std::to_string(vectors.size()) +
                                          " vectors for " + std::to_string(chunk.size()) + " texts");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(chunk.size());
  for (const auto& v : vectors) {
    if (!v.is_array() || v.size() != dim) {
      throw Error(ErrorCode::kProtocol, "vector with wrong dimension in response");
    }
    std::vector<double> values;
    values.reserve(dim);
    for (const auto& x : v) {
      if (!x.is_number()) throw Error(ErrorCode::kProtocol, "non-numeric vector entry");
      values.push_back(x.get<double>());
    }
    try {
      out.emplace_back(std::move(values));
    } catch (const Error& e) {
      throw Error(ErrorCode::kProtocol, e.what());
    }
  }
  return out;
}

std::vector<EmbeddingVector> remote_embed_with_dim(const std::string& endpoint,
                                                   std::span<const TextItem> items,
                                                   const RemoteOptions& options,
                                                   std::size_t& dim) {
  if (items.empty()) throw Error(ErrorCode::kEmptyInput, "no texts to embed");
  if (options.chunk_size == 0) throw Error(ErrorCode::kInvalidInput, "chunk size must be positive");

  httplib::Client client(strip_trailing_slash(endpoint));
  if (!client.is_valid()) throw Error(ErrorCode::kTransport, "invalid endpoint " + endpoint);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::vector<EmbeddingVector> out;
  out.reserve(items.size());
  for (std::size_t start = 0; start < items.size(); start += options.chunk_size) {
    const std::size_t len = std::min(options.chunk_size, items.size() - start);
    auto chunk = post_chunk(client, items.subspan(start, len), dim);
    for (auto& v : chunk) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<EmbeddingVector> remote_embed(const std::string& endpoint,
                                          std::span<const TextItem> items,
                                          const RemoteOptions& options) {
  std::size_t dim = 0;
  return remote_embed_with_dim(endpoint, items, options, dim);
}

RemoteSource::RemoteSource(std::string endpoint, RemoteOptions options, std::size_t expected_dim)
    : endpoint_(std::move(endpoint)), options_(options), dim_(expected_dim) {
  if (endpoint_.empty()) throw Error(ErrorCode::kInvalidInput, "remote endpoint is empty");
}

std::size_t RemoteSource::dim() const {
  {
    std::lock_guard lock(mutex_);
    if (dim_ != 0) return dim_;
  }
  const TextItem probe{"probe", TextKind::kWord};
  embed(std::span<const TextItem>(&probe, 1));
  std::lock_guard lock(mutex_);
  return dim_;
}

std::vector<EmbeddingVector> RemoteSource::embed(std::span<const TextItem> items) const {
  std::size_t dim;
  {
    std::lock_guard lock(mutex_);
    dim = dim_;
  }
  auto out = remote_embed_with_dim(endpoint_, items, options_, dim);
  std::lock_guard lock(mutex_);
  if (dim_ == 0) dim_ = dim;
  if (dim != dim_) {
    throw Error(ErrorCode::kProtocol, "remote dimension changed from " + std::to_string(dim_) +
                                          " to " + std::to_string(dim));
  }
  return out;
}

}  // namespace mcm
