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

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/parallel.h"
#include "test_util.h"

namespace mcm {
namespace {

using nlohmann::json;

TEST(StoreSource, LookupAndMissingKey) {
  auto src = StoreSource::from_map("fx", {{"a", EmbeddingVector{1, 0}}});
  std::vector<std::string> a{"a"};
  auto out = embed_batch(src, a);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (EmbeddingVector{1, 0}));
  try {
    embed_one(src, "b");
    FAIL();
  } catch (const MissingEmbedding& e) {
    EXPECT_EQ(e.text(), "b");
    EXPECT_EQ(e.code(), ErrorCode::kMissingEmbedding);
  }
}

TEST(StoreSource, LookupIsVerbatim) {
  auto src = StoreSource::from_map("fx", {{"Kill", EmbeddingVector{1, 0}}});
  EXPECT_THROW(embed_one(src, "kill"), MissingEmbedding);
  EXPECT_THROW(embed_one(src, "Kill "), MissingEmbedding);
}

TEST(EmbedBatch, RejectsEmptyText) {
  HashSource src(8, 1);
  try {
    embed_one(src, "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyText);
  }
}

TEST(HashEmbed, GoldenVector) {
  // Frozen from an independent reimplementation of the documented algorithm.
  const std::vector<double> expected{0.009992781303048572, 0.540422840963917,
                                     0.21871969752749795,  0.4075237716030896,
                                     0.46346368564642554,  -0.16891487050143264,
                                     0.4417311836339532,   -0.2355251723150908};
  auto v = hash_embed({"kill", TextKind::kWord}, 8, 42);
  ASSERT_EQ(v.dim(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(v[i], expected[i], 1e-15) << i;
}

TEST(HashEmbed, GoldenCosines) {
  HashSource src(256, 42);
  auto kp = embed_one(src, "kill people");
  EXPECT_NEAR(cosine(kp, embed_one(src, "kill time")), 0.5510432828218536, 1e-12);
  EXPECT_NEAR(cosine(kp, embed_one(src, "smile warmly")), -0.10317202395140722, 1e-12);
}

TEST(HashEmbed, DeterministicAndBagOfTokens) {
  auto a = hash_embed({"kill", TextKind::kWord}, 8, 42);
  auto b = hash_embed({"kill", TextKind::kWord}, 8, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(hash_embed({"kill people", TextKind::kSentence}, 64, 3),
            hash_embed({"people kill", TextKind::kSentence}, 64, 3));
  EXPECT_EQ(hash_embed({"Kill  People", TextKind::kSentence}, 64, 3),
            hash_embed({"kill people", TextKind::kSentence}, 64, 3));
  EXPECT_NE(hash_embed({"kill", TextKind::kWord}, 8, 42), hash_embed({"kill", TextKind::kWord}, 8, 43));
}

TEST(HashEmbed, UnitNormAndWhitespaceOnlyFallback) {
  for (const char* text : {"smile", "a b c d", "   ", "x x"}) {
    auto v = hash_embed({text, TextKind::kSentence}, 32, 9);
    EXPECT_NEAR(norm(v), 1.0, 1e-12) << text;
  }
}

TEST(HashSource, NameAndDuplicatesBitwiseIdentical) {
  HashSource src(16, 42);
  EXPECT_EQ(src.name(), "hash:42:16");
  std::vector<std::string> texts{"kill", "kill"};
  auto out = embed_batch(src, texts);
  EXPECT_EQ(out[0], out[1]);
  EXPECT_THROW(HashSource(1, 0), Error);
}

TEST(Cache, MemoizesPerText) {
  auto inner = std::make_shared<testing::CountingSource>(8);
  CachedSource cache(inner);
  embed_one(cache, "smile");
  embed_one(cache, "smile");
  EXPECT_EQ(inner->calls.load(), 1);
}

TEST(Cache, ErrorsAreNotCached) {
  auto inner = std::make_shared<testing::CountingSource>(8, "x");
  CachedSource cache(inner);
  EXPECT_THROW(embed_one(cache, "x"), Error);
  EXPECT_THROW(embed_one(cache, "x"), Error);
  EXPECT_EQ(inner->calls.load(), 2);
  EXPECT_EQ(cache.cache().size(), 0u);
}

TEST(Cache, DistinctTextsAllReachInner) {
  auto inner = std::make_shared<testing::CountingSource>(8);
  CachedSource cache(inner);
  for (int i = 0; i < 1000; ++i) embed_one(cache, "text " + std::to_string(i));
  EXPECT_EQ(inner->calls.load(), 1000);
  EXPECT_EQ(cache.cache().size(), 1000u);
}

TEST(Cache, BatchMissesAreDeduplicated) {
  auto inner = std::make_shared<testing::CountingSource>(8);
  CachedSource cache(inner);
  std::vector<std::string> texts{"a", "b", "a", "c", "b"};
  auto out = embed_batch(cache, texts);
  EXPECT_EQ(inner->calls.load(), 1);
  EXPECT_EQ(inner->texts.load(), 3u);
  EXPECT_EQ(out[0], out[2]);
  embed_batch(cache, texts);
  EXPECT_EQ(inner->calls.load(), 1);
}

TEST(Cache, KeyedBySourceName) {
  auto shared = std::make_shared<EmbeddingCache>();
  CachedSource a(std::make_shared<HashSource>(8, 1), shared);
  CachedSource b(std::make_shared<HashSource>(8, 2), shared);
  EXPECT_NE(embed_one(a, "w"), embed_one(b, "w"));
  EXPECT_EQ(shared->size(), 2u);
}

TEST(Cache, ConcurrentReadersSeeOneValue) {
  auto inner = std::make_shared<HashSource>(16, 5);
  CachedSource cache(inner);
  std::vector<EmbeddingVector> seen(64);
  parallel_for(seen.size(), 8, [&](std::size_t i) {
    seen[i] = embed_one(cache, "word" + std::to_string(i % 4));
  });
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], seen[i % 4]);
  EXPECT_EQ(cache.cache().size(), 4u);
}

TEST(EmbeddingFile, RoundTrip) {
  EmbeddingStore store(3);
  store.insert("kill people", EmbeddingVector{0.1, -2.5, 1e-300});
  store.insert("say \"hi\"\n", EmbeddingVector{1, 2, 3});
  const auto text = format_embedding_file(store, "hash:1:3");
  std::istringstream in(text);
  auto file = parse_embedding_lines(in);
  EXPECT_EQ(file.source_name, "hash:1:3");
  ASSERT_EQ(file.store.texts(), store.texts());
  for (const auto& t : store.texts()) EXPECT_EQ(*file.store.find(t), *store.find(t));
  EXPECT_EQ(text.substr(0, text.find('\n')),
            R"({"format":"mcm-embeddings","version":1,"dim":3,"source":"hash:1:3"})");
}

TEST(EmbeddingFile, RejectsDuplicatesAndBadShape) {
  const std::string header = R"({"format":"mcm-embeddings","version":1,"dim":2,"source":"s"})";
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_embedding_lines(in);
  };
  auto code_of = [&](const std::string& s) {
    try {
      parse(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUsage;
  };
  EXPECT_EQ(code_of(header + "\n{\"text\":\"a\",\"vector\":[1,2]}\n{\"text\":\"a\",\"vector\":[1,2]}\n"),
            ErrorCode::kFormat);
  EXPECT_EQ(code_of(header + "\n{\"text\":\"a\",\"vector\":[1,2,3]}\n"),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of(R"({"format":"other","version":1,"dim":2,"source":"s"})"), ErrorCode::kFormat);
  EXPECT_EQ(code_of(header + "\nnot json\n"), ErrorCode::kFormat);
}

// --- HTTP contract against an in-process stub server ---------------------

class StubServer {
 public:
  explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/embed", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

json vectors_for(const json& texts, std::size_t dim) {
  json vs = json::array();
  for (const auto& t : texts) {
    auto v = hash_embed({t.get<std::string>(), TextKind::kSentence}, dim, 1);
    vs.push_back(v.values());
  }
  return vs;
}

TEST(Remote, EchoesVectorsInOrder) {
  StubServer server([](const httplib::Request& req, httplib::Response& res) {
    auto body = json::parse(req.body);
    res.set_content(json{{"dim", 4}, {"vectors", vectors_for(body["texts"], 4)}}.dump(),
                    "application/json");
  });
  RemoteSource src(server.url());
  EXPECT_EQ(src.dim(), 4u);
  std::vector<std::string> texts{"a", "b c"};
  auto out = embed_batch(src, texts);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], hash_embed({"a", TextKind::kSentence}, 4, 1));
  EXPECT_EQ(out[1], hash_embed({"b c", TextKind::kSentence}, 4, 1));
}

TEST(Remote, CountMismatchIsProtocolError) {
  StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"dim":2,"vectors":[[1,0],[0,1]]})", "application/json");
  });
  std::vector<TextItem> items{{"a"}, {"b"}, {"c"}};
  try {
    remote_embed(server.url(), items);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

TEST(Remote, WrongDimensionAndBadBodyAreProtocolErrors) {
  StubServer server([](const httplib::Request& req, httplib::Response& res) {
    if (json::parse(req.body)["texts"][0] == "garbage") {
      res.set_content("not json", "text/plain");
    } else {
      res.set_content(R"({"dim":2,"vectors":[[1,0,0]]})", "application/json");
    }
  });
  for (const char* t : {"garbage", "short"}) {
    std::vector<TextItem> items{{t}};
    try {
      remote_embed(server.url(), items);
      FAIL() << t;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocol) << t;
    }
  }
}

TEST(Remote, ErrorStatusCarriesServerMessage) {
  StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 400;
    res.set_content(R"({"error":"texts must be nonempty"})", "application/json");
  });
  std::vector<TextItem> items{{"a"}};
  try {
    remote_embed(server.url(), items);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
    EXPECT_NE(std::string(e.what()).find("texts must be nonempty"), std::string::npos);
  }
}

TEST(Remote, UnreachableEndpointFailsWithinTimeout) {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();  // the port is now closed
  std::vector<TextItem> items{{"a"}};
  RemoteOptions opts;
  opts.timeout = std::chrono::milliseconds(500);
  const auto start = std::chrono::steady_clock::now();
  try {
    remote_embed("http://127.0.0.1:" + std::to_string(port), items, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(Remote, LargeBatchesAreChunkedInOrder) {
  std::mutex m;
  std::vector<std::size_t> sizes;
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    auto body = json::parse(req.body);
    {
      std::lock_guard lock(m);
      sizes.push_back(body["texts"].size());
    }
    res.set_content(json{{"dim", 3}, {"vectors", vectors_for(body["texts"], 3)}}.dump(),
                    "application/json");
  });
  std::vector<std::string> texts;
  for (int i = 0; i < 150; ++i) texts.push_back("t" + std::to_string(i));
  RemoteSource src(server.url(), {}, 3);
  auto out = embed_batch(src, texts);
  ASSERT_EQ(out.size(), 150u);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    EXPECT_EQ(out[i], hash_embed({texts[i], TextKind::kSentence}, 3, 1)) << i;
  }
  EXPECT_EQ(sizes, (std::vector<std::size_t>{64, 64, 22}));
}

}  // namespace
}  // namespace mcm
