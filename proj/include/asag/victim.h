//
// Copyright 2026 The ASAG Adversarial Insertion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ASAG_VICTIM_H_
#define ASAG_VICTIM_H_

// Black-box access to a grading model.
//
// A VictimBackend answers single requests (HTTP server, mock, or a recorded
// query log). VictimGateway wraps a backend with label validation, a response
// cache, an append-only query log and an order-preserving parallel batch call.
// LabelOracle is the narrow view handed to the attack: it exposes labels only.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "asag/corpus.h"
#include "asag/dataset.h"
#include "asag/error.h"

namespace asag {

struct ClassifyRequest {
  std::string question;
  std::string reference;
  std::string answer;

  friend bool operator==(const ClassifyRequest&,
                         const ClassifyRequest&) = default;
};

ClassifyRequest RequestFor(const AnswerInstance& instance);

// SHA-256 over the JSON array [question, reference, answer].
std::string RequestDigest(const ClassifyRequest& request);

struct VictimVerdict {
  std::string label;
  std::optional<double> confidence;
  std::chrono::microseconds latency{0};
};

class VictimBackend {
 public:
  virtual ~VictimBackend() = default;
  virtual LabelSchema Schema() = 0;
  // Must be safe to call concurrently.
  virtual VictimVerdict Classify(const ClassifyRequest& request) = 0;
  // "mock", "network" or "replay"; copied into every query record.
  virtual std::string Source() const = 0;
};

// ---------------------------------------------------------------------------
// Mock victim

// Predicts the target label when the answer covers at least
// `overlap_threshold` of the reference's content words, or contains one of
// the planted words. Otherwise it predicts `cue_label` if the answer contains
// a cue word (and a cue label is configured), else `non_target_label`.
// Confidence is the overlap fraction.
struct MockVictimConfig {
  LabelSchema schema = SebSchema();
  std::string non_target_label = "incorrect";
  double overlap_threshold = 0.6;
  std::set<std::string, std::less<>> planted_words;
  std::set<std::string, std::less<>> cue_words;
  std::string cue_label;
  StopwordList stopwords;
};

class MockVictim : public VictimBackend {
 public:
  explicit MockVictim(MockVictimConfig config);

  LabelSchema Schema() override { return config_.schema; }
  VictimVerdict Classify(const ClassifyRequest& request) override;
  std::string Source() const override { return "mock"; }

  // Fraction of the reference's distinct content words found in the answer;
  // 0 when the reference has none.
  double Overlap(const std::string& reference,
                 const std::string& answer) const;

  std::size_t evaluations() const { return evaluations_.load(); }

 private:
  MockVictimConfig config_;
  std::atomic<std::size_t> evaluations_{0};
};

// ---------------------------------------------------------------------------
// HTTP victim

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
};

// Speaks the JSON wire protocol: POST /classify and GET /schema.
class HttpVictim : public VictimBackend {
 public:
  // `endpoint` is "http://host:port" (an optional path prefix is allowed).
  explicit HttpVictim(std::string endpoint, RetryPolicy retry = {},
                      std::chrono::seconds timeout = std::chrono::seconds(30));
  ~HttpVictim() override;

  LabelSchema Schema() override;
  VictimVerdict Classify(const ClassifyRequest& request) override;
  std::string Source() const override { return "network"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Query log

struct QueryContext {
  std::string instance_id;
  // "baseline" (original answers), "probe" or "exploit".
  std::string phase;
};

struct QueryRecord {
  std::string digest;
  ClassifyRequest request;
  std::string label;
  std::optional<double> confidence;
  std::int64_t latency_us = 0;
  std::string timestamp;
  bool cached = false;
  std::string source;
  QueryContext context;
};

std::string QueryRecordToJson(const QueryRecord& record);
QueryRecord QueryRecordFromJson(const std::string& line);
std::vector<QueryRecord> ReadQueryLog(const std::filesystem::path& path);

// Append-only; optionally mirrored line by line to a JSONL file.
class QueryLog {
 public:
  QueryLog() = default;
  explicit QueryLog(const std::filesystem::path& path);

  void Append(QueryRecord record);
  std::vector<QueryRecord> Records() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<QueryRecord> records_;
  std::optional<std::ofstream> sink_;
};

// Serves verdicts recorded in a query log, keyed by request digest.
class ReplayVictim : public VictimBackend {
 public:
  ReplayVictim(const std::vector<QueryRecord>& records, LabelSchema schema);

  LabelSchema Schema() override { return schema_; }
  // Throws ConsistencyError for a request that was never logged.
  VictimVerdict Classify(const ClassifyRequest& request) override;
  std::string Source() const override { return "replay"; }

 private:
  std::map<std::string, VictimVerdict> verdicts_;
  LabelSchema schema_;
};

// ---------------------------------------------------------------------------
// Gateway

struct GatewayOptions {
  bool cache = true;
  std::size_t parallelism = 4;
  // Fixed timestamps and zero latency in log records.
  bool normalize_timestamps = false;
};

// Base for batch failures: the request index at which the batch aborted.
class BatchIndexed {
 public:
  explicit BatchIndexed(std::size_t index) : index_(index) {}
  std::size_t failed_index() const { return index_; }

 private:
  std::size_t index_;
};

template <typename Base>
class BatchFailure : public Base, public BatchIndexed {
 public:
  BatchFailure(const std::string& message, std::size_t index)
      : Base("batch request " + std::to_string(index) + ": " + message),
        BatchIndexed(index) {}
};

class VictimGateway {
 public:
  // `log` may be null. The schema is taken from the backend.
  VictimGateway(VictimBackend& backend, GatewayOptions options = {},
                QueryLog* log = nullptr);

  const LabelSchema& schema() const { return schema_; }

  VictimVerdict Classify(const ClassifyRequest& request,
                         const QueryContext& context = {});

  // Results are in request order and are logged in request order once the
  // batch completes. `contexts` is empty or request-sized.
  std::vector<VictimVerdict> ClassifyBatch(
      std::span<const ClassifyRequest> requests,
      std::span<const QueryContext> contexts = {});

  std::size_t cache_hits() const { return cache_hits_.load(); }
  std::size_t backend_calls() const { return backend_calls_.load(); }

 private:
  VictimVerdict Evaluate(const ClassifyRequest& request,
                         const std::string& digest);
  VictimVerdict Resolve(const ClassifyRequest& request,
                        const std::string& digest, bool* cached);
  QueryRecord MakeRecord(const ClassifyRequest& request, std::string digest,
                         const VictimVerdict& verdict, bool cached,
                         const QueryContext& context) const;

  VictimBackend& backend_;
  GatewayOptions options_;
  QueryLog* log_;
  LabelSchema schema_;
  std::mutex cache_mu_;
  std::map<std::string, std::shared_future<VictimVerdict>> cache_;
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::size_t> backend_calls_{0};
};

// Label-only access for the attack; confidence never crosses this boundary.
class LabelOracle {
 public:
  explicit LabelOracle(VictimGateway& gateway) : gateway_(gateway) {}

  const LabelSchema& schema() const { return gateway_.schema(); }
  std::string Classify(const ClassifyRequest& request,
                       const QueryContext& context = {});
  std::vector<std::string> ClassifyBatch(
      std::span<const ClassifyRequest> requests,
      std::span<const QueryContext> contexts = {});

 private:
  VictimGateway& gateway_;
};

}  // namespace asag

#endif  // ASAG_VICTIM_H_
