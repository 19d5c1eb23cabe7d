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

#include "asag/victim.h"

#include <algorithm>
#include <ctime>
#include <exception>
#include <thread>

#include "asag/digest.h"
#include "json.hpp"

namespace asag {

ClassifyRequest RequestFor(const AnswerInstance& instance) {
  return {instance.question, instance.reference, instance.answer};
}

std::string RequestDigest(const ClassifyRequest& request) {
  const nlohmann::json key = {request.question, request.reference,
                              request.answer};
  return Sha256Hex(key.dump());
}

// ---------------------------------------------------------------------------
// Query log

std::string QueryRecordToJson(const QueryRecord& record) {
  nlohmann::ordered_json obj;
  obj["digest"] = record.digest;
  obj["question"] = record.request.question;
  obj["reference"] = record.request.reference;
  obj["answer"] = record.request.answer;
  obj["label"] = record.label;
  obj["confidence"] = record.confidence ? nlohmann::ordered_json(*record.confidence)
                                        : nlohmann::ordered_json(nullptr);
  obj["latency_us"] = record.latency_us;
  obj["timestamp"] = record.timestamp;
  obj["cached"] = record.cached;
  obj["source"] = record.source;
  obj["instance_id"] = record.context.instance_id;
  obj["phase"] = record.context.phase;
  return obj.dump();
}

QueryRecord QueryRecordFromJson(const std::string& line) {
  const auto obj = nlohmann::json::parse(line);
  QueryRecord record;
  record.digest = obj.at("digest").get<std::string>();
  record.request.question = obj.at("question").get<std::string>();
  record.request.reference = obj.at("reference").get<std::string>();
  record.request.answer = obj.at("answer").get<std::string>();
  record.label = obj.at("label").get<std::string>();
  if (!obj.at("confidence").is_null()) {
    record.confidence = obj.at("confidence").get<double>();
  }
  record.latency_us = obj.value("latency_us", std::int64_t{0});
  record.timestamp = obj.value("timestamp", std::string());
  record.cached = obj.value("cached", false);
  record.source = obj.value("source", std::string());
  record.context.instance_id = obj.value("instance_id", std::string());
  record.context.phase = obj.value("phase", std::string());
  return record;
}

std::vector<QueryRecord> ReadQueryLog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open query log " + path.string());
  std::vector<QueryRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(QueryRecordFromJson(line));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + " line " + std::to_string(line_no) +
                        ": " + e.what());
    }
  }
  return records;
}

QueryLog::QueryLog(const std::filesystem::path& path) {
  sink_.emplace(path, std::ios::binary | std::ios::app);
  if (!*sink_) throw IoError("cannot open query log " + path.string());
}

void QueryLog::Append(QueryRecord record) {
  std::lock_guard<std::mutex> lock(mu_);
  if (sink_) {
    *sink_ << QueryRecordToJson(record) << '\n';
    sink_->flush();
  }
  records_.push_back(std::move(record));
}

std::vector<QueryRecord> QueryLog::Records() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

std::size_t QueryLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

// ---------------------------------------------------------------------------
// Replay

ReplayVictim::ReplayVictim(const std::vector<QueryRecord>& records,
                           LabelSchema schema)
    : schema_(std::move(schema)) {
  for (const auto& record : records) {
    VictimVerdict verdict{record.label, record.confidence,
                          std::chrono::microseconds(0)};
    verdicts_.emplace(record.digest, std::move(verdict));
  }
}

VictimVerdict ReplayVictim::Classify(const ClassifyRequest& request) {
  const auto it = verdicts_.find(RequestDigest(request));
  if (it == verdicts_.end()) {
    throw ConsistencyError("request for answer '" + request.answer +
                           "' is not in the replay log");
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Gateway

namespace {

std::string NowIso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

constexpr char kEpoch[] = "1970-01-01T00:00:00Z";

[[noreturn]] void RethrowIndexed(std::exception_ptr error, std::size_t index) {
  try {
    std::rethrow_exception(error);
  } catch (const TransportError& e) {
    throw BatchFailure<TransportError>(e.what(), index);
  } catch (const ProtocolError& e) {
    throw BatchFailure<ProtocolError>(e.what(), index);
  } catch (const ConsistencyError& e) {
    throw BatchFailure<ConsistencyError>(e.what(), index);
  } catch (const Error& e) {
    throw BatchFailure<Error>(e.what(), index);
  }
}

}  // namespace

VictimGateway::VictimGateway(VictimBackend& backend, GatewayOptions options,
                             QueryLog* log)
    : backend_(backend),
      options_(options),
      log_(log),
      schema_(backend.Schema()) {
  schema_.Validate();
}

VictimVerdict VictimGateway::Evaluate(const ClassifyRequest& request,
                                      const std::string& digest) {
  ++backend_calls_;
  const auto start = std::chrono::steady_clock::now();
  VictimVerdict verdict = backend_.Classify(request);
  verdict.latency = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  if (!schema_.Contains(verdict.label)) {
    throw ProtocolError("victim returned unknown label '" + verdict.label +
                        "' for request " + digest.substr(0, 12));
  }
  if (verdict.confidence &&
      !(*verdict.confidence >= 0.0 && *verdict.confidence <= 1.0)) {
    throw ProtocolError("victim returned confidence outside [0, 1]");
  }
  return verdict;
}

VictimVerdict VictimGateway::Resolve(const ClassifyRequest& request,
                                     const std::string& digest, bool* cached) {
  *cached = false;
  if (!options_.cache) return Evaluate(request, digest);
  std::promise<VictimVerdict> promise;
  std::shared_future<VictimVerdict> pending;
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    if (auto it = cache_.find(digest); it != cache_.end()) {
      pending = it->second;
      *cached = true;
    } else {
      cache_.emplace(digest, promise.get_future().share());
    }
  }
  if (*cached) {
    VictimVerdict verdict = pending.get();
    verdict.latency = std::chrono::microseconds(0);
    ++cache_hits_;
    return verdict;
  }
  VictimVerdict verdict;
  try {
    verdict = Evaluate(request, digest);
  } catch (...) {
    {
      std::lock_guard<std::mutex> lock(cache_mu_);
      cache_.erase(digest);
    }
    promise.set_exception(std::current_exception());
    throw;
  }
  promise.set_value(verdict);
  return verdict;
}

QueryRecord VictimGateway::MakeRecord(const ClassifyRequest& request,
                                      std::string digest,
                                      const VictimVerdict& verdict, bool cached,
                                      const QueryContext& context) const {
  QueryRecord record;
  record.digest = std::move(digest);
  record.request = request;
  record.label = verdict.label;
  record.confidence = verdict.confidence;
  record.latency_us =
      options_.normalize_timestamps ? 0 : verdict.latency.count();
  record.timestamp = options_.normalize_timestamps ? kEpoch : NowIso8601();
  record.cached = cached;
  record.source = backend_.Source();
  record.context = context;
  return record;
}

VictimVerdict VictimGateway::Classify(const ClassifyRequest& request,
                                      const QueryContext& context) {
  std::string digest = RequestDigest(request);
  bool cached = false;
  VictimVerdict verdict = Resolve(request, digest, &cached);
  if (log_ != nullptr) {
    log_->Append(MakeRecord(request, std::move(digest), verdict, cached,
                            context));
  }
  return verdict;
}

std::vector<VictimVerdict> VictimGateway::ClassifyBatch(
    std::span<const ClassifyRequest> requests,
    std::span<const QueryContext> contexts) {
  if (requests.empty()) throw ArgumentError("empty classify batch");
  if (!contexts.empty() && contexts.size() != requests.size()) {
    throw ArgumentError("batch contexts must match the request count");
  }
  static const QueryContext kNoContext;
  auto context_at = [&](std::size_t i) -> const QueryContext& {
    return contexts.empty() ? kNoContext : contexts[i];
  };

  // Repeats inside one batch are served from their first occurrence so that
  // the cached flags, and therefore the log, do not depend on thread timing.
  const std::size_t n = requests.size();
  std::vector<std::string> digests(n);
  std::vector<std::size_t> first(n);
  std::vector<std::size_t> unique;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    digests[i] = RequestDigest(requests[i]);
    first[i] = i;
    if (options_.cache) {
      auto [it, inserted] = seen.emplace(digests[i], i);
      first[i] = it->second;
    }
    if (first[i] == i) unique.push_back(i);
  }

  std::vector<VictimVerdict> results(n);
  std::vector<char> cached(n, 0);
  std::vector<char> done(n, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  std::size_t error_index = n;
  std::exception_ptr error;
  auto work = [&] {
    while (!failed.load()) {
      const std::size_t u = next.fetch_add(1);
      if (u >= unique.size()) return;
      const std::size_t i = unique[u];
      try {
        bool hit = false;
        results[i] = Resolve(requests[i], digests[i], &hit);
        cached[i] = hit;
        done[i] = 1;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  const std::size_t workers = std::min(
      std::max<std::size_t>(options_.parallelism, 1), unique.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (first[i] == i || !done[first[i]]) continue;
    results[i] = results[first[i]];
    results[i].latency = std::chrono::microseconds(0);
    cached[i] = 1;
    done[i] = 1;
    ++cache_hits_;
  }
  if (log_ != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      if (error && i >= error_index) break;
      if (!done[i]) continue;
      log_->Append(MakeRecord(requests[i], digests[i], results[i], cached[i],
                              context_at(i)));
    }
  }
  if (error) RethrowIndexed(error, error_index);
  return results;
}

// ---------------------------------------------------------------------------
// Label-only view

std::string LabelOracle::Classify(const ClassifyRequest& request,
                                  const QueryContext& context) {
  return gateway_.Classify(request, context).label;
}

std::vector<std::string> LabelOracle::ClassifyBatch(
    std::span<const ClassifyRequest> requests,
    std::span<const QueryContext> contexts) {
  auto verdicts = gateway_.ClassifyBatch(requests, contexts);
  std::vector<std::string> labels;
  labels.reserve(verdicts.size());
  for (auto& v : verdicts) labels.push_back(std::move(v.label));
  return labels;
}

}  // namespace asag
