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

#include <thread>

#include "asag/victim.h"
#include "httplib.h"
#include "json.hpp"

namespace asag {

struct HttpVictim::Impl {
  std::string endpoint;
  std::string base_path;
  RetryPolicy retry;
  std::chrono::seconds timeout;
};

namespace {

// Splits "http://host:port/prefix" into ("http://host:port", "/prefix").
std::pair<std::string, std::string> SplitEndpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ArgumentError("victim endpoint '" + url + "' needs a scheme");
  }
  const auto path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

std::string ErrorMessage(const httplib::Result& result) {
  try {
    return nlohmann::json::parse(result->body).at("error").get<std::string>();
  } catch (const std::exception&) {
    return result->body;
  }
}

// Runs `call` up to `retry.attempts` times. Transport failures and 5xx
// responses are retried with exponential backoff; 4xx responses are final.
template <typename Call>
std::string WithRetries(const RetryPolicy& retry, const std::string& what,
                        Call call) {
  auto backoff = retry.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= std::max(retry.attempts, 1); ++attempt) {
    httplib::Result result = call();
    if (!result) {
      last_error = httplib::to_string(result.error());
    } else if (result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status) + ": " +
                   ErrorMessage(result);
    } else if (result->status >= 400) {
      throw ProtocolError(what + " rejected with HTTP " +
                          std::to_string(result->status) + ": " +
                          ErrorMessage(result));
    } else if (result->status != 200) {
      throw ProtocolError(what + " returned HTTP " +
                          std::to_string(result->status));
    } else {
      return result->body;
    }
    if (attempt < retry.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw TransportError(what + " failed after " +
                       std::to_string(retry.attempts) +
                       " attempts: " + last_error);
}

}  // namespace

HttpVictim::HttpVictim(std::string endpoint, RetryPolicy retry,
                       std::chrono::seconds timeout)
    : impl_(std::make_unique<Impl>()) {
  auto [base, prefix] = SplitEndpoint(endpoint);
  impl_->endpoint = std::move(base);
  impl_->base_path = std::move(prefix);
  impl_->retry = retry;
  impl_->timeout = timeout;
}

HttpVictim::~HttpVictim() = default;

LabelSchema HttpVictim::Schema() {
  httplib::Client client(impl_->endpoint);
  client.set_connection_timeout(impl_->timeout);
  client.set_read_timeout(impl_->timeout);
  const std::string path = impl_->base_path + "/schema";
  const std::string body = WithRetries(impl_->retry, "GET " + path,
                                       [&] { return client.Get(path); });
  try {
    const auto doc = nlohmann::json::parse(body);
    LabelSchema schema;
    schema.labels = doc.at("labels").get<std::vector<std::string>>();
    schema.target_label = doc.at("target_label").get<std::string>();
    schema.Validate();
    return schema;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed /schema response: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ProtocolError(std::string("invalid /schema response: ") + e.what());
  }
}

VictimVerdict HttpVictim::Classify(const ClassifyRequest& request) {
  // httplib clients are not thread-safe; one per call keeps this re-entrant.
  httplib::Client client(impl_->endpoint);
  client.set_connection_timeout(impl_->timeout);
  client.set_read_timeout(impl_->timeout);
  const std::string path = impl_->base_path + "/classify";
  const nlohmann::json payload = {{"question", request.question},
                                  {"reference", request.reference},
                                  {"answer", request.answer}};
  const std::string text = payload.dump();
  const std::string body =
      WithRetries(impl_->retry, "POST " + path, [&] {
        return client.Post(path, text, "application/json");
      });
  try {
    const auto doc = nlohmann::json::parse(body);
    VictimVerdict verdict;
    verdict.label = doc.at("label").get<std::string>();
    if (doc.contains("confidence") && !doc.at("confidence").is_null()) {
      verdict.confidence = doc.at("confidence").get<double>();
    }
    return verdict;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed /classify response: ") +
                        e.what());
  }
}

}  // namespace asag
