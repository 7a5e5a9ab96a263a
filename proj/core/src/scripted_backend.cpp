// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/backend.hpp"
#include "casesift/csv.hpp"
#include "casesift/errors.hpp"

namespace casesift::llm {

ScriptedBackend::ScriptedBackend(std::map<std::string, std::string> responses, std::string name)
    : responses_(std::move(responses)), name_(std::move(name)) {}

std::map<std::string, std::string> ScriptedBackend::read_script(const std::filesystem::path& path) {
  auto rows = csv::read_file(path);
  std::map<std::string, std::string> responses;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (i == 0 && !row.empty() && row[0] == "case_id") continue;
    if (row.size() < 2) throw SchemaError(path.string() + ": row " + std::to_string(i + 1) + " needs case_id,response_text");
    responses[row[0]] = row[1];
  }
  return responses;
}

ScriptedBackend ScriptedBackend::from_csv(const std::filesystem::path& path) {
  return ScriptedBackend(read_script(path), path.filename().string());
}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
  {
    std::lock_guard lock(mu_);
    requests_.push_back(request);
  }
  auto it = responses_.find(request.case_id);
  if (it == responses_.end()) throw BackendError("script has no response for case " + request.case_id);
  return it->second;
}

std::vector<CompletionRequest> ScriptedBackend::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::size_t ScriptedBackend::request_count() const {
  std::lock_guard lock(mu_);
  return requests_.size();
}

}  // namespace casesift::llm
