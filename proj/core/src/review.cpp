// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/review.hpp"

#include <set>

#include "casesift/errors.hpp"

namespace casesift::review {

namespace {

ApiResponse error(int status, const std::string& message) { return {status, {{"error", message}}}; }

nlohmann::json label_json(const std::optional<sampling::LabelRecord>& r) {
  if (!r) return nullptr;
  return {{"label", std::string(to_string(r->gold))}, {"reviewer", r->reviewer}, {"timestamp", r->timestamp}};
}

}  // namespace

sampling::EvalReport evaluate_labels(const std::map<std::string, Label>& predictions,
                                     const std::map<std::string, Label>& gold) {
  std::map<std::string, Label> scored;
  std::size_t left_out = 0;
  for (const auto& [id, label] : gold) {
    if (predictions.count(id)) {
      scored.emplace(id, label);
    } else {
      ++left_out;
    }
  }
  auto report = sampling::scores(sampling::confusion(predictions, scored));
  if (left_out) {
    report.warnings.push_back(std::to_string(left_out) + " labelled case(s) without a prediction were left out");
  }
  return report;
}

std::map<std::string, Label> load_predictions(const std::filesystem::path& path) {
  std::map<std::string, Label> out;
  if (path.extension() == ".jsonl") {
    for (const auto& d : llm::read_decision_log(path)) {
      if (d.label == llm::Outcome::sj) out[d.case_id] = Label::sj;
      if (d.label == llm::Outcome::non_sj) out[d.case_id] = Label::non_sj;
    }
    return out;
  }
  for (const auto& d : matrix::read_decisions_csv(path)) out[d.case_id] = d.label;
  return out;
}

ReviewService::ReviewService(ReviewConfig config) : config_(std::move(config)) {
  if (!config_.catalog) config_.catalog = &keywords::KeywordCatalog::default_catalog();
  std::set<std::string> active;
  for (const auto& plan : config_.samples) {
    for (const auto& id : plan.ids) {
      if (!active.insert(id).second) continue;
      const corpus::Case* found = nullptr;
      for (const auto& ds : config_.datasets) {
        if ((found = ds.find(id))) break;
      }
      if (!found) throw NotFoundError("sampled case " + id + " has no text in the loaded datasets");
      queue_.push_back(id);
      cases_.emplace(id, found);
    }
  }
  store_ = std::make_unique<sampling::LabelStore>(config_.label_store, std::move(active));
}

nlohmann::json ReviewService::case_payload(const corpus::Case& c) const {
  nlohmann::json spans = nlohmann::json::array();
  const auto& catalog = *config_.catalog;
  for (const auto& s : keywords::match_spans(c.text, catalog)) {
    spans.push_back({{"begin", s.begin},
                     {"end", s.end},
                     {"variant", catalog.variant(s.variant)},
                     {"category", catalog.categories()[catalog.category_of(s.variant)].name}});
  }
  const auto current = store_->current(c.id);
  std::size_t position = 0;
  for (std::size_t i = 0; i < queue_.size(); ++i) {
    if (queue_[i] == c.id) position = i + 1;
  }
  nlohmann::json j{{"complete", false},
                   {"case_id", c.id},
                   {"court", c.court},
                   {"hearing_date", c.hearing_date ? nlohmann::json(corpus::format_date(*c.hearing_date)) : nullptr},
                   {"word_count", c.word_count},
                   {"text", c.text},
                   {"highlights", std::move(spans)},
                   {"position", position},
                   {"total", queue_.size()},
                   {"label", label_json(current)}};
  if (!config_.blind || current) j["predictions"] = predictions(c.id).body;
  return j;
}

ApiResponse ReviewService::session() const {
  const auto labelled = store_->labelled();
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& p : config_.samples) samples.push_back({{"dataset", p.dataset_name}, {"size", p.size}});
  nlohmann::json methods = nlohmann::json::array();
  if (!config_.matrix_predictions.empty()) methods.push_back("matrix");
  if (!config_.llm_decisions.empty()) methods.push_back("llm");
  return {200,
          {{"reviewer", config_.reviewer},
           {"labelled", labelled},
           {"total", queue_.size()},
           {"remaining", queue_.size() - labelled},
           {"complete", labelled == queue_.size()},
           {"blind", config_.blind},
           {"samples", std::move(samples)},
           {"methods", std::move(methods)},
           {"label_store", store_->path().string()}}};
}

ApiResponse ReviewService::next_case() const {
  for (const auto& id : queue_) {
    if (!store_->current(id)) return {200, case_payload(*cases_.at(id))};
  }
  return {200, {{"complete", true}, {"labelled", store_->labelled()}, {"total", queue_.size()}}};
}

ApiResponse ReviewService::case_by_id(std::string_view id) const {
  auto it = cases_.find(id);
  if (it == cases_.end()) return error(404, "case " + std::string(id) + " is not in the review sample");
  return {200, case_payload(*it->second)};
}

ApiResponse ReviewService::post_label(const nlohmann::json& body, std::string_view reviewer_header) {
  if (!body.is_object()) return error(400, "label payload must be a JSON object");
  if (!body.contains("case_id") || !body["case_id"].is_string()) return error(400, "case_id must be a string");
  if (!body.contains("label") || !body["label"].is_string()) return error(400, "label must be a string");
  const auto id = body["case_id"].get<std::string>();
  const auto label = parse_label(body["label"].get<std::string>());
  if (!label) return error(400, "label must be \"SJ\" or \"non-SJ\"");
  std::string reviewer = config_.reviewer;
  if (body.contains("reviewer")) {
    if (!body["reviewer"].is_string()) return error(400, "reviewer must be a string");
    reviewer = body["reviewer"].get<std::string>();
  } else if (!reviewer_header.empty()) {
    reviewer = std::string(reviewer_header);
  }
  try {
    const auto r = store_->record(id, *label, reviewer);
    return {200,
            {{"ok", true},
             {"case_id", r.case_id},
             {"label", std::string(to_string(r.gold))},
             {"reviewer", r.reviewer},
             {"timestamp", r.timestamp},
             {"labelled", store_->labelled()},
             {"total", queue_.size()}}};
  } catch (const NotFoundError& e) {
    return error(404, e.what());
  } catch (const IoError& e) {
    return error(500, e.what());
  }
}

std::map<std::string, Label> ReviewService::predictions_for(std::string_view method) const {
  if (method == "matrix") return config_.matrix_predictions;
  std::map<std::string, Label> out;
  for (const auto& [id, d] : config_.llm_decisions) {
    if (d.label == llm::Outcome::sj) out[id] = Label::sj;
    if (d.label == llm::Outcome::non_sj) out[id] = Label::non_sj;
  }
  return out;
}

ApiResponse ReviewService::metrics(std::string_view method) const {
  std::string m(method);
  if (m.empty()) {
    if (!config_.matrix_predictions.empty()) {
      m = "matrix";
    } else if (!config_.llm_decisions.empty()) {
      m = "llm";
    } else {
      return error(409, "no predictions loaded");
    }
  }
  if (m != "matrix" && m != "llm") return error(400, "method must be \"matrix\" or \"llm\"");
  const auto preds = predictions_for(m);
  const auto gold = store_->gold();
  std::size_t scorable = 0;
  for (const auto& [id, label] : gold) scorable += preds.count(id);
  nlohmann::json body{{"method", m}, {"labelled", gold.size()}, {"scored", scorable}, {"total", queue_.size()}};
  if (scorable == 0) {
    body["report"] = nullptr;
    return {200, body};
  }
  const auto report = evaluate_labels(preds, gold);
  body["report"] = report.to_json();
  body["text"] = report.to_text();
  return {200, body};
}

ApiResponse ReviewService::predictions(std::string_view id) const {
  if (!cases_.count(id)) return error(404, "case " + std::string(id) + " is not in the review sample");
  if (config_.blind && !store_->current(id)) return error(403, "predictions are hidden until the case is labelled");
  const std::string key(id);
  nlohmann::json j{{"case_id", key}, {"matrix", nullptr}, {"llm", nullptr}};
  if (auto it = config_.matrix_predictions.find(key); it != config_.matrix_predictions.end()) {
    j["matrix"] = {{"label", std::string(to_string(it->second))}};
  }
  if (auto it = config_.llm_decisions.find(key); it != config_.llm_decisions.end()) {
    j["llm"] = {{"label", std::string(llm::to_string(it->second.label))},
                {"reason", it->second.reason},
                {"note", it->second.note},
                {"backend_id", it->second.backend_id}};
  }
  return {200, j};
}

}  // namespace casesift::review
