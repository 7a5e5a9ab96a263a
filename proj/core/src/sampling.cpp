// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/sampling.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/rng.hpp"
#include "casesift/text.hpp"

namespace casesift::sampling {

namespace {

struct ZLevel {
  double confidence;
  double z;
};

constexpr std::array<ZLevel, 3> kZTable{{{0.90, 1.644854}, {0.95, 1.959964}, {0.99, 2.575829}}};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

double z_value(double confidence) {
  for (const auto& level : kZTable) {
    if (std::abs(level.confidence - confidence) < 1e-9) return level.z;
  }
  throw ArgumentError("unsupported confidence level " + std::to_string(confidence) +
                      "; supported levels are 0.90, 0.95, 0.99");
}

std::uint64_t required_sample_size(std::uint64_t population, double confidence, double margin, double proportion) {
  if (population < 1) throw ArgumentError("population must be at least 1");
  if (!(margin > 0 && margin < 1)) throw ArgumentError("margin of error must be in (0, 1)");
  if (!(proportion > 0 && proportion < 1)) throw ArgumentError("assumed proportion must be in (0, 1)");
  const double z = z_value(confidence);
  const double n0 = z * z * proportion * (1 - proportion) / (margin * margin);
  const double n = n0 / (1 + (n0 - 1) / static_cast<double>(population));
  return std::min(population, static_cast<std::uint64_t>(std::ceil(n)));
}

// ---------------------------------------------------------------------------
// Sample plans

nlohmann::json SamplePlan::to_json() const {
  return {{"dataset", dataset_name}, {"population", population}, {"confidence", confidence},
          {"margin", margin},        {"proportion", proportion}, {"size", size},
          {"seed", seed},            {"ids", ids}};
}

SamplePlan SamplePlan::from_json(const nlohmann::json& j) {
  SamplePlan p;
  p.dataset_name = j.value("dataset", std::string());
  p.population = j.at("population").get<std::uint64_t>();
  p.confidence = j.value("confidence", 0.95);
  p.margin = j.value("margin", 0.05);
  p.proportion = j.value("proportion", 0.5);
  p.size = j.at("size").get<std::uint64_t>();
  p.seed = j.value("seed", std::uint64_t{0});
  p.ids = j.at("ids").get<std::vector<std::string>>();
  if (p.ids.size() != p.size) throw SchemaError("sample plan size does not match its id list");
  return p;
}

void SamplePlan::save(const std::filesystem::path& path) const { io::write_file(path, to_json().dump(2) + "\n"); }

SamplePlan SamplePlan::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

SamplePlan draw_sample(const corpus::Dataset& dataset, std::uint64_t n, std::uint64_t seed) {
  if (n > dataset.size()) {
    throw ArgumentError("sample size " + std::to_string(n) + " exceeds dataset size " + std::to_string(dataset.size()));
  }
  auto ids = dataset.ids();  // id-sorted
  Rng rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto j = i + rng.below(ids.size() - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(n);
  SamplePlan plan;
  plan.dataset_name = dataset.name();
  plan.population = dataset.size();
  plan.size = n;
  plan.seed = seed;
  plan.ids = std::move(ids);
  return plan;
}

SamplePlan plan_sample(const corpus::Dataset& dataset, double confidence, double margin, double proportion,
                       std::uint64_t seed) {
  const auto n = dataset.empty() ? 0 : required_sample_size(dataset.size(), confidence, margin, proportion);
  auto plan = draw_sample(dataset, n, seed);
  plan.confidence = confidence;
  plan.margin = margin;
  plan.proportion = proportion;
  return plan;
}

// ---------------------------------------------------------------------------
// Label store

namespace {

nlohmann::json record_json(const LabelRecord& r) {
  return {{"case_id", r.case_id}, {"label", std::string(to_string(r.gold))}, {"reviewer", r.reviewer},
          {"timestamp", r.timestamp}};
}

LabelRecord record_from_json(const nlohmann::json& j) {
  auto label = parse_label(j.at("label").get<std::string>());
  if (!label) throw SchemaError("bad label " + j.at("label").dump());
  return {j.at("case_id").get<std::string>(), *label, j.value("reviewer", std::string()),
          j.value("timestamp", std::string())};
}

std::vector<LabelRecord> read_records(const std::filesystem::path& path) {
  std::vector<LabelRecord> out;
  if (!std::filesystem::exists(path)) return out;
  std::size_t line_no = 0;
  for (const auto& line : text::split(io::read_file(path), '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

LabelStore::LabelStore(std::filesystem::path path, std::set<std::string> active)
    : path_(std::move(path)), active_(active.begin(), active.end()) {
  for (auto& r : read_records(path_)) history_[r.case_id].push_back(std::move(r));
}

LabelRecord LabelStore::record(std::string_view case_id, Label gold, std::string_view reviewer,
                               std::optional<std::string> timestamp) {
  if (!active_.count(case_id)) throw NotFoundError("case " + std::string(case_id) + " is not in the active sample");
  LabelRecord r{std::string(case_id), gold, std::string(reviewer), timestamp ? *timestamp : utc_now()};
  std::lock_guard lock(mu_);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot append to label store " + path_.string());
  out << record_json(r).dump() << '\n';
  out.flush();
  if (!out) throw IoError("error writing label store " + path_.string());
  history_[r.case_id].push_back(r);
  return r;
}

std::optional<LabelRecord> LabelStore::current(std::string_view case_id) const {
  std::lock_guard lock(mu_);
  auto it = history_.find(case_id);
  if (it == history_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::vector<LabelRecord> LabelStore::history(std::string_view case_id) const {
  std::lock_guard lock(mu_);
  auto it = history_.find(case_id);
  return it == history_.end() ? std::vector<LabelRecord>{} : it->second;
}

bool LabelStore::is_active(std::string_view case_id) const { return active_.count(case_id) > 0; }

std::size_t LabelStore::labelled() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [id, records] : history_) {
    if (!records.empty() && active_.count(id)) ++n;
  }
  return n;
}

std::map<std::string, Label> LabelStore::gold() const {
  std::lock_guard lock(mu_);
  std::map<std::string, Label> out;
  for (const auto& [id, records] : history_) {
    if (!records.empty() && active_.count(id)) out[id] = records.back().gold;
  }
  return out;
}

std::map<std::string, Label> read_gold_labels(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no label store at " + path.string());
  std::map<std::string, Label> out;
  for (const auto& r : read_records(path)) out[r.case_id] = r.gold;
  return out;
}

// ---------------------------------------------------------------------------
// Scoring

ConfusionMatrix confusion(const std::map<std::string, Label>& predictions, const std::map<std::string, Label>& gold) {
  ConfusionMatrix cm;
  std::vector<std::string> missing;
  for (const auto& [id, truth] : gold) {
    auto it = predictions.find(id);
    if (it == predictions.end()) {
      missing.push_back(id);
      continue;
    }
    const bool pred_sj = it->second == Label::sj;
    if (truth == Label::sj) {
      ++(pred_sj ? cm.tp : cm.fn);
    } else {
      ++(pred_sj ? cm.fp : cm.tn);
    }
  }
  if (!missing.empty()) {
    throw ArgumentError("no prediction for " + std::to_string(missing.size()) + " labelled case(s): " +
                        text::join(missing, ", "));
  }
  return cm;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, const char* what, std::vector<std::string>& warnings) {
  if (den == 0) {
    warnings.emplace_back(std::string(what) + " undefined (zero denominator); reported as 0");
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return (p + r) > 0 ? 2 * p * r / (p + r) : 0.0; }

}  // namespace

EvalReport scores(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ArgumentError("cannot score an empty confusion matrix");
  EvalReport r;
  r.matrix = cm;
  auto& w = r.warnings;
  r.sj.precision = ratio(cm.tp, cm.tp + cm.fp, "SJ precision", w);
  r.sj.recall = ratio(cm.tp, cm.tp + cm.fn, "SJ recall", w);
  r.sj.f1 = harmonic(r.sj.precision, r.sj.recall);
  r.sj.support = cm.tp + cm.fn;
  r.non_sj.precision = ratio(cm.tn, cm.tn + cm.fn, "non-SJ precision", w);
  r.non_sj.recall = ratio(cm.tn, cm.tn + cm.fp, "non-SJ recall", w);
  r.non_sj.f1 = harmonic(r.non_sj.precision, r.non_sj.recall);
  r.non_sj.support = cm.fp + cm.tn;
  r.macro_f1 = (r.sj.f1 + r.non_sj.f1) / 2;
  const double total = static_cast<double>(cm.total());
  r.weighted_f1 = (static_cast<double>(r.sj.support) * r.sj.f1 + static_cast<double>(r.non_sj.support) * r.non_sj.f1) / total;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / total;
  r.predicted_sj_correct = r.sj.precision;
  r.predicted_non_sj_correct = r.non_sj.precision;
  return r;
}

nlohmann::json EvalReport::to_json() const {
  auto cls = [](const ClassMetrics& m) {
    return nlohmann::json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  };
  return {{"confusion_matrix", {{"tp", matrix.tp}, {"fn", matrix.fn}, {"fp", matrix.fp}, {"tn", matrix.tn}}},
          {"sj", cls(sj)},
          {"non_sj", cls(non_sj)},
          {"macro_f1", macro_f1},
          {"weighted_f1", weighted_f1},
          {"accuracy", accuracy},
          {"predicted_sj_correct_pct", 100 * predicted_sj_correct},
          {"predicted_non_sj_correct_pct", 100 * predicted_non_sj_correct},
          {"warnings", warnings}};
}

std::string EvalReport::to_text(std::string_view title) const {
  std::ostringstream out;
  out << std::fixed;
  if (!title.empty()) out << title << "\n\n";
  out << "Manual checks\n";
  out << std::left << std::setw(26) << "" << std::right << std::setw(10) << "Incorrect" << std::setw(10) << "Correct"
      << std::setw(16) << "Total Reviewed" << std::setw(11) << "Correct %" << "\n";
  out << std::left << std::setw(26) << "Predicted SJ" << std::right << std::setw(10) << matrix.fp << std::setw(10)
      << matrix.tp << std::setw(16) << (matrix.tp + matrix.fp) << std::setw(11) << std::setprecision(1)
      << 100 * predicted_sj_correct << "\n";
  out << std::left << std::setw(26) << "Predicted non-SJ" << std::right << std::setw(10) << matrix.fn << std::setw(10)
      << matrix.tn << std::setw(16) << (matrix.fn + matrix.tn) << std::setw(11) << std::setprecision(1)
      << 100 * predicted_non_sj_correct << "\n\n";
  out << "Confusion matrix\n";
  out << std::left << std::setw(26) << "" << std::right << std::setw(14) << "Predicted SJ" << std::setw(18)
      << "Predicted Non-SJ" << "\n";
  out << std::left << std::setw(26) << "Actual SJ Cases" << std::right << std::setw(14) << matrix.tp << std::setw(18)
      << matrix.fn << "\n";
  out << std::left << std::setw(26) << "Actual Non-SJ Cases" << std::right << std::setw(14) << matrix.fp
      << std::setw(18) << matrix.tn << "\n\n";
  out << std::setprecision(4);
  out << "F1 (SJ)      " << sj.f1 << "\n";
  out << "F1 (non-SJ)  " << non_sj.f1 << "\n";
  out << "Macro F1     " << macro_f1 << "\n";
  out << "Weighted F1  " << weighted_f1 << "\n";
  out << "Accuracy     " << accuracy << "\n";
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace casesift::sampling
