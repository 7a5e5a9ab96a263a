// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <set>

#include "casesift/analytics.hpp"
#include "casesift/charts.hpp"
#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/hashing.hpp"
#include "casesift/io.hpp"
#include "casesift/keywords.hpp"
#include "casesift/llm.hpp"
#include "casesift/matrix.hpp"
#include "casesift/regex.hpp"
#include "casesift/review.hpp"
#include "casesift/sampling.hpp"

namespace casesift::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kStageVersion = "1";

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "' in " + where + ": " + j[key].dump());
  }
}

}  // namespace

llm::BackendConfig backend_config_from_json(const json& j, const fs::path& base_dir) {
  check_keys(j,
             {"kind", "script", "endpoint", "model", "credentials_env", "api_key_header", "response_pointer",
              "timeout_s", "max_concurrent_requests", "retry"},
             "llm");
  llm::BackendConfig c;
  const auto kind = get<std::string>(j, "kind", "", "llm");
  if (kind == "scripted") {
    c.kind = llm::BackendConfig::Kind::scripted;
  } else if (kind == "live") {
    c.kind = llm::BackendConfig::Kind::live;
  } else {
    throw ConfigError("llm.kind must be \"scripted\" or \"live\"");
  }
  c.script_path = resolve(get<std::string>(j, "script", "", "llm"), base_dir);
  c.live.endpoint = get<std::string>(j, "endpoint", "", "llm");
  c.live.model = get<std::string>(j, "model", "", "llm");
  c.live.credentials_env = get<std::string>(j, "credentials_env", c.live.credentials_env, "llm");
  c.live.api_key_header = get<std::string>(j, "api_key_header", c.live.api_key_header, "llm");
  c.live.response_pointer = get<std::string>(j, "response_pointer", c.live.response_pointer, "llm");
  c.live.timeout = std::chrono::seconds(get<std::int64_t>(j, "timeout_s", c.live.timeout.count(), "llm"));
  c.max_concurrent_requests = get<std::size_t>(j, "max_concurrent_requests", c.max_concurrent_requests, "llm");
  if (j.contains("retry")) {
    const auto& r = j["retry"];
    check_keys(r, {"max_retries", "initial_backoff_ms", "multiplier"}, "llm.retry");
    c.retry.max_retries = get<int>(r, "max_retries", c.retry.max_retries, "llm.retry");
    c.retry.initial_backoff =
        std::chrono::milliseconds(get<std::int64_t>(r, "initial_backoff_ms", c.retry.initial_backoff.count(), "llm.retry"));
    c.retry.multiplier = get<double>(r, "multiplier", c.retry.multiplier, "llm.retry");
  }
  if (c.kind == llm::BackendConfig::Kind::scripted && c.script_path.empty()) {
    throw ConfigError("llm.script is required for the scripted backend");
  }
  if (c.kind == llm::BackendConfig::Kind::live && (c.live.endpoint.empty() || c.live.model.empty())) {
    throw ConfigError("llm.endpoint and llm.model are required for the live backend");
  }
  if (c.max_concurrent_requests == 0) throw ConfigError("llm.max_concurrent_requests must be at least 1");
  if (c.retry.max_retries < 0 || c.retry.multiplier < 1) throw ConfigError("invalid llm.retry policy");
  return c;
}

json to_json(const llm::BackendConfig& c) {
  json j{{"max_concurrent_requests", c.max_concurrent_requests},
         {"retry",
          {{"max_retries", c.retry.max_retries},
           {"initial_backoff_ms", c.retry.initial_backoff.count()},
           {"multiplier", c.retry.multiplier}}}};
  if (c.kind == llm::BackendConfig::Kind::scripted) {
    j["kind"] = "scripted";
    j["script"] = c.script_path.string();
  } else {
    j["kind"] = "live";
    j["endpoint"] = c.live.endpoint;
    j["model"] = c.live.model;
    j["credentials_env"] = c.live.credentials_env;
    j["api_key_header"] = c.live.api_key_header;
    j["response_pointer"] = c.live.response_pointer;
    j["timeout_s"] = c.live.timeout.count();
  }
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  check_keys(j,
             {"corpus", "date_cutoff", "catalog", "rules", "tiers", "root_pattern", "llm", "limit_words", "sampling",
              "gold_labels", "kmeans_k", "out_dir", "seed"},
             "pipeline config");
  const std::string where = "pipeline config";
  PipelineConfig c;
  c.corpus = resolve(get<std::string>(j, "corpus", "", where), base_dir);
  if (auto d = get<std::string>(j, "date_cutoff", "", where); !d.empty()) {
    c.date_cutoff = corpus::parse_date(d);
    if (!c.date_cutoff) throw ConfigError("date_cutoff: not a YYYY-MM-DD date: " + d);
  }
  c.catalog = resolve(get<std::string>(j, "catalog", "", where), base_dir);
  c.rules = resolve(get<std::string>(j, "rules", "", where), base_dir);
  c.tiers = resolve(get<std::string>(j, "tiers", "", where), base_dir);
  c.root_pattern = get<std::string>(j, "root_pattern", "", where);
  if (j.contains("llm") && !j["llm"].is_null()) c.llm = backend_config_from_json(j["llm"], base_dir);
  c.limit_words = get<std::uint64_t>(j, "limit_words", c.limit_words, where);
  if (j.contains("sampling")) {
    const auto& s = j["sampling"];
    check_keys(s, {"confidence", "margin", "proportion"}, "sampling");
    c.sampling.confidence = get<double>(s, "confidence", c.sampling.confidence, "sampling");
    c.sampling.margin = get<double>(s, "margin", c.sampling.margin, "sampling");
    c.sampling.proportion = get<double>(s, "proportion", c.sampling.proportion, "sampling");
  }
  c.gold_labels = resolve(get<std::string>(j, "gold_labels", "", where), base_dir);
  c.kmeans_k = get<std::vector<std::size_t>>(j, "kmeans_k", c.kmeans_k, where);
  c.out_dir = resolve(get<std::string>(j, "out_dir", "", where), base_dir);
  c.seed = get<std::uint64_t>(j, "seed", c.seed, where);
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json PipelineConfig::to_json() const {
  json j{{"corpus", corpus.string()},
         {"date_cutoff", date_cutoff ? json(corpus::format_date(*date_cutoff)) : json(nullptr)},
         {"catalog", catalog.string()},
         {"rules", rules.string()},
         {"tiers", tiers.string()},
         {"root_pattern", root_pattern},
         {"llm", llm ? pipeline::to_json(*llm) : json(nullptr)},
         {"limit_words", limit_words},
         {"sampling",
          {{"confidence", sampling.confidence}, {"margin", sampling.margin}, {"proportion", sampling.proportion}}},
         {"gold_labels", gold_labels.string()},
         {"kmeans_k", kmeans_k},
         {"out_dir", out_dir.string()},
         {"seed", seed}};
  return j;
}

void PipelineConfig::validate() const {
  if (corpus.empty()) throw ConfigError("corpus path is required");
  if (out_dir.empty()) throw ConfigError("out_dir is required");
  if (limit_words == 0) throw ConfigError("limit_words must be positive");
  if (kmeans_k.empty()) throw ConfigError("kmeans_k must list at least one k");
  for (auto k : kmeans_k) {
    if (k == 0) throw ConfigError("kmeans_k entries must be at least 1");
  }
  try {
    sampling::z_value(sampling.confidence);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("sampling.confidence: ") + e.what());
  }
  if (!(sampling.margin > 0 && sampling.margin < 1)) throw ConfigError("sampling.margin must be in (0, 1)");
  if (!(sampling.proportion > 0 && sampling.proportion < 1)) throw ConfigError("sampling.proportion must be in (0, 1)");
  if (!root_pattern.empty()) {
    try {
      regex::RootPattern p(root_pattern);
    } catch (const Error& e) {
      throw ConfigError(std::string("root_pattern: ") + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Manifest

json RunManifest::to_json() const {
  json stages_json = json::array();
  for (const auto& s : stages) {
    stages_json.push_back(
        {{"name", s.name}, {"status", s.status}, {"input_hash", s.input_hash}, {"counts", s.counts}, {"error", s.error}});
  }
  return {{"started_at", started_at}, {"finished_at", finished_at}, {"corpus_hash", corpus_hash},
          {"config", config},         {"stages", stages_json},      {"completed", completed}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.started_at = j.value("started_at", "");
  m.finished_at = j.value("finished_at", "");
  m.corpus_hash = j.value("corpus_hash", "");
  m.config = j.value("config", json::object());
  m.completed = j.value("completed", false);
  for (const auto& s : j.value("stages", json::array())) {
    m.stages.push_back({s.at("name").get<std::string>(), s.at("status").get<std::string>(),
                        s.value("input_hash", ""), s.value("counts", json::object()), s.value("error", "")});
  }
  return m;
}

const StageRecord* RunManifest::stage(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Runner

namespace {

std::string hash_of(std::initializer_list<std::string_view> parts) {
  std::string joined;
  for (auto p : parts) {
    joined += p;
    joined += '\x1f';
  }
  return sha256_hex(joined);
}

std::string file_hash(const fs::path& p) { return p.empty() ? std::string("-") : sha256_path(p); }

class Runner {
 public:
  explicit Runner(const PipelineConfig& cfg) : cfg_(cfg), out_(cfg.out_dir) {
    const auto manifest_path = out_ / "manifest.json";
    if (fs::exists(manifest_path)) {
      try {
        previous_ = RunManifest::from_json(json::parse(io::read_file(manifest_path)));
      } catch (const std::exception&) {
        previous_.reset();  // unreadable manifest: run everything
      }
    }
    manifest_.started_at = utc_now();
    manifest_.config = cfg_.to_json();
  }

  RunManifest run();

 private:
  using Outputs = std::vector<fs::path>;

  void stage(const std::string& name, const std::string& hash, const Outputs& outputs,
             const std::function<json()>& body) {
    StageRecord rec{name, "completed", hash, json::object(), ""};
    const StageRecord* old = previous_ ? previous_->stage(name) : nullptr;
    bool outputs_exist = true;
    for (const auto& p : outputs) outputs_exist = outputs_exist && fs::exists(p);
    if (old && old->input_hash == hash && (old->status == "completed" || old->status == "reused") && outputs_exist) {
      rec.status = "reused";
      rec.counts = old->counts;
      manifest_.stages.push_back(rec);
      save();
      return;
    }
    try {
      rec.counts = body();
    } catch (const std::exception& e) {
      rec.status = "failed";
      rec.error = e.what();
      manifest_.stages.push_back(rec);
      save();
      throw;
    }
    manifest_.stages.push_back(rec);
    save();
  }

  void skip(const std::string& name, const std::string& why) {
    manifest_.stages.push_back({name, "skipped", "", json{{"reason", why}}, ""});
    save();
  }

  void save() { io::write_file(out_ / "manifest.json", manifest_.to_json().dump(2) + "\n"); }

  const corpus::Dataset& dataset(const std::string& name) {
    auto it = datasets_.find(name);
    if (it != datasets_.end()) return it->second;
    auto ds = corpus::read_jsonl(dataset_path(name));
    return datasets_.emplace(name, ds.renamed(name, ds.provenance())).first->second;
  }

  void keep(const std::string& name, corpus::Dataset ds) {
    corpus::write_jsonl(dataset_path(name), ds);
    datasets_.insert_or_assign(name, std::move(ds));
  }

  fs::path dataset_path(const std::string& name) const { return out_ / "datasets" / (name + ".jsonl"); }

  const PipelineConfig& cfg_;
  fs::path out_;
  std::optional<RunManifest> previous_;
  RunManifest manifest_;
  std::map<std::string, corpus::Dataset> datasets_;
};

RunManifest Runner::run() {
  fs::create_directories(out_);
  if (!fs::exists(cfg_.corpus)) throw IoError("corpus not found: " + cfg_.corpus.string());
  manifest_.corpus_hash = sha256_path(cfg_.corpus);
  save();

  const auto catalog = cfg_.catalog.empty() ? keywords::KeywordCatalog::default_catalog()
                                            : keywords::KeywordCatalog::load(cfg_.catalog);
  const auto rules = cfg_.rules.empty() ? matrix::RuleSet::default_ruleset() : matrix::RuleSet::load(cfg_.rules);
  const auto tiers =
      cfg_.tiers.empty() ? analytics::CourtTierMap::default_map() : analytics::CourtTierMap::load(cfg_.tiers);
  const std::string pattern = cfg_.root_pattern.empty() ? std::string(regex::kDefaultRootPattern) : cfg_.root_pattern;

  // ingest
  const std::string cutoff = cfg_.date_cutoff ? corpus::format_date(*cfg_.date_cutoff) : "-";
  const auto h_ingest = hash_of({"ingest", kStageVersion, manifest_.corpus_hash, cutoff});
  stage("ingest", h_ingest, {dataset_path("corpus"), out_ / "ingest" / "skipped.csv"}, [&] {
    auto loaded = corpus::load_corpus(cfg_.corpus);
    corpus::write_skip_manifest(out_ / "ingest" / "skipped.csv", loaded.skipped);
    json counts{{"loaded", loaded.dataset.size()}, {"skipped_files", loaded.skipped.size()}};
    auto all = loaded.dataset.renamed("corpus", "ingest:" + cfg_.corpus.filename().string());
    if (cfg_.date_cutoff) {
      auto f = corpus::filter_by_date(all, *cfg_.date_cutoff);
      counts["before_cutoff"] = f.excluded.size();
      counts["undated"] = f.undated.size();
      counts["kept"] = f.kept.size();
      keep("pre_cutoff", f.excluded.renamed("pre_cutoff", f.excluded.provenance()));
      keep("corpus", f.kept.renamed("corpus", f.kept.provenance()));
    } else {
      std::size_t undated = 0;
      for (const auto& c : all) undated += !c.hearing_date;
      counts["before_cutoff"] = 0;
      counts["undated"] = undated;
      counts["kept"] = all.size();
      keep("corpus", std::move(all));
    }
    return counts;
  });

  // regex
  const auto h_regex = hash_of({"regex", kStageVersion, h_ingest, pattern});
  stage("regex", h_regex, {dataset_path("regex_sj")}, [&] {
    const auto& input = dataset("corpus");
    auto sj = regex::regex_filter(input, regex::RootPattern(pattern));
    json counts{{"input", input.size()}, {"regex_sj", sj.size()}, {"non_matching", input.size() - sj.size()}};
    keep("regex_sj", std::move(sj));
    return counts;
  });

  // keywords
  const auto h_keywords = hash_of({"keywords", kStageVersion, h_regex, file_hash(cfg_.catalog)});
  const auto kw_dir = out_ / "keywords";
  stage("keywords", h_keywords,
        {kw_dir / "total_counts.csv", kw_dir / "isolation_counts.csv", kw_dir / "cooccurrence.csv"}, [&] {
          const auto& input = dataset("regex_sj");
          const auto profiles = keywords::scan_dataset(input, catalog);
          keywords::write_counts_csv(kw_dir / "total_counts.csv", keywords::total_counts(profiles, catalog));
          keywords::write_counts_csv(kw_dir / "isolation_counts.csv", keywords::isolation_counts(profiles, catalog));
          keywords::write_cooccurrence_csv(kw_dir / "cooccurrence.csv", keywords::cooccurrence(profiles, catalog));
          std::size_t with_any = 0;
          for (const auto& p : profiles) with_any += p.present_count() > 0;
          return json{{"scanned", profiles.size()}, {"with_keyword", with_any}};
        });

  // matrix
  const auto h_matrix = hash_of({"matrix", kStageVersion, h_regex, file_hash(cfg_.rules)});
  stage("matrix", h_matrix, {dataset_path("ksjd"), dataset_path("knsjd"), out_ / "matrix_decisions.csv"}, [&] {
    auto r = matrix::classify_dataset(dataset("regex_sj"), rules);
    matrix::write_decisions_csv(out_ / "matrix_decisions.csv", r.decisions);
    json counts{{"ksjd", r.sj.size()}, {"knsjd", r.non_sj.size()}};
    keep("ksjd", std::move(r.sj));
    keep("knsjd", std::move(r.non_sj));
    return counts;
  });

  // llm
  std::string h_llm = "-";
  if (cfg_.llm) {
    const auto script_hash =
        cfg_.llm->kind == llm::BackendConfig::Kind::scripted ? file_hash(cfg_.llm->script_path) : std::string("-");
    json identity = to_json(*cfg_.llm);
    identity.erase("max_concurrent_requests");
    identity.erase("retry");
    h_llm = hash_of({"llm", kStageVersion, h_regex, identity.dump(), script_hash, std::to_string(cfg_.limit_words)});
    const auto log = out_ / "llm_decisions.jsonl";
    const StageRecord* old = previous_ ? previous_->stage("llm") : nullptr;
    if (fs::exists(log) && (!old || old->input_hash != h_llm)) fs::remove(log);  // stale decisions
    stage("llm", h_llm, {dataset_path("csjd"), dataset_path("cnsjd"), log}, [&] {
      auto backend = llm::make_backend(*cfg_.llm);
      llm::ClassifyOptions opts;
      opts.guard.limit_words = cfg_.limit_words;
      opts.max_concurrent_requests = cfg_.llm->max_concurrent_requests;
      opts.retry = cfg_.llm->retry;
      opts.decision_log = log;
      auto r = llm::classify_dataset(dataset("regex_sj"), *backend, opts);
      if (r.interrupted) throw Error("LLM classification interrupted; rerun to resume");
      json counts{{"csjd", r.sj.size()},         {"cnsjd", r.non_sj.size()},   {"skipped", r.skipped.size()},
                  {"unparseable", r.unparseable.size()}, {"resumed", r.resumed}, {"queried", r.queried},
                  {"backend", backend->id()}};
      keep("csjd", std::move(r.sj));
      keep("cnsjd", std::move(r.non_sj));
      return counts;
    });
  } else {
    skip("llm", "no LLM backend configured");
  }

  // sample
  std::vector<std::string> sampled{"ksjd", "knsjd"};
  if (cfg_.llm) {
    sampled.emplace_back("csjd");
    sampled.emplace_back("cnsjd");
  }
  const auto& sc = cfg_.sampling;
  const auto h_sample =
      hash_of({"sample", kStageVersion, h_matrix, h_llm, std::to_string(sc.confidence), std::to_string(sc.margin),
               std::to_string(sc.proportion), std::to_string(cfg_.seed)});
  Outputs sample_files;
  for (const auto& n : sampled) sample_files.push_back(out_ / "samples" / (n + ".json"));
  stage("sample", h_sample, sample_files, [&] {
    json counts = json::object();
    for (std::size_t i = 0; i < sampled.size(); ++i) {
      const auto& ds = dataset(sampled[i]);
      auto plan = sampling::plan_sample(ds, sc.confidence, sc.margin, sc.proportion, cfg_.seed + i);
      plan.save(sample_files[i]);
      counts[sampled[i]] = {{"population", plan.population}, {"size", plan.size}};
    }
    return counts;
  });

  // evaluate
  if (!cfg_.gold_labels.empty()) {
    const auto h_eval = hash_of({"evaluate", kStageVersion, h_sample, file_hash(cfg_.gold_labels)});
    std::vector<std::string> methods{"matrix"};
    if (cfg_.llm) methods.emplace_back("llm");
    Outputs eval_files;
    for (const auto& m : methods) eval_files.push_back(out_ / "evaluation" / (m + ".json"));
    stage("evaluate", h_eval, eval_files, [&] {
      const auto gold = sampling::read_gold_labels(cfg_.gold_labels);
      json counts = json::object();
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const auto& m = methods[mi];
        const auto preds = review::load_predictions(m == "matrix" ? out_ / "matrix_decisions.csv"
                                                                  : out_ / "llm_decisions.jsonl");
        std::set<std::string> in_sample;
        for (std::size_t i = 0; i < sampled.size(); ++i) {
          const bool mine = (m == "matrix") == (i < 2);
          if (!mine) continue;
          for (auto& id : sampling::SamplePlan::load(sample_files[i]).ids) in_sample.insert(id);
        }
        std::map<std::string, Label> scoped;
        for (const auto& [id, label] : gold) {
          if (in_sample.count(id)) scoped.emplace(id, label);
        }
        std::size_t scorable = 0;
        for (const auto& [id, label] : scoped) scorable += preds.count(id);
        if (scorable == 0) {
          io::write_file(eval_files[mi], "null\n");
          counts[m] = {{"labelled", scoped.size()}, {"scored", 0}};
          continue;
        }
        const auto report = review::evaluate_labels(preds, scoped);
        io::write_file(eval_files[mi], report.to_json().dump(2) + "\n");
        io::write_file(out_ / "evaluation" / (m + ".txt"), report.to_text(m));
        counts[m] = {{"labelled", scoped.size()}, {"scored", report.matrix.total()},
                     {"weighted_f1", report.weighted_f1}};
      }
      return counts;
    });
  } else {
    skip("evaluate", "no gold labels configured");
  }

  // analyze
  const std::string analyzed = cfg_.llm ? "csjd" : "ksjd";
  std::string kk;
  for (auto k : cfg_.kmeans_k) kk += std::to_string(k) + ",";
  const auto analysis_dir = out_ / "analysis";
  const auto h_analyze = hash_of({"analyze", kStageVersion, cfg_.llm ? h_llm : h_matrix, analyzed,
                                  file_hash(cfg_.tiers), kk});
  stage("analyze", h_analyze, {analysis_dir / "by_year.csv", analysis_dir / "clusters.csv"}, [&] {
    const auto& ds = dataset(analyzed);
    analytics::AnalysisOptions opts;
    opts.kmeans_k = cfg_.kmeans_k;
    const auto report = analytics::analyze(ds, tiers, opts);
    analytics::write_report(report, ds, analysis_dir);
    return json{{"dataset", analyzed}, {"cases", ds.size()}, {"notes", report.notes}};
  });

  // charts
  const auto h_charts = hash_of({"charts", kStageVersion, h_analyze});
  stage("charts", h_charts, {out_ / "charts" / "cases_by_year.svg"}, [&] {
    const auto files = charts::emit_charts(analysis_dir, out_ / "charts");
    return json{{"files", files.size()}};
  });

  manifest_.completed = true;
  manifest_.finished_at = utc_now();
  save();
  return manifest_;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
  config.validate();
  return Runner(config).run();
}

}  // namespace casesift::pipeline
