// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

// casesift command line: one subcommand per pipeline stage plus `run` for the
// whole pipeline and `serve` for the review API.

#include <atomic>
#include <csignal>
#include <iostream>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "casesift/analytics.hpp"
#include "casesift/charts.hpp"
#include "casesift/corpus.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/keywords.hpp"
#include "casesift/llm.hpp"
#include "casesift/matrix.hpp"
#include "casesift/pipeline.hpp"
#include "casesift/regex.hpp"
#include "casesift/review.hpp"
#include "casesift/sampling.hpp"
#include "casesift/synthetic.hpp"
#include "casesift/text.hpp"

namespace fs = std::filesystem;
using namespace casesift;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 42;
  fs::path out_dir = ".";
};

volatile std::sig_atomic_t g_interrupted = 0;

void on_sigint(int) { g_interrupted = 1; }

corpus::Dataset load_input(const fs::path& path) {
  auto loaded = corpus::load_corpus(path);
  for (const auto& s : loaded.skipped) std::cerr << "skipped " << s.filename << ": " << s.error << "\n";
  const auto name = fs::is_directory(path) ? path.filename().string() : path.stem().string();
  return loaded.dataset.renamed(name, loaded.dataset.provenance());
}

keywords::KeywordCatalog load_catalog(const std::string& path) {
  return path.empty() ? keywords::KeywordCatalog::default_catalog() : keywords::KeywordCatalog::load(path);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& part : text::split(s, ',')) {
    auto t = std::string(text::trim(part));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

void save_dataset(const fs::path& path, const corpus::Dataset& ds) {
  corpus::write_jsonl(path, ds);
  std::cout << ds.size() << " case(s) -> " << path.string() << "\n";
}

// Settings from --config fill in flags the user did not give.
std::optional<pipeline::PipelineConfig> global_config(const Globals& g) {
  if (g.config.empty()) return std::nullopt;
  return pipeline::PipelineConfig::load(g.config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"casesift: find summary judgment cases in a corpus of judgments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Pipeline config (JSON)");
  app.add_option("--seed", g.seed, "Seed for sampling and generation");
  app.add_option("--out-dir", g.out_dir, "Output directory");

  // ingest
  std::string ingest_in, ingest_cutoff;
  auto* ingest = app.add_subcommand("ingest", "Load XML case files and apply the date cutoff");
  ingest->add_option("--corpus", ingest_in, "Corpus directory, XML file or JSONL dataset")->required();
  ingest->add_option("--date-cutoff", ingest_cutoff, "Drop cases heard before this date (YYYY-MM-DD)");

  // generate
  std::size_t gen_n = 0, gen_sj = 0, gen_non_sj = 0, gen_long = 0;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus with ground truth");
  generate->add_option("--n", gen_n, "Corpus size with the default label mix");
  generate->add_option("--sj", gen_sj, "Number of genuine SJ cases");
  generate->add_option("--non-sj", gen_non_sj, "Number of non-SJ cases");
  generate->add_option("--long-cases", gen_long, "Extra SJ cases padded to 239,178 words");

  // regex-filter
  std::string rx_in, rx_pattern;
  auto* rx = app.add_subcommand("regex-filter", "Keep cases whose text matches the root pattern");
  rx->add_option("--in", rx_in, "Input dataset")->required();
  rx->add_option("--pattern", rx_pattern, "Root pattern (ECMAScript, case-insensitive)");

  // keywords
  std::string kw_in, kw_catalog;
  auto* kw = app.add_subcommand("keywords", "Keyword totals, isolation counts and co-occurrence");
  kw->add_option("--in", kw_in, "Input dataset")->required();
  kw->add_option("--catalog", kw_catalog, "Keyword catalog file");

  // venn
  std::string venn_in, venn_catalog, venn_keys;
  auto* venn = app.add_subcommand("venn", "Venn region counts for 2 or 3 keywords or categories");
  venn->add_option("--in", venn_in, "Input dataset")->required();
  venn->add_option("--keys", venn_keys, "Comma-separated keys, e.g. 'summary judgment,no real prospect'")->required();
  venn->add_option("--catalog", venn_catalog, "Keyword catalog file");

  // classify-matrix
  std::string mx_in, mx_rules;
  auto* mx = app.add_subcommand("classify-matrix", "Apply the search matrix");
  mx->add_option("--in", mx_in, "Input dataset")->required();
  mx->add_option("--rules", mx_rules, "Rule set file");

  // classify-llm
  std::string llm_in, llm_script, llm_endpoint, llm_model;
  std::uint64_t llm_limit = 70000;
  std::size_t llm_conc = 4;
  auto* lc = app.add_subcommand("classify-llm", "Classify cases with a language model backend");
  lc->add_option("--in", llm_in, "Input dataset")->required();
  lc->add_option("--script", llm_script, "Scripted backend CSV (case_id,response_text)");
  lc->add_option("--endpoint", llm_endpoint, "Live backend completion URL");
  lc->add_option("--model", llm_model, "Live backend model name");
  lc->add_option("--limit-words", llm_limit, "Skip cases longer than this many words");
  lc->add_option("--concurrency", llm_conc, "Maximum concurrent requests");

  // sample
  std::string smp_in;
  double smp_conf = 0.95, smp_margin = 0.05, smp_p = 0.5;
  std::optional<std::uint64_t> smp_size;
  auto* smp = app.add_subcommand("sample", "Draw a review sample sized for a confidence level and margin");
  smp->add_option("--in", smp_in, "Input dataset")->required();
  smp->add_option("--confidence", smp_conf, "Confidence level: 0.90, 0.95 or 0.99");
  smp->add_option("--margin", smp_margin, "Margin of error");
  smp->add_option("--proportion", smp_p, "Assumed proportion");
  smp->add_option("--size", smp_size, "Fixed sample size instead of the computed one");

  // evaluate
  std::string ev_labels, ev_preds, ev_title;
  std::vector<std::string> ev_samples;
  auto* ev = app.add_subcommand("evaluate", "Score predictions against reviewer labels");
  ev->add_option("--labels", ev_labels, "Label store (JSONL)")->required();
  ev->add_option("--predictions", ev_preds, "matrix_decisions.csv or llm_decisions.jsonl")->required();
  ev->add_option("--sample", ev_samples, "Restrict to the ids of these sample plans");
  ev->add_option("--title", ev_title, "Report title");

  // analyze
  std::string an_in, an_tiers, an_k = "2,10";
  auto* an = app.add_subcommand("analyze", "Yearly, court and tier counts, trend, word-count clusters");
  an->add_option("--in", an_in, "Input dataset")->required();
  an->add_option("--tiers", an_tiers, "Court tier map file");
  an->add_option("--kmeans", an_k, "Comma-separated cluster counts");

  // charts
  std::string ch_in;
  auto* ch = app.add_subcommand("charts", "Render SVG charts from an analysis directory");
  ch->add_option("--analysis", ch_in, "Analysis directory")->required();

  // serve
  std::vector<std::string> sv_datasets, sv_samples;
  std::string sv_labels, sv_matrix, sv_llm, sv_host = "127.0.0.1", sv_static, sv_reviewer = "reviewer";
  int sv_port = 8080;
  bool sv_reveal = false;
  auto* sv = app.add_subcommand("serve", "Serve the review API");
  sv->add_option("--dataset", sv_datasets, "Datasets holding the sampled case text")->required();
  sv->add_option("--sample", sv_samples, "Sample plan(s) to review")->required();
  sv->add_option("--labels", sv_labels, "Label store (JSONL, appended)")->required();
  sv->add_option("--matrix", sv_matrix, "matrix_decisions.csv");
  sv->add_option("--llm", sv_llm, "llm_decisions.jsonl");
  sv->add_option("--host", sv_host, "Bind address");
  sv->add_option("--port", sv_port, "Port (0 picks a free port)");
  sv->add_option("--static", sv_static, "Directory of static UI files");
  sv->add_option("--reviewer", sv_reviewer, "Default reviewer id");
  sv->add_flag("--reveal", sv_reveal, "Show predictions before a case is labelled");

  // run
  auto* run = app.add_subcommand("run", "Run the full pipeline from --config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version report success; every other parse error is a usage error.
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    const auto out = g.out_dir;
    if (ingest->parsed()) {
      auto ds = load_input(ingest_in).renamed("corpus", "ingest:" + ingest_in);
      if (!ingest_cutoff.empty()) {
        const auto cutoff = corpus::parse_date(ingest_cutoff);
        if (!cutoff) throw ArgumentError("--date-cutoff: not a YYYY-MM-DD date: " + ingest_cutoff);
        auto f = corpus::filter_by_date(ds, *cutoff);
        save_dataset(out / "corpus.jsonl", f.kept.renamed("corpus", f.kept.provenance()));
        save_dataset(out / "pre_cutoff.jsonl", f.excluded);
        std::cout << f.undated.size() << " undated case(s) kept\n";
      } else {
        save_dataset(out / "corpus.jsonl", ds);
      }
    } else if (generate->parsed()) {
      synthetic::GeneratorSpec spec;
      if (gen_sj || gen_non_sj) {
        spec = synthetic::GeneratorSpec::with_labels(gen_sj, gen_non_sj, g.seed);
      } else {
        spec = synthetic::GeneratorSpec::mixed(gen_n ? gen_n : 100, g.seed);
      }
      spec.long_cases = gen_long;
      const auto corpus = synthetic::generate(spec);
      synthetic::write(corpus, out);
      std::cout << corpus.cases.size() << " case(s) -> " << (out / "cases").string() << "\n";
    } else if (rx->parsed()) {
      const auto ds = load_input(rx_in);
      const regex::RootPattern pattern = rx_pattern.empty() ? regex::RootPattern() : regex::RootPattern(rx_pattern);
      const auto sj = regex::regex_filter(ds, pattern);
      std::cout << sj.size() << " of " << ds.size() << " case(s) match " << pattern.source() << "\n";
      save_dataset(out / "regex_sj.jsonl", sj);
    } else if (kw->parsed()) {
      const auto catalog = load_catalog(kw_catalog);
      const auto profiles = keywords::scan_dataset(load_input(kw_in), catalog);
      const auto totals = keywords::total_counts(profiles, catalog);
      keywords::write_counts_csv(out / "total_counts.csv", totals);
      keywords::write_counts_csv(out / "isolation_counts.csv", keywords::isolation_counts(profiles, catalog));
      keywords::write_cooccurrence_csv(out / "cooccurrence.csv", keywords::cooccurrence(profiles, catalog));
      for (const auto& t : totals) std::cout << t.count << "\t" << t.variant << "\n";
    } else if (venn->parsed()) {
      const auto catalog = load_catalog(venn_catalog);
      const auto profiles = keywords::scan_dataset(load_input(venn_in), catalog);
      const auto keys = split_list(venn_keys);
      const auto counts = keywords::venn_counts(profiles, catalog, keys);
      const auto j = keywords::to_json(counts);
      io::write_file(out / "venn.json", j.dump(2) + "\n");
      std::cout << j.dump(2) << "\n";
    } else if (mx->parsed()) {
      const auto rules = mx_rules.empty() ? matrix::RuleSet::default_ruleset() : matrix::RuleSet::load(mx_rules);
      const auto r = matrix::classify_dataset(load_input(mx_in), rules);
      save_dataset(out / "ksjd.jsonl", r.sj);
      save_dataset(out / "knsjd.jsonl", r.non_sj);
      matrix::write_decisions_csv(out / "matrix_decisions.csv", r.decisions);
    } else if (lc->parsed()) {
      llm::BackendConfig bc;
      if (!llm_script.empty()) {
        bc.kind = llm::BackendConfig::Kind::scripted;
        bc.script_path = llm_script;
      } else if (!llm_endpoint.empty()) {
        bc.kind = llm::BackendConfig::Kind::live;
        bc.live.endpoint = llm_endpoint;
        bc.live.model = llm_model;
      } else if (auto cfg = global_config(g); cfg && cfg->llm) {
        bc = *cfg->llm;
      } else {
        throw ArgumentError("give --script, --endpoint/--model or a --config with an llm section");
      }
      auto backend = llm::make_backend(bc);
      llm::ClassifyOptions opts;
      opts.guard.limit_words = llm_limit;
      opts.max_concurrent_requests = llm_conc;
      opts.retry = bc.retry;
      opts.decision_log = out / "llm_decisions.jsonl";
      std::stop_source stop;
      opts.stop = stop.get_token();
      std::signal(SIGINT, on_sigint);
      std::atomic<bool> finished{false};
      std::thread watcher([&] {
        while (!finished) {
          if (g_interrupted) {
            stop.request_stop();
            break;
          }
          std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
      });
      llm::LlmResult r;
      try {
        r = llm::classify_dataset(load_input(llm_in), *backend, opts);
      } catch (...) {
        finished = true;
        watcher.join();
        throw;
      }
      finished = true;
      watcher.join();
      if (r.interrupted) {
        std::cerr << "interrupted; decisions so far are in " << opts.decision_log.string() << "; rerun to resume\n";
        return 130;
      }
      save_dataset(out / "csjd.jsonl", r.sj);
      save_dataset(out / "cnsjd.jsonl", r.non_sj);
      std::cout << r.skipped.size() << " skipped by the length guard, " << r.unparseable.size() << " unparseable, "
                << r.resumed << " resumed from the log\n";
    } else if (smp->parsed()) {
      const auto ds = load_input(smp_in);
      auto plan = smp_size ? sampling::draw_sample(ds, *smp_size, g.seed)
                           : sampling::plan_sample(ds, smp_conf, smp_margin, smp_p, g.seed);
      if (smp_size) {
        plan.confidence = smp_conf;
        plan.margin = smp_margin;
        plan.proportion = smp_p;
      }
      const auto path = out / (ds.name() + "_sample.json");
      plan.save(path);
      std::cout << plan.size << " of " << plan.population << " case(s) -> " << path.string() << "\n";
    } else if (ev->parsed()) {
      auto gold = sampling::read_gold_labels(ev_labels);
      if (!ev_samples.empty()) {
        std::set<std::string> ids;
        for (const auto& s : ev_samples) {
          for (auto& id : sampling::SamplePlan::load(s).ids) ids.insert(std::move(id));
        }
        std::erase_if(gold, [&](const auto& kv) { return !ids.count(kv.first); });
      }
      const auto report = review::evaluate_labels(review::load_predictions(ev_preds), gold);
      io::write_file(out / "evaluation.json", report.to_json().dump(2) + "\n");
      std::cout << report.to_text(ev_title);
    } else if (an->parsed()) {
      const auto ds = load_input(an_in);
      const auto tiers =
          an_tiers.empty() ? analytics::CourtTierMap::default_map() : analytics::CourtTierMap::load(an_tiers);
      analytics::AnalysisOptions opts;
      opts.kmeans_k.clear();
      for (const auto& k : split_list(an_k)) opts.kmeans_k.push_back(std::stoul(k));
      const auto report = analytics::analyze(ds, tiers, opts);
      analytics::write_report(report, ds, out);
      for (const auto& n : report.notes) std::cout << "note: " << n << "\n";
      std::cout << "analysis of " << ds.size() << " case(s) -> " << out.string() << "\n";
    } else if (ch->parsed()) {
      for (const auto& p : charts::emit_charts(ch_in, out)) std::cout << p.string() << "\n";
    } else if (sv->parsed()) {
      review::ReviewConfig rc;
      for (const auto& d : sv_datasets) rc.datasets.push_back(load_input(d));
      for (const auto& s : sv_samples) rc.samples.push_back(sampling::SamplePlan::load(s));
      rc.label_store = sv_labels;
      if (!sv_matrix.empty()) rc.matrix_predictions = review::load_predictions(sv_matrix);
      if (!sv_llm.empty()) {
        for (auto& d : llm::read_decision_log(sv_llm)) rc.llm_decisions.emplace(d.case_id, d);
      }
      rc.reviewer = sv_reviewer;
      rc.blind = !sv_reveal;
      review::ReviewService service(std::move(rc));
      review::ReviewServer server(service, sv_static);
      std::cout << "serving review API on http://" << sv_host << ":" << sv_port << "/api/session" << std::endl;
      server.serve_forever(sv_host, sv_port);
    } else if (run->parsed()) {
      auto cfg = global_config(g);
      if (!cfg) throw ArgumentError("run needs --config");
      if (app.get_option("--out-dir")->count()) cfg->out_dir = g.out_dir;
      if (app.get_option("--seed")->count()) cfg->seed = g.seed;
      const auto manifest = pipeline::run_pipeline(*cfg);
      for (const auto& s : manifest.stages) std::cout << s.name << "\t" << s.status << "\t" << s.counts.dump() << "\n";
    }
  } catch (const ArgumentError& e) {
    std::cerr << "casesift: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "casesift: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "casesift: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
