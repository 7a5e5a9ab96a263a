// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <gtest/gtest.h>

#include <httplib.h>

#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/matrix.hpp"
#include "casesift/review.hpp"
#include "test_support.hpp"

using namespace casesift;
using namespace casesift::review;
using nlohmann::json;

namespace {

const char* kTexts[] = {
    "This is an application for summary judgment. No real prospect of success.",
    "A dispute about a lease with no relevant wording.",
    "The court granted summary judgment under CPR 24.2.",
    "Summary judgment was mentioned only in passing.",
    "An application to amend the claim form; summary judgment under CPR 24.",
    "Nothing to see here.",
};

corpus::Dataset sample_corpus() {
  std::vector<corpus::Case> cases;
  for (int i = 0; i < 6; ++i) {
    cases.push_back(corpus::make_case("[2020] EWHC " + std::to_string(i + 1) + " (Ch)", "Court " + std::to_string(i),
                                      corpus::Date{std::chrono::year{2020}, std::chrono::month{1},
                                                   std::chrono::day{static_cast<unsigned>(i + 1)}},
                                      kTexts[i]));
  }
  return corpus::Dataset("all", "test", cases);
}

struct Fixture {
  testkit::TempDir dir;
  corpus::Dataset ds = sample_corpus();
  sampling::SamplePlan plan = sampling::draw_sample(ds, 4, 3);

  ReviewConfig config(bool blind = true) {
    ReviewConfig c;
    c.datasets = {ds};
    c.samples = {plan};
    c.label_store = dir / "labels.jsonl";
    for (const auto& d : matrix::classify_dataset(ds, matrix::RuleSet::default_ruleset()).decisions) {
      c.matrix_predictions[d.case_id] = d.label;
    }
    for (const auto& cs : ds) {
      llm::LlmDecision d{cs.id, cs.id.find(" 6 ") != std::string::npos ? llm::Outcome::skipped : llm::Outcome::sj,
                         "r", "", "script:x", ""};
      c.llm_decisions[cs.id] = d;
    }
    c.blind = blind;
    return c;
  }
};

}  // namespace

TEST(ReviewService, QueueFollowsSampleOrder) {
  Fixture f;
  ReviewService svc(f.config());
  const auto s = svc.session().body;
  EXPECT_EQ(s["total"], 4);
  EXPECT_EQ(s["labelled"], 0);
  EXPECT_EQ(s["complete"], false);
  EXPECT_EQ(s["methods"], json::array({"matrix", "llm"}));

  for (std::size_t i = 0; i < 4; ++i) {
    const auto next = svc.next_case().body;
    EXPECT_EQ(next["case_id"], f.plan.ids[i]);
    EXPECT_EQ(next["position"], i + 1);
    EXPECT_FALSE(next.contains("predictions"));
    EXPECT_EQ(svc.post_label({{"case_id", f.plan.ids[i]}, {"label", i % 2 ? "non-SJ" : "SJ"}}, "alice").status, 200);
  }
  const auto done = svc.next_case().body;
  EXPECT_EQ(done["complete"], true);
  EXPECT_EQ(svc.session().body["remaining"], 0);
}

TEST(ReviewService, CasePayloadHighlights) {
  Fixture f;
  ReviewService svc(f.config());
  const auto c = svc.case_by_id(f.plan.ids[0]).body;
  const auto& text = c["text"].get_ref<const std::string&>();
  EXPECT_EQ(c["word_count"], f.ds.find(f.plan.ids[0])->word_count);
  for (const auto& h : c["highlights"]) {
    const auto b = h["begin"].get<std::size_t>(), e = h["end"].get<std::size_t>();
    EXPECT_EQ(testkit::naive_lower(text.substr(b, e - b)), h["variant"]);
  }
  EXPECT_EQ(svc.case_by_id("nope").status, 404);
}

TEST(ReviewService, BlindModeHidesPredictionsUntilLabelled) {
  Fixture f;
  ReviewService svc(f.config());
  const auto& id = f.plan.ids[0];
  EXPECT_EQ(svc.predictions(id).status, 403);
  svc.post_label({{"case_id", id}, {"label", "SJ"}});
  const auto p = svc.predictions(id);
  EXPECT_EQ(p.status, 200);
  EXPECT_EQ(p.body["matrix"]["label"], std::string(to_string(matrix::evaluate(id, f.ds.find(id)->text,
                                                                               matrix::RuleSet::default_ruleset())
                                                                  .label)));
  EXPECT_EQ(svc.case_by_id(id).body["predictions"], p.body);
  ReviewService open(f.config(false));
  EXPECT_EQ(open.predictions(f.plan.ids[1]).status, 200);
  EXPECT_EQ(open.predictions("nope").status, 404);
}

TEST(ReviewService, LabelValidation) {
  Fixture f;
  ReviewService svc(f.config());
  EXPECT_EQ(svc.post_label(json::array()).status, 400);
  EXPECT_EQ(svc.post_label({{"label", "SJ"}}).status, 400);
  EXPECT_EQ(svc.post_label({{"case_id", f.plan.ids[0]}, {"label", "maybe"}}).status, 400);
  EXPECT_EQ(svc.post_label({{"case_id", f.plan.ids[0]}, {"label", "SJ"}, {"reviewer", 3}}).status, 400);
  EXPECT_EQ(svc.post_label({{"case_id", "unknown"}, {"label", "SJ"}}).status, 404);
  const auto ok = svc.post_label({{"case_id", f.plan.ids[0]}, {"label", "no"}}, "bob");
  EXPECT_EQ(ok.status, 200);
  EXPECT_EQ(ok.body["label"], "non-SJ");
  EXPECT_EQ(ok.body["reviewer"], "bob");
}

TEST(ReviewService, LabelsSurviveRestart) {
  Fixture f;
  {
    ReviewService svc(f.config());
    svc.post_label({{"case_id", f.plan.ids[1]}, {"label", "SJ"}});
  }
  ReviewService again(f.config());
  EXPECT_EQ(again.session().body["labelled"], 1);
  EXPECT_EQ(again.next_case().body["case_id"], f.plan.ids[0]);
  EXPECT_EQ(again.case_by_id(f.plan.ids[1]).body["label"]["label"], "SJ");
}

TEST(ReviewService, MissingCaseTextIsNotFound) {
  Fixture f;
  auto cfg = f.config();
  cfg.samples[0].ids.push_back("ghost");
  EXPECT_THROW(ReviewService{cfg}, NotFoundError);
}

TEST(ReviewService, MetricsMatchTheEvaluateComputation) {
  Fixture f;
  ReviewService svc(f.config());
  EXPECT_EQ(svc.metrics("matrix").body["report"], nullptr);
  const Label gold[] = {Label::sj, Label::non_sj, Label::sj, Label::non_sj};
  std::map<std::string, Label> gold_map;
  for (int i = 0; i < 4; ++i) {
    svc.post_label({{"case_id", f.plan.ids[i]}, {"label", std::string(to_string(gold[i]))}});
    gold_map[f.plan.ids[i]] = gold[i];
  }
  const auto cfg = f.config();
  const auto m = svc.metrics("matrix");
  ASSERT_EQ(m.status, 200);
  EXPECT_EQ(m.body["report"], evaluate_labels(cfg.matrix_predictions, gold_map).to_json());
  // Independent tally of the same confusion matrix.
  std::uint64_t tp = 0, fn = 0, fp = 0, tn = 0;
  for (const auto& [id, g] : gold_map) {
    const bool p = cfg.matrix_predictions.at(id) == Label::sj;
    (g == Label::sj ? (p ? tp : fn) : (p ? fp : tn))++;
  }
  EXPECT_EQ(m.body["report"]["confusion_matrix"], (json{{"tp", tp}, {"fn", fn}, {"fp", fp}, {"tn", tn}}));
  EXPECT_EQ(svc.metrics().body["method"], "matrix");

  const auto l = svc.metrics("llm").body;
  std::size_t scored = 0;
  for (const auto& [id, g] : gold_map) scored += cfg.llm_decisions.at(id).label == llm::Outcome::sj;
  EXPECT_EQ(l["scored"], scored);
  EXPECT_EQ(svc.metrics("bogus").status, 400);

  auto bare = f.config();
  bare.matrix_predictions.clear();
  bare.llm_decisions.clear();
  EXPECT_EQ(ReviewService(bare).metrics().status, 409);
}

TEST(EvaluateLabels, LeavesOutUnpredictedCasesWithWarning) {
  const std::map<std::string, Label> pred{{"a", Label::sj}, {"b", Label::non_sj}};
  const std::map<std::string, Label> gold{{"a", Label::sj}, {"b", Label::sj}, {"c", Label::sj}};
  const auto r = evaluate_labels(pred, gold);
  EXPECT_EQ(r.matrix, (sampling::ConfusionMatrix{1, 1, 0, 0}));
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.back().find("1 labelled case"), std::string::npos);
}

TEST(LoadPredictions, MatrixCsvAndDecisionLog) {
  testkit::TempDir dir;
  const auto ds = sample_corpus();
  const auto mr = matrix::classify_dataset(ds, matrix::RuleSet::default_ruleset());
  matrix::write_decisions_csv(dir / "m.csv", mr.decisions);
  const auto from_csv = load_predictions(dir / "m.csv");
  EXPECT_EQ(from_csv.size(), 6u);
  for (const auto& d : mr.decisions) EXPECT_EQ(from_csv.at(d.case_id), d.label);

  std::string log;
  log += llm::to_json({"a", llm::Outcome::sj, "r", "", "", ""}).dump() + "\n";
  log += llm::to_json({"b", llm::Outcome::skipped, "", "", "", ""}).dump() + "\n";
  log += llm::to_json({"c", llm::Outcome::non_sj, "", "", "", ""}).dump() + "\n";
  io::write_file(dir / "d.jsonl", log);
  EXPECT_EQ(load_predictions(dir / "d.jsonl"),
            (std::map<std::string, Label>{{"a", Label::sj}, {"c", Label::non_sj}}));
}

TEST(ReviewServer, HttpRoutes) {
  Fixture f;
  ReviewService svc(f.config());
  ReviewServer server(svc);
  const int port = server.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);

  auto get = [&](const std::string& path) {
    auto r = client.Get(path);
    EXPECT_TRUE(r) << path;
    return std::make_pair(r ? r->status : 0, r ? json::parse(r->body) : json());
  };
  auto post = [&](const std::string& body, httplib::Headers headers = {}) {
    auto r = client.Post("/api/labels", headers, body, "application/json");
    EXPECT_TRUE(r);
    return std::make_pair(r ? r->status : 0, r ? json::parse(r->body) : json());
  };

  EXPECT_EQ(get("/api/session").second, svc.session().body);
  const auto [s1, next] = get("/api/cases/next");
  EXPECT_EQ(s1, 200);
  EXPECT_EQ(next["case_id"], f.plan.ids[0]);

  const auto& id = f.plan.ids[0];
  const auto [s2, byid] = get("/api/cases/" + httplib::detail::encode_url(id));
  EXPECT_EQ(s2, 200);
  EXPECT_EQ(byid["case_id"], id);
  EXPECT_EQ(get("/api/cases/nope").first, 404);
  EXPECT_EQ(get("/api/predictions/" + httplib::detail::encode_url(id)).first, 403);

  EXPECT_EQ(post("{not json").first, 400);
  EXPECT_EQ(post(json{{"case_id", "unknown"}, {"label", "SJ"}}.dump()).first, 404);
  const auto [s3, ok] = post(json{{"case_id", id}, {"label", "SJ"}}.dump(), {{"X-Reviewer", "carol"}});
  EXPECT_EQ(s3, 200);
  EXPECT_EQ(ok["reviewer"], "carol");
  EXPECT_EQ(get("/api/predictions/" + httplib::detail::encode_url(id)).first, 200);
  EXPECT_EQ(get("/api/cases/next").second["case_id"], f.plan.ids[1]);

  const auto [s4, metrics] = get("/api/metrics?method=matrix");
  EXPECT_EQ(s4, 200);
  EXPECT_EQ(metrics, svc.metrics("matrix").body);
  EXPECT_EQ(get("/api/metrics?method=nope").first, 400);

  const auto [s5, missing] = get("/api/nothing");
  EXPECT_EQ(s5, 404);
  EXPECT_TRUE(missing.contains("error"));
  server.stop();
}

TEST(ReviewServer, ServesStaticFiles) {
  Fixture f;
  ReviewService svc(f.config());
  io::write_file(f.dir / "ui/index.html", "<html>ui</html>");
  ReviewServer server(svc, f.dir / "ui");
  const int port = server.start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);
  auto r = client.Get("/index.html");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->body, "<html>ui</html>");
  EXPECT_THROW(ReviewServer(svc, f.dir / "nope"), IoError);
}
