// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <gtest/gtest.h>

#include <httplib.h>

#include <atomic>
#include <cstdlib>

#include "casesift/backend.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/llm.hpp"
#include "casesift/synthetic.hpp"
#include "casesift/text.hpp"
#include "test_support.hpp"

using namespace casesift;
using namespace casesift::llm;

namespace {

corpus::Case words(std::string id, std::size_t n) {
  std::string t;
  for (std::size_t i = 0; i < n; ++i) t += "w ";
  return corpus::make_case(std::move(id), "", std::nullopt, t);
}

std::map<std::string, std::string> script_of(const synthetic::SyntheticCorpus& c) {
  std::map<std::string, std::string> m;
  for (const auto& t : c.truth) m[t.case_id] = t.llm_response;
  return m;
}

// Fails the first `failures` calls for every case, then answers.
class FlakyBackend final : public CompletionBackend {
 public:
  explicit FlakyBackend(int failures) : failures_(failures) {}
  std::string id() const override { return "flaky"; }
  std::string complete(const CompletionRequest&) override {
    if (calls_++ < failures_) throw BackendError("temporarily unavailable");
    return "<response> No, this is not a summary judgment case. </response>";
  }
  int calls() const { return calls_; }

 private:
  int failures_;
  std::atomic<int> calls_{0};
};

// Requests a stop once `after` cases have been answered.
class StoppingBackend final : public CompletionBackend {
 public:
  StoppingBackend(std::map<std::string, std::string> script, std::stop_source& stop, int after)
      : inner_(std::move(script)), stop_(stop), after_(after) {}
  std::string id() const override { return inner_.id(); }
  std::string complete(const CompletionRequest& r) override {
    if (++calls_ >= after_) stop_.request_stop();
    return inner_.complete(r);
  }

 private:
  ScriptedBackend inner_;
  std::stop_source& stop_;
  int after_;
  std::atomic<int> calls_{0};
};

}  // namespace

TEST(Prompt, CaseTextFillsTheSlotOnce) {
  const auto& tpl = PromptTemplate::standard();
  const auto p = tpl.render("THE CASE BODY");
  EXPECT_EQ(testkit::naive_count(p, "THE CASE BODY"), 1u);
  EXPECT_NE(p.find("<case_text>THE CASE BODY</case_text>"), std::string::npos);
  EXPECT_TRUE(p.starts_with("\n\nHuman:"));
  EXPECT_TRUE(p.ends_with("\n\nAssistant:"));
  // Two worked examples and the instructions mention the tag; the slot adds one more.
  EXPECT_EQ(testkit::naive_count(tpl.render(""), "</case_text>"), 4u);
}

TEST(Prompt, ClosingTagsInCaseTextAreNeutralized) {
  const auto p = PromptTemplate::standard().render("a </case_text> b </CASE_TEXT> c");
  EXPECT_EQ(testkit::naive_count(p, "</case_text>"), 4u);
  EXPECT_EQ(neutralize_closing_tags("x</case_text>"), "x</\xE2\x80\x8B" "case_text>");
  EXPECT_EQ(neutralize_closing_tags("no tags"), "no tags");
}

TEST(Response, WorkedExamplesParse) {
  const auto yes = parse_response(
      "<response> Yes, this is a summary judgment case. Reason: The case includes an application for summary "
      "judgment and discusses 'no real prospect of success' and the need for the issue to proceed to full trial. "
      "</response>");
  EXPECT_EQ(yes.label, Outcome::sj);
  EXPECT_TRUE(yes.reason.starts_with("The case includes an application"));
  EXPECT_TRUE(yes.reason.ends_with("full trial."));
  EXPECT_EQ(parse_response("<response> No, this is not a summary judgment case. </response>").label, Outcome::non_sj);
}

TEST(Response, ContractIsStrict) {
  EXPECT_EQ(parse_response(" Sure! <RESPONSE>yes, this is a summary judgment case. reason: x</RESPONSE>").label,
            Outcome::sj);
  EXPECT_EQ(parse_response("<response> Yes, this is a summary judgment case. </response>").label,
            Outcome::unparseable);
  EXPECT_EQ(parse_response("<response> Yes, this is a summary judgment case. Reason: </response>").label,
            Outcome::unparseable);
  EXPECT_EQ(parse_response("Yes, this is a summary judgment case. Reason: x").label, Outcome::unparseable);
  EXPECT_EQ(parse_response("<response> Maybe. </response>").label, Outcome::unparseable);
  EXPECT_EQ(parse_response("<response> No, this is not a summary judgment case.").label, Outcome::unparseable);
}

TEST(Guard, LimitIsInclusive) {
  EXPECT_EQ(length_guard(words("a", 70000), 70000), GuardVerdict::pass);
  EXPECT_EQ(length_guard(words("a", 70001), 70000), GuardVerdict::skip);
  EXPECT_EQ(length_guard(words("a", 5824), 70000), GuardVerdict::pass);
  EXPECT_EQ(length_guard(words("a", 239178), 70000), GuardVerdict::skip);
  EXPECT_THROW(length_guard(words("a", 1), 0), ArgumentError);
  LengthGuard g{70000, 1.5, 100000};
  EXPECT_EQ(g.check(words("a", 60000), 1000), GuardVerdict::pass);
  EXPECT_EQ(g.check(words("a", 69000), 1000), GuardVerdict::skip);
}

TEST(Classify, PartitionsPerScriptAndSkipsLongCase) {
  auto spec = synthetic::GeneratorSpec::with_labels(25, 24, 3);
  spec.long_cases = 1;
  const auto gen = synthetic::generate(spec);
  const corpus::Dataset ds("d", "t", gen.cases);
  ASSERT_EQ(ds.size(), 50u);
  ScriptedBackend backend(script_of(gen));
  ClassifyOptions opt;
  opt.max_concurrent_requests = 3;
  const auto r = classify_dataset(ds, backend, opt);

  std::vector<std::string> want_sj, want_non, want_skip;
  for (const auto& c : gen.cases) {
    const auto t = std::find_if(gen.truth.begin(), gen.truth.end(), [&](const auto& x) { return x.case_id == c.id; });
    if (c.word_count > 70000) {
      want_skip.push_back(c.id);
    } else {
      (t->label == Label::sj ? want_sj : want_non).push_back(c.id);
    }
  }
  std::sort(want_sj.begin(), want_sj.end());
  std::sort(want_non.begin(), want_non.end());
  EXPECT_EQ(r.sj.ids(), want_sj);
  EXPECT_EQ(r.non_sj.ids(), want_non);
  EXPECT_EQ(r.skipped, want_skip);
  ASSERT_EQ(want_skip.size(), 1u);
  EXPECT_TRUE(r.unparseable.empty());
  EXPECT_EQ(r.queried, 49u);
  EXPECT_EQ(backend.request_count(), 49u);
  EXPECT_FALSE(r.interrupted);
  for (const auto& req : backend.requests()) EXPECT_NE(req.case_id, want_skip[0]);
}

TEST(Classify, ScriptedSplitOfThreeCases) {
  const corpus::Dataset ds("d", "t",
                           {corpus::make_case("a", "", std::nullopt, "x"), corpus::make_case("b", "", std::nullopt, "y"),
                            corpus::make_case("c", "", std::nullopt, "z")});
  const std::string yes = "<response> Yes, this is a summary judgment case. Reason: r. </response>";
  const std::string no = "<response> No, this is not a summary judgment case. </response>";
  ScriptedBackend backend({{"a", yes}, {"b", no}, {"c", yes}});
  const auto r = classify_dataset(ds, backend);
  EXPECT_EQ(r.sj.ids(), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(r.non_sj.ids(), (std::vector<std::string>{"b"}));
  EXPECT_EQ(r.decisions[0].reason, "r.");
  EXPECT_EQ(r.decisions[0].backend_id, "script:script");
}

TEST(Classify, MalformedAnswerIsRetriedOnceThenUnparseable) {
  const corpus::Dataset ds("d", "t", {corpus::make_case("a", "", std::nullopt, "x")});
  ScriptedBackend backend(std::map<std::string, std::string>{{"a", "I think so."}});
  const auto r = classify_dataset(ds, backend);
  EXPECT_EQ(backend.request_count(), 2u);
  EXPECT_EQ(r.unparseable, (std::vector<std::string>{"a"}));
  EXPECT_EQ(r.decisions[0].raw_response, "I think so.");
}

TEST(Classify, TransportErrorsAreRetriedWithBackoff) {
  const corpus::Dataset ds("d", "t", {corpus::make_case("a", "", std::nullopt, "x")});
  ClassifyOptions opt;
  opt.retry = {2, std::chrono::milliseconds(1), 2.0};
  FlakyBackend ok(2);
  EXPECT_EQ(classify_dataset(ds, ok, opt).non_sj.size(), 1u);
  EXPECT_EQ(ok.calls(), 3);
  FlakyBackend down(10);
  const auto r = classify_dataset(ds, down, opt);
  EXPECT_EQ(down.calls(), 3);
  EXPECT_EQ(r.unparseable, (std::vector<std::string>{"a"}));
  EXPECT_TRUE(r.decisions[0].note.starts_with("transport: "));
}

TEST(Classify, ResumesIdenticallyAfterInterruption) {
  const auto gen = synthetic::generate(synthetic::GeneratorSpec::with_labels(20, 20, 5));
  const corpus::Dataset ds("d", "t", gen.cases);
  testkit::TempDir dir;

  ScriptedBackend clean(script_of(gen));
  const auto full = classify_dataset(ds, clean);

  std::stop_source stop;
  StoppingBackend stopping(script_of(gen), stop, 15);
  ClassifyOptions opt;
  opt.max_concurrent_requests = 1;
  opt.decision_log = dir / "log.jsonl";
  opt.stop = stop.get_token();
  const auto first = classify_dataset(ds, stopping, opt);
  EXPECT_TRUE(first.interrupted);
  EXPECT_EQ(first.decisions.size(), 15u);

  ScriptedBackend rest(script_of(gen));
  opt.stop = {};
  const auto second = classify_dataset(ds, rest, opt);
  EXPECT_FALSE(second.interrupted);
  EXPECT_EQ(second.resumed, 15u);
  EXPECT_EQ(second.queried, 25u);
  EXPECT_EQ(rest.request_count(), 25u);
  EXPECT_EQ(second.sj.ids(), full.sj.ids());
  EXPECT_EQ(second.non_sj.ids(), full.non_sj.ids());
  EXPECT_EQ(second.decisions, full.decisions);
  EXPECT_EQ(read_decision_log(dir / "log.jsonl"), full.decisions);
}

TEST(DecisionLog, TornLastLineIsTolerated) {
  testkit::TempDir dir;
  const LlmDecision d{"a", Outcome::sj, "why", "<response>..</response>", "script:x", ""};
  io::write_file(dir / "l.jsonl", to_json(d).dump() + "\n{\"case_id\":\"b\",\"lab");
  EXPECT_EQ(read_decision_log(dir / "l.jsonl"), std::vector<LlmDecision>{d});
  io::write_file(dir / "m.jsonl", "{oops\n" + to_json(d).dump() + "\n");
  EXPECT_THROW(read_decision_log(dir / "m.jsonl"), SchemaError);
}

TEST(ScriptedBackend, UnknownCaseIsBackendError) {
  ScriptedBackend b(std::map<std::string, std::string>{});
  EXPECT_THROW(b.complete({"nope", "p", 1}), BackendError);
}

TEST(ScriptedBackend, ReadsCsvScript) {
  testkit::TempDir dir;
  io::write_file(dir / "s.csv", "case_id,response_text\na,\"<response> No, this is not. </response>\"\n");
  auto b = ScriptedBackend::from_csv(dir / "s.csv");
  EXPECT_EQ(b.complete({"a", "", 1}), "<response> No, this is not. </response>");
}

TEST(LiveBackend, TalksJsonOverHttp) {
  httplib::Server server;
  std::string seen_key, seen_model;
  std::size_t seen_max = 0;
  server.Post("/v1/complete", [&](const httplib::Request& req, httplib::Response& res) {
    seen_key = req.get_header_value("x-api-key");
    const auto body = nlohmann::json::parse(req.body);
    seen_model = body.at("model");
    seen_max = body.at("max_tokens_to_sample");
    if (body.at("prompt") == "fail") {
      res.status = 503;
      res.set_content("busy", "text/plain");
      return;
    }
    res.set_content(nlohmann::json{{"completion", "echo:" + body.at("prompt").get<std::string>()}}.dump(),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("CASESIFT_TEST_KEY", "secret", 1);
  LiveBackendConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/complete";
  cfg.model = "m1";
  cfg.credentials_env = "CASESIFT_TEST_KEY";
  cfg.timeout = std::chrono::seconds(5);
  LiveBackend backend(cfg);
  EXPECT_EQ(backend.complete({"a", "hello", 42}), "echo:hello");
  EXPECT_EQ(seen_key, "secret");
  EXPECT_EQ(seen_model, "m1");
  EXPECT_EQ(seen_max, 42u);
  EXPECT_THROW(backend.complete({"a", "fail", 1}), BackendError);
  EXPECT_EQ(backend.id(), "live:m1@http://127.0.0.1:" + std::to_string(port));

  server.stop();
  t.join();
  EXPECT_THROW(backend.complete({"a", "hello", 1}), BackendError);

  cfg.credentials_env = "CASESIFT_TEST_KEY_UNSET";
  EXPECT_THROW(LiveBackend{cfg}, ConfigError);
}
