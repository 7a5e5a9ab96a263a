// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/llm.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/text.hpp"

namespace casesift::llm {

// ---------------------------------------------------------------------------
// Prompt

const PromptTemplate& PromptTemplate::standard() {
  static const PromptTemplate tpl{
      // preamble
      "\n\nHuman: I need you to analyse this legal case judgment and identify if it involves summary judgment "
      "proceedings. Summary judgment is a legal process where a court can decide a case or issue without a full "
      "trial.\n\n",
      // criteria
      "Relevant details to identify about summary judgment are:\n\n"
      "- whether there is no real prospect of succeeding on or defending the claim and there is no compelling "
      "reason why the case or issue should be disposed of at trial under CPR or other tribunal procedural rules\n"
      "- if there is a real prospect of succeeding, a real and not merely fanciful prospect of success, and "
      "whether there is a compelling reason to try the case or issue\n"
      "- if a party brings an application requesting summary judgment or appeals a case for an issue in an "
      "earlier decision to grant or refuse summary judgment\n"
      "- that summary judgment may be one issue in a case or about the whole case, it may also be an alternative "
      "application to a strike-out\n\n",
      // response format
      "Please analyse the full text contained within the <case_text> </case_text> tags. If the case involves an "
      "application for summary judgment or an appeal of a summary judgment decision, respond with:\n\n"
      "<response> Yes, this is a summary judgment case. Reason: [insert 1-2 sentences explaining why you "
      "identified it as a summary judgment case] </response>\n\n"
      "If it is NOT a summary judgment case, respond: <response> No, this is not a summary judgment case. "
      "</response>\n\n",
      // exclusions
      "Do NOT include the following as summary judgment cases:\n\n"
      "- enforcement of adjudicator’s award under the Construction Act\n"
      "- applications to amend a claim form under CPR 17.3\n"
      "- applications for permission to serve outside jurisdiction under CPR rr. 6.36, 6.37 and 6.38\n"
      "- applications to set aside a default judgment under CPR 13\n\n"
      "These types of cases may discuss similar legal tests but are not summary judgment cases. Focus only on "
      "identifying true summary judgment cases.\n\n",
      // worked examples
      "Here are two examples:\n\n"
      "<example> <case_text> The plaintiff applied for summary judgment on the grounds that the defendant had no "
      "real prospect of establishing their defence. The court considered whether there was need for a full trial. "
      "</case_text>\n"
      "<response> Yes, this is a summary judgment case. Reason: The case includes an application for summary "
      "judgment and discusses ‘no real prospect of success’ and the need for the issue to proceed to full "
      "trial. </response>\n\n"
      "<example> <case_text> The plaintiff disputes liability in a contractual dispute. The defendant applied to "
      "amend their defence claim form. </case_text> <response> No, this is not a summary judgment case. "
      "</response>\n"
      "<example>\n\n",
      "<case_text>",
      "</case_text>",
      "\n\nAssistant:"};
  return tpl;
}

std::string neutralize_closing_tags(std::string_view text) {
  static constexpr std::string_view kTag = "</case_text>";
  static constexpr std::string_view kZeroWidthSpace = "\xE2\x80\x8B";  // U+200B
  std::string out;
  out.reserve(text.size());
  std::size_t from = 0;
  for (auto pos = text::ifind(text, kTag); pos != std::string_view::npos; pos = text::ifind(text, kTag, from)) {
    out.append(text.substr(from, pos + 2 - from));
    out.append(kZeroWidthSpace);
    from = pos + 2;
  }
  out.append(text.substr(from));
  return out;
}

std::string PromptTemplate::render(std::string_view case_text) const {
  std::string out;
  out.reserve(preamble.size() + criteria.size() + response_format.size() + exclusions.size() + examples.size() +
              case_text.size() + 64);
  out += preamble;
  out += criteria;
  out += response_format;
  out += exclusions;
  out += examples;
  out += slot_open;
  out += neutralize_closing_tags(case_text);
  out += slot_close;
  out += suffix;
  return out;
}

// ---------------------------------------------------------------------------
// Response contract

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::sj: return "SJ";
    case Outcome::non_sj: return "non-SJ";
    case Outcome::skipped: return "skipped";
    case Outcome::unparseable: return "unparseable";
  }
  return "unparseable";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
  for (auto o : {Outcome::sj, Outcome::non_sj, Outcome::skipped, Outcome::unparseable}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

ParsedResponse parse_response(std::string_view raw) {
  static constexpr std::string_view kOpen = "<response>", kClose = "</response>";
  const auto open = text::ifind(raw, kOpen);
  if (open == std::string_view::npos) return {};
  const auto body_start = open + kOpen.size();
  const auto close = text::ifind(raw, kClose, body_start);
  if (close == std::string_view::npos) return {};
  const auto body = text::trim(raw.substr(body_start, close - body_start));

  if (text::istarts_with(body, "yes, this is a summary judgment case")) {
    const auto r = text::ifind(body, "reason:");
    if (r == std::string_view::npos) return {};
    std::string reason(text::trim(body.substr(r + 7)));
    if (reason.empty()) return {};
    return {Outcome::sj, std::move(reason)};
  }
  if (text::istarts_with(body, "no, this is not")) return {Outcome::non_sj, {}};
  return {};
}

GuardVerdict length_guard(const corpus::Case& c, std::uint64_t limit_words) {
  if (limit_words == 0) throw ArgumentError("length guard limit must be positive");
  return c.word_count > limit_words ? GuardVerdict::skip : GuardVerdict::pass;
}

GuardVerdict LengthGuard::check(const corpus::Case& c, std::uint64_t prompt_words) const {
  if (length_guard(c, limit_words) == GuardVerdict::skip) return GuardVerdict::skip;
  if (tokens_per_word && token_limit) {
    const double tokens = static_cast<double>(c.word_count + prompt_words) * *tokens_per_word;
    if (tokens > static_cast<double>(*token_limit)) return GuardVerdict::skip;
  }
  return GuardVerdict::pass;
}

// ---------------------------------------------------------------------------
// Decision log

nlohmann::json to_json(const LlmDecision& d) {
  return {{"case_id", d.case_id},     {"label", std::string(to_string(d.label))},
          {"reason", d.reason},       {"raw_response", d.raw_response},
          {"backend_id", d.backend_id}, {"note", d.note}};
}

LlmDecision decision_from_json(const nlohmann::json& j) {
  auto label = parse_outcome(j.at("label").get<std::string>());
  if (!label) throw SchemaError("unknown LLM decision label " + j.at("label").dump());
  return {j.at("case_id").get<std::string>(), *label, j.value("reason", std::string()),
          j.value("raw_response", std::string()), j.value("backend_id", std::string()),
          j.value("note", std::string())};
}

std::vector<LlmDecision> read_decision_log(const std::filesystem::path& path) {
  std::map<std::string, LlmDecision> latest;
  const auto lines = text::split(io::read_file(path), '\n');
  std::size_t line_no = 0;
  for (const auto& line : lines) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      auto d = decision_from_json(nlohmann::json::parse(line));
      latest[d.case_id] = std::move(d);
    } catch (const nlohmann::json::exception& e) {
      // A torn final line from an interrupted run is tolerated; anything else is not.
      if (line_no + 1 >= lines.size()) break;
      throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<LlmDecision> out;
  out.reserve(latest.size());
  for (auto& [_, d] : latest) out.push_back(std::move(d));
  return out;
}

// ---------------------------------------------------------------------------
// Dataset classification

namespace {

class DecisionLog {
 public:
  explicit DecisionLog(const std::filesystem::path& path) {
    if (path.empty()) return;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::app | std::ios::binary);
    if (!out_) throw IoError("cannot open decision log " + path.string());
  }

  void append(const LlmDecision& d) {
    if (!out_.is_open()) return;
    std::lock_guard lock(mu_);
    out_ << to_json(d).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    out_.flush();
  }

  void close() { out_.close(); }

 private:
  std::mutex mu_;
  std::ofstream out_;
};

std::string query_with_retries(CompletionBackend& backend, const CompletionRequest& req, const RetryPolicy& retry,
                               std::string& error) {
  auto backoff = retry.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      return backend.complete(req);
    } catch (const BackendError& e) {
      error = e.what();
      if (attempt >= retry.max_retries) throw;
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<long long>(std::llround(backoff.count() * retry.multiplier)));
    }
  }
}

LlmDecision classify_one(const corpus::Case& c, CompletionBackend& backend, const PromptTemplate& prompt,
                         const ClassifyOptions& options) {
  LlmDecision d{c.id, Outcome::unparseable, {}, {}, backend.id(), {}};
  const CompletionRequest req{c.id, prompt.render(c.text), options.max_output_tokens};
  std::string error;
  try {
    // Malformed answers get one more identical request.
    for (int attempt = 0; attempt < 2; ++attempt) {
      d.raw_response = query_with_retries(backend, req, options.retry, error);
      auto parsed = parse_response(d.raw_response);
      if (parsed.label != Outcome::unparseable) {
        d.label = parsed.label;
        d.reason = std::move(parsed.reason);
        d.note = attempt ? "parsed on retry" : "";
        return d;
      }
    }
    d.note = "response did not follow the contract";
  } catch (const BackendError& e) {
    d.note = std::string("transport: ") + e.what();
  }
  return d;
}

}  // namespace

LlmResult classify_dataset(const corpus::Dataset& dataset, CompletionBackend& backend, const ClassifyOptions& options) {
  const PromptTemplate& prompt = options.prompt ? *options.prompt : PromptTemplate::standard();
  const auto prompt_words = text::count_words(prompt.render(""));

  std::map<std::string, LlmDecision> done;
  LlmResult result;
  if (!options.decision_log.empty() && std::filesystem::exists(options.decision_log)) {
    for (auto& d : read_decision_log(options.decision_log)) {
      if (dataset.find(d.case_id)) done.emplace(d.case_id, std::move(d));
    }
    result.resumed = done.size();
  }
  DecisionLog log(options.decision_log);

  std::vector<const corpus::Case*> pending;
  for (const auto& c : dataset) {
    if (done.count(c.id)) continue;
    if (options.guard.check(c, prompt_words) == GuardVerdict::skip) {
      LlmDecision d{c.id, Outcome::skipped, {}, {}, backend.id(),
                    "exceeds length guard (" + std::to_string(c.word_count) + " words)"};
      log.append(d);
      done.emplace(c.id, std::move(d));
      continue;
    }
    pending.push_back(&c);
  }

  std::mutex done_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> queried{0};
  auto worker = [&] {
    while (!options.stop.stop_requested()) {
      const auto i = next++;
      if (i >= pending.size()) return;
      ++queried;
      auto d = classify_one(*pending[i], backend, prompt, options);
      log.append(d);
      std::lock_guard lock(done_mu);
      done.emplace(d.case_id, std::move(d));
    }
  };
  const auto workers = std::max<std::size_t>(1, std::min(options.max_concurrent_requests, pending.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers && !pending.empty(); ++t) pool.emplace_back(worker);
  }
  result.queried = queried;
  result.interrupted = done.size() < dataset.size();

  std::vector<corpus::Case> sj, non_sj;
  for (const auto& c : dataset) {
    auto it = done.find(c.id);
    if (it == done.end()) continue;
    switch (it->second.label) {
      case Outcome::sj: sj.push_back(c); break;
      case Outcome::non_sj: non_sj.push_back(c); break;
      case Outcome::skipped: result.skipped.push_back(c.id); break;
      case Outcome::unparseable: result.unparseable.push_back(c.id); break;
    }
    result.decisions.push_back(it->second);
  }
  // A finished log is rewritten in id order so it does not depend on which
  // worker answered first. The rename keeps the old log if writing fails.
  log.close();
  if (!options.decision_log.empty() && !result.interrupted) {
    std::string compact;
    for (const auto& d : result.decisions) {
      compact += to_json(d).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + '\n';
    }
    auto tmp = options.decision_log;
    tmp += ".tmp";
    io::write_file(tmp, compact);
    std::filesystem::rename(tmp, options.decision_log);
  }
  result.sj = corpus::Dataset("csjd", "llm-sj", std::move(sj));
  result.non_sj = corpus::Dataset("cnsjd", "llm-non-sj", std::move(non_sj));
  return result;
}

}  // namespace casesift::llm
