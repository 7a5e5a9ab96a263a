// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>

#include "casesift/analytics.hpp"
#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/keywords.hpp"
#include "casesift/rng.hpp"
#include "casesift/text.hpp"

namespace casesift::synthetic {

namespace {

// Phrase pools. These restate the search matrix independently so that the
// generator's expectations do not depend on the rule parser.
const std::vector<std::string> kSj{"summary judgment", "summary judgement"};
const std::vector<std::string> kCompelling{
    "compelling reason why the case or issue should be disposed of at a trial",
    "compelling reason to try the case or issue"};
const std::vector<std::string> kCpr24{"civil procedure rules part 24",
                                      "cpr 24",
                                      "cpr 24.2",
                                      "cpr part 24",
                                      "part 24 of the civil procedure rules",
                                      "part 24 application",
                                      "part 24 judgement",
                                      "part 24 judgment",
                                      "r 24.2",
                                      "r. 24.2",
                                      "rule 24.2"};
const std::vector<std::string> kEasyair{"easyair v opal", "easyair ltd v opal telecom",
                                        "easyair ltd. (t.a openair) v. opal telecom ltd [2009] ewhc 339 (ch)",
                                        "ewhc 339 (ch)"};
const std::vector<std::string> kRealProspect{"real prospect of success",       "real prospect of succeeding",
                                             "realistic prospect of success",  "realistic prospect of succeeding",
                                             "no real prospect",               "no real prospect of succeeding",
                                             "no real prospect of success"};
const std::vector<std::string> kNoRealProspect{"no real prospect", "no real prospect of succeeding",
                                               "no real prospect of success"};
const std::vector<std::string> kFanciful{"fanciful not real", "realistic as opposed to a fanciful",
                                         "real as opposed to a fanciful", "real and not merely fanciful",
                                         "more than fanciful"};
const std::vector<std::string> kMiniTrial{"mini trial", "mini-trial", "must not conduct a mini-trial"};
const std::vector<std::string> kAmend{"application to amend the claim form", "application to amend a claim form",
                                      "application to amend the Defence",
                                      "an amendment to a claim form under CPR 17.3",
                                      "application for permission to amend"};
const std::vector<std::string> kServeOut{"application to serve outside the jurisdiction",
                                         "application for permission to serve outside the jurisdiction",
                                         "merits of the relevant claim under CPR r.6.37(1)(b)",
                                         "under CPR rr. 6.36, 6.37 and 6.38"};
const std::vector<std::string> kSetAside{"set aside a default judgment", "set aside or vary a judgment",
                                         "set aside a judgment entered in default"};
const std::vector<std::string> kCpr13{"CPR 13", "CPR 13.3"};
const std::string kRule1 = "this is an application for summary judgment";
const std::string kSummarily = "summarily judged";

const std::vector<std::string_view> kFiller{
    "The claimant brought proceedings arising out of a written contract for the supply of goods.",
    "The defendant disputes liability and says that the goods were delivered late.",
    "Both parties were represented by counsel at the hearing.",
    "The witness statements were served in accordance with the directions given earlier.",
    "It is common ground that the agreement was signed in the spring of that year.",
    "The relevant correspondence is contained in the bundle before the court.",
    "Counsel for the defendant made careful written submissions on the construction point.",
    "The court heard oral evidence from the managing director of the claimant company.",
    "There is no dispute about the chronology set out in the particulars.",
    "The sums claimed include interest at the contractual rate.",
    "The parties exchanged expert reports on the valuation of the property.",
    "I have read the skeleton arguments and the authorities to which I was referred.",
    "The tenancy was granted for a term of fifteen years.",
    "The bank relies on the terms of the guarantee executed by the director.",
    "The hearing was adjourned part heard and resumed the following week.",
    "The claimant says that the representations were made at a meeting in London.",
    "The defendant accepts that the invoices were received but says they were not due.",
    "These are my reasons for the order made at the conclusion of the hearing.",
    "The appellant appeals against the decision of the deputy master.",
    "The respondent filed a notice seeking to uphold the decision on other grounds.",
    "The loan facility was drawn down in three tranches.",
    "The contract contains an exclusive jurisdiction clause in favour of the English courts.",
    "The directors of the company gave evidence by video link.",
    "The accounts for the relevant period were audited by an independent firm.",
    "The question of costs will be dealt with on written submissions.",
    "The claimant seeks damages for breach of warranty and misrepresentation.",
    "The lease required the tenant to keep the premises in good repair.",
    "The insurer declined cover on the basis of late notification.",
    "The court was taken through the documents in some detail.",
    "The parties agreed a list of issues before the hearing began.",
    "The shares were transferred to the second defendant for no consideration.",
    "The defendant contends that the limitation period expired before the claim was issued.",
    "I am grateful to both counsel for their clear and helpful submissions.",
    "The evidence on this point is thin and largely undocumented.",
    "The trustees were entitled to rely on the advice they received.",
    "The application notice was issued and served within the time allowed.",
};

const std::vector<std::string_view> kPadWords{"further", "matters", "were", "noted", "briefly", "and", "considered",
                                              "in", "the", "course", "of", "argument"};

// Carriers place a phrase inside a sentence. No carrier text touching the
// phrase can extend it into another keyword or rule phrase.
const std::vector<std::string_view> kCarriers{
    "The court considered {} on these facts.",
    "Counsel referred to {} in argument.",
    "It was submitted that {} had been shown.",
    "The judge observed: {}.",
    "Reference was made to {} during the hearing.",
    "The skeleton argument addressed {} at some length.",
};

const std::vector<std::string_view> kReferenceCarriers{
    "In earlier proceedings between other parties the court granted {}.",
    "The earlier decision, cited for background only, concerned {}.",
};

const std::array<const char*, 5> kCitationSuffix{"EWHC {} (Ch)", "EWHC {} (QB)", "EWCA Civ {}", "EWHC {} (Comm)",
                                                 "UKSC {}"};

const std::vector<std::string_view> kReasons{
    "The case includes an application for summary judgment and the court decides it.",
    "The court determines whether the claim has a real prospect of success on a summary basis.",
    "The judgment disposes of the claim without a full trial under the summary procedure.",
};

const std::string kUnmappedCourt = "Scottish Court of Session";

std::string fill(std::string_view carrier, std::string_view phrase) {
  std::string out(carrier);
  const auto at = out.find("{}");
  out.replace(at, 2, phrase);
  return out;
}

std::string mangle(const std::string& phrase, Rng& rng) {
  const auto roll = rng.below(20);
  std::string out = phrase;
  if (roll < 12) return out;
  if (roll < 15) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  } else if (roll < 18) {
    bool start = true;
    for (auto& c : out) {
      if (start && std::isalpha(static_cast<unsigned char>(c))) c = static_cast<char>(std::toupper(c));
      start = c == ' ';
    }
  } else {
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

const std::string& pick(const std::vector<std::string>& pool, Rng& rng) { return pool[rng.below(pool.size())]; }

struct Builder {
  Rng& rng;
  Truth& truth;
  std::vector<std::string> plants;

  void plant(const std::string& phrase, bool reference = false) {
    const auto& carriers = reference ? kReferenceCarriers : kCarriers;
    plants.push_back(fill(carriers[rng.below(carriers.size())], mangle(phrase, rng)));
    ++truth.planted[phrase];
  }

  void plant_sentence(const std::string& phrase) {
    auto s = mangle(phrase, rng);
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    plants.push_back(s + ".");
    ++truth.planted[phrase];
  }

  std::string text(std::uint64_t target_words) {
    std::uint64_t words = 0;
    for (const auto& p : plants) words += text::count_words(p);
    std::vector<std::string> sentences;
    while (true) {
      const auto& f = kFiller[rng.below(kFiller.size())];
      const auto n = text::count_words(f);
      if (words + n > target_words) break;
      sentences.emplace_back(f);
      words += n;
    }
    if (words < target_words) {
      std::string pad = "Further";
      for (std::uint64_t i = 1; i < target_words - words; ++i) {
        pad += ' ';
        pad += kPadWords[rng.below(kPadWords.size())];
      }
      sentences.push_back(pad + ".");
    }
    for (const auto& p : plants) {
      sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(rng.below(sentences.size() + 1)), p);
    }
    std::string out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (i) out += (i % 7 == 0) ? "\n\n" : " ";
      out += sentences[i];
    }
    return out;
  }
};

// Plants the phrases that fire inclusion rule `rule` (1..7).
void plant_rule(Builder& b, int rule) {
  if (rule == 1) {
    b.plant_sentence(kRule1);
    return;
  }
  b.plant(pick(kSj, b.rng));
  switch (rule) {
    case 2: b.plant(pick(kCompelling, b.rng)); break;
    case 3: b.plant(pick(kCpr24, b.rng)); break;
    case 4: b.plant(pick(kEasyair, b.rng)); break;
    case 5:
      b.plant(pick(kRealProspect, b.rng));
      b.plant(pick(kCpr24, b.rng));
      break;
    case 6:
      b.plant(pick(kRealProspect, b.rng));
      b.plant(pick(kFanciful, b.rng));
      break;
    case 7:
      b.plant(pick(kRealProspect, b.rng));
      b.plant(pick(kMiniTrial, b.rng));
      break;
    default: throw ArgumentError("no inclusion rule " + std::to_string(rule));
  }
}

std::string sj_response(Rng& rng) {
  return "<response> Yes, this is a summary judgment case. Reason: " + std::string(kReasons[rng.below(kReasons.size())]) +
         " </response>";
}

const std::string kNoResponse = "<response> No, this is not a summary judgment case. </response>";

}  // namespace

std::string_view to_string(CaseKind k) noexcept {
  switch (k) {
    case CaseKind::sj: return "sj";
    case CaseKind::sj_sparse: return "sj_sparse";
    case CaseKind::mention: return "mention";
    case CaseKind::reference: return "reference";
    case CaseKind::distractor: return "distractor";
    case CaseKind::unrelated: return "unrelated";
  }
  return "unrelated";
}

namespace {

std::optional<CaseKind> parse_kind(std::string_view s) {
  for (auto k : {CaseKind::sj, CaseKind::sj_sparse, CaseKind::mention, CaseKind::reference, CaseKind::distractor,
                 CaseKind::unrelated}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

}  // namespace

GeneratorSpec GeneratorSpec::mixed(std::size_t n, std::uint64_t seed) {
  GeneratorSpec s;
  s.seed = seed;
  s.sj = n * 30 / 100;
  s.sj_sparse = n * 5 / 100;
  s.mention = n * 15 / 100;
  s.reference = n * 5 / 100;
  s.distractor = n * 10 / 100;
  s.unrelated = n - s.sj - s.sj_sparse - s.mention - s.reference - s.distractor;
  s.undated = n * 2 / 100;
  s.pre_cutoff = n * 5 / 100;
  return s;
}

GeneratorSpec GeneratorSpec::with_labels(std::size_t n_sj, std::size_t n_non_sj, std::uint64_t seed) {
  GeneratorSpec s;
  s.seed = seed;
  s.sj_sparse = n_sj / 10;
  s.sj = n_sj - s.sj_sparse;
  s.mention = n_non_sj * 30 / 100;
  s.reference = n_non_sj * 10 / 100;
  s.distractor = n_non_sj * 20 / 100;
  s.unrelated = n_non_sj - s.mention - s.reference - s.distractor;
  return s;
}

std::string case_id(std::size_t index, int year) {
  std::string suffix = kCitationSuffix[index % kCitationSuffix.size()];
  suffix.replace(suffix.find("{}"), 2, std::to_string(index + 1));
  return "[" + std::to_string(year) + "] " + suffix;
}

const std::vector<std::string_view>& filler_sentences() { return kFiller; }

SyntheticCorpus generate(const GeneratorSpec& spec) {
  if (spec.min_words == 0 || spec.min_words > spec.max_words) throw ArgumentError("invalid word-count range");
  if (spec.first_year > spec.last_year) throw ArgumentError("invalid year range");
  const auto total = spec.total();
  if (spec.undated + spec.pre_cutoff > total) {
    throw ArgumentError("undated and pre-cutoff counts exceed the corpus size");
  }

  Rng rng(spec.seed);
  std::vector<CaseKind> kinds;
  std::vector<bool> is_long;
  auto push = [&](CaseKind k, std::size_t n, bool long_case = false) {
    kinds.insert(kinds.end(), n, k);
    is_long.insert(is_long.end(), n, long_case);
  };
  push(CaseKind::sj, spec.sj);
  push(CaseKind::sj_sparse, spec.sj_sparse);
  push(CaseKind::mention, spec.mention);
  push(CaseKind::reference, spec.reference);
  push(CaseKind::distractor, spec.distractor);
  push(CaseKind::unrelated, spec.unrelated);
  push(CaseKind::sj, spec.long_cases, true);

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  for (std::size_t i = total; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  auto courts = analytics::CourtTierMap::default_map().courts();
  const auto& catalog = keywords::KeywordCatalog::default_catalog();

  SyntheticCorpus out;
  out.cases.reserve(total);
  out.truth.reserve(total);
  std::size_t sj_seen = 0, mention_seen = 0, distractor_seen = 0, unrelated_seen = 0;
  for (std::size_t index = 0; index < total; ++index) {
    const auto kind = kinds[order[index]];
    const bool long_case = is_long[order[index]];

    std::optional<corpus::Date> date;
    int year = static_cast<int>(rng.between(spec.first_year, spec.last_year));
    if (index >= spec.undated) {
      if (index < spec.undated + spec.pre_cutoff) year = static_cast<int>(rng.between(spec.first_year - 10, spec.first_year - 1));
      date = corpus::Date{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(rng.between(1, 12))},
                          std::chrono::day{static_cast<unsigned>(rng.between(1, 28))}};
    }
    const std::string court = rng.chance(0.05) ? kUnmappedCourt : courts[rng.below(courts.size())];

    Truth t;
    t.case_id = case_id(index, year);
    t.kind = kind;
    Builder b{rng, t, {}};
    switch (kind) {
      case CaseKind::sj: {
        const int rule = static_cast<int>(sj_seen % 7) + 1;
        plant_rule(b, rule);
        b.plant(catalog.variant(sj_seen % catalog.variant_count()));
        if (rng.chance(0.5)) b.plant(pick(kSj, rng));
        ++sj_seen;
        t.label = Label::sj;
        t.regex_match = true;
        t.matrix_label = Label::sj;
        t.rule = std::to_string(rule);
        t.llm_response = sj_response(rng);
        break;
      }
      case CaseKind::sj_sparse: {
        const auto n = 1 + rng.below(3);
        for (std::uint64_t i = 0; i < n; ++i) b.plant(pick(kSj, rng));
        t.label = Label::sj;
        t.regex_match = true;
        t.llm_response = sj_response(rng);
        break;
      }
      case CaseKind::mention: {
        switch (mention_seen++ % 3) {
          case 0: b.plant(pick(kSj, rng)); break;
          case 1:
            b.plant(pick(kSj, rng));
            b.plant(pick(kNoRealProspect, rng));
            break;
          default:
            b.plant(kSummarily);
            b.plant(pick(kCpr24, rng));
        }
        t.regex_match = true;
        t.llm_response = kNoResponse;
        break;
      }
      case CaseKind::reference: {
        b.plant(pick(kSj, rng), true);
        b.plant(pick(kCpr24, rng));
        t.regex_match = true;
        t.matrix_label = Label::sj;
        t.rule = "3";
        t.llm_response = kNoResponse;
        break;
      }
      case CaseKind::distractor: {
        const int rule = static_cast<int>(distractor_seen % 7) + 1;
        plant_rule(b, rule);
        // Exclusions cycle 8a, 8b, 8c; each walks through its phrases in turn.
        const auto round = distractor_seen / 3;
        switch (distractor_seen % 3) {
          case 0:
            b.plant(kAmend[round % kAmend.size()]);
            t.exclusion = "8a";
            break;
          case 1:
            b.plant(kServeOut[round % kServeOut.size()]);
            t.exclusion = "8b";
            break;
          default:
            b.plant(kSetAside[round % kSetAside.size()]);
            b.plant(kCpr13[round % kCpr13.size()]);
            t.exclusion = "8c";
        }
        ++distractor_seen;
        t.regex_match = true;
        t.rule = std::to_string(rule);
        t.llm_response = kNoResponse;
        break;
      }
      case CaseKind::unrelated: {
        // Every other unrelated case carries one catalog keyword that the
        // root pattern cannot see (categories after the first).
        if (unrelated_seen++ % 2 == 1) {
          const auto first = catalog.categories().front().variants.size();
          b.plant(catalog.variant(first + rng.below(catalog.variant_count() - first)));
        }
        t.llm_response = kNoResponse;
        break;
      }
    }
    const auto target = long_case ? spec.long_case_words : static_cast<std::uint64_t>(rng.between(
                                                               static_cast<std::int64_t>(spec.min_words),
                                                               static_cast<std::int64_t>(spec.max_words)));
    auto c = corpus::make_case(t.case_id, court, date, b.text(target));
    t.word_count = c.word_count;
    out.cases.push_back(std::move(c));
    out.truth.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "case_%06zu", index);
  return buf;
}

}  // namespace

void write(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  if (corpus.cases.size() != corpus.truth.size()) throw ArgumentError("cases and truth differ in length");
  std::filesystem::create_directories(dir / "cases");
  std::vector<csv::Row> answers{
      {"case_id", "file", "kind", "label", "regex_match", "matrix_label", "rule", "exclusion", "word_count"}};
  std::vector<csv::Row> plants{{"case_id", "phrase", "count"}};
  std::vector<csv::Row> script{{"case_id", "response_text"}};
  for (std::size_t i = 0; i < corpus.cases.size(); ++i) {
    const auto& c = corpus.cases[i];
    const auto& t = corpus.truth[i];
    const auto file = stem(i) + ".xml";
    io::write_file(dir / "cases" / file, corpus::serialize_case_document(c));
    answers.push_back({t.case_id, file, std::string(to_string(t.kind)), std::string(to_string(t.label)),
                       t.regex_match ? "true" : "false", std::string(to_string(t.matrix_label)), t.rule, t.exclusion,
                       std::to_string(t.word_count)});
    for (const auto& [phrase, n] : t.planted) plants.push_back({t.case_id, phrase, std::to_string(n)});
    script.push_back({t.case_id, t.llm_response});
  }
  csv::write_file(dir / "answers.csv", answers);
  csv::write_file(dir / "plants.csv", plants);
  csv::write_file(dir / "llm_script.csv", script);
}

std::vector<Truth> read_truth(const std::filesystem::path& dir) {
  const auto answers = csv::read_file(dir / "answers.csv");
  if (answers.empty() || answers.front().size() != 9) throw SchemaError("answers.csv: unexpected header");
  std::vector<Truth> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 1; i < answers.size(); ++i) {
    const auto& r = answers[i];
    if (r.size() != 9) throw SchemaError("answers.csv: row " + std::to_string(i + 1) + " has the wrong width");
    Truth t;
    t.case_id = r[0];
    auto kind = parse_kind(r[2]);
    auto label = parse_label(r[3]);
    auto matrix = parse_label(r[5]);
    if (!kind || !label || !matrix) throw SchemaError("answers.csv: bad value on row " + std::to_string(i + 1));
    t.kind = *kind;
    t.label = *label;
    t.regex_match = r[4] == "true";
    t.matrix_label = *matrix;
    t.rule = r[6];
    t.exclusion = r[7];
    t.word_count = std::stoull(r[8]);
    index[t.case_id] = out.size();
    out.push_back(std::move(t));
  }
  auto attach = [&](const std::string& file, auto&& apply) {
    const auto path = dir / file;
    if (!std::filesystem::exists(path)) return;
    const auto rows = csv::read_file(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      auto it = index.find(rows[i].at(0));
      if (it == index.end()) throw SchemaError(file + ": unknown case id " + rows[i][0]);
      apply(out[it->second], rows[i]);
    }
  };
  attach("plants.csv", [](Truth& t, const csv::Row& r) { t.planted[r.at(1)] = std::stoull(r.at(2)); });
  attach("llm_script.csv", [](Truth& t, const csv::Row& r) { t.llm_response = r.at(1); });
  return out;
}

}  // namespace casesift::synthetic
