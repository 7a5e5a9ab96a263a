// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <memory>
#include <set>
#include <sstream>
#include <variant>

#include <expat.h>

#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/parallel.hpp"
#include "casesift/text.hpp"

namespace casesift::corpus {

namespace fs = std::filesystem;

Case make_case(std::string id, std::string court, std::optional<Date> hearing_date, std::string text) {
  Case c{std::move(id), std::move(court), hearing_date, std::move(text), 0};
  c.word_count = text::count_words(c.text);
  return c;
}

namespace {

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

std::optional<Date> checked(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

}  // namespace

std::optional<Date> parse_date(std::string_view s) {
  s = text::trim(s);
  // ISO-8601 calendar date.
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    auto y = to_int(s.substr(0, 4));
    auto m = to_int(s.substr(5, 2));
    auto d = to_int(s.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    return checked(*y, *m, *d);
  }
  // "D Month YYYY"
  std::vector<std::string> parts;
  for (auto& p : text::split(s, ' ')) {
    if (!p.empty()) parts.push_back(std::move(p));
  }
  if (parts.size() != 3) return std::nullopt;
  auto d = to_int(parts[0]);
  auto y = to_int(parts[2]);
  if (!d || !y || parts[2].size() != 4) return std::nullopt;
  const auto month = text::to_lower(parts[1]);
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (month == kMonths[i] || (month.size() == 3 && kMonths[i].substr(0, 3) == month)) {
      return checked(*y, static_cast<int>(i + 1), *d);
    }
  }
  return std::nullopt;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::string name, std::string provenance, std::vector<Case> cases)
    : name_(std::move(name)), provenance_(std::move(provenance)), cases_(std::move(cases)) {
  std::sort(cases_.begin(), cases_.end(), [](const Case& a, const Case& b) { return a.id < b.id; });
  auto dup = std::adjacent_find(cases_.begin(), cases_.end(),
                                [](const Case& a, const Case& b) { return a.id == b.id; });
  if (dup != cases_.end()) throw SchemaError("duplicate case id in dataset '" + name_ + "': " + dup->id);
}

const Case* Dataset::find(std::string_view id) const noexcept {
  auto it = std::lower_bound(cases_.begin(), cases_.end(), id,
                             [](const Case& c, std::string_view v) { return c.id < v; });
  return (it != cases_.end() && it->id == id) ? &*it : nullptr;
}

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  out.reserve(cases_.size());
  for (const auto& c : cases_) out.push_back(c.id);
  return out;
}

Dataset Dataset::renamed(std::string name, std::string provenance) const {
  Dataset d = *this;
  d.name_ = std::move(name);
  d.provenance_ = std::move(provenance);
  return d;
}

// ---------------------------------------------------------------------------
// XML

namespace {

struct XmlState {
  int depth = 0;
  bool root_ok = false;
  std::string root_name;
  // Field currently being collected, chosen by the depth-2 element.
  std::string* target = nullptr;
  std::string court, date, citation, body;
  bool has_court = false, has_date = false, has_citation = false, has_text = false;
};

void on_start(void* data, const XML_Char* name, const XML_Char**) {
  auto& st = *static_cast<XmlState*>(data);
  ++st.depth;
  std::string_view n(name);
  if (st.depth == 1) {
    st.root_name = n;
    st.root_ok = (n == "case");
  } else if (st.depth == 2 && st.root_ok) {
    if (n == "court") {
      st.target = &st.court;
      st.has_court = true;
    } else if (n == "hearing_date") {
      st.target = &st.date;
      st.has_date = true;
    } else if (n == "citation") {
      st.target = &st.citation;
      st.has_citation = true;
    } else if (n == "text") {
      st.target = &st.body;
      st.has_text = true;
    } else {
      st.target = nullptr;
    }
  }
}

void on_end(void* data, const XML_Char*) {
  auto& st = *static_cast<XmlState*>(data);
  if (st.depth == 2) st.target = nullptr;
  --st.depth;
}

void on_chars(void* data, const XML_Char* s, int len) {
  auto& st = *static_cast<XmlState*>(data);
  if (st.target) st.target->append(s, static_cast<std::size_t>(len));
}

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
}

}  // namespace

Case parse_case_document(std::string_view xml, std::string_view fallback_id) {
  XmlState st;
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) throw Error("cannot allocate XML parser");
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_chars);
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
    const auto offset = XML_GetCurrentByteIndex(parser.get());
    throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
                     offset < 0 ? 0 : static_cast<std::size_t>(offset));
  }
  if (!st.root_ok) throw SchemaError("root element must be <case>, found <" + st.root_name + ">");
  if (!st.has_text) throw SchemaError("missing <text> element");
  std::string id(text::trim(st.citation));
  if (id.empty()) id = std::string(fallback_id);
  if (id.empty()) throw SchemaError("missing <citation> and no fallback id");
  std::optional<Date> date;
  if (st.has_date && !text::trim(st.date).empty()) {
    date = parse_date(st.date);
    if (!date) throw SchemaError("invalid hearing_date '" + std::string(text::trim(st.date)) + "'");
  }
  return make_case(std::move(id), std::string(text::trim(st.court)), date, std::move(st.body));
}

std::string serialize_case_document(const Case& c) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<case>\n  <court>";
  append_escaped(out, c.court);
  out += "</court>\n";
  if (c.hearing_date) out += "  <hearing_date>" + format_date(*c.hearing_date) + "</hearing_date>\n";
  out += "  <citation>";
  append_escaped(out, c.id);
  out += "</citation>\n  <text>";
  append_escaped(out, c.text);
  out += "</text>\n</case>\n";
  return out;
}

// ---------------------------------------------------------------------------
// JSONL

nlohmann::json to_json(const Case& c) {
  return nlohmann::json{{"id", c.id},
                        {"court", c.court},
                        {"hearing_date", c.hearing_date ? nlohmann::json(format_date(*c.hearing_date)) : nlohmann::json()},
                        {"text", c.text},
                        {"word_count", c.word_count}};
}

Case case_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("case record must be a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) throw SchemaError("case record missing string 'id'");
  if (!j.contains("text") || !j["text"].is_string()) throw SchemaError("case record missing string 'text'");
  std::optional<Date> date;
  if (j.contains("hearing_date") && !j["hearing_date"].is_null()) {
    date = parse_date(j["hearing_date"].get<std::string>());
    if (!date) throw SchemaError("invalid hearing_date for " + j["id"].get<std::string>());
  }
  auto c = make_case(j["id"].get<std::string>(), j.value("court", std::string()), date, j["text"].get<std::string>());
  if (j.contains("word_count") && j["word_count"].get<std::uint64_t>() != c.word_count) {
    throw SchemaError("word_count does not match text for " + c.id);
  }
  return c;
}

void write_jsonl(const fs::path& path, const Dataset& dataset) {
  std::string out;
  for (const auto& c : dataset) {
    out += to_json(c).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  io::write_file(path, out);
}

namespace {

struct JsonlLoad {
  std::vector<Case> cases;
  std::vector<SkippedFile> skipped;
};

JsonlLoad load_jsonl_lenient(const fs::path& path) {
  JsonlLoad out;
  const auto content = io::read_file(path);
  std::size_t line_no = 0;
  for (const auto& line : text::split(content, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.cases.push_back(case_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      out.skipped.push_back({path.filename().string() + ":" + std::to_string(line_no), e.what()});
    }
  }
  return out;
}

}  // namespace

Dataset read_jsonl(const fs::path& path) {
  auto loaded = load_jsonl_lenient(path);
  if (!loaded.skipped.empty()) {
    throw SchemaError(loaded.skipped.front().filename + ": " + loaded.skipped.front().error);
  }
  return Dataset(path.stem().string(), "jsonl:" + path.filename().string(), std::move(loaded.cases));
}

LoadResult load_corpus(const fs::path& path, std::size_t threads) {
  std::error_code ec;
  const auto status = fs::status(path, ec);
  if (ec || !fs::exists(status)) throw IoError("cannot read corpus path " + path.string());

  std::vector<Case> cases;
  std::vector<SkippedFile> skipped;

  if (fs::is_regular_file(status) && path.extension() == ".jsonl") {
    auto loaded = load_jsonl_lenient(path);
    cases = std::move(loaded.cases);
    skipped = std::move(loaded.skipped);
  } else {
    std::vector<fs::path> files;
    if (fs::is_directory(status)) {
      fs::recursive_directory_iterator it(path, ec);
      if (ec) throw IoError("cannot list " + path.string() + ": " + ec.message());
      for (const auto& entry : it) {
        if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
    } else {
      files.push_back(path);
    }
    std::vector<std::variant<Case, std::string>> parsed(files.size());
    parallel_for(
        files.size(),
        [&](std::size_t i) {
          try {
            parsed[i] = parse_case_document(io::read_file(files[i]), files[i].stem().string());
          } catch (const std::exception& e) {
            parsed[i] = std::string(e.what());
          }
        },
        threads);
    for (std::size_t i = 0; i < files.size(); ++i) {
      auto rel = fs::is_directory(status) ? fs::relative(files[i], path).generic_string() : files[i].filename().string();
      if (auto* c = std::get_if<Case>(&parsed[i])) {
        cases.push_back(std::move(*c));
      } else {
        skipped.push_back({rel, std::get<std::string>(parsed[i])});
      }
    }
  }

  // Keep the first occurrence of each id (in path order).
  std::set<std::string> seen;
  std::vector<Case> unique;
  unique.reserve(cases.size());
  for (auto& c : cases) {
    if (!seen.insert(c.id).second) {
      skipped.push_back({c.id, "duplicate case id"});
      continue;
    }
    unique.push_back(std::move(c));
  }
  return {Dataset(path.filename().string(), "corpus:" + path.string(), std::move(unique)), std::move(skipped)};
}

void write_skip_manifest(const fs::path& path, std::span<const SkippedFile> skipped) {
  std::vector<csv::Row> rows{{"filename", "error"}};
  for (const auto& s : skipped) rows.push_back({s.filename, s.error});
  csv::write_file(path, rows);
}

DateFilterResult filter_by_date(const Dataset& dataset, const Date& cutoff) {
  std::vector<Case> kept, excluded;
  std::vector<std::string> undated;
  for (const auto& c : dataset) {
    if (!c.hearing_date) {
      undated.push_back(c.id);
      kept.push_back(c);
    } else if (*c.hearing_date >= cutoff) {
      kept.push_back(c);
    } else {
      excluded.push_back(c);
    }
  }
  return {Dataset(dataset.name(), dataset.provenance() + "|date>=" + format_date(cutoff), std::move(kept)),
          Dataset(dataset.name() + "-excluded", dataset.provenance() + "|date<" + format_date(cutoff),
                  std::move(excluded)),
          std::move(undated)};
}

}  // namespace casesift::corpus
