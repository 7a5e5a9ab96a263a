// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/matrix.hpp"

#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/parallel.hpp"
#include "casesift/text.hpp"

namespace casesift::defaults {
extern const std::string_view search_matrix_cfg;
}

namespace casesift::matrix {

Expr Expr::literal(std::string phrase) { return Expr{Kind::phrase, std::move(phrase), {}}; }
Expr Expr::all(std::vector<Expr> children) { return Expr{Kind::all_of, {}, std::move(children)}; }
Expr Expr::any(std::vector<Expr> children) { return Expr{Kind::any_of, {}, std::move(children)}; }

std::string Expr::to_string() const {
  if (kind == Kind::phrase) return "\"" + phrase + "\"";
  std::string out;
  const char* op = kind == Kind::all_of ? " AND " : " OR ";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += op;
    const auto& c = children[i];
    const bool wrap = c.kind != Kind::phrase && c.children.size() > 1;
    out += wrap ? "(" + c.to_string() + ")" : c.to_string();
  }
  return out;
}

namespace {

void collect_phrases(const Expr& e, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (e.kind == Expr::Kind::phrase) {
    if (seen.insert(e.phrase).second) out.push_back(e.phrase);
    return;
  }
  for (const auto& c : e.children) collect_phrases(c, out, seen);
}

// ---------------------------------------------------------------------------
// Rule config language

struct Token {
  enum class Kind { word, string, dollar, equals, comma, lparen, rparen, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 0;
  int column = 0;
};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::vector<Token> lex(std::string_view src, const std::string& source) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  // Where the last token ended; errors at end of input point there.
  int end_line = 1, end_col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (text::is_space(c)) {
      advance();
      continue;
    }
    Token t{Token::Kind::end, {}, line, col};
    switch (c) {
      case '$': t.kind = Token::Kind::dollar; advance(); break;
      case '=': t.kind = Token::Kind::equals; advance(); break;
      case ',': t.kind = Token::Kind::comma; advance(); break;
      case '(': t.kind = Token::Kind::lparen; advance(); break;
      case ')': t.kind = Token::Kind::rparen; advance(); break;
      case '"': {
        advance();
        std::string value;
        while (i < src.size() && src[i] != '"' && src[i] != '\n') {
          value += src[i];
          advance();
        }
        if (i >= src.size() || src[i] != '"') throw ConfigError("unterminated string", source, t.line, t.column);
        advance();
        t.kind = Token::Kind::string;
        t.text = std::move(value);
        break;
      }
      default:
        if (!is_word_char(c)) {
          throw ConfigError(std::string("unexpected character '") + c + "'", source, line, col);
        }
        t.kind = Token::Kind::word;
        while (i < src.size() && is_word_char(src[i])) {
          t.text += src[i];
          advance();
        }
    }
    tokens.push_back(std::move(t));
    end_line = line;
    end_col = col;
  }
  tokens.push_back({Token::Kind::end, {}, end_line, end_col});
  return tokens;
}

class RuleParser {
 public:
  RuleParser(std::string_view text, std::string source) : source_(std::move(source)), tokens_(lex(text, source_)) {}

  RuleSet parse() {
    while (peek().kind != Token::Kind::end) statement();
    if (inclusions_.empty()) throw ConfigError("rule set has no include rules", source_, 1, 1);
    return RuleSet(std::move(inclusions_), std::move(exclusions_));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  // A token in column 1 starts a new statement; indented lines continue.
  bool at_statement_end() const { return peek().kind == Token::Kind::end || peek().column == 1; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ConfigError(msg, source_, at.line, at.column);
  }

  const Token& expect(Token::Kind kind, const char* what) {
    if (at_statement_end() || peek().kind != kind) {
      fail(std::string("expected ") + what, peek());
    }
    return take();
  }

  void statement() {
    const Token& head = peek();
    if (head.kind != Token::Kind::word || head.column != 1) fail("expected 'set', 'include' or 'exclude'", head);
    const std::string keyword = take().text;
    const Token& name = expect(Token::Kind::word, "a name");
    expect(Token::Kind::equals, "'='");
    if (keyword == "set") {
      set_statement(name);
    } else if (keyword == "include" || keyword == "exclude") {
      if (!rule_ids_.insert(name.text).second) fail("duplicate rule id '" + name.text + "'", name);
      if (at_statement_end()) fail("expected an expression", peek());
      Expr e = expression();
      if (!at_statement_end()) unexpected();
      (keyword == "include" ? inclusions_ : exclusions_).push_back({name.text, std::move(e)});
    } else {
      fail("unknown statement '" + keyword + "'", head);
    }
  }

  void set_statement(const Token& name) {
    if (sets_.count(name.text)) fail("duplicate set '" + name.text + "'", name);
    std::vector<Expr> phrases;
    while (true) {
      if (at_statement_end() || peek().kind != Token::Kind::string) fail("expected a quoted phrase", peek());
      phrases.push_back(phrase(take()));
      if (at_statement_end()) break;
      if (peek().kind != Token::Kind::comma) fail("expected ',' between phrases", peek());
      take();
    }
    sets_.emplace(name.text, Expr::any(std::move(phrases)));
  }

  Expr phrase(const Token& t) const {
    auto p = text::to_lower(text::trim(t.text));
    if (p.empty()) fail("empty phrase", t);
    return Expr::literal(std::move(p));
  }

  static bool is_op(const Token& t, std::string_view op) {
    return t.kind == Token::Kind::word && text::to_lower(t.text) == text::to_lower(op);
  }

  [[noreturn]] void unexpected() const {
    const Token& t = peek();
    if (t.kind == Token::Kind::word) fail("unknown operator '" + t.text + "' (expected AND or OR)", t);
    if (t.kind == Token::Kind::rparen) fail("unbalanced ')'", t);
    fail("unexpected token", t);
  }

  static void append_flat(std::vector<Expr>& out, Expr e, Expr::Kind kind) {
    if (e.kind == kind) {
      for (auto& c : e.children) out.push_back(std::move(c));
    } else {
      out.push_back(std::move(e));
    }
  }

  Expr expression() {
    std::vector<Expr> terms;
    append_flat(terms, conjunction(), Expr::Kind::any_of);
    while (!at_statement_end() && is_op(peek(), "OR")) {
      take();
      append_flat(terms, conjunction(), Expr::Kind::any_of);
    }
    return terms.size() == 1 ? std::move(terms.front()) : Expr::any(std::move(terms));
  }

  Expr conjunction() {
    std::vector<Expr> factors;
    append_flat(factors, primary(), Expr::Kind::all_of);
    while (!at_statement_end() && is_op(peek(), "AND")) {
      take();
      append_flat(factors, primary(), Expr::Kind::all_of);
    }
    return factors.size() == 1 ? std::move(factors.front()) : Expr::all(std::move(factors));
  }

  Expr primary() {
    if (at_statement_end()) fail("expression ends unexpectedly", peek());
    const Token& t = take();
    switch (t.kind) {
      case Token::Kind::string:
        return phrase(t);
      case Token::Kind::dollar: {
        if (at_statement_end() || peek().kind != Token::Kind::word) fail("expected a set name after '$'", peek());
        const Token& name = take();
        auto it = sets_.find(name.text);
        if (it == sets_.end()) fail("undefined set '" + name.text + "'", name);
        return it->second;
      }
      case Token::Kind::lparen: {
        Expr inner = expression();
        if (at_statement_end() || peek().kind != Token::Kind::rparen) {
          if (!at_statement_end() && peek().kind == Token::Kind::word) unexpected();
          fail("expected ')'", peek());
        }
        take();
        return inner;
      }
      case Token::Kind::word:
        fail("unexpected word '" + t.text + "' (phrases must be quoted)", t);
      default:
        fail("expected a phrase, $set or '('", t);
    }
  }

  std::string source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, Expr> sets_;
  std::set<std::string> rule_ids_;
  std::vector<Rule> inclusions_;
  std::vector<Rule> exclusions_;
};

// Phrase-presence memo over one lowercased text.
class PhraseTester {
 public:
  explicit PhraseTester(std::string_view lowered) : text_(lowered) {}

  bool eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::phrase: {
        auto [it, fresh] = memo_.try_emplace(e.phrase, false);
        if (fresh) it->second = text::contains(text_, e.phrase);
        return it->second;
      }
      case Expr::Kind::all_of:
        for (const auto& c : e.children) {
          if (!eval(c)) return false;
        }
        return true;
      case Expr::Kind::any_of:
        for (const auto& c : e.children) {
          if (eval(c)) return true;
        }
        return false;
    }
    return false;
  }

 private:
  std::string_view text_;
  std::unordered_map<std::string_view, bool> memo_;
};

}  // namespace

RuleSet::RuleSet(std::vector<Rule> inclusions, std::vector<Rule> exclusions)
    : inclusions_(std::move(inclusions)), exclusions_(std::move(exclusions)) {
  std::set<std::string> seen;
  for (const auto* rules : {&inclusions_, &exclusions_}) {
    for (const auto& r : *rules) collect_phrases(r.expr, phrases_, seen);
  }
  for (const auto& p : phrases_) {
    if (p.empty() || !text::is_lower(p)) throw ConfigError("rule phrase must be lowercase and nonempty: '" + p + "'");
  }
}

RuleSet RuleSet::from_config_text(std::string_view text, const std::string& source) {
  return RuleParser(text, source).parse();
}

RuleSet RuleSet::load(const std::filesystem::path& path) { return from_config_text(io::read_file(path), path.string()); }

const RuleSet& RuleSet::default_ruleset() {
  static const RuleSet rules = from_config_text(defaults::search_matrix_cfg, "search_matrix.cfg");
  return rules;
}

MatrixDecision evaluate(std::string_view case_id, std::string_view text, const RuleSet& rules) {
  const auto lowered = text::to_lower(text);
  PhraseTester tester(lowered);
  MatrixDecision d{std::string(case_id), Label::non_sj, {}, {}};
  for (const auto& r : rules.inclusions()) {
    if (tester.eval(r.expr)) d.fired_inclusions.push_back(r.id);
  }
  for (const auto& r : rules.exclusions()) {
    if (tester.eval(r.expr)) d.fired_exclusions.push_back(r.id);
  }
  d.label = (!d.fired_inclusions.empty() && d.fired_exclusions.empty()) ? Label::sj : Label::non_sj;
  return d;
}

MatrixResult classify_dataset(const corpus::Dataset& dataset, const RuleSet& rules, std::size_t threads) {
  std::vector<MatrixDecision> decisions(dataset.size());
  parallel_for(
      dataset.size(), [&](std::size_t i) { decisions[i] = evaluate(dataset[i].id, dataset[i].text, rules); }, threads);
  std::vector<corpus::Case> sj, non_sj;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (decisions[i].label == Label::sj ? sj : non_sj).push_back(dataset[i]);
  }
  return {corpus::Dataset("ksjd", "matrix-sj", std::move(sj)),
          corpus::Dataset("knsjd", "matrix-non-sj", std::move(non_sj)), std::move(decisions)};
}

void write_decisions_csv(const std::filesystem::path& path, std::span<const MatrixDecision> decisions) {
  std::vector<csv::Row> rows{{"case_id", "label", "fired_inclusions", "fired_exclusions"}};
  for (const auto& d : decisions) {
    rows.push_back({d.case_id, std::string(to_string(d.label)), text::join(d.fired_inclusions, ";"),
                    text::join(d.fired_exclusions, ";")});
  }
  csv::write_file(path, rows);
}

std::vector<MatrixDecision> read_decisions_csv(const std::filesystem::path& path) {
  auto rows = csv::read_file(path);
  if (rows.empty() || rows.front().size() < 2 || rows.front()[0] != "case_id") {
    throw SchemaError(path.string() + ": expected header case_id,label,...");
  }
  auto ids = [](const std::string& s) {
    std::vector<std::string> out;
    if (!s.empty()) out = text::split(s, ';');
    return out;
  };
  std::vector<MatrixDecision> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) throw SchemaError(path.string() + ": short row " + std::to_string(r + 1));
    auto label = parse_label(row[1]);
    if (!label) throw SchemaError(path.string() + ": bad label '" + row[1] + "' on row " + std::to_string(r + 1));
    out.push_back({row[0], *label, row.size() > 2 ? ids(row[2]) : std::vector<std::string>{},
                   row.size() > 3 ? ids(row[3]) : std::vector<std::string>{}});
  }
  return out;
}

}  // namespace casesift::matrix
