#include "kbqa/store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "kbqa/error.hpp"

namespace kbqa::store {

using rdf::Term;

// ---- TripleStore ----

TripleStore::TripleStore(const std::vector<Triple>& triples) {
  auto intern = [&](const Term& t) {
    auto [it, inserted] = ids_.emplace(t, static_cast<TermId>(terms_.size()));
    if (inserted) terms_.push_back(t);
    return it->second;
  };
  for (const auto& [s, p, o] : triples) {
    if (s.is_literal()) throw InvalidValue("literal in subject position: " + rdf::to_ntriples(s));
    if (!p.is_iri()) throw InvalidValue("predicate is not an IRI: " + rdf::to_ntriples(p));
    if (o.is_literal() && !rdf::valid_lexical(o.value, o.datatype))
      throw InvalidValue("malformed literal " + rdf::to_ntriples(o));
    spo_.push_back({intern(s), intern(p), intern(o)});
  }
  std::sort(spo_.begin(), spo_.end());
  spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());
  for (const auto& t : spo_) {
    pos_.push_back({t[1], t[2], t[0]});
    osp_.push_back({t[2], t[0], t[1]});
  }
  std::sort(pos_.begin(), pos_.end());
  std::sort(osp_.begin(), osp_.end());
}

std::optional<TermId> TripleStore::find(const Term& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool TripleStore::contains(const IdTriple& t) const {
  return std::binary_search(spo_.begin(), spo_.end(), t);
}

std::vector<Triple> TripleStore::triples() const {
  std::vector<Triple> out;
  out.reserve(spo_.size());
  for (const auto& [s, p, o] : spo_) out.push_back({terms_[s], terms_[p], terms_[o]});
  return out;
}

std::string TripleStore::to_ntriples() const {
  std::vector<std::string> lines;
  for (const auto& [s, p, o] : triples())
    lines.push_back(rdf::to_ntriples(s) + " " + rdf::to_ntriples(p) + " " +
                    rdf::to_ntriples(o) + " .\n");
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

// ---- N-Triples ----

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class LineParser {
 public:
  LineParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  std::optional<Triple> run() {
    ws();
    if (done() || peek() == '#') return std::nullopt;
    Term s = term();
    if (s.is_literal()) fail("subject must be an IRI or blank node");
    ws();
    Term p = term();
    if (!p.is_iri()) fail("predicate must be an IRI");
    ws();
    Term o = term();
    ws();
    if (done() || peek() != '.') fail("expected '.'");
    ++i_;
    ws();
    if (!done() && peek() != '#') fail("trailing content after '.'");
    return Triple{std::move(s), std::move(p), std::move(o)};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }
  bool done() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }
  void ws() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++i_;
  }

  std::uint32_t hex(int n) {
    if (i_ + n > s_.size()) fail("truncated escape");
    std::uint32_t v = 0;
    for (int k = 0; k < n; ++k) {
      char c = s_[i_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= c - '0';
      else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
      else fail("bad hex digit in escape");
    }
    return v;
  }

  std::string iri_ref() {
    ++i_;  // '<'
    std::string out;
    while (true) {
      if (done()) fail("unterminated IRI");
      char c = s_[i_++];
      if (c == '>') break;
      if (c == ' ' || c == '<' || c == '"') fail("invalid character in IRI");
      if (c == '\\') {
        if (done()) fail("truncated escape");
        char e = s_[i_++];
        if (e == 'u') append_utf8(out, hex(4));
        else if (e == 'U') append_utf8(out, hex(8));
        else fail("invalid escape in IRI");
      } else {
        out += c;
      }
    }
    if (out.empty()) fail("empty IRI");
    return out;
  }

  Term term() {
    if (done()) fail("expected a term");
    char c = peek();
    if (c == '<') return Term::iri(iri_ref());
    if (c == '_') {
      if (i_ + 1 >= s_.size() || s_[i_ + 1] != ':') fail("expected '_:'");
      i_ += 2;
      std::size_t start = i_;
      while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-' || peek() == '.'))
        ++i_;
      while (i_ > start && s_[i_ - 1] == '.') --i_;
      if (i_ == start) fail("empty blank node label");
      return Term::blank(std::string(s_.substr(start, i_ - start)));
    }
    if (c == '"') return literal();
    fail("expected a term");
  }

  Term literal() {
    ++i_;
    std::string lex;
    while (true) {
      if (done()) fail("unterminated literal");
      char c = s_[i_++];
      if (c == '"') break;
      if (c != '\\') {
        lex += c;
        continue;
      }
      if (done()) fail("truncated escape");
      char e = s_[i_++];
      switch (e) {
        case 't': lex += '\t'; break;
        case 'b': lex += '\b'; break;
        case 'n': lex += '\n'; break;
        case 'r': lex += '\r'; break;
        case 'f': lex += '\f'; break;
        case '"': lex += '"'; break;
        case '\'': lex += '\''; break;
        case '\\': lex += '\\'; break;
        case 'u': append_utf8(lex, hex(4)); break;
        case 'U': append_utf8(lex, hex(8)); break;
        default: fail("invalid escape in literal");
      }
    }
    if (!done() && peek() == '@') {
      ++i_;
      std::size_t start = i_;
      while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++i_;
      if (i_ == start) fail("empty language tag");
      return Term::literal(std::move(lex), {}, std::string(s_.substr(start, i_ - start)));
    }
    if (i_ + 1 < s_.size() && peek() == '^' && s_[i_ + 1] == '^') {
      i_ += 2;
      if (done() || peek() != '<') fail("expected datatype IRI");
      std::string dt = iri_ref();
      if (!rdf::valid_lexical(lex, dt)) fail("malformed literal \"" + lex + "\" for <" + dt + ">");
      return Term::literal(std::move(lex), std::move(dt));
    }
    return Term::literal(std::move(lex));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

}  // namespace

TripleStore load_ntriples(std::string_view text) {
  std::vector<Triple> triples;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line;
    if (auto t = LineParser(text.substr(pos, nl - pos), line).run()) triples.push_back(*t);
    pos = nl + 1;
  }
  return TripleStore(triples);
}

TripleStore load_ntriples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidValue("cannot read store file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_ntriples(ss.str());
}

// ---- subset check ----

namespace {

void check_group(const sparql::Group& g, std::set<std::string>& bind_targets) {
  for (const auto& el : g.elements) {
    if (const auto* t = std::get_if<sparql::TriplePattern>(&el)) {
      for (const auto* p : {&t->subject, &t->predicate, &t->object})
        if (const auto* v = std::get_if<sparql::Var>(p); v && bind_targets.count(v->name))
          throw UnsupportedFeature("triple pattern over BIND variable ?" + v->name);
    } else if (const auto* b = std::get_if<sparql::Bind>(&el)) {
      bind_targets.insert(b->var.name);
    } else if (const auto* u = std::get_if<Box<sparql::Union>>(&el)) {
      std::set<std::string> after = bind_targets;
      for (const auto& br : (*u)->branches) {
        auto inner = bind_targets;
        check_group(br, inner);
        after.insert(inner.begin(), inner.end());
      }
      bind_targets = std::move(after);
    }
  }
}

}  // namespace

void check_subset(const sparql::Query& q) {
  auto violations = sparql::validate(q);
  if (!violations.empty()) throw InvalidQuery(violations);
  std::set<std::string> targets;
  check_group(q.where, targets);
}

// ---- results JSON ----

namespace {

nlohmann::json term_json(const Term& t) {
  switch (t.kind) {
    case rdf::TermKind::Iri: return {{"type", "uri"}, {"value", t.value}};
    case rdf::TermKind::Blank: return {{"type", "bnode"}, {"value", t.value}};
    case rdf::TermKind::Literal: break;
  }
  nlohmann::json j = {{"type", "literal"}, {"value", t.value}};
  if (!t.lang.empty()) j["xml:lang"] = t.lang;
  else if (!t.datatype.empty() && t.datatype != rdf::xsd("string")) j["datatype"] = t.datatype;
  return j;
}

Term term_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string() || !j.contains("value") ||
      !j["value"].is_string())
    throw MalformedResults("binding is not an object with string 'type' and 'value'");
  auto type = j["type"].get<std::string>();
  auto value = j["value"].get<std::string>();
  if (type == "uri") return Term::iri(value);
  if (type == "bnode") return Term::blank(value);
  if (type != "literal" && type != "typed-literal")
    throw MalformedResults("unknown term type '" + type + "'");
  if (j.contains("xml:lang")) {
    if (!j["xml:lang"].is_string()) throw MalformedResults("xml:lang is not a string");
    return Term::literal(value, {}, j["xml:lang"].get<std::string>());
  }
  if (j.contains("datatype")) {
    if (!j["datatype"].is_string()) throw MalformedResults("datatype is not a string");
    return Term::literal(value, j["datatype"].get<std::string>());
  }
  return Term::literal(value);
}

}  // namespace

nlohmann::json to_json(const Results& r) {
  if (r.is_boolean) return {{"head", nlohmann::json::object()}, {"boolean", r.boolean}};
  nlohmann::json bindings = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json b = nlohmann::json::object();
    for (const auto& [k, v] : row) b[k] = term_json(v);
    bindings.push_back(std::move(b));
  }
  return {{"head", {{"vars", r.vars}}}, {"results", {{"bindings", std::move(bindings)}}}};
}

Results results_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedResults("results document is not an object");
  Results r;
  if (j.contains("boolean")) {
    if (!j["boolean"].is_boolean()) throw MalformedResults("'boolean' is not a boolean");
    r.is_boolean = true;
    r.boolean = j["boolean"].get<bool>();
    return r;
  }
  if (!j.contains("head") || !j["head"].is_object())
    throw MalformedResults("missing 'head' object");
  const auto& head = j["head"];
  if (head.contains("vars")) {
    if (!head["vars"].is_array()) throw MalformedResults("'head.vars' is not an array");
    for (const auto& v : head["vars"]) {
      if (!v.is_string()) throw MalformedResults("variable name is not a string");
      r.vars.push_back(v.get<std::string>());
    }
  }
  if (!j.contains("results") || !j["results"].is_object() ||
      !j["results"].contains("bindings") || !j["results"]["bindings"].is_array())
    throw MalformedResults("missing 'results.bindings' array");
  for (const auto& b : j["results"]["bindings"]) {
    if (!b.is_object()) throw MalformedResults("binding row is not an object");
    Binding row;
    for (const auto& [k, v] : b.items()) row.emplace(k, term_from_json(v));
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::vector<Term> answer_terms(const Results& r) {
  std::set<Term> out;
  if (r.is_boolean) {
    out.insert(Term::literal(r.boolean ? "true" : "false", rdf::xsd("boolean")));
  } else {
    for (const auto& row : r.rows)
      for (const auto& [k, v] : row) out.insert(v);
  }
  return {out.begin(), out.end()};
}

}  // namespace kbqa::store
