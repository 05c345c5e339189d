#include "kbqa/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "kbqa/error.hpp"

namespace kbqa::sparql {

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return 3;
    case Op::Add:
    case Op::Sub: return 4;
  }
  return 0;
}

bool plain_local(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string compact(const std::string& iri, const Query& q) {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& p : q.prefixes) {
    if (iri.compare(0, p.second.size(), p.second) != 0) continue;
    if (!plain_local(std::string_view(iri).substr(p.second.size()))) continue;
    if (!best || p.second.size() > best->second.size()) best = &p;
  }
  if (!best) return "<" + iri + ">";
  return best->first + ":" + iri.substr(best->second.size());
}

std::string render_term(const rdf::Term& t, const Query& q) {
  switch (t.kind) {
    case rdf::TermKind::Iri: return compact(t.value, q);
    case rdf::TermKind::Blank: return "_:" + t.value;
    case rdf::TermKind::Literal: break;
  }
  std::string out = "\"";
  for (char c : t.value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  if (!t.lang.empty()) return out + "@" + t.lang;
  if (t.datatype.empty() || t.datatype == rdf::xsd("string")) return out;
  return out + "^^" + compact(t.datatype, q);
}

std::string render_pattern_term(const PatternTerm& t, const Query& q) {
  if (const auto* v = std::get_if<Var>(&t)) return "?" + v->name;
  return render_term(std::get<rdf::Term>(t), q);
}

std::string render_expr(const Expr& e, const Query& q, int parent) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Var>) {
          return "?" + x.name;
        } else if constexpr (std::is_same_v<T, rdf::Term>) {
          return render_term(x, q);
        } else if constexpr (std::is_same_v<T, NowCall>) {
          return "now()";
        } else {
          int prec = precedence(x.op);
          // Comparisons are written tight, logical and arithmetic operators
          // spaced; arithmetic is always parenthesised.
          std::string sep = prec == 3 ? std::string(symbol(x.op))
                                      : " " + std::string(symbol(x.op)) + " ";
          std::string out = render_expr(*x.lhs, q, prec) + sep + render_expr(*x.rhs, q, prec + 1);
          if (prec == 4 || prec < parent) return "(" + out + ")";
          return out;
        }
      },
      e.node);
}

void render_group(const Group& g, const Query& q, int depth, std::string& out) {
  std::string pad(2 * depth, ' ');
  for (const auto& el : g.elements) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, TriplePattern>) {
            out += pad + render_pattern_term(x.subject, q) + " " +
                   render_pattern_term(x.predicate, q) + " " +
                   render_pattern_term(x.object, q) + ".\n";
          } else if constexpr (std::is_same_v<T, Filter>) {
            out += pad + "FILTER(" + render_expr(x.expr, q, 0) + ")\n";
          } else if constexpr (std::is_same_v<T, Bind>) {
            out += pad + "BIND (" + render_expr(x.expr, q, 0) + " AS ?" + x.var.name + ")\n";
          } else {
            for (std::size_t i = 0; i < x->branches.size(); ++i) {
              if (i) out += pad + "UNION\n";
              out += pad + "{\n";
              render_group(x->branches[i], q, depth + 1, out);
              out += pad + "}\n";
            }
          }
        },
        el);
  }
}

void collect_bound(const Group& g, std::vector<std::string>& out) {
  auto add = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (const auto& el : g.elements) {
    if (const auto* t = std::get_if<TriplePattern>(&el)) {
      for (const auto* p : {&t->subject, &t->predicate, &t->object})
        if (const auto* v = std::get_if<Var>(p)) add(v->name);
    } else if (const auto* b = std::get_if<Bind>(&el)) {
      add(b->var.name);
    } else if (const auto* u = std::get_if<Box<Union>>(&el)) {
      for (const auto& br : (*u)->branches) collect_bound(br, out);
    }
  }
}

// Returns the variables in scope after the group, reporting BIND targets that
// are already in scope.
std::set<std::string> check_binds(const Group& g, std::set<std::string> scope,
                                  std::vector<std::string>& out) {
  for (const auto& el : g.elements) {
    if (const auto* t = std::get_if<TriplePattern>(&el)) {
      for (const auto* p : {&t->subject, &t->predicate, &t->object})
        if (const auto* v = std::get_if<Var>(p)) scope.insert(v->name);
    } else if (const auto* b = std::get_if<Bind>(&el)) {
      if (!scope.insert(b->var.name).second)
        out.push_back("BIND target ?" + b->var.name + " is already bound");
    } else if (const auto* u = std::get_if<Box<Union>>(&el)) {
      std::set<std::string> after = scope;
      for (const auto& br : (*u)->branches) {
        auto s = check_binds(br, scope, out);
        after.insert(s.begin(), s.end());
      }
      scope = std::move(after);
    }
  }
  return scope;
}

bool empty_group(const Group& g) {
  return g.elements.empty();
}

// ---- parser ----

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::pair<std::string, std::string>>& defaults)
      : s_(text), defaults_(defaults) {}

  Query run() {
    Query q;
    ws();
    while (keyword("PREFIX")) {
      ws();
      auto name = pname_prefix();
      expect(':');
      ws();
      auto iri = iri_ref();
      q.prefixes.emplace_back(name, iri);
      ws();
    }
    if (keyword("BASE")) unsupported("BASE");
    prefixes_ = q.prefixes;
    if (keyword("SELECT")) {
      q.form = Form::Select;
      ws();
      q.distinct = keyword("DISTINCT");
      if (!q.distinct && keyword("REDUCED")) unsupported("REDUCED");
      projection(q);
    } else if (keyword("ASK")) {
      q.form = Form::Ask;
      q.distinct = false;
    } else if (keyword("CONSTRUCT") || keyword("DESCRIBE")) {
      unsupported("CONSTRUCT/DESCRIBE");
    } else {
      fail("expected SELECT or ASK");
    }
    ws();
    keyword("WHERE");
    ws();
    q.where = group();
    modifiers(q);
    ws();
    if (i_ != s_.size()) fail("unexpected trailing text");
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1 + std::count(s_.begin(), s_.begin() + std::min(i_, s_.size()), '\n');
    throw ParseError(line, msg);
  }
  [[noreturn]] void unsupported(const std::string& what) const { throw UnsupportedFeature(what); }

  char peek(std::size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

  void ws() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  bool keyword(std::string_view kw) {
    if (i_ + kw.size() > s_.size()) return false;
    for (std::size_t k = 0; k < kw.size(); ++k)
      if (std::toupper(static_cast<unsigned char>(s_[i_ + k])) != kw[k]) return false;
    if (name_char(peek(kw.size())) || peek(kw.size()) == ':') return false;
    i_ += kw.size();
    return true;
  }

  void expect(char c) {
    ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  bool eat(char c) {
    ws();
    if (peek() != c) return false;
    ++i_;
    return true;
  }

  std::string pname_prefix() {
    std::size_t start = i_;
    while (name_char(peek()) || peek() == '.') ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  std::string iri_ref() {
    if (peek() != '<') fail("expected IRI");
    std::size_t start = ++i_;
    while (i_ < s_.size() && s_[i_] != '>') {
      char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' || c == '{' ||
          c == '}')
        fail("malformed IRI");
      ++i_;
    }
    if (i_ >= s_.size()) fail("unterminated IRI");
    return std::string(s_.substr(start, i_++ - start));
  }

  std::string resolve(const std::string& prefix, const std::string& local) {
    for (const auto* table : {&std::as_const(prefixes_), &defaults_})
      for (const auto& [p, ns] : *table)
        if (p == prefix) return ns + local;
    fail("undeclared prefix '" + prefix + ":'");
  }

  Var variable() {
    if (peek() != '?' && peek() != '$') fail("expected variable");
    std::size_t start = ++i_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++i_;
    if (i_ == start) fail("empty variable name");
    return Var{std::string(s_.substr(start, i_ - start))};
  }

  void projection(Query& q) {
    for (;;) {
      ws();
      if (peek() == '?' || peek() == '$') {
        q.projection.push_back(variable());
      } else if (peek() == '(') {
        ++i_;
        ws();
        if (!keyword("COUNT")) unsupported("projection expression");
        expect('(');
        ws();
        CountProjection c;
        c.distinct = keyword("DISTINCT");
        ws();
        if (peek() == '*') unsupported("COUNT(*)");
        c.var = variable();
        expect(')');
        ws();
        if (!keyword("AS")) fail("expected AS");
        ws();
        c.alias = variable();
        expect(')');
        if (q.count) unsupported("several aggregates");
        q.count = c;
      } else if (peek() == '*') {
        unsupported("SELECT *");
      } else {
        break;
      }
    }
    if (q.projection.empty() && !q.count) fail("expected projection");
    if (q.count && !q.projection.empty()) unsupported("GROUP BY");
  }

  Group group() {
    expect('{');
    Group g;
    for (;;) {
      ws();
      if (eat('}')) break;
      if (i_ >= s_.size()) fail("unterminated group");
      if (peek() == '.') {
        ++i_;
        continue;
      }
      if (peek() == '{') {
        Union u;
        u.branches.push_back(group());
        ws();
        while (keyword("UNION")) {
          ws();
          u.branches.push_back(group());
          ws();
        }
        g.elements.emplace_back(Box<Union>(std::move(u)));
        continue;
      }
      if (keyword("FILTER")) {
        expect('(');
        auto e = expr();
        expect(')');
        g.elements.emplace_back(Filter{std::move(e)});
        continue;
      }
      if (keyword("BIND")) {
        expect('(');
        auto e = expr();
        ws();
        if (!keyword("AS")) fail("expected AS");
        ws();
        auto v = variable();
        expect(')');
        g.elements.emplace_back(Bind{std::move(e), v});
        continue;
      }
      for (auto kw : {"OPTIONAL", "MINUS", "VALUES", "SERVICE", "GRAPH", "SELECT"})
        if (keyword(kw)) unsupported(kw);
      triples(g);
    }
    return g;
  }

  void triples(Group& g) {
    auto subject = pattern_term(false);
    for (;;) {
      ws();
      PatternTerm predicate;
      if (peek() == 'a' && !name_char(peek(1)) && peek(1) != ':') {
        ++i_;
        predicate = rdf::Term::iri(std::string(rdf::kRdfType));
      } else {
        predicate = pattern_term(false);
      }
      for (;;) {
        auto object = pattern_term(true);
        g.elements.emplace_back(TriplePattern{subject, predicate, object});
        if (!eat(',')) break;
      }
      if (!eat(';')) break;
      ws();
      if (peek() == '.' || peek() == '}') break;
    }
    ws();
    if (peek() == '.') ++i_;
  }

  PatternTerm pattern_term(bool literal_ok) {
    ws();
    char c = peek();
    if (c == '?' || c == '$') return variable();
    if (c == '[' || (c == '_' && peek(1) == ':')) unsupported("blank node");
    if (c == '(') unsupported("collection");
    auto t = term_or_literal();
    if (t.is_literal() && !literal_ok) fail("literal in subject or predicate position");
    return t;
  }

  rdf::Term term_or_literal() {
    ws();
    char c = peek();
    if (c == '<') return rdf::Term::iri(iri_ref());
    if (c == '"' || c == '\'') return string_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(peek(1)))))
      return number();
    if (keyword("TRUE")) return rdf::Term::literal("true", rdf::xsd("boolean"));
    if (keyword("FALSE")) return rdf::Term::literal("false", rdf::xsd("boolean"));
    return rdf::Term::iri(prefixed_name());
  }

  std::string prefixed_name() {
    std::size_t start = i_;
    while (name_char(peek()) || peek() == '.') ++i_;
    if (peek() != ':') {
      i_ = start;
      fail("expected term");
    }
    std::string prefix(s_.substr(start, i_ - start));
    ++i_;
    std::size_t local_start = i_;
    while (name_char(peek()) || peek() == '.' || peek() == ':') ++i_;
    while (i_ > local_start && s_[i_ - 1] == '.') --i_;
    return resolve(prefix, std::string(s_.substr(local_start, i_ - local_start)));
  }

  rdf::Term string_literal() {
    char quote = peek();
    ++i_;
    std::string lex;
    for (;;) {
      if (i_ >= s_.size() || s_[i_] == '\n') fail("unterminated string");
      char c = s_[i_++];
      if (c == quote) break;
      if (c == '\\') {
        char e = peek();
        ++i_;
        switch (e) {
          case 'n': lex += '\n'; break;
          case 't': lex += '\t'; break;
          case 'r': lex += '\r'; break;
          case '"': lex += '"'; break;
          case '\'': lex += '\''; break;
          case '\\': lex += '\\'; break;
          default: fail("unknown string escape");
        }
      } else {
        lex += c;
      }
    }
    if (peek() == '@') {
      std::size_t start = ++i_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') ++i_;
      return rdf::Term::literal(lex, {}, std::string(s_.substr(start, i_ - start)));
    }
    if (peek() == '^' && peek(1) == '^') {
      i_ += 2;
      std::string dt = peek() == '<' ? iri_ref() : prefixed_name();
      if (!rdf::valid_lexical(lex, dt))
        fail("'" + lex + "' is not a valid lexical form for " + dt);
      return rdf::Term::literal(lex, dt);
    }
    return rdf::Term::literal(lex);
  }

  rdf::Term number() {
    std::size_t start = i_;
    if (peek() == '+' || peek() == '-') ++i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    bool decimal = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      decimal = true;
      ++i_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    }
    if (peek() == 'e' || peek() == 'E') unsupported("double literal");
    return rdf::Term::literal(std::string(s_.substr(start, i_ - start)),
                              rdf::xsd(decimal ? "decimal" : "integer"));
  }

  // expr := and ('||' and)*
  Expr expr() {
    auto lhs = conjunction();
    for (;;) {
      ws();
      if (peek() == '|' && peek(1) == '|') {
        i_ += 2;
        lhs = binary(Op::Or, std::move(lhs), conjunction());
      } else {
        return lhs;
      }
    }
  }

  Expr conjunction() {
    auto lhs = relational();
    for (;;) {
      ws();
      if (peek() == '&' && peek(1) == '&') {
        i_ += 2;
        lhs = binary(Op::And, std::move(lhs), relational());
      } else {
        return lhs;
      }
    }
  }

  Expr relational() {
    auto lhs = additive();
    ws();
    Op op;
    char c = peek(), d = peek(1);
    if (c == '<' && d == '=') op = Op::Le;
    else if (c == '>' && d == '=') op = Op::Ge;
    else if (c == '!' && d == '=') op = Op::Ne;
    else if (c == '<') op = Op::Lt;
    else if (c == '>') op = Op::Gt;
    else if (c == '=') op = Op::Eq;
    else return lhs;
    i_ += (op == Op::Le || op == Op::Ge || op == Op::Ne) ? 2 : 1;
    return binary(op, std::move(lhs), additive());
  }

  Expr additive() {
    auto lhs = primary();
    for (;;) {
      ws();
      char c = peek();
      if (c == '+' || c == '-') {
        ++i_;
        lhs = binary(c == '+' ? Op::Add : Op::Sub, std::move(lhs), primary());
      } else {
        return lhs;
      }
    }
  }

  Expr primary() {
    ws();
    char c = peek();
    if (c == '(') {
      ++i_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (c == '?' || c == '$') return Expr{variable()};
    if (c == '!') unsupported("logical negation");
    if (keyword("NOW")) {
      expect('(');
      expect(')');
      return Expr{NowCall{}};
    }
    std::size_t save = i_;
    while (std::isalpha(static_cast<unsigned char>(peek()))) ++i_;
    if (i_ > save && peek() == '(') {
      auto name = std::string(s_.substr(save, i_ - save));
      unsupported("function " + name + "()");
    }
    i_ = save;
    return Expr{term_or_literal()};
  }

  void modifiers(Query& q) {
    for (;;) {
      ws();
      if (keyword("GROUP") || keyword("HAVING")) unsupported("GROUP BY / HAVING");
      if (keyword("ORDER")) {
        ws();
        if (!keyword("BY")) fail("expected BY");
        ws();
        OrderKey k;
        if (keyword("DESC")) {
          k.descending = true;
          expect('(');
          ws();
          k.var = variable();
          expect(')');
        } else if (keyword("ASC") || peek() == '(') {
          expect('(');
          ws();
          k.var = variable();
          expect(')');
        } else {
          k.var = variable();
        }
        ws();
        if (peek() == '?' || peek() == '(' || keyword("ASC") || keyword("DESC"))
          unsupported("several ORDER BY keys");
        q.order = k;
      } else if (keyword("LIMIT")) {
        q.limit = integer();
      } else if (keyword("OFFSET")) {
        q.offset = integer();
      } else {
        return;
      }
    }
  }

  std::int64_t integer() {
    ws();
    std::size_t start = i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    if (start == i_ || i_ - start > 15) fail("expected integer");
    return std::stoll(std::string(s_.substr(start, i_ - start)));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<std::pair<std::string, std::string>> prefixes_;
  const std::vector<std::pair<std::string, std::string>>& defaults_;
};

nlohmann::json term_json(const rdf::Term& t) {
  switch (t.kind) {
    case rdf::TermKind::Iri: return {{"iri", t.value}};
    case rdf::TermKind::Blank: return {{"blank", t.value}};
    case rdf::TermKind::Literal: break;
  }
  nlohmann::json j = {{"literal", t.value}, {"datatype", t.datatype}};
  if (!t.lang.empty()) j["lang"] = t.lang;
  return j;
}

nlohmann::json pattern_json(const PatternTerm& t) {
  if (const auto* v = std::get_if<Var>(&t)) return {{"var", v->name}};
  return term_json(std::get<rdf::Term>(t));
}

nlohmann::json expr_json(const Expr& e) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Var>) {
          return {{"var", x.name}};
        } else if constexpr (std::is_same_v<T, rdf::Term>) {
          return term_json(x);
        } else if constexpr (std::is_same_v<T, NowCall>) {
          return {{"call", "now"}};
        } else {
          return {{"op", std::string(symbol(x.op))},
                  {"lhs", expr_json(*x.lhs)},
                  {"rhs", expr_json(*x.rhs)}};
        }
      },
      e.node);
}

nlohmann::json group_json(const Group& g) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& el : g.elements) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, TriplePattern>) {
            out.push_back({{"type", "triple"},
                           {"subject", pattern_json(x.subject)},
                           {"predicate", pattern_json(x.predicate)},
                           {"object", pattern_json(x.object)}});
          } else if constexpr (std::is_same_v<T, Filter>) {
            out.push_back({{"type", "filter"}, {"expr", expr_json(x.expr)}});
          } else if constexpr (std::is_same_v<T, Bind>) {
            out.push_back({{"type", "bind"}, {"expr", expr_json(x.expr)}, {"var", x.var.name}});
          } else {
            nlohmann::json branches = nlohmann::json::array();
            for (const auto& b : x->branches) branches.push_back(group_json(b));
            out.push_back({{"type", "union"}, {"branches", branches}});
          }
        },
        el);
  }
  return out;
}

}  // namespace

std::string_view symbol(Op op) {
  switch (op) {
    case Op::Or: return "||";
    case Op::And: return "&&";
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Add: return "+";
    case Op::Sub: return "-";
  }
  return "?";
}

Expr binary(Op op, Expr lhs, Expr rhs) {
  return Expr{BinaryExpr{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}

std::vector<std::string> result_vars(const Query& q) {
  std::vector<std::string> out;
  if (q.form == Form::Ask) return out;
  if (q.count) return {q.count->alias.name};
  for (const auto& v : q.projection) out.push_back(v.name);
  return out;
}

std::vector<std::string> bound_vars(const Group& g) {
  std::vector<std::string> out;
  collect_bound(g, out);
  return out;
}

std::vector<std::string> validate(const Query& q) {
  std::vector<std::string> out;
  if (empty_group(q.where)) out.push_back("empty where clause");
  auto bound = bound_vars(q.where);
  auto is_bound = [&](const Var& v) {
    return std::find(bound.begin(), bound.end(), v.name) != bound.end();
  };
  if (q.form == Form::Ask) {
    if (!q.projection.empty() || q.count) out.push_back("ASK query with a projection");
  } else {
    if (q.projection.empty() && !q.count) out.push_back("SELECT without projection");
    std::set<std::string> seen;
    for (const auto& v : q.projection) {
      if (!seen.insert(v.name).second) out.push_back("?" + v.name + " projected twice");
      if (!is_bound(v))
        out.push_back("projected variable ?" + v.name + " does not occur in the where clause");
    }
    if (q.count) {
      if (!is_bound(q.count->var))
        out.push_back("counted variable ?" + q.count->var.name +
                      " does not occur in the where clause");
      if (is_bound(q.count->alias))
        out.push_back("count alias ?" + q.count->alias.name + " is bound in the where clause");
    }
  }
  if (q.order) {
    bool alias = q.count && q.count->alias == q.order->var;
    if (!alias && !is_bound(q.order->var))
      out.push_back("ORDER BY variable ?" + q.order->var.name +
                    " does not occur in the where clause");
  }
  if (q.limit && *q.limit < 0) out.push_back("negative LIMIT");
  if (q.offset && *q.offset < 0) out.push_back("negative OFFSET");
  check_binds(q.where, {}, out);
  return out;
}

std::string render(const Expr& e, const Query& context) { return render_expr(e, context, 0); }

std::string render(const Query& q) {
  auto violations = validate(q);
  if (!violations.empty()) throw InvalidQuery(violations);
  std::string out;
  for (const auto& [p, ns] : q.prefixes) out += "PREFIX " + p + ": <" + ns + ">\n";
  if (q.form == Form::Ask) {
    out += "ASK WHERE {\n";
  } else {
    out += "SELECT ";
    if (q.distinct) out += "DISTINCT ";
    if (q.count) {
      out += std::string("(COUNT(") + (q.count->distinct ? "DISTINCT " : "") + "?" +
             q.count->var.name + ") AS ?" + q.count->alias.name + ")";
    } else {
      for (std::size_t i = 0; i < q.projection.size(); ++i)
        out += (i ? " ?" : "?") + q.projection[i].name;
    }
    out += " WHERE {\n";
  }
  render_group(q.where, q, 1, out);
  out += "}";
  if (q.order)
    out += std::string(" ORDER BY ") + (q.order->descending ? "DESC" : "") + "(?" +
           q.order->var.name + ")";
  if (q.limit) out += " LIMIT " + std::to_string(*q.limit);
  if (q.offset) out += " OFFSET " + std::to_string(*q.offset);
  return out + "\n";
}

Query parse(std::string_view text,
            const std::vector<std::pair<std::string, std::string>>& default_prefixes) {
  return Parser(text, default_prefixes).run();
}

nlohmann::json to_json(const Query& q) {
  nlohmann::json j;
  j["form"] = q.form == Form::Ask ? "ASK" : "SELECT";
  j["distinct"] = q.distinct;
  nlohmann::json proj = nlohmann::json::array();
  for (const auto& v : q.projection) proj.push_back(v.name);
  j["projection"] = proj;
  if (q.count)
    j["count"] = {{"var", q.count->var.name},
                  {"alias", q.count->alias.name},
                  {"distinct", q.count->distinct}};
  j["where"] = group_json(q.where);
  if (q.order) j["order"] = {{"var", q.order->var.name}, {"descending", q.order->descending}};
  if (q.limit) j["limit"] = *q.limit;
  if (q.offset) j["offset"] = *q.offset;
  nlohmann::json prefixes = nlohmann::json::array();
  for (const auto& [p, ns] : q.prefixes) prefixes.push_back({p, ns});
  j["prefixes"] = prefixes;
  return j;
}

}  // namespace kbqa::sparql
