#include "store_values.hpp"

#include <cmath>
#include <compare>
#include <cstdio>
#include <limits>
#include <set>
#include <string_view>

namespace kbqa::store::detail {

namespace {

using rdf::Term;
using sparql::Op;

enum class Num { Integer, Decimal, Double };

std::optional<Num> numeric_kind(const Term& t) {
  if (!t.is_literal()) return std::nullopt;
  static const std::set<std::string> kIntegers = {
      rdf::xsd("integer"), rdf::xsd("int"), rdf::xsd("long"), rdf::xsd("short"),
      rdf::xsd("byte"), rdf::xsd("nonNegativeInteger"), rdf::xsd("positiveInteger"),
      rdf::xsd("negativeInteger"), rdf::xsd("nonPositiveInteger"), rdf::xsd("unsignedLong"),
      rdf::xsd("unsignedInt"), rdf::xsd("unsignedShort"), rdf::xsd("unsignedByte")};
  if (kIntegers.count(t.datatype)) return Num::Integer;
  if (t.datatype == rdf::xsd("decimal")) return Num::Decimal;
  if (t.datatype == rdf::xsd("double") || t.datatype == rdf::xsd("float")) return Num::Double;
  return std::nullopt;
}

std::optional<long double> number(const Term& t) {
  if (!numeric_kind(t)) return std::nullopt;
  if (t.value == "INF" || t.value == "+INF") return std::numeric_limits<long double>::infinity();
  if (t.value == "-INF") return -std::numeric_limits<long double>::infinity();
  if (t.value == "NaN") return std::numeric_limits<long double>::quiet_NaN();
  try {
    std::size_t used = 0;
    long double v = std::stold(t.value, &used);
    if (used != t.value.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<rdf::DateTime> instant(const Term& t) {
  if (!t.is_literal()) return std::nullopt;
  if (t.datatype != rdf::xsd("dateTime") && t.datatype != rdf::xsd("date")) return std::nullopt;
  return rdf::parse_datetime(t.value);
}

bool is_plain_string(const Term& t) {
  return t.is_literal() && (t.datatype == rdf::xsd("string") || t.datatype.empty());
}

std::optional<bool> boolean(const Term& t) {
  if (!t.is_literal() || t.datatype != rdf::xsd("boolean")) return std::nullopt;
  if (t.value == "true" || t.value == "1") return true;
  if (t.value == "false" || t.value == "0") return false;
  return std::nullopt;
}

Term make_bool(bool b) { return Term::literal(b ? "true" : "false", rdf::xsd("boolean")); }

std::optional<bool> effective_boolean(const std::optional<Term>& t) {
  if (!t) return std::nullopt;
  if (auto b = boolean(*t)) return b;
  if (numeric_kind(*t)) {
    auto v = number(*t);
    if (!v) return std::nullopt;
    return !(*v == 0 || std::isnan(*v));
  }
  if (is_plain_string(*t)) return !t->value.empty();
  return std::nullopt;
}

// Value comparison where the two terms are comparable.
std::optional<std::partial_ordering> compare_values(const Term& a, const Term& b) {
  if (numeric_kind(a) && numeric_kind(b)) {
    auto x = number(a), y = number(b);
    if (!x || !y) return std::nullopt;
    return *x <=> *y;
  }
  auto da = instant(a), db = instant(b);
  if (da && db) return rdf::compare(*da, *db);
  if (is_plain_string(a) && is_plain_string(b)) return a.value <=> b.value;
  if (a.is_literal() && b.is_literal() && !a.lang.empty() && a.lang == b.lang)
    return a.value <=> b.value;
  auto ba = boolean(a), bb = boolean(b);
  if (ba && bb) return *ba <=> *bb;
  return std::nullopt;
}

std::optional<bool> relational(Op op, const Term& a, const Term& b) {
  auto c = compare_values(a, b);
  if (!c) {
    if (op == Op::Eq) return a == b;
    if (op == Op::Ne) return a != b;
    return std::nullopt;
  }
  switch (op) {
    case Op::Eq: return *c == 0;
    case Op::Ne: return *c != 0;
    case Op::Lt: return *c < 0;
    case Op::Le: return *c <= 0;
    case Op::Gt: return *c > 0;
    case Op::Ge: return *c >= 0;
    default: return std::nullopt;
  }
}

std::string format_decimal(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lf", v);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s += '0';
  return s;
}

std::optional<Term> arithmetic(Op op, const Term& a, const Term& b) {
  auto ka = numeric_kind(a), kb = numeric_kind(b);
  if (ka && kb) {
    if (*ka == Num::Integer && *kb == Num::Integer) {
      auto x = number(a), y = number(b);
      if (!x || !y) return std::nullopt;
      long double r = op == Op::Add ? *x + *y : *x - *y;
      if (std::fabs(r) > 9.0e18L) return std::nullopt;
      return Term::integer(static_cast<std::int64_t>(r));
    }
    auto x = number(a), y = number(b);
    if (!x || !y) return std::nullopt;
    long double r = op == Op::Add ? *x + *y : *x - *y;
    if (*ka == Num::Double || *kb == Num::Double) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17Lg", r);
      return Term::literal(buf, rdf::xsd("double"));
    }
    return Term::literal(format_decimal(r), rdf::xsd("decimal"));
  }
  // dateTime +/- duration
  if (b.is_literal() && b.datatype == rdf::xsd("duration")) {
    auto d = instant(a);
    auto dur = rdf::parse_duration(b.value);
    if (!d || !dur) return std::nullopt;
    if (op == Op::Sub) dur->negative = !dur->negative;
    return Term::literal(rdf::format_datetime(rdf::add(*d, *dur)), rdf::xsd("dateTime"));
  }
  return std::nullopt;
}

int rank(const Term* t) {
  if (!t) return 0;
  if (t->kind == rdf::TermKind::Blank) return 1;
  if (t->kind == rdf::TermKind::Iri) return 2;
  if (numeric_kind(*t) && number(*t) && !std::isnan(*number(*t))) return 3;
  if (instant(*t)) return 4;
  return 5;
}

}  // namespace

Term now_term(const rdf::DateTime& now) {
  return Term::literal(rdf::format_datetime(now), rdf::xsd("dateTime"));
}

std::optional<Term> evaluate(const sparql::Expr& e, const Lookup& lookup, const Term& now) {
  return std::visit(
      [&](const auto& x) -> std::optional<Term> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, sparql::Var>) {
          const Term* t = lookup(x.name);
          if (!t) return std::nullopt;
          return *t;
        } else if constexpr (std::is_same_v<T, Term>) {
          return x;
        } else if constexpr (std::is_same_v<T, sparql::NowCall>) {
          return now;
        } else {
          if (x.op == Op::And || x.op == Op::Or) {
            auto l = effective_boolean(evaluate(*x.lhs, lookup, now));
            auto r = effective_boolean(evaluate(*x.rhs, lookup, now));
            bool shortcut = x.op == Op::Or;  // value that decides regardless of errors
            if ((l && *l == shortcut) || (r && *r == shortcut)) return make_bool(shortcut);
            if (!l || !r) return std::nullopt;
            return make_bool(!shortcut);
          }
          auto l = evaluate(*x.lhs, lookup, now);
          auto r = evaluate(*x.rhs, lookup, now);
          if (!l || !r) return std::nullopt;
          if (x.op == Op::Add || x.op == Op::Sub) return arithmetic(x.op, *l, *r);
          auto b = relational(x.op, *l, *r);
          if (!b) return std::nullopt;
          return make_bool(*b);
        }
      },
      e.node);
}

bool filter_passes(const sparql::Expr& e, const Lookup& lookup, const Term& now) {
  return effective_boolean(evaluate(e, lookup, now)).value_or(false);
}

int order_compare(const Term* a, const Term* b) {
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0) return 0;
  if (ra == 3) {
    auto x = *number(*a), y = *number(*b);
    if (x != y) return x < y ? -1 : 1;
  } else if (ra == 4) {
    auto x = instant(*a)->instant(), y = instant(*b)->instant();
    if (x != y) return x < y ? -1 : 1;
  }
  auto sa = rdf::to_ntriples(*a), sb = rdf::to_ntriples(*b);
  return sa < sb ? -1 : (sa == sb ? 0 : 1);
}

}  // namespace kbqa::store::detail
