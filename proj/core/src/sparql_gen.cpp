#include "kbqa/sparql_gen.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "kbqa/error.hpp"

namespace kbqa::sparql {

namespace {

using ground::Iri;
using ground::KbPredicate;
using ground::Node;
using ground::Qualifiers;

rdf::Term datetime_literal(std::int64_t y, int m, int d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04lld-%02d-%02dT00:00:00Z", static_cast<long long>(y), m, d);
  return rdf::Term::literal(buf, rdf::xsd("dateTime"));
}

PatternTerm pattern(const Node& n) {
  if (const auto* v = std::get_if<lambda::Var>(&n)) return Var{v->name};
  return rdf::Term::iri(std::get<Iri>(n).value);
}

PatternTerm iri(const std::string& s) { return rdf::Term::iri(s); }

// Elements of one group, kept in buckets until the group is closed.
struct Buckets {
  std::vector<Element> triples;
  std::vector<Element> unions;
  std::vector<Element> binds;
  std::vector<Element> filters;

  Group close() {
    // Copies of a frame shared by target and key yield identical patterns.
    Group g;
    for (auto* b : {&triples, &unions, &binds, &filters})
      for (auto& e : *b)
        if (std::find(g.elements.begin(), g.elements.end(), e) == g.elements.end())
          g.elements.push_back(std::move(e));
    return g;
  }
};

class Emitter {
 public:
  explicit Emitter(const kb::KbProfile& kb) : kb_(kb) {}

  void term(const ground::KbTerm& t, Buckets& out) {
    if (t.connective == lambda::Connective::And) {
      for (const auto& c : t.children) child(c, out);
      return;
    }
    Union u;
    for (const auto& c : t.children) {
      Buckets branch;
      child(c, branch);
      u.branches.push_back(branch.close());
    }
    out.unions.emplace_back(Box<Union>(std::move(u)));
  }

 private:
  void child(const lambda::TermChild<KbPredicate>& c, Buckets& out) {
    if (const auto* p = std::get_if<KbPredicate>(&c)) {
      predicate(*p, out);
    } else {
      term(*std::get<Box<ground::KbTerm>>(c), out);
    }
  }

  static Var start(const lambda::IntervalVar& i) { return Var{i.start()}; }
  static Var end(const lambda::IntervalVar& i) { return Var{i.end()}; }

  static void bind(Buckets& out, Expr e, Var v) { out.binds.emplace_back(Bind{std::move(e), v}); }

  void interval_properties(const PatternTerm& subject, Qualifiers q,
                           const lambda::IntervalVar& ivar, bool statement, Buckets& out) {
    auto prop = [&](const std::string& pid) {
      return iri(statement ? kb_.qualifier(pid) : kb_.direct(pid));
    };
    if (q == Qualifiers::PointInTime) {
      out.triples.emplace_back(TriplePattern{subject, prop(kb_.point_in_time), start(ivar)});
      bind(out, Expr{start(ivar)}, end(ivar));
    } else {
      out.triples.emplace_back(TriplePattern{subject, prop(kb_.start_time), start(ivar)});
      out.triples.emplace_back(TriplePattern{subject, prop(kb_.end_time), end(ivar)});
    }
  }

  void predicate(const KbPredicate& p, Buckets& out) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ground::GroundedPred>) {
            if (x.statement) {
              Var r{x.statement->name};
              out.triples.emplace_back(
                  TriplePattern{pattern(x.subject), iri(kb_.statement(x.property.pid)), r});
              out.triples.emplace_back(TriplePattern{
                  r, iri(kb_.statement_value(x.property.pid)), pattern(x.object)});
            } else {
              out.triples.emplace_back(TriplePattern{
                  pattern(x.subject), iri(kb_.direct(x.property.pid)), pattern(x.object)});
            }
          } else if constexpr (std::is_same_v<T, ground::StatementInterval>) {
            interval_properties(Var{x.statement.name}, x.property.qualifiers, x.ivar, true, out);
          } else if constexpr (std::is_same_v<T, ground::EntityInterval>) {
            interval_properties(pattern(x.subject), x.qualifiers, x.ivar, false, out);
          } else if constexpr (std::is_same_v<T, ground::ValueInterval>) {
            bind(out, var_expr(x.value.name), start(x.ivar));
            bind(out, var_expr(x.value.name), end(x.ivar));
          } else if constexpr (std::is_same_v<T, lambda::NowPred>) {
            bind(out, Expr{NowCall{}}, start(x.ivar));
            bind(out, Expr{NowCall{}}, end(x.ivar));
          } else if constexpr (std::is_same_v<T, lambda::DatePred>) {
            auto [lo, hi] = date_bounds(x.date);
            bind(out, Expr{lo}, start(x.ivar));
            bind(out, Expr{hi}, end(x.ivar));
          } else if constexpr (std::is_same_v<T, ground::TeenagerInterval>) {
            Var birth{x.birth.name};
            out.triples.emplace_back(
                TriplePattern{pattern(x.person), iri(kb_.direct(kb_.birthdate)), birth});
            auto plus = [&](const char* years) {
              return binary(Op::Add, Expr{birth},
                            Expr{rdf::Term::literal(years, rdf::xsd("duration"))});
            };
            bind(out, plus("P13Y"), start(x.ivar));
            bind(out, plus("P19Y"), end(x.ivar));
          } else if constexpr (std::is_same_v<T, lambda::OverlapPred>) {
            out.filters.emplace_back(Filter{binary(
                Op::And, binary(Op::Le, Expr{start(x.first)}, Expr{end(x.second)}),
                binary(Op::Le, Expr{start(x.second)}, Expr{end(x.first)}))});
          } else if constexpr (std::is_same_v<T, lambda::BeforePred>) {
            out.filters.emplace_back(
                Filter{binary(Op::Le, Expr{end(x.first)}, Expr{start(x.second)})});
          } else if constexpr (std::is_same_v<T, lambda::AfterPred>) {
            out.filters.emplace_back(
                Filter{binary(Op::Ge, Expr{start(x.first)}, Expr{end(x.second)})});
          } else if constexpr (std::is_same_v<T, lambda::CmpPred>) {
            out.filters.emplace_back(
                Filter{binary(x.op == lambda::CmpOp::Greater ? Op::Gt : Op::Lt,
                              var_expr(x.left.name), var_expr(x.right.name))});
          } else if constexpr (std::is_same_v<T, lambda::CoordinatePred>) {
            throw UnemittableConstruct("coordinate");
          } else {
            throw UnemittableConstruct("south");
          }
        },
        p);
  }

  const kb::KbProfile& kb_;
};

void project(Query& q, const std::vector<lambda::Binder>& bound) {
  for (const auto& b : bound) {
    if (const auto* v = std::get_if<lambda::Var>(&b)) {
      q.projection.push_back(Var{v->name});
    } else {
      const auto& i = std::get<lambda::IntervalVar>(b);
      q.projection.push_back(Var{i.start()});
      q.projection.push_back(Var{i.end()});
    }
  }
}

template <class F>
void for_each_pred(const ground::KbTerm& t, F&& f) {
  for (const auto& c : t.children) {
    if (const auto* p = std::get_if<KbPredicate>(&c)) {
      f(*p);
    } else {
      for_each_pred(*std::get<Box<ground::KbTerm>>(c), f);
    }
  }
}

// The variable that orders by binder b: an interval binder's start accessor;
// for an ordinary variable, the start of an interval built on it if there is
// one, otherwise the variable itself.
Var order_var(const lambda::Binder& b, const std::vector<const ground::KbTerm*>& bodies) {
  if (const auto* i = std::get_if<lambda::IntervalVar>(&b)) return Var{i->start()};
  const auto& v = std::get<lambda::Var>(b);
  std::optional<Var> found;
  for (const auto* body : bodies) {
    for_each_pred(*body, [&](const KbPredicate& p) {
      if (found) return;
      if (const auto* vi = std::get_if<ground::ValueInterval>(&p)) {
        if (vi->value == v) found = Var{vi->ivar.start()};
      } else if (const auto* ei = std::get_if<ground::EntityInterval>(&p)) {
        if (const auto* s = std::get_if<lambda::Var>(&ei->subject))
          if (*s == v) found = Var{ei->ivar.start()};
      }
    });
  }
  return found.value_or(Var{v.name});
}

}  // namespace

std::pair<rdf::Term, rdf::Term> date_bounds(const lambda::CalendarDate& d) {
  switch (d.precision) {
    case lambda::DatePrecision::Year:
      return {datetime_literal(d.year, 1, 1), datetime_literal(d.year, 12, 31)};
    case lambda::DatePrecision::Month:
      return {datetime_literal(d.year, d.month, 1),
              datetime_literal(d.year, d.month,
                               static_cast<int>(rdf::days_in_month(d.year, d.month)))};
    case lambda::DatePrecision::Day:
      break;
  }
  return {datetime_literal(d.year, d.month, d.day), datetime_literal(d.year, d.month, d.day)};
}

Query emit(const ground::KbLambdaExpr& e, const kb::KbProfile& kb) {
  Query q;
  q.prefixes = kb.prefixes;
  Emitter em(kb);
  Buckets where;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ground::KbAbstraction>) {
          em.term(x.body, where);
          project(q, x.bound);
        } else if constexpr (std::is_same_v<T, ground::KbCount>) {
          em.term(x.inner.body, where);
          q.distinct = false;
          auto counted = std::get_if<lambda::IntervalVar>(&x.inner.bound.front())
                             ? Var{std::get<lambda::IntervalVar>(x.inner.bound.front()).start()}
                             : Var{lambda::binder_name(x.inner.bound.front())};
          q.count = CountProjection{counted, Var{"c"}, false};
        } else if constexpr (std::is_same_v<T, ground::KbExtremum>) {
          em.term(x.inner.body, where);
          project(q, x.inner.bound);
          q.order = OrderKey{order_var(x.inner.bound.front(), {&x.inner.body}),
                             x.kind == lambda::Extreme::Max};
          q.limit = x.limit;
          q.offset = x.offset;
        } else if constexpr (std::is_same_v<T, ground::KbArgExtremum>) {
          em.term(x.target.body, where);
          em.term(x.key.body, where);
          project(q, x.target.bound);
          q.order = OrderKey{order_var(x.key.bound.back(), {&x.key.body, &x.target.body}),
                             x.kind == lambda::Extreme::Max};
          q.limit = x.limit;
          q.offset = x.offset;
        } else {
          em.term(x.body, where);
          q.form = Form::Ask;
          q.distinct = false;
        }
      },
      e);
  q.where = where.close();
  if (q.count) {
    auto bound = bound_vars(q.where);
    std::string alias = "c";
    for (int i = 1; std::find(bound.begin(), bound.end(), alias) != bound.end(); ++i)
      alias = "c" + std::to_string(i);
    q.count->alias = Var{alias};
  }
  auto violations = validate(q);
  if (!violations.empty()) throw InvalidQuery(violations);
  return q;
}

}  // namespace kbqa::sparql
