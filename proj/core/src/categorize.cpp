#include <map>
#include <set>

#include "kbqa/evaluation.hpp"

namespace kbqa::eval {

namespace {

using Sources = std::set<std::string>;

// Tracks which variables hold time values and which temporal event each
// comes from: the subject of a start/end/point-in-time/birth-date triple,
// the current time, or a date constant in the query.
class TemporalScan {
 public:
  TemporalScan(const sparql::Query& q, const kb::KbProfile& kb) {
    for (const auto* pid : {&kb.start_time, &kb.end_time, &kb.point_in_time, &kb.birthdate}) {
      if (pid->empty()) continue;
      temporal_iris_.insert(kb.direct(*pid));
      if (!kb.qualifier_prefix.empty()) temporal_iris_.insert(kb.qualifier(*pid));
      if (!kb.statement_value_prefix.empty()) temporal_iris_.insert(kb.statement_value(*pid));
    }
    scan(q.where);
    f_.aggregation = q.count.has_value() || q.order.has_value();
    std::set<std::string> events;
    for (const auto& [var, srcs] : sources_) events.insert(srcs.begin(), srcs.end());
    for (const auto& e : filter_events_) events.insert(e);
    f_.intervals = static_cast<int>(events.size());
  }

  QueryFeatures features() const { return f_; }

 private:
  static std::string node_key(const sparql::PatternTerm& t) {
    if (const auto* v = std::get_if<sparql::Var>(&t)) return "?" + v->name;
    return rdf::to_ntriples(std::get<rdf::Term>(t));
  }

  void scan(const sparql::Group& g) {
    std::vector<const sparql::Expr*> filters;
    for (const auto& el : g.elements) {
      if (const auto* t = std::get_if<sparql::TriplePattern>(&el)) {
        const auto* p = std::get_if<rdf::Term>(&t->predicate);
        const auto* o = std::get_if<sparql::Var>(&t->object);
        if (p && o && temporal_iris_.count(p->value)) sources_[o->name].insert(node_key(t->subject));
      } else if (const auto* b = std::get_if<sparql::Bind>(&el)) {
        auto s = expr_sources(b->expr);
        if (!s.empty()) sources_[b->var.name] = s;
      } else if (const auto* f = std::get_if<sparql::Filter>(&el)) {
        filters.push_back(&f->expr);
      } else {
        for (const auto& br : std::get<Box<sparql::Union>>(el)->branches) scan(br);
      }
    }
    for (const auto* e : filters) check_filter(*e);
  }

  Sources expr_sources(const sparql::Expr& e) {
    Sources out;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, sparql::Var>) {
            if (auto it = sources_.find(x.name); it != sources_.end()) out = it->second;
          } else if constexpr (std::is_same_v<T, rdf::Term>) {
            if (x.datatype == rdf::xsd("dateTime") || x.datatype == rdf::xsd("date"))
              out.insert("date-constant");
            if (x.datatype == rdf::xsd("duration")) f_.duration_arithmetic = true;
          } else if constexpr (std::is_same_v<T, sparql::NowCall>) {
            out.insert("now");
          } else {
            auto l = expr_sources(*x.lhs), r = expr_sources(*x.rhs);
            out = l;
            out.insert(r.begin(), r.end());
          }
        },
        e.node);
    return out;
  }

  void check_filter(const sparql::Expr& e) {
    const auto* x_ptr = std::get_if<sparql::BinaryExpr>(&e.node);
    if (!x_ptr) return;
    const auto& x = *x_ptr;
    if (x.op == sparql::Op::And || x.op == sparql::Op::Or) {
      check_filter(*x.lhs);
      check_filter(*x.rhs);
      return;
    }
    auto l = expr_sources(*x.lhs), r = expr_sources(*x.rhs);
    filter_events_.insert(l.begin(), l.end());
    filter_events_.insert(r.begin(), r.end());
    if (!l.empty() && !r.empty() && l != r) f_.temporal_filter = true;
  }

  std::set<std::string> temporal_iris_;
  std::map<std::string, Sources> sources_;
  std::set<std::string> filter_events_;
  QueryFeatures f_;
};

}  // namespace

QueryFeatures features(const sparql::Query& q, const kb::KbProfile& kb) {
  return TemporalScan(q, kb).features();
}

Category categorize(const sparql::Query& q, const kb::KbProfile& kb) {
  auto f = features(q, kb);
  if (f.intervals >= 2 && f.temporal_filter &&
      (f.duration_arithmetic || f.aggregation || f.intervals >= 3))
    return Category::Complex;
  if (f.temporal_filter || (f.aggregation && f.intervals >= 1)) return Category::Medium;
  return Category::Simple;
}

}  // namespace kbqa::eval
