#include <algorithm>
#include <map>
#include <set>

#include "kbqa/store.hpp"
#include "store_values.hpp"

namespace kbqa::store {

namespace {

using rdf::Term;
using sparql::Element;
using Flat = std::vector<const Element*>;  // no UNION elements
using Assignment = std::map<std::string, Term>;

// Every way of choosing one branch per UNION, spliced in place.
std::vector<Flat> expand(const std::vector<const Element*>& elements) {
  std::vector<Flat> out{{}};
  for (const auto* e : elements) {
    if (const auto* u = std::get_if<Box<sparql::Union>>(e)) {
      std::vector<Flat> next;
      for (const auto& prefix : out) {
        for (const auto& br : (*u)->branches) {
          std::vector<const Element*> inner;
          for (const auto& x : br.elements) inner.push_back(&x);
          for (const auto& tail : expand(inner)) {
            Flat f = prefix;
            f.insert(f.end(), tail.begin(), tail.end());
            next.push_back(std::move(f));
          }
        }
      }
      out = std::move(next);
    } else {
      for (auto& f : out) f.push_back(e);
    }
  }
  return out;
}

class Enumerator {
 public:
  Enumerator(const TripleStore& s, const Flat& flat, const Term& now,
             std::vector<Assignment>& out)
      : store_(s), flat_(flat), now_(now), out_(out) {
    for (const auto* e : flat)
      if (const auto* t = std::get_if<sparql::TriplePattern>(e)) {
        patterns_.push_back(t);
        for (const auto* p : {&t->subject, &t->predicate, &t->object})
          if (const auto* v = std::get_if<sparql::Var>(p))
            if (std::find(vars_.begin(), vars_.end(), v->name) == vars_.end())
              vars_.push_back(v->name);
      }
  }

  void run() {
    Assignment a;
    assign(0, a);
  }

 private:
  // A pattern is checked as soon as all its variables are assigned.
  bool consistent(const Assignment& a) const {
    for (const auto* t : patterns_) {
      Term parts[3];
      bool complete = true;
      int k = 0;
      for (const auto* p : {&t->subject, &t->predicate, &t->object}) {
        if (const auto* v = std::get_if<sparql::Var>(p)) {
          auto it = a.find(v->name);
          if (it == a.end()) {
            complete = false;
            break;
          }
          parts[k++] = it->second;
        } else {
          parts[k++] = std::get<Term>(*p);
        }
      }
      if (!complete) continue;
      auto s = store_.find(parts[0]), p = store_.find(parts[1]), o = store_.find(parts[2]);
      if (!s || !p || !o || !store_.contains({*s, *p, *o})) return false;
    }
    return true;
  }

  void assign(std::size_t k, Assignment& a) {
    if (!consistent(a)) return;
    if (k == vars_.size()) {
      finish(a);
      return;
    }
    for (TermId id = 0; id < store_.term_count(); ++id) {
      a[vars_[k]] = store_.term(id);
      assign(k + 1, a);
    }
    a.erase(vars_[k]);
  }

  void finish(Assignment a) {
    // BINDs see only what the elements before them bound.
    std::set<std::string> visible;
    std::vector<const sparql::Filter*> filters;
    for (const auto* e : flat_) {
      if (const auto* t = std::get_if<sparql::TriplePattern>(e)) {
        for (const auto* p : {&t->subject, &t->predicate, &t->object})
          if (const auto* v = std::get_if<sparql::Var>(p)) visible.insert(v->name);
      } else if (const auto* b = std::get_if<sparql::Bind>(e)) {
        auto look = [&](const std::string& name) -> const Term* {
          if (!visible.count(name)) return nullptr;
          auto it = a.find(name);
          return it == a.end() ? nullptr : &it->second;
        };
        if (auto v = detail::evaluate(b->expr, look, now_)) a[b->var.name] = *v;
        visible.insert(b->var.name);
      } else if (const auto* f = std::get_if<sparql::Filter>(e)) {
        filters.push_back(f);
      }
    }
    auto look = [&](const std::string& name) -> const Term* {
      auto it = a.find(name);
      return it == a.end() ? nullptr : &it->second;
    };
    for (const auto* f : filters)
      if (!detail::filter_passes(f->expr, look, now_)) return;
    out_.push_back(std::move(a));
  }

  const TripleStore& store_;
  const Flat& flat_;
  const Term& now_;
  std::vector<Assignment>& out_;
  std::vector<const sparql::TriplePattern*> patterns_;
  std::vector<std::string> vars_;
};

std::string canonical(const Binding& b, const std::vector<std::string>& vars) {
  std::string out;
  for (const auto& v : vars) {
    auto it = b.find(v);
    out += (it == b.end() ? std::string() : rdf::to_ntriples(it->second)) + '\x1f';
  }
  return out;
}

}  // namespace

Results eval_bruteforce(const sparql::Query& q, const TripleStore& s, const rdf::DateTime& now) {
  check_subset(q);
  Term now_t = detail::now_term(now);
  std::vector<const Element*> top;
  for (const auto& e : q.where.elements) top.push_back(&e);
  std::vector<Assignment> solutions;
  for (const auto& flat : expand(top)) Enumerator(s, flat, now_t, solutions).run();

  Results r;
  if (q.form == sparql::Form::Ask) {
    r.is_boolean = true;
    r.boolean = !solutions.empty();
    return r;
  }
  r.vars = sparql::result_vars(q);
  std::vector<Binding> rows;
  if (q.count) {
    std::vector<Term> counted;
    for (const auto& a : solutions)
      if (auto it = a.find(q.count->var.name); it != a.end()) counted.push_back(it->second);
    if (q.count->distinct) {
      std::sort(counted.begin(), counted.end());
      counted.erase(std::unique(counted.begin(), counted.end()), counted.end());
    }
    rows.push_back({{q.count->alias.name,
                     Term::integer(static_cast<std::int64_t>(counted.size()))}});
  } else {
    std::vector<std::pair<const Assignment*, Binding>> projected;
    for (const auto& a : solutions) {
      Binding b;
      for (const auto& v : q.projection)
        if (auto it = a.find(v.name); it != a.end()) b.emplace(v.name, it->second);
      projected.emplace_back(&a, std::move(b));
    }
    auto key = [&](const Assignment* a) -> const Term* {
      if (!q.order) return nullptr;
      auto it = a->find(q.order->var.name);
      return it == a->end() ? nullptr : &it->second;
    };
    std::stable_sort(projected.begin(), projected.end(), [&](const auto& x, const auto& y) {
      if (q.order) {
        int c = detail::order_compare(key(x.first), key(y.first));
        if (q.order->descending) c = -c;
        if (c != 0) return c < 0;
      }
      return canonical(x.second, r.vars) < canonical(y.second, r.vars);
    });
    for (auto& [a, b] : projected) {
      if (q.distinct && std::find(rows.begin(), rows.end(), b) != rows.end()) continue;
      rows.push_back(std::move(b));
    }
  }
  std::int64_t offset = q.offset.value_or(0);
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(rows.size()); ++i) {
    if (i < offset) continue;
    if (q.limit && static_cast<std::int64_t>(r.rows.size()) >= *q.limit) break;
    r.rows.push_back(rows[static_cast<std::size_t>(i)]);
  }
  return r;
}

}  // namespace kbqa::store
