#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "kbqa/error.hpp"
#include "kbqa/store.hpp"
#include "store_values.hpp"

namespace kbqa::store {

namespace {

using rdf::Term;
using sparql::Element;

constexpr TermId kUnbound = std::numeric_limits<TermId>::max();

using Row = std::vector<TermId>;

class Evaluator {
 public:
  Evaluator(const sparql::Query& q, const TripleStore& s, const rdf::DateTime& now)
      : q_(q), store_(s), now_(detail::now_term(now)) {
    for (const auto& v : sparql::bound_vars(q.where)) slot(v);
    for (const auto& v : q.projection) slot(v.name);
    if (q.count) slot(q.count->var.name);
    if (q.order) slot(q.order->var.name);
  }

  Results run() {
    std::vector<const Element*> todo;
    for (const auto& e : q_.where.elements) todo.push_back(&e);
    solve(todo, 0, {Row(slots_.size(), kUnbound)}, {}, {});
    return finish();
  }

 private:
  std::size_t slot(const std::string& name) {
    auto [it, inserted] = slots_.emplace(name, slots_.size());
    return it->second;
  }

  std::optional<std::size_t> find_slot(const std::string& name) const {
    auto it = slots_.find(name);
    if (it == slots_.end()) return std::nullopt;
    return it->second;
  }

  const Term& term(TermId id) const {
    return id < store_.term_count() ? store_.term(id) : extra_[id - store_.term_count()];
  }

  TermId intern(const Term& t) {
    if (auto id = store_.find(t)) return *id;
    auto [it, inserted] =
        extra_ids_.emplace(t, static_cast<TermId>(store_.term_count() + extra_.size()));
    if (inserted) extra_.push_back(t);
    return it->second;
  }

  detail::Lookup lookup(const Row& row) const {
    return [this, &row](const std::string& name) -> const Term* {
      auto s = find_slot(name);
      if (!s || row[*s] == kUnbound) return nullptr;
      return &term(row[*s]);
    };
  }

  static std::vector<std::string> vars_of(const sparql::TriplePattern& t) {
    std::vector<std::string> out;
    for (const auto* p : {&t.subject, &t.predicate, &t.object})
      if (const auto* v = std::get_if<sparql::Var>(p)) out.push_back(v->name);
    return out;
  }

  // Greedy join order for a run of triple patterns: next the pattern with the
  // most positions already bound.
  std::vector<const sparql::TriplePattern*> order_run(std::vector<const sparql::TriplePattern*> run,
                                                      std::set<std::string> bound) const {
    std::vector<const sparql::TriplePattern*> out;
    while (!run.empty()) {
      auto score = [&](const sparql::TriplePattern* t) {
        int n = 0;
        for (const auto* p : {&t->subject, &t->predicate, &t->object}) {
          const auto* v = std::get_if<sparql::Var>(p);
          if (!v || bound.count(v->name)) ++n;
        }
        return n;
      };
      auto best = std::max_element(run.begin(), run.end(), [&](auto* a, auto* b) {
        return score(a) < score(b);
      });
      for (const auto& v : vars_of(**best)) bound.insert(v);
      out.push_back(*best);
      run.erase(best);
    }
    return out;
  }

  std::vector<Row> join(const std::vector<Row>& rows, const sparql::TriplePattern& t) {
    std::vector<Row> out;
    const sparql::PatternTerm* pos[3] = {&t.subject, &t.predicate, &t.object};
    std::optional<std::size_t> var_slot[3];
    std::optional<TermId> fixed[3];
    for (int k = 0; k < 3; ++k) {
      if (const auto* v = std::get_if<sparql::Var>(pos[k])) {
        var_slot[k] = slots_.at(v->name);
      } else {
        fixed[k] = store_.find(std::get<Term>(*pos[k]));
        if (!fixed[k]) return out;
      }
    }
    for (const auto& row : rows) {
      std::optional<TermId> key[3];
      bool possible = true;
      for (int k = 0; k < 3; ++k) {
        if (fixed[k]) {
          key[k] = fixed[k];
        } else if (TermId id = row[*var_slot[k]]; id != kUnbound) {
          if (id >= store_.term_count()) possible = false;
          key[k] = id;
        }
      }
      if (!possible) continue;
      store_.match(key[0], key[1], key[2], [&](const IdTriple& m) {
        Row next = row;
        for (int k = 0; k < 3; ++k) {
          if (!var_slot[k]) continue;
          TermId& cell = next[*var_slot[k]];
          if (cell != kUnbound && cell != m[k]) return;  // repeated variable
          cell = m[k];
        }
        out.push_back(std::move(next));
      });
    }
    return out;
  }

  void solve(const std::vector<const Element*>& todo, std::size_t i, std::vector<Row> rows,
             std::vector<const sparql::Filter*> filters, std::set<std::string> bound) {
    while (i < todo.size() && !rows.empty()) {
      const Element& el = *todo[i];
      if (std::holds_alternative<sparql::TriplePattern>(el)) {
        std::vector<const sparql::TriplePattern*> run;
        for (; i < todo.size() && std::holds_alternative<sparql::TriplePattern>(*todo[i]); ++i)
          run.push_back(&std::get<sparql::TriplePattern>(*todo[i]));
        for (const auto* t : order_run(run, bound)) {
          rows = join(rows, *t);
          for (const auto& v : vars_of(*t)) bound.insert(v);
        }
        continue;
      }
      if (const auto* b = std::get_if<sparql::Bind>(&el)) {
        std::size_t target = slots_.at(b->var.name);
        for (auto& row : rows)
          if (auto v = detail::evaluate(b->expr, lookup(row), now_)) row[target] = intern(*v);
        bound.insert(b->var.name);
      } else if (const auto* f = std::get_if<sparql::Filter>(&el)) {
        filters.push_back(f);
      } else {
        // UNION: each branch continues with the rest of the group.
        const auto& u = *std::get<Box<sparql::Union>>(el);
        for (const auto& br : u.branches) {
          std::vector<const Element*> next;
          for (const auto& e : br.elements) next.push_back(&e);
          next.insert(next.end(), todo.begin() + static_cast<std::ptrdiff_t>(i) + 1, todo.end());
          solve(next, 0, rows, filters, bound);
        }
        return;
      }
      ++i;
    }
    if (i < todo.size()) return;  // no rows left
    for (auto& row : rows) {
      bool keep = true;
      for (const auto* f : filters)
        if (!detail::filter_passes(f->expr, lookup(row), now_)) {
          keep = false;
          break;
        }
      if (keep) solutions_.push_back(std::move(row));
    }
  }

  Results finish() {
    Results r;
    if (q_.form == sparql::Form::Ask) {
      r.is_boolean = true;
      r.boolean = !solutions_.empty();
      return r;
    }
    r.vars = sparql::result_vars(q_);
    std::vector<Binding> rows;
    if (q_.count) {
      std::size_t s = slots_.at(q_.count->var.name);
      std::set<TermId> distinct;
      std::int64_t n = 0;
      for (const auto& row : solutions_) {
        if (row[s] == kUnbound) continue;
        if (!q_.count->distinct || distinct.insert(row[s]).second) ++n;
      }
      rows.push_back({{q_.count->alias.name, Term::integer(n)}});
    } else {
      struct Entry {
        const Term* key;
        std::vector<std::string> canon;
        Binding binding;
      };
      std::vector<Entry> entries;
      std::optional<std::size_t> key_slot;
      if (q_.order) key_slot = slots_.at(q_.order->var.name);
      for (const auto& row : solutions_) {
        Entry e{nullptr, {}, {}};
        if (key_slot && row[*key_slot] != kUnbound) e.key = &term(row[*key_slot]);
        for (const auto& v : q_.projection) {
          TermId id = row[slots_.at(v.name)];
          if (id == kUnbound) {
            e.canon.emplace_back();
          } else {
            e.canon.push_back(rdf::to_ntriples(term(id)));
            e.binding.emplace(v.name, term(id));
          }
        }
        entries.push_back(std::move(e));
      }
      bool desc = q_.order && q_.order->descending;
      std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
        if (q_.order) {
          int c = detail::order_compare(a.key, b.key);
          if (c != 0) return desc ? c > 0 : c < 0;
        }
        return a.canon < b.canon;
      });
      std::set<std::vector<std::string>> seen;
      for (auto& e : entries)
        if (!q_.distinct || seen.insert(e.canon).second) rows.push_back(std::move(e.binding));
    }
    auto offset = static_cast<std::size_t>(q_.offset.value_or(0));
    std::size_t begin = std::min(offset, rows.size());
    std::size_t end = rows.size();
    if (q_.limit) end = std::min(end, begin + static_cast<std::size_t>(*q_.limit));
    r.rows.assign(std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(begin)),
                  std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(end)));
    return r;
  }

  const sparql::Query& q_;
  const TripleStore& store_;
  Term now_;
  std::map<std::string, std::size_t> slots_;
  std::vector<Term> extra_;
  std::map<Term, TermId> extra_ids_;
  std::vector<Row> solutions_;
};

}  // namespace

Results eval(const sparql::Query& q, const TripleStore& s, const rdf::DateTime& now) {
  check_subset(q);
  return Evaluator(q, s, now).run();
}

}  // namespace kbqa::store
