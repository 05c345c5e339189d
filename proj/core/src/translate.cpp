#include "kbqa/translate.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <regex>
#include <unordered_set>

#include "kbqa/error.hpp"

namespace kbqa::translate {

namespace {

using amr::AmrGraph;
using amr::NodeId;
using lambda::Arg;
using lambda::Binder;
using lambda::Const;
using lambda::IntervalVar;
using lambda::Predicate;
using lambda::Var;

const RuleEntry* rule(const std::string& name) {
  for (const auto& r : rule_inventory())
    if (r.id.name == name) return &r;
  throw std::logic_error("unknown rule " + name);
}

// An edge as seen from one of its endpoints. Edges stored in the other
// direction appear with the inverted role, so ":arg1-of" patterns match
// regardless of how the PENMAN text was written.
struct ViewEdge {
  std::string role;
  std::optional<NodeId> node;
  const amr::NodeTarget* target = nullptr;  // set for forward edges
  std::size_t index = 0;
};

std::string invert_role(const std::string& role) {
  if (amr::is_inverse_role(role)) return role.substr(0, role.size() - 3);
  return role + "-of";
}

std::optional<int> arg_index(const std::string& role) {
  if (role.size() < 4 || role.compare(0, 3, "arg") != 0) return std::nullopt;
  int k = 0;
  auto [p, ec] = std::from_chars(role.data() + 3, role.data() + role.size(), k);
  if (ec != std::errc() || p != role.data() + role.size()) return std::nullopt;
  return k;
}

std::optional<std::int64_t> integer(const amr::NodeTarget* t) {
  const auto* n = t ? std::get_if<amr::Number>(t) : nullptr;
  if (!n) return std::nullopt;
  std::int64_t x = 0;
  const auto& s = n->lexical;
  auto [p, ec] = std::from_chars(s.data() + (s[0] == '+' ? 1 : 0), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return x;
}

struct Match {
  const RuleEntry* rule = nullptr;
  NodeId anchor;   // node carrying the construct (v, v0 or vn)
  NodeId trigger;  // node that identifies the construct (a, b, d, o, h2, ...)
  NodeId other;    // n for nested frames, vm for comparatives
  std::int64_t value = 0;
  lambda::CalendarDate date;
};

bool is_wrapper(const std::string& name) {
  static const std::set<std::string> kWrappers = {
      "temporal.before",  "temporal.after",   "temporal.ordinal",
      "temporal.ordinal.last", "numerical.count", "numerical.first",
      "numerical.last",   "numerical.most",   "numerical.least"};
  return kWrappers.count(name) > 0;
}

class Translator {
 public:
  Translator(const AmrGraph& g, const TranslateOptions& opts) : g_(g), opts_(opts) {
    for (const auto& n : g_.nodes()) vars_.insert(n.var);
  }

  TranslateResult run() {
    reject_spatial();
    match_rules();
    reject_leftovers();
    return build();
  }

 private:
  // ---- graph helpers ----

  std::vector<ViewEdge> view(const NodeId& x) const {
    std::vector<ViewEdge> out;
    for (auto idx : g_.outgoing(x)) {
      const auto& e = g_.edges()[idx];
      ViewEdge ve{e.role, std::nullopt, &e.target, idx};
      if (const auto* r = std::get_if<amr::NodeRef>(&e.target)) ve.node = r->var;
      out.push_back(std::move(ve));
    }
    for (auto idx : g_.incoming(x)) {
      const auto& e = g_.edges()[idx];
      out.push_back({invert_role(e.role), e.source, nullptr, idx});
    }
    return out;
  }

  std::optional<ViewEdge> find_edge(const NodeId& x, const std::string& role) const {
    for (auto& ve : view(x))
      if (ve.role == role && !consumed_edges_.count(ve.index)) return ve;
    return std::nullopt;
  }

  const std::string& concept_of(const NodeId& x) const { return g_.concept_of(x); }

  bool is_unknown(const NodeId& x) const { return concept_of(x) == "amr-unknown"; }

  bool is_special(const NodeId& x) const {
    const auto& c = concept_of(x);
    return c == "amr-unknown" || c == "now" || c == "date-entity" ||
           opts_.before_concepts.count(c) || opts_.after_concepts.count(c) ||
           opts_.teenager_concepts.count(c);
  }

  // "James Cameron" for (p / person :name (n / name :op1 "James" :op2 "Cameron")).
  std::optional<std::string> entity_name(const NodeId& x) const {
    for (const auto& ve : view(x)) {
      if (ve.role != "name" || !ve.node || concept_of(*ve.node) != "name") continue;
      std::map<int, std::string> parts;
      for (auto idx : g_.outgoing(*ve.node)) {
        const auto& e = g_.edges()[idx];
        if (e.role.size() < 3 || e.role.compare(0, 2, "op") != 0) continue;
        int k = std::atoi(e.role.c_str() + 2);
        if (const auto* c = std::get_if<amr::Constant>(&e.target)) {
          parts[k] = c->text;
        } else if (const auto* n = std::get_if<amr::Number>(&e.target)) {
          parts[k] = n->lexical;
        }
      }
      if (parts.empty()) continue;
      std::string out;
      for (const auto& [k, s] : parts) out += (out.empty() ? "" : " ") + s;
      return out;
    }
    return std::nullopt;
  }

  Arg arg_of(const NodeId& x) const {
    if (auto name = entity_name(x)) return Const{*name};
    return Var{x};
  }

  Arg target_arg(const ViewEdge& ve) const {
    if (ve.node) return arg_of(*ve.node);
    if (const auto* c = std::get_if<amr::Constant>(ve.target)) return Const{c->text};
    return Const{std::get<amr::Number>(*ve.target).lexical};
  }

  bool is_frame(const NodeId& x) const {
    static const std::regex kSense(".*-[0-9][0-9]$");
    const auto& c = concept_of(x);
    if (c == "amr-unknown" || c == "name") return false;
    if (std::regex_match(c, kSense)) return true;
    for (const auto& ve : view(x))
      if (arg_index(ve.role)) return true;
    return false;
  }

  IntervalVar ivar(const NodeId& x) const {
    std::string name = "e" + x;
    while (vars_.count(name)) name += "i";
    return IntervalVar{name};
  }

  void consume_node(const NodeId& x) {
    consumed_nodes_.insert(x);
    for (auto idx : g_.outgoing(x)) consumed_edges_.insert(idx);
    for (auto idx : g_.incoming(x)) consumed_edges_.insert(idx);
  }

  // ---- phase 1: rule matching ----

  void reject_spatial() {
    static const std::set<std::string> kDirections = {"south", "north", "east", "west"};
    for (const auto& n : g_.nodes()) {
      for (const auto& ve : view(n.var)) {
        if (ve.role == "mod" && ve.node && kDirections.count(concept_of(*ve.node)))
          throw UnsupportedConstruct(n.var, n.concept_name,
                                     "spatial reasoning is not supported");
      }
    }
  }

  void match_rules() {
    for (const auto& x : g_.preorder()) {
      for (const auto& ve : view(x)) {
        if (consumed_edges_.count(ve.index) || !ve.node) continue;
        if (auto m = match(x, ve)) matches_.push_back(std::move(*m));
      }
    }
  }

  std::optional<Match> match(const NodeId& x, const ViewEdge& ve) {
    const NodeId& y = *ve.node;
    const auto& c = concept_of(y);
    auto make = [&](const char* name, NodeId trigger, NodeId other = {}) {
      Match m;
      m.rule = rule(name);
      m.anchor = x;
      m.trigger = std::move(trigger);
      m.other = std::move(other);
      return m;
    };
    if (ve.role == "time") {
      if (is_unknown(y)) {
        consumed_edges_.insert(ve.index);
        consumed_nodes_.insert(y);
        return make("temporal.when", y);
      }
      bool before = opts_.before_concepts.count(c) > 0;
      bool after = opts_.after_concepts.count(c) > 0;
      if (before || after) {
        auto op = find_edge(y, "op1");
        if (op && op->node) {
          consume_node(y);
          return make(before ? "temporal.before" : "temporal.after", y, *op->node);
        }
        return std::nullopt;
      }
      if (!is_special(y)) {
        consumed_edges_.insert(ve.index);
        return make("temporal.overlap", y, y);
      }
    }
    if (ve.role == "ord" && c == "ordinal-entity") {
      auto value = find_edge(y, "value");
      auto x_val = value ? integer(value->target) : std::nullopt;
      if (x_val && (*x_val >= 1 || *x_val == -1)) {
        consume_node(y);
        auto m = make(*x_val == -1 ? "temporal.ordinal.last" : "temporal.ordinal", y);
        m.value = *x_val;
        return m;
      }
      throw UnsupportedConstruct(y, c, "unsupported ordinal value");
    }
    if (ve.role == "time" && c == "now") {
      consume_node(y);
      return make("temporal.now", y);
    }
    if (ve.role == "time" && c == "date-entity") {
      auto m = make("temporal.date", y);
      m.date = calendar_date(y);
      consume_node(y);
      return m;
    }
    if (ve.role == "time" && opts_.teenager_concepts.count(c)) {
      auto domain = find_edge(y, "domain");
      if (domain && domain->node) {
        consume_node(y);
        return make("temporal.teenager", y, *domain->node);
      }
      return std::nullopt;
    }
    if (ve.role == "quant" && is_unknown(y)) {
      consumed_edges_.insert(ve.index);
      consumed_nodes_.insert(y);
      return make("numerical.count", y);
    }
    if (ve.role == "mod" && (c == "first" || c == "last")) {
      consume_node(y);
      return make(c == "first" ? "numerical.first" : "numerical.last", y);
    }
    if (ve.role == "arg1-of" && (c == "have-quant-91" || c == "have-degree-91")) {
      auto degree = find_edge(y, "arg3");
      if (!degree || !degree->node) return std::nullopt;
      const auto& dc = concept_of(*degree->node);
      if (c == "have-quant-91" && (dc == "most" || dc == "least")) {
        consume_node(*degree->node);
        consume_node(y);
        return make(dc == "most" ? "numerical.most" : "numerical.least", y);
      }
      if (c == "have-degree-91" && (dc == "more" || dc == "less")) {
        auto than = find_edge(y, "arg4");
        if (!than || !than->node) return std::nullopt;
        consume_node(*degree->node);
        consume_node(y);
        return make(dc == "more" ? "numerical.more" : "numerical.less", y, *than->node);
      }
    }
    return std::nullopt;
  }

  lambda::CalendarDate calendar_date(const NodeId& d) {
    auto field = [&](const char* role) -> std::optional<std::int64_t> {
      auto e = find_edge(d, role);
      if (!e) return std::nullopt;
      auto v = integer(e->target);
      if (!v) throw UnsupportedConstruct(d, "date-entity", std::string("non-integer :") + role);
      return v;
    };
    auto year = field("year");
    auto month = field("month");
    auto day = field("day");
    if (!year || (day && !month))
      throw UnsupportedConstruct(d, "date-entity", "incomplete date");
    lambda::CalendarDate date{static_cast<int>(*year), static_cast<int>(month.value_or(1)),
                              static_cast<int>(day.value_or(1)),
                              day     ? lambda::DatePrecision::Day
                              : month ? lambda::DatePrecision::Month
                                      : lambda::DatePrecision::Year};
    static constexpr int kDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    bool leap = (date.year % 4 == 0 && date.year % 100 != 0) || date.year % 400 == 0;
    if (date.month < 1 || date.month > 12 || date.day < 1 ||
        date.day > kDays[date.month - 1] - (date.month == 2 && !leap ? 1 : 0))
      throw UnsupportedConstruct(d, "date-entity", "invalid calendar date");
    return date;
  }

  // Reasoning constructs that no rule consumed. A before/after/now/teenager
  // node only counts when it is the value of a :time edge; elsewhere it is an
  // ordinary concept.
  void reject_leftovers() {
    for (const auto& n : g_.nodes()) {
      const auto& c = n.concept_name;
      if (consumed_nodes_.count(n.var)) continue;
      if (c == "have-quant-91" || c == "have-degree-91" || c == "ordinal-entity")
        throw UnsupportedConstruct(n.var, c);
      if (!is_special(n.var) || c == "amr-unknown") continue;
      for (const auto& ve : view(n.var))
        if (ve.role == "time-of" && !consumed_edges_.count(ve.index))
          throw UnsupportedConstruct(n.var, c, "temporal construct is missing its argument");
    }
  }

  // ---- phase 2: expression assembly ----

  void psi(const NodeId& x, std::vector<Predicate>& out) {
    if (visited_.count(x)) return;
    visited_.insert(x);
    bool named = false;
    for (const auto& ve : view(x)) {
      if (ve.role == "name" && ve.node && concept_of(*ve.node) == "name") {
        visited_.insert(*ve.node);
        named = named || entity_name(x).has_value();
      }
    }
    if (!consumed_nodes_.count(x) && !named && is_frame(x)) {
      std::vector<std::pair<int, Arg>> args;
      for (const auto& ve : view(x)) {
        if (consumed_edges_.count(ve.index)) continue;
        if (auto k = arg_index(ve.role)) args.emplace_back(*k, target_arg(ve));
      }
      std::stable_sort(args.begin(), args.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      lambda::FramePred f{concept_of(x), {Var{x}}, {""}};
      for (auto& [k, a] : args) {
        f.args.push_back(std::move(a));
        f.roles.push_back("arg" + std::to_string(k));
      }
      out.emplace_back(std::move(f));
      applied_.push_back({rule("base.frame")->id, x});
    }
    for (const auto& ve : view(x))
      if (!consumed_edges_.count(ve.index) && ve.node) psi(*ve.node, out);
  }

  void define(std::vector<Predicate>& out, Predicate p) {
    auto name = std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, lambda::IntervalPred> ||
                        std::is_same_v<T, lambda::NowPred> ||
                        std::is_same_v<T, lambda::DatePred> ||
                        std::is_same_v<T, lambda::TeenagerPred>) {
            return x.ivar.name;
          } else {
            return {};
          }
        },
        p);
    if (!name.empty() && !defined_.insert(name).second) return;
    out.push_back(std::move(p));
  }

  static std::vector<Var> vars_in(const std::vector<Predicate>& preds) {
    std::vector<Var> out;
    auto add = [&](const Arg& a) {
      if (const auto* v = std::get_if<Var>(&a))
        if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
    };
    for (const auto& p : preds) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, lambda::FramePred>) {
              for (const auto& a : x.args) add(a);
            } else if constexpr (std::is_same_v<T, lambda::IntervalPred>) {
              add(x.source);
            } else if constexpr (std::is_same_v<T, lambda::TeenagerPred>) {
              add(x.person);
            } else if constexpr (std::is_same_v<T, lambda::CmpPred>) {
              add(x.left);
              add(x.right);
            }
          },
          p);
    }
    return out;
  }

  static lambda::Abstraction abstraction(std::vector<Binder> bound,
                                         const std::vector<Predicate>& body) {
    std::vector<Var> exists;
    for (const auto& v : vars_in(body)) {
      bool is_bound = std::any_of(bound.begin(), bound.end(), [&](const Binder& b) {
        return std::holds_alternative<Var>(b) && std::get<Var>(b) == v;
      });
      if (!is_bound) exists.push_back(v);
    }
    return {std::move(bound), std::move(exists), lambda::conj(body)};
  }

  TranslateResult build() {
    const Match* wrapper = nullptr;
    for (const auto& m : matches_) {
      applied_.push_back({m.rule->id, m.trigger});
      if (!is_wrapper(m.rule->id.name)) continue;
      if (wrapper)
        throw UnsupportedConstruct(m.trigger, concept_of(m.trigger),
                                   "multiple aggregation constructs");
      wrapper = &m;
    }

    std::vector<Predicate> main, key;
    psi(g_.root(), main);
    for (const auto& m : matches_) {
      const auto& name = m.rule->id.name;
      auto ev = ivar(m.anchor);
      lambda::IntervalPred event_interval{ev, arg_of(m.anchor)};
      if (name == "temporal.when") {
        define(main, event_interval);
      } else if (name == "temporal.before" || name == "temporal.after") {
        auto en = ivar(m.other);
        psi(m.other, key);
        define(key, event_interval);
        define(key, lambda::IntervalPred{en, arg_of(m.other)});
        if (name == "temporal.before") {
          key.emplace_back(lambda::BeforePred{ev, en});
        } else {
          key.emplace_back(lambda::AfterPred{ev, en});
        }
      } else if (name == "temporal.overlap") {
        auto en = ivar(m.other);
        psi(m.other, main);
        define(main, event_interval);
        define(main, lambda::IntervalPred{en, arg_of(m.other)});
        main.emplace_back(lambda::OverlapPred{ev, en});
      } else if (name == "temporal.ordinal" || name == "temporal.ordinal.last") {
        define(key, event_interval);
      } else if (name == "temporal.now") {
        auto en = ivar(m.trigger);
        define(main, event_interval);
        define(main, lambda::NowPred{en});
        main.emplace_back(lambda::OverlapPred{ev, en});
      } else if (name == "temporal.date") {
        auto ed = ivar(m.trigger);
        define(main, lambda::DatePred{ed, m.date});
        define(main, event_interval);
        main.emplace_back(lambda::OverlapPred{ev, ed});
      } else if (name == "temporal.teenager") {
        auto en = ivar(m.other);
        psi(m.other, main);
        define(main, event_interval);
        define(main, lambda::TeenagerPred{en, arg_of(m.other)});
        main.emplace_back(lambda::OverlapPred{ev, en});
      } else if (name == "numerical.more" || name == "numerical.less") {
        psi(m.other, main);
        main.emplace_back(lambda::CmpPred{Var{m.anchor}, Var{m.other},
                                          name == "numerical.more" ? lambda::CmpOp::Greater
                                                                   : lambda::CmpOp::Less});
      }
    }
    // The superlative key relates the target to the quantity vn: every
    // predicate mentioning vn, then whatever hangs below vn.
    if (wrapper && (wrapper->rule->id.name == "numerical.most" ||
                    wrapper->rule->id.name == "numerical.least")) {
      for (const auto& p : main) {
        if (const auto* f = std::get_if<lambda::FramePred>(&p)) {
          if (std::find(f->args.begin(), f->args.end(), Arg{Var{wrapper->anchor}}) !=
              f->args.end())
            key.push_back(p);
        }
      }
      psi(wrapper->anchor, key);
    }

    if (main.empty())
      throw UnsupportedConstruct(g_.root(), concept_of(g_.root()),
                                 "question yields no predicates");

    TranslateResult result;
    auto unknowns = amr::find_unknowns(g_);
    if (unknowns.empty()) {
      if (wrapper)
        throw UnsupportedConstruct(wrapper->trigger, concept_of(wrapper->trigger),
                                   "aggregation in a question without amr-unknown");
      result.expr = lambda::BooleanQuery{vars_in(main), lambda::conj(main)};
      applied_.push_back({rule("base.boolean")->id, g_.root()});
      result.applied = std::move(applied_);
      return result;
    }

    const NodeId& u = unknowns.front();
    Binder binder = Var{u};
    for (const auto& m : matches_)
      if (m.rule->id.name == "temporal.when" && m.trigger == u) binder = ev_of(m);
    if (std::holds_alternative<Var>(binder) && std::get<Var>(binder).name == u) {
      if (auto mod = find_mod_owner(u)) binder = Var{*mod};
    }
    if (wrapper && wrapper->rule->id.name == "numerical.count") binder = Var{wrapper->anchor};
    if (const auto* v = std::get_if<Var>(&binder)) {
      auto vs = vars_in(main);
      if (std::find(vs.begin(), vs.end(), *v) == vs.end())
        throw UnsupportedConstruct(u, "amr-unknown",
                                   "projected variable '" + v->name +
                                       "' does not occur in any predicate");
    }
    applied_.push_back({rule("base.projection")->id, u});

    auto target = abstraction({binder}, main);
    if (!wrapper) {
      result.expr = std::move(target);
    } else {
      const auto& name = wrapper->rule->id.name;
      auto extreme = [&](bool max) { return max ? lambda::Extreme::Max : lambda::Extreme::Min; };
      if (name == "numerical.count") {
        result.expr = lambda::Count{std::move(target)};
      } else if (name == "numerical.first" || name == "numerical.last") {
        result.expr = lambda::Extremum{extreme(name == "numerical.last"), std::move(target), 0, 1};
      } else if (name == "numerical.most" || name == "numerical.least") {
        result.expr = lambda::ArgExtremum{extreme(name == "numerical.most"), std::move(target),
                                          abstraction({binder, Var{wrapper->anchor}}, key), 0, 1};
      } else {
        std::int64_t offset = 0;
        if (name == "temporal.ordinal")
          offset = opts_.ordinal_offset_mode == OrdinalOffsetMode::ZeroBased
                       ? wrapper->value - 1
                       : wrapper->value + 1;
        bool max = name == "temporal.before" || name == "temporal.ordinal.last";
        result.expr = lambda::ArgExtremum{extreme(max), std::move(target),
                                          abstraction({binder, ev_of(*wrapper)}, key), offset, 1};
      }
    }

    auto violations = lambda::validate(result.expr);
    if (!violations.empty())
      throw UnsupportedConstruct(g_.root(), concept_of(g_.root()),
                                 "construct combination yields an invalid expression (" +
                                     violations.front().path + ": " +
                                     violations.front().message + ")");
    result.applied = std::move(applied_);
    return result;
  }

  IntervalVar ev_of(const Match& m) const { return ivar(m.anchor); }

  // X for (X / concept :mod (u / amr-unknown)), the "which X" pattern.
  std::optional<NodeId> find_mod_owner(const NodeId& u) const {
    for (const auto& ve : view(u))
      if (ve.role == "mod-of" && ve.node) return ve.node;
    return std::nullopt;
  }

  const AmrGraph& g_;
  const TranslateOptions& opts_;
  std::set<std::string> vars_;
  std::set<std::size_t> consumed_edges_;
  std::set<NodeId> consumed_nodes_;
  std::set<NodeId> visited_;
  std::set<std::string> defined_;
  std::vector<Match> matches_;
  std::vector<AppliedRule> applied_;
};

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Base: return "BASE";
    case Family::Numerical: return "NUMERICAL";
    case Family::Temporal: return "TEMPORAL";
  }
  return "BASE";
}

const std::vector<RuleEntry>& rule_inventory() {
  static const std::vector<RuleEntry> kRules = {
      {{Family::Temporal, "temporal.when"}, "(v/frame … :time(a/amr-unknown))"},
      {{Family::Temporal, "temporal.before"}, "(v/frame … :time(b/before :op1(n/frame)))"},
      {{Family::Temporal, "temporal.after"}, "(v/frame … :time(a/after :op1(n/frame)))"},
      {{Family::Temporal, "temporal.overlap"}, "(v/frame … :time(n/frame))"},
      {{Family::Temporal, "temporal.ordinal"},
       "(v/frame … :ord(o/ordinal-entity :value x)), x >= 1"},
      {{Family::Temporal, "temporal.ordinal.last"},
       "(v/frame … :ord(o/ordinal-entity :value -1))"},
      {{Family::Temporal, "temporal.now"}, "(v/frame … :time(n/now))"},
      {{Family::Temporal, "temporal.date"},
       "(v/frame … :time(d/date-entity :month mm :day dd :year yyyy))"},
      {{Family::Temporal, "temporal.teenager"},
       "(v/frame … :time(t/teenager :domain(n/frame)))"},
      {{Family::Numerical, "numerical.count"},
       "(v/frame :arg0(v0/frame0 :quant(a/amr-unknown)) …)"},
      {{Family::Numerical, "numerical.first"}, "(v/frame :arg0(a/amr-unknown) … :mod(f/first))"},
      {{Family::Numerical, "numerical.last"}, "(v/frame :arg0(a/amr-unknown) … :mod(f/last))"},
      {{Family::Numerical, "numerical.most"},
       "(vn/frame :arg1-of(h2/have-quant-91 :arg3(l/most)))"},
      {{Family::Numerical, "numerical.least"},
       "(vn/frame :arg1-of(h2/have-quant-91 :arg3(l/least)))"},
      {{Family::Numerical, "numerical.more"},
       "(vn/frame :arg1-of(h2/have-degree-91 :arg3(m/more) :arg4(vm/frame)))"},
      {{Family::Numerical, "numerical.less"},
       "(vn/frame :arg1-of(h2/have-degree-91 :arg3(m/less) :arg4(vm/frame)))"},
      {{Family::Base, "base.frame"}, "(v/frame :arg0(v0/frame0) … :argn(vn/framen))"},
      {{Family::Base, "base.projection"}, "(v/frame :arg1(a/amr-unknown) …)"},
      {{Family::Base, "base.boolean"}, "graph without amr-unknown"},
  };
  return kRules;
}

std::vector<RuleId> TranslateResult::rule_ids() const {
  std::vector<RuleId> out;
  for (const auto& a : applied) out.push_back(a.rule);
  return out;
}

TranslateResult translate(const amr::AmrGraph& g, const TranslateOptions& opts) {
  return Translator(g, opts).run();
}

std::string trace_jsonl(const TranslateResult& r) {
  std::string out;
  for (const auto& a : r.applied) {
    nlohmann::json j = {
        {"family", to_string(a.rule.family)}, {"rule", a.rule.name}, {"node", a.node}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace kbqa::translate
