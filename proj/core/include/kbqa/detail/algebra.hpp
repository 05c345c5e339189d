#pragma once

// Generic algorithms over the lambda algebra. A Traits type supplies the
// predicate-specific parts:
//
//   static void describe(const P&, Usage&);
//   static std::string pretty(const P&);
//   static nlohmann::json to_json(const P&);
//   static P from_json(const nlohmann::json&);
//   static void check(const P&, const std::string& path, std::vector<Violation>&);

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kbqa/error.hpp"
#include "kbqa/lambda.hpp"

namespace kbqa::lambda::detail {

struct Usage {
  std::vector<std::string> vars;
  std::vector<std::string> intervals_defined;
  std::vector<std::string> intervals_used;
};

// Traits of the KB-agnostic predicates, reused by the grounded algebra for the
// predicate kinds the two share.
struct PredicateTraits {
  static void describe(const Predicate& p, Usage& u);
  static void check(const Predicate& p, const std::string& path, std::vector<Violation>& out);
  static std::string pretty(const Predicate& p);
  static nlohmann::json to_json(const Predicate& p);
  static Predicate from_json(const nlohmann::json& j);

 private:
  struct Impl;
};

inline void use(Usage& u, const Arg& a) {
  if (const auto* v = std::get_if<Var>(&a)) u.vars.push_back(v->name);
}

template <class P, class Traits>
void describe_term(const BasicTerm<P>& t, Usage& u) {
  for (const auto& child : t.children) {
    if (const auto* p = std::get_if<P>(&child)) {
      Traits::describe(*p, u);
    } else {
      describe_term<P, Traits>(*std::get<Box<BasicTerm<P>>>(child), u);
    }
  }
}

template <class P, class Traits>
void check_term(const BasicTerm<P>& t, const std::string& path,
                std::vector<Violation>& out) {
  if (t.children.empty()) out.push_back({path, "empty term"});
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    auto child_path = path + "[" + std::to_string(i) + "]";
    const auto& child = t.children[i];
    if (const auto* p = std::get_if<P>(&child)) {
      Traits::check(*p, child_path, out);
    } else {
      check_term<P, Traits>(*std::get<Box<BasicTerm<P>>>(child), child_path, out);
    }
  }
}

template <class P>
std::vector<const BasicAbstraction<P>*> abstractions(const BasicExpr<P>& e) {
  std::vector<const BasicAbstraction<P>*> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BasicAbstraction<P>>) {
          out.push_back(&x);
        } else if constexpr (std::is_same_v<T, BasicCount<P>> ||
                             std::is_same_v<T, BasicExtremum<P>>) {
          out.push_back(&x.inner);
        } else if constexpr (std::is_same_v<T, BasicArgExtremum<P>>) {
          out.push_back(&x.target);
          out.push_back(&x.key);
        }
      },
      e);
  return out;
}

template <class P, class Traits>
std::set<Var> free_vars(const BasicExpr<P>& e) {
  std::set<Var> out;
  auto collect = [&](const BasicTerm<P>& body, const std::vector<Binder>& bound,
                     const std::vector<Var>& exists) {
    Usage u;
    describe_term<P, Traits>(body, u);
    std::set<std::string> closed;
    for (const auto& b : bound) closed.insert(binder_name(b));
    for (const auto& v : exists) closed.insert(v.name);
    for (const auto& v : u.vars)
      if (!closed.count(v)) out.insert(Var{v});
  };
  if (const auto* b = std::get_if<BasicBoolean<P>>(&e)) {
    collect(b->body, {}, b->exists);
  } else {
    for (const auto* a : abstractions(e)) collect(a->body, a->bound, a->exists);
  }
  return out;
}

template <class P, class Traits>
void check_scope(const BasicTerm<P>& body, const std::vector<Binder>& bound,
                 const std::vector<Var>& exists, const std::string& path,
                 std::vector<Violation>& out, Usage& group) {
  check_term<P, Traits>(body, path + ".body", out);
  Usage u;
  describe_term<P, Traits>(body, u);
  std::set<std::string> bound_vars;
  std::set<std::string> names;
  for (const auto& b : bound) {
    auto name = binder_name(b);
    if (!names.insert(name).second)
      out.push_back({path + ".bound", "variable '" + name + "' bound twice"});
    if (std::holds_alternative<Var>(b)) {
      bound_vars.insert(name);
    } else {
      group.intervals_used.push_back(name);
    }
  }
  std::set<std::string> existential;
  for (const auto& v : exists) {
    existential.insert(v.name);
    if (bound_vars.count(v.name))
      out.push_back({path + ".exists",
                     "variable '" + v.name + "' is both bound and existential"});
  }
  std::set<std::string> reported;
  for (const auto& v : u.vars) {
    if (bound_vars.count(v) || existential.count(v)) continue;
    if (reported.insert(v).second)
      out.push_back({path + ".body", "unbound variable '" + v + "'"});
  }
  group.vars.insert(group.vars.end(), u.vars.begin(), u.vars.end());
  group.vars.insert(group.vars.end(), bound_vars.begin(), bound_vars.end());
  group.vars.insert(group.vars.end(), existential.begin(), existential.end());
  group.intervals_defined.insert(group.intervals_defined.end(),
                                 u.intervals_defined.begin(),
                                 u.intervals_defined.end());
  group.intervals_used.insert(group.intervals_used.end(), u.intervals_used.begin(),
                              u.intervals_used.end());
}

inline void check_intervals(const Usage& group, const std::string& path,
                            std::vector<Violation>& out) {
  std::map<std::string, int> defined;
  for (const auto& i : group.intervals_defined) ++defined[i];
  for (const auto& [name, n] : defined)
    if (n > 1)
      out.push_back({path, "interval variable '" + name + "' defined more than once"});
  std::set<std::string> reported;
  for (const auto& i : group.intervals_used)
    if (!defined.count(i) && reported.insert(i).second)
      out.push_back({path, "interval variable '" + i + "' is never defined"});
  std::set<std::string> vars(group.vars.begin(), group.vars.end());
  std::set<std::string> intervals(group.intervals_defined.begin(),
                                  group.intervals_defined.end());
  intervals.insert(group.intervals_used.begin(), group.intervals_used.end());
  for (const auto& i : intervals) {
    if (vars.count(i))
      out.push_back({path, "interval variable '" + i + "' clashes with a variable"});
    for (const auto& acc : {i + "Start", i + "End"})
      if (vars.count(acc))
        out.push_back({path, "accessor '" + acc + "' clashes with a variable"});
  }
}

inline void check_slice(std::int64_t offset, std::int64_t limit,
                        const std::string& path, std::vector<Violation>& out) {
  if (offset < 0) out.push_back({path + ".offset", "offset must be non-negative"});
  if (limit < 1) out.push_back({path + ".limit", "limit must be positive"});
}

template <class P, class Traits>
std::vector<Violation> validate(const BasicExpr<P>& e) {
  std::vector<Violation> out;
  Usage group;
  auto single_binder = [&](const BasicAbstraction<P>& a, const std::string& path) {
    if (a.bound.size() != 1)
      out.push_back({path + ".bound", "expected exactly one bound variable"});
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BasicAbstraction<P>>) {
          if (x.bound.empty())
            out.push_back({"bound", "abstraction binds no variable"});
          check_scope<P, Traits>(x.body, x.bound, x.exists, "", out, group);
        } else if constexpr (std::is_same_v<T, BasicCount<P>>) {
          single_binder(x.inner, "inner");
          check_scope<P, Traits>(x.inner.body, x.inner.bound, x.inner.exists, "inner",
                                 out, group);
        } else if constexpr (std::is_same_v<T, BasicExtremum<P>>) {
          single_binder(x.inner, "inner");
          check_slice(x.offset, x.limit, "", out);
          check_scope<P, Traits>(x.inner.body, x.inner.bound, x.inner.exists, "inner",
                                 out, group);
        } else if constexpr (std::is_same_v<T, BasicArgExtremum<P>>) {
          single_binder(x.target, "target");
          if (x.key.bound.size() != 2) {
            out.push_back({"key.bound", "key must bind the target variable and one more"});
          } else if (!x.target.bound.empty() && x.key.bound[0] != x.target.bound[0]) {
            out.push_back({"key.bound", "key binds wrong target var"});
          }
          check_slice(x.offset, x.limit, "", out);
          check_scope<P, Traits>(x.target.body, x.target.bound, x.target.exists,
                                 "target", out, group);
          check_scope<P, Traits>(x.key.body, x.key.bound, x.key.exists, "key", out,
                                 group);
        } else {
          check_scope<P, Traits>(x.body, {}, x.exists, "", out, group);
        }
      },
      e);
  check_intervals(group, "expr", out);
  for (auto& v : out)
    if (!v.path.empty() && v.path[0] == '.') v.path.erase(0, 1);
  return out;
}

// ---- pretty printing ----

template <class P, class Traits>
std::string pretty_term(const BasicTerm<P>& t) {
  std::string sep = t.connective == Connective::And ? " ∧ " : " ∨ ";
  std::string out;
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += sep;
    const auto& child = t.children[i];
    if (const auto* p = std::get_if<P>(&child)) {
      out += Traits::pretty(*p);
    } else {
      out += "(" + pretty_term<P, Traits>(*std::get<Box<BasicTerm<P>>>(child)) + ")";
    }
  }
  return out;
}

template <class P, class Traits>
std::string pretty_abstraction(const BasicAbstraction<P>& a) {
  std::string out;
  for (const auto& b : a.bound) out += "λ" + binder_name(b) + ".";
  return out + " " + pretty_term<P, Traits>(a.body);
}

template <class P, class Traits>
std::string pretty(const BasicExpr<P>& e) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BasicAbstraction<P>>) {
          return pretty_abstraction<P, Traits>(x);
        } else if constexpr (std::is_same_v<T, BasicCount<P>>) {
          return "count(" + pretty_abstraction<P, Traits>(x.inner) + ")";
        } else if constexpr (std::is_same_v<T, BasicExtremum<P>>) {
          return std::string(x.kind == Extreme::Min ? "min(" : "max(") +
                 pretty_abstraction<P, Traits>(x.inner) + ", " +
                 std::to_string(x.offset) + ", " + std::to_string(x.limit) + ")";
        } else if constexpr (std::is_same_v<T, BasicArgExtremum<P>>) {
          return std::string(x.kind == Extreme::Min ? "argmin(" : "argmax(") +
                 pretty_abstraction<P, Traits>(x.target) + ", " +
                 pretty_abstraction<P, Traits>(x.key) + ", " +
                 std::to_string(x.offset) + ", " + std::to_string(x.limit) + ")";
        } else {
          return "boolean(" + pretty_term<P, Traits>(x.body) + ")";
        }
      },
      e);
}

// ---- JSON ----

inline nlohmann::json arg_to_json(const Arg& a) {
  if (const auto* v = std::get_if<Var>(&a)) return {{"var", v->name}};
  return {{"const", std::get<Const>(a).value}};
}

inline Arg arg_from_json(const nlohmann::json& j) {
  if (j.contains("var")) return Var{j.at("var").get<std::string>()};
  if (j.contains("const")) return Const{j.at("const").get<std::string>()};
  throw FormatError("argument needs 'var' or 'const'");
}

inline nlohmann::json binder_to_json(const Binder& b) {
  if (const auto* v = std::get_if<Var>(&b)) return {{"var", v->name}};
  return {{"ivar", std::get<IntervalVar>(b).name}};
}

inline Binder binder_from_json(const nlohmann::json& j) {
  if (j.contains("var")) return Var{j.at("var").get<std::string>()};
  if (j.contains("ivar")) return IntervalVar{j.at("ivar").get<std::string>()};
  throw FormatError("binder needs 'var' or 'ivar'");
}

inline nlohmann::json vars_to_json(const std::vector<Var>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : vs) out.push_back(v.name);
  return out;
}

inline std::vector<Var> vars_from_json(const nlohmann::json& j) {
  std::vector<Var> out;
  for (const auto& v : j) out.push_back(Var{v.get<std::string>()});
  return out;
}

template <class P, class Traits>
nlohmann::json term_to_json(const BasicTerm<P>& t) {
  nlohmann::json children = nlohmann::json::array();
  for (const auto& child : t.children) {
    if (const auto* p = std::get_if<P>(&child)) {
      children.push_back(Traits::to_json(*p));
    } else {
      children.push_back(term_to_json<P, Traits>(*std::get<Box<BasicTerm<P>>>(child)));
    }
  }
  return {{"type", "Term"},
          {"connective", t.connective == Connective::And ? "AND" : "OR"},
          {"children", children}};
}

template <class P, class Traits>
BasicTerm<P> term_from_json(const nlohmann::json& j) {
  BasicTerm<P> t;
  auto conn = j.value("connective", std::string("AND"));
  if (conn == "AND") {
    t.connective = Connective::And;
  } else if (conn == "OR") {
    t.connective = Connective::Or;
  } else {
    throw FormatError("unknown connective '" + conn + "'");
  }
  for (const auto& c : j.at("children")) {
    if (c.value("type", std::string()) == "Term") {
      t.children.emplace_back(Box<BasicTerm<P>>(term_from_json<P, Traits>(c)));
    } else {
      t.children.emplace_back(Traits::from_json(c));
    }
  }
  return t;
}

template <class P, class Traits>
nlohmann::json abstraction_to_json(const BasicAbstraction<P>& a) {
  nlohmann::json bound = nlohmann::json::array();
  for (const auto& b : a.bound) bound.push_back(binder_to_json(b));
  return {{"type", "Abstraction"},
          {"bound", bound},
          {"exists", vars_to_json(a.exists)},
          {"body", term_to_json<P, Traits>(a.body)}};
}

template <class P, class Traits>
BasicAbstraction<P> abstraction_from_json(const nlohmann::json& j) {
  BasicAbstraction<P> a;
  for (const auto& b : j.at("bound")) a.bound.push_back(binder_from_json(b));
  if (j.contains("exists")) a.exists = vars_from_json(j.at("exists"));
  a.body = term_from_json<P, Traits>(j.at("body"));
  return a;
}

template <class P, class Traits>
nlohmann::json to_json(const BasicExpr<P>& e) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BasicAbstraction<P>>) {
          return abstraction_to_json<P, Traits>(x);
        } else if constexpr (std::is_same_v<T, BasicCount<P>>) {
          return {{"type", "Count"}, {"inner", abstraction_to_json<P, Traits>(x.inner)}};
        } else if constexpr (std::is_same_v<T, BasicExtremum<P>>) {
          return {{"type", x.kind == Extreme::Min ? "Min" : "Max"},
                  {"inner", abstraction_to_json<P, Traits>(x.inner)},
                  {"offset", x.offset},
                  {"limit", x.limit}};
        } else if constexpr (std::is_same_v<T, BasicArgExtremum<P>>) {
          return {{"type", x.kind == Extreme::Min ? "ArgMin" : "ArgMax"},
                  {"target", abstraction_to_json<P, Traits>(x.target)},
                  {"key", abstraction_to_json<P, Traits>(x.key)},
                  {"offset", x.offset},
                  {"limit", x.limit}};
        } else {
          return {{"type", "BooleanQuery"},
                  {"exists", vars_to_json(x.exists)},
                  {"body", term_to_json<P, Traits>(x.body)}};
        }
      },
      e);
}

template <class P, class Traits>
BasicExpr<P> from_json(const nlohmann::json& j) {
  try {
    auto type = j.at("type").get<std::string>();
    if (type == "Abstraction") return abstraction_from_json<P, Traits>(j);
    if (type == "Count")
      return BasicCount<P>{abstraction_from_json<P, Traits>(j.at("inner"))};
    if (type == "Min" || type == "Max") {
      return BasicExtremum<P>{type == "Min" ? Extreme::Min : Extreme::Max,
                              abstraction_from_json<P, Traits>(j.at("inner")),
                              j.at("offset").get<std::int64_t>(),
                              j.at("limit").get<std::int64_t>()};
    }
    if (type == "ArgMin" || type == "ArgMax") {
      return BasicArgExtremum<P>{type == "ArgMin" ? Extreme::Min : Extreme::Max,
                                 abstraction_from_json<P, Traits>(j.at("target")),
                                 abstraction_from_json<P, Traits>(j.at("key")),
                                 j.at("offset").get<std::int64_t>(),
                                 j.at("limit").get<std::int64_t>()};
    }
    if (type == "BooleanQuery") {
      BasicBoolean<P> b;
      if (j.contains("exists")) b.exists = vars_from_json(j.at("exists"));
      b.body = term_from_json<P, Traits>(j.at("body"));
      return b;
    }
    throw FormatError("unknown expression type '" + type + "'");
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed expression JSON: ") + ex.what());
  }
}

}  // namespace kbqa::lambda::detail
