#include "kbqa/grounder.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "kbqa/detail/algebra.hpp"
#include "kbqa/error.hpp"

namespace kbqa::ground {

using lambda::Var;
using lambda::detail::Usage;

namespace {

std::string fold(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

// Closest keys within a length-relative edit budget, best first, at most 5.
std::vector<std::string> nearest(const std::string& query,
                                 const std::vector<std::pair<std::string, std::string>>& keys) {
  std::size_t budget = std::max<std::size_t>(2, query.size() / 3);
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& [key, shown] : keys) {
    auto d = edit_distance(query, key);
    if (d <= budget) scored.emplace_back(d, shown);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (const auto& [d, s] : scored) {
    if (out.size() == 5) break;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

EntityLink entity_from_json(const nlohmann::json& j, const kb::KbProfile& kb) {
  if (j.is_string()) return {kb.expand(j.get<std::string>()), Qualifiers::StartEnd};
  EntityLink e{kb.expand(j.at("iri").get<std::string>()), Qualifiers::StartEnd};
  if (j.contains("qualifiers"))
    e.qualifiers = qualifiers_from_string(j.at("qualifiers").get<std::string>());
  return e;
}

nlohmann::json entity_to_json(const EntityLink& e) {
  return {{"iri", e.iri}, {"qualifiers", to_string(e.qualifiers)}};
}

template <class F>
auto json_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed ") + what + ": " + ex.what());
  }
}

}  // namespace

std::string to_string(Qualifiers q) {
  switch (q) {
    case Qualifiers::StartEnd: return "start_end";
    case Qualifiers::PointInTime: return "point_in_time";
    case Qualifiers::None: return "none";
  }
  return "none";
}

Qualifiers qualifiers_from_string(const std::string& s) {
  if (s == "start_end") return Qualifiers::StartEnd;
  if (s == "point_in_time") return Qualifiers::PointInTime;
  if (s == "none") return Qualifiers::None;
  throw FormatError("unknown qualifiers '" + s + "'");
}

nlohmann::json to_json(const PropertyBinding& b) {
  nlohmann::json j = {{"pid", b.pid},
                      {"reified", b.reified},
                      {"qualifiers", to_string(b.qualifiers)},
                      {"inverse", b.inverse}};
  if (!b.roles.empty()) j["roles"] = b.roles;
  return j;
}

PropertyBinding binding_from_json(const nlohmann::json& j) {
  return json_guard("property binding", [&] {
    PropertyBinding b;
    b.pid = j.at("pid").get<std::string>();
    if (b.pid.empty()) throw FormatError("property binding with empty pid");
    b.reified = j.value("reified", false);
    b.qualifiers = qualifiers_from_string(j.value("qualifiers", std::string("none")));
    b.inverse = j.value("inverse", false);
    if (j.contains("roles")) b.roles = j.at("roles").get<std::vector<std::string>>();
    if (b.roles.size() > 2) throw FormatError("binding for '" + b.pid + "' names more than two roles");
    return b;
  });
}

std::string relation_key(const std::string& frame, const std::vector<std::string>& roles) {
  std::string out = frame + ":";
  for (std::size_t i = 0; i < roles.size(); ++i) out += (i ? "," : "") + roles[i];
  return out;
}

// ---- Lexicon ----

std::string Lexicon::key(const std::string& s) const { return fold_ ? fold(s) : s; }

Lexicon Lexicon::from_json(const nlohmann::json& j, const kb::KbProfile& kb) {
  return json_guard("lexicon", [&] {
    Lexicon lex;
    lex.fold_ = j.value("case_folding", true);
    auto add = [&](const std::string& surface, const EntityLink& link) {
      auto k = lex.key(surface);
      if (k.empty()) throw InvalidValue("empty surface form in lexicon");
      auto [it, fresh] = lex.entities_.emplace(k, link);
      if (!fresh)
        throw InvalidValue("surface form '" + surface + "' is not unique after case folding");
      lex.display_.emplace(k, surface);
    };
    if (j.contains("entities")) {
      for (const auto& [surface, entry] : j.at("entities").items()) {
        auto link = entity_from_json(entry, kb);
        add(surface, link);
        if (entry.is_object() && entry.contains("aliases"))
          for (const auto& alias : entry.at("aliases")) add(alias.get<std::string>(), link);
      }
    }
    if (j.contains("relations"))
      for (const auto& [k, entry] : j.at("relations").items())
        lex.relations_.emplace(k, binding_from_json(entry));
    return lex;
  });
}

Lexicon Lexicon::load(const std::filesystem::path& path, const kb::KbProfile& kb) {
  std::ifstream in(path);
  if (!in) throw InvalidValue("cannot read lexicon '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError("lexicon '" + path.string() + "' is not valid JSON: " + ex.what());
  }
  return from_json(j, kb);
}

const EntityLink* Lexicon::entity(const std::string& surface) const {
  auto it = entities_.find(key(surface));
  return it == entities_.end() ? nullptr : &it->second;
}

const PropertyBinding* Lexicon::relation(const std::string& frame,
                                         const std::vector<std::string>& roles) const {
  for (const auto& k : {relation_key(frame, roles), frame}) {
    auto it = relations_.find(k);
    if (it != relations_.end()) return &it->second;
  }
  return nullptr;
}

std::vector<std::string> Lexicon::entity_candidates(const std::string& surface) const {
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& [k, shown] : display_) keys.emplace_back(k, shown);
  return nearest(key(surface), keys);
}

std::vector<std::string> Lexicon::relation_candidates(const std::string& frame) const {
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& [k, b] : relations_) keys.emplace_back(k.substr(0, k.find(':')), k);
  return nearest(frame, keys);
}

// ---- gold ----

GoldGrounding GoldGrounding::from_json(const nlohmann::json& j, const kb::KbProfile& kb) {
  return json_guard("gold grounding", [&] {
    GoldGrounding g;
    if (j.contains("entities"))
      for (const auto& [surface, entry] : j.at("entities").items())
        g.entities.emplace(surface, entity_from_json(entry, kb));
    if (j.contains("relations"))
      for (const auto& [k, entry] : j.at("relations").items())
        g.relations.emplace(k, binding_from_json(entry));
    return g;
  });
}

nlohmann::json GoldGrounding::to_json() const {
  nlohmann::json ents = nlohmann::json::object();
  for (const auto& [s, e] : entities) ents[s] = entity_to_json(e);
  nlohmann::json rels = nlohmann::json::object();
  for (const auto& [k, b] : relations) rels[k] = ground::to_json(b);
  return {{"entities", ents}, {"relations", rels}};
}

Linker lexicon_linker(const Lexicon& lex) {
  return {[&lex](const std::string& surface) {
            if (const auto* e = lex.entity(surface)) return *e;
            throw UnlinkedEntity(surface, lex.entity_candidates(surface));
          },
          [&lex](const std::string& frame, const std::vector<std::string>& roles) {
            if (const auto* b = lex.relation(frame, roles)) return *b;
            throw UnlinkedRelation(frame, lex.relation_candidates(frame));
          }};
}

Linker gold_linker(const GoldGrounding& gold) {
  return {[&gold](const std::string& surface) {
            auto it = gold.entities.find(surface);
            if (it == gold.entities.end()) throw MissingGold(surface);
            return it->second;
          },
          [&gold](const std::string& frame, const std::vector<std::string>& roles) {
            for (const auto& k : {relation_key(frame, roles), frame}) {
              auto it = gold.relations.find(k);
              if (it != gold.relations.end()) return it->second;
            }
            throw MissingGold(frame);
          }};
}

// ---- grounded algebra traits ----

namespace {

using lambda::detail::PredicateTraits;

nlohmann::json node_to_json(const Node& n) {
  if (const auto* v = std::get_if<Var>(&n)) return {{"var", v->name}};
  return {{"iri", std::get<Iri>(n).value}};
}

Node node_from_json(const nlohmann::json& j) {
  if (j.contains("var")) return Var{j.at("var").get<std::string>()};
  if (j.contains("iri")) return Iri{j.at("iri").get<std::string>()};
  throw FormatError("node needs 'var' or 'iri'");
}

std::string node_text(const Node& n) {
  if (const auto* v = std::get_if<Var>(&n)) return v->name;
  return "<" + std::get<Iri>(n).value + ">";
}

void use(Usage& u, const Node& n) {
  if (const auto* v = std::get_if<Var>(&n)) u.vars.push_back(v->name);
}

std::string binding_text(const PropertyBinding& b) {
  return b.pid + (b.reified ? "[reified]" : "");
}

// Shared predicate kinds go through the KB-agnostic traits.
template <class T>
constexpr bool kShared =
    std::is_same_v<T, lambda::NowPred> || std::is_same_v<T, lambda::DatePred> ||
    std::is_same_v<T, lambda::OverlapPred> || std::is_same_v<T, lambda::BeforePred> ||
    std::is_same_v<T, lambda::AfterPred> || std::is_same_v<T, lambda::CmpPred> ||
    std::is_same_v<T, lambda::CoordinatePred> || std::is_same_v<T, lambda::SouthPred>;

struct KbTraits {
  static void describe(const KbPredicate& p, Usage& u) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (kShared<T>) {
            PredicateTraits::describe(lambda::Predicate{x}, u);
          } else if constexpr (std::is_same_v<T, GroundedPred>) {
            use(u, x.subject);
            use(u, x.object);
            if (x.statement) u.vars.push_back(x.statement->name);
          } else if constexpr (std::is_same_v<T, EntityInterval>) {
            u.intervals_defined.push_back(x.ivar.name);
            use(u, x.subject);
          } else if constexpr (std::is_same_v<T, StatementInterval>) {
            u.intervals_defined.push_back(x.ivar.name);
            u.vars.push_back(x.statement.name);
          } else if constexpr (std::is_same_v<T, ValueInterval>) {
            u.intervals_defined.push_back(x.ivar.name);
            u.vars.push_back(x.value.name);
          } else {
            u.intervals_defined.push_back(x.ivar.name);
            use(u, x.person);
            u.vars.push_back(x.birth.name);
          }
        },
        p);
  }

  static void check(const KbPredicate& p, const std::string& path,
                    std::vector<lambda::Violation>& out) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (kShared<T>) {
            PredicateTraits::check(lambda::Predicate{x}, path, out);
          } else if constexpr (std::is_same_v<T, GroundedPred>) {
            if (x.property.pid.empty()) out.push_back({path, "grounded predicate without pid"});
            if (x.statement && !x.property.reified)
              out.push_back({path, "statement variable on a non-reified binding"});
          } else if constexpr (std::is_same_v<T, StatementInterval>) {
            if (x.property.qualifiers == Qualifiers::None)
              out.push_back({path, "statement interval without temporal qualifiers"});
          } else if constexpr (std::is_same_v<T, EntityInterval>) {
            if (x.qualifiers == Qualifiers::None)
              out.push_back({path, "entity interval without temporal qualifiers"});
          }
        },
        p);
  }

  static std::string pretty(const KbPredicate& p) {
    return std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (kShared<T>) {
            return PredicateTraits::pretty(lambda::Predicate{x});
          } else if constexpr (std::is_same_v<T, GroundedPred>) {
            return binding_text(x.property) + "(" +
                   (x.statement ? x.statement->name : std::string("_")) + ", " +
                   node_text(x.subject) + ", " + node_text(x.object) + ")";
          } else if constexpr (std::is_same_v<T, EntityInterval>) {
            return "interval(" + x.ivar.name + ", " + node_text(x.subject) + ")";
          } else if constexpr (std::is_same_v<T, StatementInterval>) {
            return "interval(" + x.ivar.name + ", " + x.statement.name + ")";
          } else if constexpr (std::is_same_v<T, ValueInterval>) {
            return "interval(" + x.ivar.name + ", " + x.value.name + ")";
          } else {
            return "teenager(" + x.ivar.name + ", " + node_text(x.person) + ", " +
                   x.birth.name + ")";
          }
        },
        p);
  }

  static nlohmann::json to_json(const KbPredicate& p) {
    return std::visit(
        [](const auto& x) -> nlohmann::json {
          using T = std::decay_t<decltype(x)>;
          if constexpr (kShared<T>) {
            return PredicateTraits::to_json(lambda::Predicate{x});
          } else if constexpr (std::is_same_v<T, GroundedPred>) {
            nlohmann::json j = {{"type", "GroundedPred"},
                                {"property", ground::to_json(x.property)},
                                {"subject", node_to_json(x.subject)},
                                {"object", node_to_json(x.object)}};
            if (x.statement) j["statement"] = x.statement->name;
            return j;
          } else if constexpr (std::is_same_v<T, EntityInterval>) {
            return {{"type", "EntityInterval"},
                    {"ivar", x.ivar.name},
                    {"subject", node_to_json(x.subject)},
                    {"qualifiers", to_string(x.qualifiers)}};
          } else if constexpr (std::is_same_v<T, StatementInterval>) {
            return {{"type", "StatementInterval"},
                    {"ivar", x.ivar.name},
                    {"statement", x.statement.name},
                    {"property", ground::to_json(x.property)}};
          } else if constexpr (std::is_same_v<T, ValueInterval>) {
            return {{"type", "ValueInterval"}, {"ivar", x.ivar.name}, {"value", x.value.name}};
          } else {
            return {{"type", "TeenagerInterval"},
                    {"ivar", x.ivar.name},
                    {"person", node_to_json(x.person)},
                    {"birth", x.birth.name}};
          }
        },
        p);
  }

  static KbPredicate from_json(const nlohmann::json& j) {
    auto type = j.at("type").get<std::string>();
    auto ivar = [&] { return lambda::IntervalVar{j.at("ivar").get<std::string>()}; };
    if (type == "GroundedPred") {
      GroundedPred g{binding_from_json(j.at("property")), node_from_json(j.at("subject")),
                     node_from_json(j.at("object")), std::nullopt};
      if (j.contains("statement")) g.statement = Var{j.at("statement").get<std::string>()};
      return g;
    }
    if (type == "EntityInterval")
      return EntityInterval{ivar(), node_from_json(j.at("subject")),
                            qualifiers_from_string(j.at("qualifiers").get<std::string>())};
    if (type == "StatementInterval")
      return StatementInterval{ivar(), Var{j.at("statement").get<std::string>()},
                               binding_from_json(j.at("property"))};
    if (type == "ValueInterval") return ValueInterval{ivar(), Var{j.at("value").get<std::string>()}};
    if (type == "TeenagerInterval")
      return TeenagerInterval{ivar(), node_from_json(j.at("person")),
                              Var{j.at("birth").get<std::string>()}};
    if (type == "FramePred" || type == "IntervalPred" || type == "TeenagerPred")
      throw FormatError("'" + type + "' is not a grounded predicate");
    return std::visit(
        [](auto&& x) -> KbPredicate {
          using T = std::decay_t<decltype(x)>;
          if constexpr (kShared<T>) {
            return x;
          } else {
            throw FormatError("unexpected predicate");
          }
        },
        PredicateTraits::from_json(j));
  }
};

template <class P, class F>
void for_each_pred(const lambda::BasicTerm<P>& t, F&& f) {
  for (const auto& c : t.children) {
    if (const auto* p = std::get_if<P>(&c)) {
      f(*p);
    } else {
      for_each_pred(*std::get<Box<lambda::BasicTerm<P>>>(c), f);
    }
  }
}

template <class P, class F>
void for_each_pred(const lambda::BasicExpr<P>& e, F&& f) {
  if (const auto* b = std::get_if<lambda::BasicBoolean<P>>(&e)) {
    for_each_pred(b->body, f);
    return;
  }
  for (const auto* a : lambda::detail::abstractions(e)) for_each_pred(a->body, f);
}

}  // namespace

std::vector<lambda::Violation> validate(const KbLambdaExpr& e) {
  auto out = lambda::detail::validate<KbPredicate, KbTraits>(e);
  std::set<std::string> statements;
  for_each_pred(e, [&](const KbPredicate& p) {
    if (const auto* g = std::get_if<GroundedPred>(&p))
      if (g->statement && g->property.reified) statements.insert(g->statement->name);
  });
  for_each_pred(e, [&](const KbPredicate& p) {
    if (const auto* s = std::get_if<StatementInterval>(&p))
      if (!statements.count(s->statement.name))
        out.push_back({"expr", "statement variable '" + s->statement.name +
                                   "' has no reified pattern"});
  });
  return out;
}

std::string pretty(const KbLambdaExpr& e) {
  return lambda::detail::pretty<KbPredicate, KbTraits>(e);
}

std::string pretty(const KbPredicate& p) { return KbTraits::pretty(p); }

nlohmann::json to_json(const KbLambdaExpr& e) {
  return lambda::detail::to_json<KbPredicate, KbTraits>(e);
}

KbLambdaExpr kb_lambda_from_json(const nlohmann::json& j) {
  return lambda::detail::from_json<KbPredicate, KbTraits>(j);
}

// ---- grounding ----

namespace {

class Grounder {
 public:
  Grounder(const Linker& link, const kb::KbProfile& kb) : link_(link), kb_(kb) {}

  KbLambdaExpr run(const lambda::LambdaExpr& e) {
    survey(e);
    return std::visit(
        [&](const auto& x) -> KbLambdaExpr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, lambda::Abstraction>) {
            return abstraction(x);
          } else if constexpr (std::is_same_v<T, lambda::Count>) {
            return KbCount{abstraction(x.inner)};
          } else if constexpr (std::is_same_v<T, lambda::Extremum>) {
            return KbExtremum{x.kind, abstraction(x.inner), x.offset, x.limit};
          } else if constexpr (std::is_same_v<T, lambda::ArgExtremum>) {
            auto target = abstraction(x.target);
            auto key = abstraction(x.key);
            return KbArgExtremum{x.kind, std::move(target), std::move(key), x.offset, x.limit};
          } else {
            KbBoolean b;
            scope_exists_.clear();
            b.body = term(x.body);
            b.exists = merge(x.exists);
            return b;
          }
        },
        e);
  }

 private:
  struct Frame {
    PropertyBinding binding;
    Node subject;
    Node object;
    std::optional<Var> statement;
  };

  // Records every name in use, every frame by event variable and which event
  // variables are interval sources, across all abstractions.
  void survey(const lambda::LambdaExpr& e) {
    if (const auto* b = std::get_if<lambda::BooleanQuery>(&e)) {
      for (const auto& v : b->exists) names_.insert(v.name);
    } else {
      for (const auto* a : lambda::detail::abstractions(e)) {
        for (const auto& b : a->bound) names_.insert(lambda::binder_name(b));
        for (const auto& v : a->exists) names_.insert(v.name);
      }
    }
    for_each_pred(e, [&](const lambda::Predicate& p) {
      Usage u;
      lambda::detail::PredicateTraits::describe(p, u);
      names_.insert(u.vars.begin(), u.vars.end());
      names_.insert(u.intervals_defined.begin(), u.intervals_defined.end());
      for (const auto& i : u.intervals_defined) {
        names_.insert(i + "Start");
        names_.insert(i + "End");
      }
      if (const auto* f = std::get_if<lambda::FramePred>(&p)) {
        if (const auto* v = std::get_if<Var>(&f->args.front())) frames_.emplace(v->name, *f);
      } else if (const auto* i = std::get_if<lambda::IntervalPred>(&p)) {
        if (const auto* v = std::get_if<Var>(&i->source)) interval_sources_.insert(v->name);
      }
    });
  }

  Var fresh(const std::string& base) {
    std::string name = base;
    for (int i = 1; names_.count(name); ++i) name = base + std::to_string(i);
    names_.insert(name);
    scope_exists_.push_back(Var{name});
    return Var{name};
  }

  std::vector<Var> merge(const std::vector<Var>& exists) {
    auto out = exists;
    for (const auto& v : scope_exists_)
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
  }

  KbAbstraction abstraction(const lambda::Abstraction& a) {
    scope_exists_.clear();
    KbAbstraction out;
    out.bound = a.bound;
    out.body = term(a.body);
    out.exists = merge(a.exists);
    return out;
  }

  KbTerm term(const lambda::Term& t) {
    KbTerm out;
    out.connective = t.connective;
    for (const auto& c : t.children) {
      if (const auto* p = std::get_if<lambda::Predicate>(&c)) {
        out.children.emplace_back(predicate(*p));
      } else {
        out.children.emplace_back(Box<KbTerm>(term(*std::get<Box<lambda::Term>>(c))));
      }
    }
    return out;
  }

  Iri entity_iri(const std::string& surface) { return Iri{entity(surface).iri}; }

  const EntityLink& entity(const std::string& surface) {
    auto it = entities_.find(surface);
    if (it == entities_.end()) it = entities_.emplace(surface, link_.entity(surface)).first;
    return it->second;
  }

  Node node(const lambda::Arg& a) {
    if (const auto* v = std::get_if<Var>(&a)) return *v;
    return entity_iri(std::get<lambda::Const>(a).value);
  }

  const Frame& frame(const std::string& event) {
    auto done = resolved_.find(event);
    if (done != resolved_.end()) return done->second;
    const auto& f = frames_.at(event);
    std::vector<std::string> roles;
    std::vector<const lambda::Arg*> args;
    for (std::size_t i = 1; i < f.args.size(); ++i) {
      roles.push_back(i < f.roles.size() ? f.roles[i] : "arg" + std::to_string(i - 1));
      args.push_back(&f.args[i]);
    }
    auto binding = link_.relation(f.name, roles);
    std::vector<const lambda::Arg*> picked;
    if (!binding.roles.empty()) {
      for (const auto& r : binding.roles) {
        auto it = std::find(roles.begin(), roles.end(), r);
        if (it == roles.end())
          throw InvalidValue("binding for '" + f.name + "' names role '" + r +
                             "' that the frame lacks");
        picked.push_back(args[it - roles.begin()]);
      }
    } else if (args.size() <= 2) {
      picked = args;
    } else {
      throw InvalidValue("frame '" + f.name + "' has " + std::to_string(args.size()) +
                         " arguments; its binding must name the subject and object roles");
    }
    if (picked.empty())
      throw UnlinkedRelation(f.name, {});
    bool needs_statement = interval_sources_.count(event) && binding.reified;
    if (needs_statement) {
      if (kb_.reification != kb::Reification::StatementNodes)
        throw ProfileMismatch("binding '" + binding.pid + "' is reified but the " +
                              kb::to_string(kb_.name) + " profile has no statement nodes");
      if (binding.qualifiers == Qualifiers::None)
        throw InvalidValue("binding '" + binding.pid +
                           "' is reified but declares no temporal qualifiers");
    }
    Frame out{binding, node(*picked[0]), Var{event}, std::nullopt};
    if (picked.size() > 1) {
      out.object = node(*picked[1]);
    } else if (needs_statement) {
      out.object = fresh_global(event + "Value");
    }
    if (needs_statement) out.statement = Var{event};
    if (binding.inverse) std::swap(out.subject, out.object);
    return resolved_.emplace(event, std::move(out)).first->second;
  }

  // A fresh variable shared by every abstraction that mentions the frame.
  Var fresh_global(const std::string& base) {
    std::string name = base;
    for (int i = 1; names_.count(name); ++i) name = base + std::to_string(i);
    names_.insert(name);
    global_fresh_.insert(name);
    return Var{name};
  }

  void note(const Node& n) {
    if (const auto* v = std::get_if<Var>(&n))
      if (global_fresh_.count(v->name) &&
          std::find(scope_exists_.begin(), scope_exists_.end(), *v) == scope_exists_.end())
        scope_exists_.push_back(*v);
  }

  EntityInterval entity_interval(const lambda::IntervalVar& ivar, Node subject,
                                 Qualifiers q) {
    if (kb_.start_time.empty())
      throw ProfileMismatch("the " + kb::to_string(kb_.name) +
                            " profile has no entity-level temporal properties");
    return EntityInterval{ivar, std::move(subject), q};
  }

  KbPredicate predicate(const lambda::Predicate& p) {
    return std::visit(
        [&](const auto& x) -> KbPredicate {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, lambda::FramePred>) {
            const auto* ev = std::get_if<Var>(&x.args.front());
            if (!ev) throw InvalidValue("frame '" + x.name + "' has a constant event argument");
            const auto& f = frame(ev->name);
            note(f.subject);
            note(f.object);
            return GroundedPred{f.binding, f.subject, f.object, f.statement};
          } else if constexpr (std::is_same_v<T, lambda::IntervalPred>) {
            if (const auto* c = std::get_if<lambda::Const>(&x.source)) {
              const auto& link = entity(c->value);
              return entity_interval(x.ivar, Iri{link.iri}, link.qualifiers);
            }
            const auto& v = std::get<Var>(x.source);
            if (!frames_.count(v.name))
              return entity_interval(x.ivar, v, Qualifiers::StartEnd);
            const auto& f = frame(v.name);
            if (f.statement) return StatementInterval{x.ivar, *f.statement, f.binding};
            const auto& value = f.binding.inverse ? f.subject : f.object;
            if (const auto* iri = std::get_if<Iri>(&value)) {
              auto it = std::find_if(entities_.begin(), entities_.end(),
                                     [&](const auto& e) { return e.second.iri == iri->value; });
              auto q = it == entities_.end() ? Qualifiers::StartEnd : it->second.qualifiers;
              return entity_interval(x.ivar, *iri, q);
            }
            note(value);
            return ValueInterval{x.ivar, std::get<Var>(value)};
          } else if constexpr (std::is_same_v<T, lambda::TeenagerPred>) {
            if (kb_.birthdate.empty())
              throw ProfileMismatch("the profile has no birth date property");
            return TeenagerInterval{x.ivar, node(x.person), fresh(x.ivar.name + "Birth")};
          } else {
            return x;
          }
        },
        p);
  }

  const Linker& link_;
  const kb::KbProfile& kb_;
  std::set<std::string> names_;
  std::map<std::string, lambda::FramePred> frames_;
  std::set<std::string> interval_sources_;
  std::map<std::string, Frame> resolved_;
  std::map<std::string, EntityLink> entities_;
  std::set<std::string> global_fresh_;
  std::vector<Var> scope_exists_;
};

}  // namespace

KbLambdaExpr ground_with(const lambda::LambdaExpr& e, const Linker& link,
                         const kb::KbProfile& kb) {
  auto out = Grounder(link, kb).run(e);
  auto violations = validate(out);
  if (!violations.empty()) {
    std::vector<std::string> msgs;
    for (const auto& v : violations) msgs.push_back(v.path + ": " + v.message);
    throw InvalidValue("grounding produced an invalid expression", msgs);
  }
  return out;
}

KbLambdaExpr ground(const lambda::LambdaExpr& e, const Lexicon& lex, const kb::KbProfile& kb) {
  return ground_with(e, lexicon_linker(lex), kb);
}

KbLambdaExpr ground_with_gold(const lambda::LambdaExpr& e, const GoldGrounding& gold,
                              const kb::KbProfile& kb) {
  return ground_with(e, gold_linker(gold), kb);
}

}  // namespace kbqa::ground
