#pragma once

// Grounding: KB-agnostic lambda expression to KB-specific lambda expression
// by lexicon-based entity and relation linking.

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/kb.hpp"
#include "kbqa/lambda.hpp"

namespace kbqa::ground {

enum class Qualifiers { StartEnd, PointInTime, None };

std::string to_string(Qualifiers q);  // "start_end", "point_in_time", "none"
Qualifiers qualifiers_from_string(const std::string& s);

struct PropertyBinding {
  std::string pid;  // bare property id ("P577", "director")
  bool reified = false;
  Qualifiers qualifiers = Qualifiers::None;
  bool inverse = false;  // swap subject and object
  // Frame roles that supply subject and object, in that order. Empty means
  // the frame's non-event arguments in order.
  std::vector<std::string> roles;
  friend bool operator==(const PropertyBinding&, const PropertyBinding&) = default;
};

struct EntityLink {
  std::string iri;  // absolute
  Qualifiers qualifiers = Qualifiers::StartEnd;  // entity-level interval properties
  friend bool operator==(const EntityLink&, const EntityLink&) = default;
};

nlohmann::json to_json(const PropertyBinding& b);
PropertyBinding binding_from_json(const nlohmann::json& j);

// Relation keys are either a bare frame name ("direct-01") or a frame name
// with its argument signature ("have-org-role-91:arg0,arg2"); the signature
// form is tried first.
std::string relation_key(const std::string& frame, const std::vector<std::string>& roles);

class Lexicon {
 public:
  // Expands prefixed IRIs with the profile; ProfileMismatch for undeclared
  // prefixes, InvalidValue for duplicate surface forms after folding.
  static Lexicon from_json(const nlohmann::json& j, const kb::KbProfile& kb);
  static Lexicon load(const std::filesystem::path& path, const kb::KbProfile& kb);

  const EntityLink* entity(const std::string& surface) const;
  const PropertyBinding* relation(const std::string& frame,
                                  const std::vector<std::string>& roles) const;

  // Known surface forms / relation keys closest to the query, best first.
  std::vector<std::string> entity_candidates(const std::string& surface) const;
  std::vector<std::string> relation_candidates(const std::string& frame) const;

  bool case_folding() const { return fold_; }

 private:
  std::string key(const std::string& s) const;

  bool fold_ = true;
  std::map<std::string, EntityLink> entities_;  // folded surface or alias -> link
  std::map<std::string, std::string> display_;  // folded key -> original surface
  std::map<std::string, PropertyBinding> relations_;
};

// Gold annotations: exact surface -> entity and relation key -> binding maps.
struct GoldGrounding {
  std::map<std::string, EntityLink> entities;
  std::map<std::string, PropertyBinding> relations;

  static GoldGrounding from_json(const nlohmann::json& j, const kb::KbProfile& kb);
  nlohmann::json to_json() const;
};

// Entity and relation resolution, each backed by a lexicon or gold map. The
// functions throw the linking error of their source.
struct Linker {
  std::function<EntityLink(const std::string& surface)> entity;
  std::function<PropertyBinding(const std::string& frame,
                                const std::vector<std::string>& roles)>
      relation;
};

Linker lexicon_linker(const Lexicon& lex);
Linker gold_linker(const GoldGrounding& gold);

// ---- grounded algebra ----

struct Iri {
  std::string value;
  friend auto operator<=>(const Iri&, const Iri&) = default;
};

using Node = std::variant<lambda::Var, Iri>;

// IRI_p(r, s, o): a KB triple, or a statement node r with its value when the
// binding is reified and an interval refers to the statement.
struct GroundedPred {
  PropertyBinding property;
  Node subject;
  Node object;
  std::optional<lambda::Var> statement;
  friend bool operator==(const GroundedPred&, const GroundedPred&) = default;
};

// Interval from the start/end (or point-in-time) properties of an entity.
struct EntityInterval {
  lambda::IntervalVar ivar;
  Node subject;
  Qualifiers qualifiers = Qualifiers::StartEnd;
  friend bool operator==(const EntityInterval&, const EntityInterval&) = default;
};

// Interval from the qualifiers of a reified statement.
struct StatementInterval {
  lambda::IntervalVar ivar;
  lambda::Var statement;
  PropertyBinding property;
  friend bool operator==(const StatementInterval&, const StatementInterval&) = default;
};

// Degenerate interval at a time value.
struct ValueInterval {
  lambda::IntervalVar ivar;
  lambda::Var value;
  friend bool operator==(const ValueInterval&, const ValueInterval&) = default;
};

// [birth + 13 years, birth + 19 years] where birth is the person's birth date.
struct TeenagerInterval {
  lambda::IntervalVar ivar;
  Node person;
  lambda::Var birth;
  friend bool operator==(const TeenagerInterval&, const TeenagerInterval&) = default;
};

using KbPredicate =
    std::variant<GroundedPred, EntityInterval, StatementInterval, ValueInterval,
                 lambda::NowPred, lambda::DatePred, TeenagerInterval, lambda::OverlapPred,
                 lambda::BeforePred, lambda::AfterPred, lambda::CmpPred,
                 lambda::CoordinatePred, lambda::SouthPred>;

using KbTerm = lambda::BasicTerm<KbPredicate>;
using KbAbstraction = lambda::BasicAbstraction<KbPredicate>;
using KbCount = lambda::BasicCount<KbPredicate>;
using KbExtremum = lambda::BasicExtremum<KbPredicate>;
using KbArgExtremum = lambda::BasicArgExtremum<KbPredicate>;
using KbBoolean = lambda::BasicBoolean<KbPredicate>;
using KbLambdaExpr = lambda::BasicExpr<KbPredicate>;

std::vector<lambda::Violation> validate(const KbLambdaExpr& e);
std::string pretty(const KbLambdaExpr& e);
std::string pretty(const KbPredicate& p);
nlohmann::json to_json(const KbLambdaExpr& e);
KbLambdaExpr kb_lambda_from_json(const nlohmann::json& j);

// ---- grounding ----

// Throws UnlinkedEntity / UnlinkedRelation (with candidates) when the lexicon
// has no entry, ProfileMismatch when a binding needs constructs the profile
// lacks.
KbLambdaExpr ground(const lambda::LambdaExpr& e, const Lexicon& lex, const kb::KbProfile& kb);

// Gold maps instead of the lexicon; MissingGold for absent symbols.
KbLambdaExpr ground_with_gold(const lambda::LambdaExpr& e, const GoldGrounding& gold,
                              const kb::KbProfile& kb);

KbLambdaExpr ground_with(const lambda::LambdaExpr& e, const Linker& link,
                         const kb::KbProfile& kb);

}  // namespace kbqa::ground
