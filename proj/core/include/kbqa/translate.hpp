#pragma once

// AMR graph to KB-agnostic lambda expression.

#include <set>
#include <string>
#include <vector>

#include "kbqa/amr.hpp"
#include "kbqa/lambda.hpp"

namespace kbqa::translate {

enum class Family { Base, Numerical, Temporal };

std::string to_string(Family f);  // "BASE", "NUMERICAL", "TEMPORAL"

struct RuleId {
  Family family = Family::Base;
  std::string name;  // "temporal.before", "numerical.count", ...
  friend bool operator==(const RuleId&, const RuleId&) = default;
};

struct RuleEntry {
  RuleId id;
  std::string pattern;
};

// Every rule, in precedence order: temporal rules first, then numerical, then
// base; within a family in table order. The first rule matching an edge wins.
const std::vector<RuleEntry>& rule_inventory();

enum class OrdinalOffsetMode {
  ZeroBased,     // :value x selects OFFSET x-1
  PaperLiteral,  // :value x selects OFFSET x+1, as printed in the rule table
};

struct TranslateOptions {
  OrdinalOffsetMode ordinal_offset_mode = OrdinalOffsetMode::ZeroBased;
  std::set<std::string> before_concepts{"before", "prior", "precede"};
  std::set<std::string> after_concepts{"after"};
  std::set<std::string> teenager_concepts{"teenager"};
};

struct AppliedRule {
  RuleId rule;
  amr::NodeId node;
  friend bool operator==(const AppliedRule&, const AppliedRule&) = default;
};

struct TranslateResult {
  lambda::LambdaExpr expr;
  std::vector<AppliedRule> applied;  // in application order

  std::vector<RuleId> rule_ids() const;
};

// Throws UnsupportedConstruct for constructs outside the rule inventory.
TranslateResult translate(const amr::AmrGraph& g, const TranslateOptions& opts = {});

// One JSON object per line: {"family", "rule", "node"}.
std::string trace_jsonl(const TranslateResult& r);

}  // namespace kbqa::translate
