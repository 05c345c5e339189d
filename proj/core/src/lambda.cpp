#include "kbqa/lambda.hpp"

#include <cstdio>

#include "kbqa/detail/algebra.hpp"

namespace kbqa::lambda {

namespace {

using detail::Usage;

std::string arg_text(const Arg& a) {
  if (const auto* v = std::get_if<Var>(&a)) return v->name;
  return "\"" + std::get<Const>(a).value + "\"";
}

std::string precision_name(DatePrecision p) {
  switch (p) {
    case DatePrecision::Day: return "day";
    case DatePrecision::Month: return "month";
    case DatePrecision::Year: return "year";
  }
  return "day";
}

DatePrecision precision_from(const std::string& s) {
  if (s == "day") return DatePrecision::Day;
  if (s == "month") return DatePrecision::Month;
  if (s == "year") return DatePrecision::Year;
  throw FormatError("unknown date precision '" + s + "'");
}

bool valid_date(const CalendarDate& d) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (d.month < 1 || d.month > 12 || d.day < 1) return false;
  bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
  int max = kDays[d.month - 1] + (d.month == 2 && leap ? 1 : 0);
  return d.day <= max;
}

}  // namespace

namespace detail {

struct PredicateTraits::Impl {
  static void describe(const Predicate& p, Usage& u) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, FramePred>) {
            for (const auto& a : x.args) detail::use(u, a);
          } else if constexpr (std::is_same_v<T, IntervalPred>) {
            u.intervals_defined.push_back(x.ivar.name);
            detail::use(u, x.source);
          } else if constexpr (std::is_same_v<T, NowPred> ||
                               std::is_same_v<T, DatePred>) {
            u.intervals_defined.push_back(x.ivar.name);
          } else if constexpr (std::is_same_v<T, TeenagerPred>) {
            u.intervals_defined.push_back(x.ivar.name);
            detail::use(u, x.person);
          } else if constexpr (std::is_same_v<T, OverlapPred> ||
                               std::is_same_v<T, BeforePred> ||
                               std::is_same_v<T, AfterPred>) {
            u.intervals_used.push_back(x.first.name);
            u.intervals_used.push_back(x.second.name);
          } else if constexpr (std::is_same_v<T, CmpPred>) {
            u.vars.push_back(x.left.name);
            u.vars.push_back(x.right.name);
          } else if constexpr (std::is_same_v<T, CoordinatePred>) {
            u.vars.push_back(x.cvar.name);
            detail::use(u, x.source);
          } else {
            u.vars.push_back(x.first.name);
            u.vars.push_back(x.second.name);
          }
        },
        p);
  }

  static void check(const Predicate& p, const std::string& path,
                    std::vector<Violation>& out) {
    if (const auto* f = std::get_if<FramePred>(&p)) {
      if (f->name.empty()) out.push_back({path, "frame predicate without a name"});
      if (f->args.empty()) out.push_back({path, "frame predicate without arguments"});
      if (!f->roles.empty() && f->roles.size() != f->args.size())
        out.push_back({path, "role labels do not match arguments"});
    } else if (const auto* d = std::get_if<DatePred>(&p)) {
      if (!valid_date(d->date)) out.push_back({path, "invalid calendar date"});
    }
  }

  static std::string pretty(const Predicate& p) {
    return std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, FramePred>) {
            std::string out = x.name + "(";
            for (std::size_t i = 0; i < x.args.size(); ++i)
              out += (i ? ", " : "") + arg_text(x.args[i]);
            return out + ")";
          } else if constexpr (std::is_same_v<T, IntervalPred>) {
            return "interval(" + x.ivar.name + ", " + arg_text(x.source) + ")";
          } else if constexpr (std::is_same_v<T, NowPred>) {
            return "interval(" + x.ivar.name + ", now())";
          } else if constexpr (std::is_same_v<T, DatePred>) {
            return "interval(" + x.ivar.name + ", date(\"" + to_string(x.date) + "\"))";
          } else if constexpr (std::is_same_v<T, TeenagerPred>) {
            return "teenager(" + x.ivar.name + ", " + arg_text(x.person) + ")";
          } else if constexpr (std::is_same_v<T, OverlapPred>) {
            return "overlap(" + x.first.name + ", " + x.second.name + ")";
          } else if constexpr (std::is_same_v<T, BeforePred>) {
            return "before(" + x.first.name + ", " + x.second.name + ")";
          } else if constexpr (std::is_same_v<T, AfterPred>) {
            return "after(" + x.first.name + ", " + x.second.name + ")";
          } else if constexpr (std::is_same_v<T, CmpPred>) {
            return "cmp(" + x.left.name + ", " + x.right.name + ", " +
                   (x.op == CmpOp::Greater ? ">" : "<") + ")";
          } else if constexpr (std::is_same_v<T, CoordinatePred>) {
            return "coordinate(" + x.cvar.name + ", " + arg_text(x.source) + ")";
          } else {
            return "south(" + x.first.name + ", " + x.second.name + ")";
          }
        },
        p);
  }

  static nlohmann::json to_json(const Predicate& p) {
    return std::visit(
        [](const auto& x) -> nlohmann::json {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, FramePred>) {
            nlohmann::json args = nlohmann::json::array();
            for (const auto& a : x.args) args.push_back(detail::arg_to_json(a));
            nlohmann::json j = {{"type", "FramePred"}, {"name", x.name}, {"args", args}};
            if (!x.roles.empty()) j["roles"] = x.roles;
            return j;
          } else if constexpr (std::is_same_v<T, IntervalPred>) {
            return {{"type", "IntervalPred"},
                    {"ivar", x.ivar.name},
                    {"source", detail::arg_to_json(x.source)}};
          } else if constexpr (std::is_same_v<T, NowPred>) {
            return {{"type", "NowPred"}, {"ivar", x.ivar.name}};
          } else if constexpr (std::is_same_v<T, DatePred>) {
            return {{"type", "DatePred"},
                    {"ivar", x.ivar.name},
                    {"date",
                     {{"year", x.date.year},
                      {"month", x.date.month},
                      {"day", x.date.day},
                      {"precision", precision_name(x.date.precision)}}}};
          } else if constexpr (std::is_same_v<T, TeenagerPred>) {
            return {{"type", "TeenagerPred"},
                    {"ivar", x.ivar.name},
                    {"person", detail::arg_to_json(x.person)}};
          } else if constexpr (std::is_same_v<T, OverlapPred>) {
            return {{"type", "OverlapPred"}, {"first", x.first.name}, {"second", x.second.name}};
          } else if constexpr (std::is_same_v<T, BeforePred>) {
            return {{"type", "BeforePred"}, {"first", x.first.name}, {"second", x.second.name}};
          } else if constexpr (std::is_same_v<T, AfterPred>) {
            return {{"type", "AfterPred"}, {"first", x.first.name}, {"second", x.second.name}};
          } else if constexpr (std::is_same_v<T, CmpPred>) {
            return {{"type", "CmpPred"},
                    {"left", x.left.name},
                    {"right", x.right.name},
                    {"op", x.op == CmpOp::Greater ? ">" : "<"}};
          } else if constexpr (std::is_same_v<T, CoordinatePred>) {
            return {{"type", "CoordinatePred"},
                    {"cvar", x.cvar.name},
                    {"source", detail::arg_to_json(x.source)}};
          } else {
            return {{"type", "SouthPred"}, {"first", x.first.name}, {"second", x.second.name}};
          }
        },
        p);
  }

  static Predicate from_json(const nlohmann::json& j) {
    auto type = j.at("type").get<std::string>();
    auto ivar = [&](const char* key) { return IntervalVar{j.at(key).get<std::string>()}; };
    auto var = [&](const char* key) { return Var{j.at(key).get<std::string>()}; };
    if (type == "FramePred") {
      FramePred f{j.at("name").get<std::string>(), {}, {}};
      for (const auto& a : j.at("args")) f.args.push_back(detail::arg_from_json(a));
      if (j.contains("roles")) f.roles = j.at("roles").get<std::vector<std::string>>();
      return f;
    }
    if (type == "IntervalPred")
      return IntervalPred{ivar("ivar"), detail::arg_from_json(j.at("source"))};
    if (type == "NowPred") return NowPred{ivar("ivar")};
    if (type == "DatePred") {
      const auto& d = j.at("date");
      CalendarDate date{d.at("year").get<int>(), d.value("month", 1), d.value("day", 1),
                        precision_from(d.value("precision", std::string("day")))};
      return DatePred{ivar("ivar"), date};
    }
    if (type == "TeenagerPred")
      return TeenagerPred{ivar("ivar"), detail::arg_from_json(j.at("person"))};
    if (type == "OverlapPred") return OverlapPred{ivar("first"), ivar("second")};
    if (type == "BeforePred") return BeforePred{ivar("first"), ivar("second")};
    if (type == "AfterPred") return AfterPred{ivar("first"), ivar("second")};
    if (type == "CmpPred") {
      auto op = j.at("op").get<std::string>();
      if (op != ">" && op != "<") throw FormatError("unknown comparison '" + op + "'");
      return CmpPred{var("left"), var("right"), op == ">" ? CmpOp::Greater : CmpOp::Less};
    }
    if (type == "CoordinatePred")
      return CoordinatePred{var("cvar"), detail::arg_from_json(j.at("source"))};
    if (type == "SouthPred") return SouthPred{var("first"), var("second")};
    throw FormatError("unknown predicate type '" + type + "'");
  }
};

void PredicateTraits::describe(const Predicate& p, Usage& u) { Impl::describe(p, u); }
void PredicateTraits::check(const Predicate& p, const std::string& path,
                            std::vector<Violation>& out) {
  Impl::check(p, path, out);
}
std::string PredicateTraits::pretty(const Predicate& p) { return Impl::pretty(p); }
nlohmann::json PredicateTraits::to_json(const Predicate& p) { return Impl::to_json(p); }
Predicate PredicateTraits::from_json(const nlohmann::json& j) { return Impl::from_json(j); }

}  // namespace detail

using Traits = detail::PredicateTraits;

std::string binder_name(const Binder& b) {
  return std::visit([](const auto& x) { return x.name; }, b);
}

std::set<Var> free_vars(const LambdaExpr& e) {
  return detail::free_vars<Predicate, Traits>(e);
}

std::vector<Violation> validate(const LambdaExpr& e) {
  return detail::validate<Predicate, Traits>(e);
}

std::string pretty(const LambdaExpr& e) { return detail::pretty<Predicate, Traits>(e); }

std::string pretty(const Predicate& p) { return Traits::pretty(p); }

nlohmann::json to_json(const LambdaExpr& e) {
  return detail::to_json<Predicate, Traits>(e);
}

LambdaExpr lambda_from_json(const nlohmann::json& j) {
  return detail::from_json<Predicate, Traits>(j);
}

std::string to_string(const CalendarDate& d) {
  char buf[32];
  switch (d.precision) {
    case DatePrecision::Year:
      std::snprintf(buf, sizeof buf, "%04d", d.year);
      break;
    case DatePrecision::Month:
      std::snprintf(buf, sizeof buf, "%02d-%04d", d.month, d.year);
      break;
    case DatePrecision::Day:
      std::snprintf(buf, sizeof buf, "%02d-%02d-%04d", d.day, d.month, d.year);
      break;
  }
  return buf;
}

Term conj(std::vector<Predicate> preds) {
  Term t;
  for (auto& p : preds) t.children.emplace_back(std::move(p));
  return t;
}

}  // namespace kbqa::lambda
