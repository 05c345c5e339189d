#include <algorithm>
#include <array>
#include <cstdio>

#include "kbqa/evaluation.hpp"

namespace kbqa::eval {

namespace {

bool is_date_type(const std::string& dt) { return dt == rdf::xsd("date") || dt == rdf::xsd("dateTime"); }

bool is_numeric_type(const std::string& dt) {
  return dt == rdf::xsd("integer") || dt == rdf::xsd("decimal") || dt == rdf::xsd("double");
}

std::string utc_day(const rdf::DateTime& d) {
  auto utc = rdf::datetime_from_instant(d.instant());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02d-%02d", static_cast<long long>(utc.year), utc.month,
                utc.day);
  return buf;
}

std::string fmt(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

nlohmann::json scores_json(const Scores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

Scores mean(const std::vector<const Scores*>& xs) {
  Scores m;
  if (xs.empty()) return m;
  for (const auto* s : xs) {
    m.precision += s->precision;
    m.recall += s->recall;
    m.f1 += s->f1;
  }
  auto n = static_cast<double>(xs.size());
  return {m.precision / n, m.recall / n, m.f1 / n};
}

}  // namespace

Scores score(const std::set<std::string>& gold, const std::set<std::string>& sys) {
  if (gold.empty()) return sys.empty() ? Scores{1, 1, 1} : Scores{0, 1, 0};
  if (sys.empty()) return {0, 0, 0};
  std::size_t hit = 0;
  for (const auto& s : sys) hit += gold.count(s);
  double p = static_cast<double>(hit) / static_cast<double>(sys.size());
  double r = static_cast<double>(hit) / static_cast<double>(gold.size());
  double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0;
  return {p, r, f1};
}

std::string answer_key(const rdf::Term& t, const kb::KbProfile& kb, bool day_granular) {
  if (t.is_iri()) return kb.compact(t.value);
  if (t.is_literal()) {
    if (is_date_type(t.datatype)) {
      if (auto d = rdf::parse_datetime(t.value))
        return day_granular ? "date:" + utc_day(*d) : "dateTime:" + rdf::format_datetime(*d);
    } else if (is_numeric_type(t.datatype)) {
      try {
        double v = std::stod(t.value);
        char buf[40];
        std::snprintf(buf, sizeof buf, "number:%.17g", v);
        return buf;
      } catch (const std::exception&) {
      }
    }
  }
  return rdf::to_ntriples(t);
}

bool day_granular(const std::vector<rdf::Term>& gold) {
  bool any = false;
  for (const auto& t : gold) {
    if (!t.is_literal() || !is_date_type(t.datatype)) continue;
    auto d = rdf::parse_datetime(t.value);
    if (!d) continue;
    any = true;
    if (t.datatype == rdf::xsd("dateTime") && (d->hour || d->minute || d->second || d->micros))
      return false;
  }
  return any;
}

std::set<std::string> answer_keys(const std::vector<rdf::Term>& terms, const kb::KbProfile& kb,
                                  bool day) {
  std::set<std::string> out;
  for (const auto& t : terms) out.insert(answer_key(t, kb, day));
  return out;
}

ScoreReport make_report(std::vector<QuestionScore> questions) {
  ScoreReport r;
  r.questions = std::move(questions);
  std::vector<const Scores*> all;
  std::map<Category, std::vector<const Scores*>> by_cat;
  for (const auto& q : r.questions) {
    all.push_back(&q.scores);
    by_cat[q.category].push_back(&q.scores);
    ++r.counts[q.category];
  }
  r.macro = mean(all);
  for (const auto& [c, xs] : by_cat) r.macro_by_category[c] = mean(xs);
  return r;
}

nlohmann::json ScoreReport::to_json() const {
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : questions) {
    nlohmann::json j = scores_json(q.scores);
    j["id"] = q.id;
    j["category"] = to_string(q.category);
    if (q.error) j["error"] = *q.error;
    qs.push_back(std::move(j));
  }
  nlohmann::json counts_j = nlohmann::json::object();
  nlohmann::json by_cat = nlohmann::json::object();
  for (const auto& [c, n] : counts) counts_j[to_string(c)] = n;
  for (const auto& [c, s] : macro_by_category) by_cat[to_string(c)] = scores_json(s);
  return {{"questions", qs},
          {"macro", scores_json(macro)},
          {"macro_by_category", by_cat},
          {"counts", counts_j}};
}

std::string ScoreReport::to_table() const {
  std::vector<std::array<std::string, 5>> rows{{"question", "category", "P", "R", "F1"}};
  for (const auto& q : questions)
    rows.push_back({q.id, to_string(q.category), fmt(q.scores.precision), fmt(q.scores.recall),
                    fmt(q.scores.f1)});
  for (const auto& [c, s] : macro_by_category)
    rows.push_back({"macro", to_string(c) + " (" + std::to_string(counts.at(c)) + ")",
                    fmt(s.precision), fmt(s.recall), fmt(s.f1)});
  rows.push_back({"macro", "all (" + std::to_string(questions.size()) + ")", fmt(macro.precision),
                  fmt(macro.recall), fmt(macro.f1)});
  std::array<std::size_t, 5> width{};
  for (const auto& row : rows)
    for (std::size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], row[i].size());
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < 5; ++i) {
      if (i) line += "  ";
      auto pad = std::string(width[i] - row[i].size(), ' ');
      line += i < 2 ? row[i] + pad : pad + row[i];
    }
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + "\n";
  }
  return out;
}

}  // namespace kbqa::eval
