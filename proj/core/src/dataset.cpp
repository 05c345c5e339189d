#include <fstream>
#include <sstream>

#include "kbqa/error.hpp"
#include "kbqa/evaluation.hpp"

namespace kbqa::eval {

namespace {

rdf::Term answer_from_json(const nlohmann::json& j, const kb::KbProfile& kb) {
  if (j.is_string()) return rdf::Term::iri(kb.expand(j.get<std::string>()));
  if (!j.is_object() || !j.contains("value")) throw FormatError("answer must be an IRI string or {value, datatype}");
  auto value = j.at("value").is_string() ? j.at("value").get<std::string>() : j.at("value").dump();
  if (j.contains("lang")) return rdf::Term::literal(value, std::string(rdf::kLangString), j.at("lang"));
  auto datatype = j.contains("datatype") ? kb.expand(j.at("datatype").get<std::string>()) : rdf::xsd("string");
  if (!rdf::valid_lexical(value, datatype))
    throw FormatError("answer '" + value + "' is not a valid " + datatype);
  return rdf::Term::literal(value, datatype);
}

nlohmann::json answer_to_json(const rdf::Term& t, const kb::KbProfile& kb) {
  if (t.is_iri()) return kb.compact(t.value);
  if (!t.lang.empty()) return {{"value", t.value}, {"lang", t.lang}};
  return {{"value", t.value}, {"datatype", kb.compact(t.datatype)}};
}

template <class T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string to_string(Category c) {
  switch (c) {
    case Category::Simple: return "SIMPLE";
    case Category::Medium: return "MEDIUM";
    case Category::Complex: return "COMPLEX";
    case Category::Unlabeled: return "UNLABELED";
  }
  return "UNLABELED";
}

Category category_from_string(const std::string& s) {
  for (auto c : {Category::Simple, Category::Medium, Category::Complex, Category::Unlabeled})
    if (to_string(c) == s) return c;
  throw InvalidValue("unknown category '" + s + "'");
}

DatasetRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("dataset record must be a JSON object");
  DatasetRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.question = j.value("question", "");
    r.kb = j.value("kb", "wikidata");
    const auto& kb = r.profile();
    r.amr = optional_field<std::string>(j, "amr");
    r.gold_amr = optional_field<std::string>(j, "gold_amr");
    if (j.contains("gold_lambda") && !j.at("gold_lambda").is_null()) r.gold_lambda = j.at("gold_lambda");
    if (j.contains("gold_grounding") && !j.at("gold_grounding").is_null())
      r.gold_grounding = ground::GoldGrounding::from_json(j.at("gold_grounding"), kb);
    r.gold_sparql = j.at("gold_sparql").get<std::string>();
    const auto& answers = j.at("gold_answers");
    if (!answers.is_array()) throw FormatError("gold_answers must be an array");
    for (const auto& a : answers) r.gold_answers.push_back(answer_from_json(a, kb));
    r.category = category_from_string(j.value("category", "UNLABELED"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("dataset record: " + std::string(e.what()));
  } catch (const InvalidValue& e) {
    throw FormatError("dataset record: " + std::string(e.what()));
  } catch (const ProfileMismatch& e) {
    throw FormatError("dataset record: " + std::string(e.what()));
  }
  return r;
}

nlohmann::json to_json(const DatasetRecord& r) {
  const auto& kb = r.profile();
  nlohmann::json j{{"id", r.id}, {"question", r.question}, {"kb", r.kb}};
  if (r.amr) j["amr"] = *r.amr;
  if (r.gold_amr) j["gold_amr"] = *r.gold_amr;
  if (r.gold_lambda) j["gold_lambda"] = *r.gold_lambda;
  if (r.gold_grounding) j["gold_grounding"] = r.gold_grounding->to_json();
  j["gold_sparql"] = r.gold_sparql;
  j["gold_answers"] = nlohmann::json::array();
  for (const auto& a : r.gold_answers) j["gold_answers"].push_back(answer_to_json(a, kb));
  j["category"] = to_string(r.category);
  return j;
}

std::vector<DatasetRecord> parse_dataset(std::string_view jsonl) {
  std::vector<DatasetRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    auto line = jsonl.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? jsonl.size() + 1 : nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back(record_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("dataset line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidValue("cannot read dataset " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

}  // namespace kbqa::eval
