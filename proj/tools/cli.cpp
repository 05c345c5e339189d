#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kbqa/amr.hpp"
#include "kbqa/error.hpp"
#include "kbqa/evaluation.hpp"
#include "kbqa/grounder.hpp"
#include "kbqa/kb.hpp"
#include "kbqa/lambda.hpp"
#include "kbqa/sparql.hpp"
#include "kbqa/sparql_gen.hpp"
#include "kbqa/store.hpp"
#include "kbqa/translate.hpp"

namespace kbqa::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidValue("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string read_all(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& text) {
  auto i = text.find_first_not_of(" \t\r\n");
  return i != std::string::npos && text[i] == '{';
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw FormatError(what + " is not valid JSON");
  return j;
}

translate::OrdinalOffsetMode ordinal_mode_from_string(const std::string& s) {
  if (s == "zero-based" || s == "zero_based") return translate::OrdinalOffsetMode::ZeroBased;
  if (s == "paper-literal" || s == "paper_literal") return translate::OrdinalOffsetMode::PaperLiteral;
  throw UsageError("--ordinal-mode must be zero-based or paper-literal, got '" + s + "'");
}

Format format_from_string(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  throw UsageError("--format must be text or json, got '" + s + "'");
}

rdf::DateTime now_from_string(const std::string& s) {
  auto d = rdf::parse_datetime(s);
  if (!d) throw UsageError("--now must be an xsd:dateTime, got '" + s + "'");
  return *d;
}

rdf::DateTime wall_clock() {
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count();
  auto d = rdf::datetime_from_instant(micros);
  d.micros = 0;
  d.tz_minutes = 0;
  return d;
}

// Values given on the command line; empty strings are unset.
struct Flags {
  std::string kb, lexicon, store, endpoint_url, gold, overrides, format, now, ordinal_mode;
  std::string amr, input, sparql;
};

struct Session {
  CliConfig cfg;
  Flags flags;
  std::istream& in;
  std::ostream& out;

  const kb::KbProfile& profile() const { return kb::KbProfile::by_name(cfg.kb); }

  rdf::DateTime now() const { return cfg.now ? *cfg.now : wall_clock(); }

  translate::TranslateOptions translate_options() const {
    translate::TranslateOptions o;
    o.ordinal_offset_mode = cfg.ordinal_offset_mode;
    return o;
  }

  // The main input: --amr / --input / --sparql file, or stdin.
  std::string input_text() const {
    for (const auto* p : {&flags.amr, &flags.input, &flags.sparql})
      if (!p->empty()) return slurp(*p);
    return read_all(in);
  }

  const ground::Lexicon& lexicon() {
    if (!lexicon_) {
      if (!cfg.lexicon) throw UsageError("--lexicon is required for grounding");
      lexicon_ = ground::Lexicon::load(*cfg.lexicon, profile());
    }
    return *lexicon_;
  }

  lambda::LambdaExpr lambda_from(const std::string& text) {
    if (looks_like_json(text)) return lambda::lambda_from_json(parse_json(text, "lambda input"));
    return translate::translate(amr::parse_penman(text), translate_options()).expr;
  }

  ground::KbLambdaExpr ground_lambda(const lambda::LambdaExpr& e) {
    if (!flags.gold.empty()) {
      auto gold = ground::GoldGrounding::from_json(parse_json(slurp(flags.gold), "gold grounding"),
                                                   profile());
      return ground::ground_with_gold(e, gold, profile());
    }
    return ground::ground(e, lexicon(), profile());
  }

  // JSON input is a grounded expression; PENMAN runs the whole front end.
  ground::KbLambdaExpr kb_lambda_from(const std::string& text) {
    if (looks_like_json(text)) {
      auto j = parse_json(text, "input");
      try {
        return ground::kb_lambda_from_json(j);
      } catch (const Error&) {
        return ground_lambda(lambda::lambda_from_json(j));
      }
    }
    return ground_lambda(lambda_from(text));
  }

  eval::Executor executor() {
    if (cfg.store && cfg.endpoint) throw UsageError("--store and --endpoint-url are mutually exclusive");
    if (cfg.store) {
      if (!store_) store_ = store::load_ntriples_file(*cfg.store);
      return eval::store_executor(*store_, now());
    }
    if (cfg.endpoint) {
      if (!client_) client_ = std::make_unique<endpoint::Client>(*cfg.endpoint);
      auto* c = client_.get();
      return [c](const sparql::Query& q) { return c->execute(sparql::render(q)); };
    }
    throw UsageError("one of --store or --endpoint-url is required");
  }

  void print(const nlohmann::json& j) { out << j.dump(2) << "\n"; }

  std::optional<ground::Lexicon> lexicon_;
  std::optional<store::TripleStore> store_;
  std::unique_ptr<endpoint::Client> client_;
};

nlohmann::json answer_json(const rdf::Term& t, const kb::KbProfile& kb) {
  if (t.is_iri()) return kb.compact(t.value);
  if (!t.lang.empty()) return {{"value", t.value}, {"lang", t.lang}};
  return {{"value", t.value}, {"datatype", kb.compact(t.datatype)}};
}

std::string answer_text(const rdf::Term& t, const kb::KbProfile& kb) {
  return t.is_iri() ? kb.compact(t.value) : rdf::to_ntriples(t);
}

void cmd_parse(Session& s) {
  auto g = amr::parse_penman(s.input_text());
  if (s.cfg.format == Format::Json) s.print(amr::to_json(g));
  else s.out << amr::serialize_penman(g) << "\n";
}

void cmd_translate(Session& s) {
  auto text = s.input_text();
  auto g = looks_like_json(text) ? amr::graph_from_json(parse_json(text, "graph input"))
                                 : amr::parse_penman(text);
  auto r = translate::translate(g, s.translate_options());
  if (s.cfg.format == Format::Json) {
    s.print(lambda::to_json(r.expr));
  } else {
    s.out << lambda::pretty(r.expr) << "\n" << translate::trace_jsonl(r);
  }
}

void cmd_ground(Session& s) {
  auto e = s.ground_lambda(s.lambda_from(s.input_text()));
  if (s.cfg.format == Format::Json) s.print(ground::to_json(e));
  else s.out << ground::pretty(e) << "\n";
}

void cmd_emit(Session& s) {
  auto q = sparql::emit(s.kb_lambda_from(s.input_text()), s.profile());
  auto text = sparql::render(q);
  if (s.cfg.format == Format::Json) s.print({{"sparql", text}, {"query", sparql::to_json(q)}});
  else s.out << text;
}

void cmd_run(Session& s) {
  auto text = s.input_text();
  auto q = !s.flags.sparql.empty() ? sparql::parse(text, s.profile().prefixes)
                                   : sparql::emit(s.kb_lambda_from(text), s.profile());
  auto results = s.executor()(q);
  auto answers = store::answer_terms(results);
  if (s.cfg.format == Format::Json) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& t : answers) a.push_back(answer_json(t, s.profile()));
    s.print({{"sparql", sparql::render(q)}, {"answers", a}, {"results", store::to_json(results)}});
  } else {
    for (const auto& t : answers) s.out << answer_text(t, s.profile()) << "\n";
  }
}

void cmd_eval(Session& s) {
  if (s.flags.gold.empty()) throw UsageError("--gold <dataset.jsonl> is required for eval");
  auto records = eval::load_dataset(s.flags.gold);
  auto overrides = eval::parse_overrides(s.flags.overrides);
  eval::PipelineContext ctx;
  bool needs_lexicon = !overrides.count(eval::Stage::GtSparql) &&
                       !overrides.count(eval::Stage::GtKbLambda) &&
                       !(overrides.count(eval::Stage::GtEl) && overrides.count(eval::Stage::GtRl));
  if (needs_lexicon) ctx.lexicon = &s.lexicon();
  ctx.translate_options = s.translate_options();
  ctx.execute = s.executor();
  auto report = eval::evaluate(records, overrides, ctx);
  if (s.cfg.format == Format::Json) s.print(report.to_json());
  else s.out << report.to_table();
}

void cmd_categorize(Session& s) {
  auto q = sparql::parse(s.input_text(), s.profile().prefixes);
  auto c = eval::categorize(q, s.profile());
  if (s.cfg.format == Format::Json) {
    auto f = eval::features(q, s.profile());
    s.print({{"category", eval::to_string(c)},
             {"features",
              {{"intervals", f.intervals},
               {"temporal_filter", f.temporal_filter},
               {"duration_arithmetic", f.duration_arithmetic},
               {"aggregation", f.aggregation}}}});
  } else {
    s.out << eval::to_string(c) << "\n";
  }
}

// Command-line flags override the config file.
CliConfig merge(CliConfig cfg, const Flags& f) {
  if (!f.kb.empty()) {
    try {
      kb::KbProfile::by_name(f.kb);
    } catch (const InvalidValue&) {
      throw UsageError("--kb must be wikidata or dbpedia, got '" + f.kb + "'");
    }
    cfg.kb = f.kb;
  }
  if (!f.lexicon.empty()) cfg.lexicon = f.lexicon;
  if (!f.store.empty()) cfg.store = f.store;
  if (!f.endpoint_url.empty()) {
    auto e = cfg.endpoint.value_or(endpoint::EndpointConfig{});
    e.url = f.endpoint_url;
    try {
      e.validate();
    } catch (const InvalidValue& err) {
      throw UsageError(std::string("--endpoint-url: ") + err.what());
    }
    cfg.endpoint = e;
  }
  if (!f.store.empty() && !f.endpoint_url.empty())
    throw UsageError("--store and --endpoint-url are mutually exclusive");
  if (!f.store.empty()) cfg.endpoint.reset();
  if (!f.endpoint_url.empty()) cfg.store.reset();
  if (!f.format.empty()) cfg.format = format_from_string(f.format);
  if (!f.now.empty()) cfg.now = now_from_string(f.now);
  if (!f.ordinal_mode.empty()) cfg.ordinal_offset_mode = ordinal_mode_from_string(f.ordinal_mode);
  return cfg;
}

}  // namespace

CliConfig CliConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  auto path = [&](const std::string& p) {
    if (base_dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base_dir) / p).string();
  };
  CliConfig c;
  try {
    c.kb = j.value("kb", c.kb);
    kb::KbProfile::by_name(c.kb);
    if (j.contains("lexicon")) c.lexicon = path(j.at("lexicon").get<std::string>());
    if (j.contains("store")) c.store = path(j.at("store").get<std::string>());
    if (j.contains("endpoint")) c.endpoint = endpoint::EndpointConfig::from_json(j.at("endpoint"));
    if (c.store && c.endpoint) throw FormatError("config selects both a store and an endpoint");
    if (j.contains("ordinal_offset_mode"))
      c.ordinal_offset_mode = ordinal_mode_from_string(j.at("ordinal_offset_mode").get<std::string>());
    if (j.contains("now")) c.now = now_from_string(j.at("now").get<std::string>());
    if (j.contains("format")) c.format = format_from_string(j.at("format").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const UsageError& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const InvalidValue& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& config_path) {
  CLI::App app{"Temporal question answering over knowledge bases", "kbqa"};
  app.require_subcommand(1, 1);
  Flags f;

  struct Command {
    const char* name;
    const char* help;
    void (*fn)(Session&);
  };
  const Command commands[] = {
      {"parse", "PENMAN AMR to graph JSON (text: canonical PENMAN)", cmd_parse},
      {"translate", "AMR (PENMAN or graph JSON) to lambda expression", cmd_translate},
      {"ground", "lambda expression or AMR to KB-specific lambda expression", cmd_ground},
      {"emit", "KB lambda, lambda or AMR to SPARQL", cmd_emit},
      {"run", "question AMR (or --sparql query) to answers", cmd_run},
      {"eval", "score a dataset (--gold) with stage overrides", cmd_eval},
      {"categorize", "SPARQL query to SIMPLE / MEDIUM / COMPLEX", cmd_categorize},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--kb", f.kb, "knowledge base profile: wikidata | dbpedia");
    sub->add_option("--lexicon", f.lexicon, "lexicon JSON");
    sub->add_option("--store", f.store, "N-Triples file to query");
    sub->add_option("--endpoint-url", f.endpoint_url, "SPARQL endpoint to query");
    sub->add_option("--gold", f.gold, "gold grounding JSON (ground/emit/run) or dataset JSONL (eval)");
    sub->add_option("--override", f.overrides, "stage overrides, e.g. GT_EL,GT_RL");
    sub->add_option("--format", f.format, "text | json");
    sub->add_option("--now", f.now, "fixed xsd:dateTime for now()");
    sub->add_option("--ordinal-mode", f.ordinal_mode, "zero-based | paper-literal");
    sub->add_option("--amr", f.amr, "PENMAN input file");
    sub->add_option("--input", f.input, "JSON input file from a previous stage");
    sub->add_option("--sparql", f.sparql, "SPARQL query file");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    CliConfig cfg;
    if (config_path && !config_path->empty())
      cfg = CliConfig::from_json(parse_json(slurp(*config_path), "SYGMA_CONFIG"),
                                 fs::path(*config_path).parent_path().string());
    Session s{merge(cfg, f), f, in, out, {}, {}, {}};
    auto* sub = app.get_subcommands().front();
    for (const auto& c : commands)
      if (sub->get_name() == c.name) c.fn(s);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.to_json().dump() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << FormatError(e.what()).to_json().dump() << "\n";
    return 1;
  }
}

}  // namespace kbqa::cli
