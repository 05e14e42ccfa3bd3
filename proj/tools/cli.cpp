#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <json.hpp>

#include "omq/apps.hpp"
#include "omq/chase.hpp"
#include "omq/classify.hpp"
#include "omq/contain.hpp"
#include "omq/errors.hpp"
#include "omq/eval.hpp"
#include "omq/parser.hpp"
#include "omq/rewrite.hpp"
#include "omq/testkit.hpp"

namespace omq::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

struct Common {
  std::string program_path;
  std::string tgds;
  std::string format = "text";
  std::optional<std::size_t> budget;
  bool no_prune = false;

  bool json() const { return format == "json"; }
};

Program load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NameError("cannot read '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  return parse_program(text.str());
}

RewriteOptions rewrite_options(const Common& c) {
  RewriteOptions o;
  o.prune_subsumed = !c.no_prune;
  if (c.budget) {
    o.budget = *c.budget;
  } else if (const char* env = std::getenv("OMQ_BUDGET")) {
    try {
      o.budget = std::stoull(env);
    } catch (const std::exception&) {
      throw NameError("OMQ_BUDGET is not a number: '" + std::string(env) + "'");
    }
  }
  return o;
}

Json tuple_json(std::span<const Term> tuple) {
  Json out = Json::array();
  for (const auto& t : tuple) out.push_back(term_text(t));
  return out;
}

Json header(const char* command) {
  Json j;
  j["version"] = kFormatVersion;
  j["command"] = command;
  return j;
}

std::string yes(bool b) { return b ? "true" : "false"; }

// Reads a constant tuple such as `a b` or `(a,b)`.
std::vector<Term> parse_tuple(const std::vector<std::string>& words) {
  std::vector<Term> out;
  for (const auto& w : words) {
    std::string item;
    for (char ch : w + ",") {
      if (ch == '(' || ch == ')' || ch == ' ') continue;
      if (ch != ',') {
        item += ch;
        continue;
      }
      if (item.empty()) continue;
      if (reads_as_variable(item)) {
        throw SyntaxError("tuple entry '" + item + "' is not a constant");
      }
      out.push_back(Term::constant(item));
      item.clear();
    }
  }
  return out;
}

std::string instance_text(std::string_view name, const Instance& instance) {
  std::string out = "database " + std::string(name) + " {";
  for (const auto& a : instance.sorted_atoms()) out += "\n  " + atom_text(a) + ".";
  out += instance.empty() ? " }\n" : "\n}\n";
  return out;
}

Json class_json(const ClassReport& r) {
  Json flags;
  flags["linear"] = r.linear;
  flags["guarded"] = r.guarded;
  flags["non_recursive"] = r.non_recursive;
  flags["sticky"] = r.sticky;
  flags["full"] = r.full;
  flags["fact_free"] = r.fact_free;
  flags["constant_free"] = r.constant_free;
  flags["linear_with_facts"] = r.linear_with_facts;
  flags["ucq_rewritable"] = r.ucq_rewritable();
  return flags;
}

int cmd_classify(const Common& c, std::ostream& out) {
  const Program p = load(c.program_path);
  const auto tgds = c.tgds.empty() ? p.all_tgds() : p.tgd_block(c.tgds);
  const auto report = classify(tgds);
  if (c.json()) {
    Json j = header("classify");
    j["flags"] = class_json(report);
    Json w = Json::object();
    for (const auto& [flag, why] : report.witnesses) w[flag] = why;
    j["witnesses"] = w;
    out << j.dump(2) << "\n";
  } else {
    const Json flags = class_json(report);
    for (const auto& [flag, value] : flags.items()) {
      out << flag << ": " << yes(value.get<bool>());
      auto it = report.witnesses.find(flag);
      if (it != report.witnesses.end()) out << "  (" << it->second << ")";
      out << "\n";
    }
  }
  return kPositive;
}

int cmd_chase(const Common& c, const std::string& db_name, std::optional<std::size_t> max_level,
              bool require_termination, std::ostream& out) {
  const Program p = load(c.program_path);
  const auto tgds = c.tgds.empty() ? p.all_tgds() : p.tgd_block(c.tgds);
  const Database& db = p.database(db_name);
  const bool nr = is_non_recursive(tgds);
  if (require_termination && !nr) {
    throw PreconditionViolated("the tgds are recursive, so the chase may not terminate");
  }
  ChaseResult result;
  if (max_level) {
    result = chase_bounded(db, tgds, *max_level);
  } else if (nr) {
    result = chase_nr(db, tgds);
  } else {
    throw PreconditionViolated("the tgds are recursive; pass --max-level to bound the chase");
  }
  const std::string name = db_name + "_chase";
  if (c.json()) {
    Json j = header("chase");
    j["complete"] = result.complete;
    j["steps"] = result.steps;
    j["atoms"] = result.instance.size();
    j["instance"] = instance_text(name, result.instance);
    out << j.dump(2) << "\n";
  } else {
    out << "% steps " << result.steps << ", " << (result.complete ? "complete" : "incomplete")
        << "\n"
        << instance_text(name, result.instance);
  }
  return kPositive;
}

int cmd_rewrite(const Common& c, const std::string& query, bool trace, std::ostream& out) {
  const Program p = load(c.program_path);
  const OMQ q = p.omq(query, c.tgds);
  RewriteOptions options = rewrite_options(c);
  if (trace) {
    options.trace = [&](const RewriteEvent& e) {
      Json line;
      line["step"] = e.step;
      line["kind"] = e.kind == RewriteEvent::Kind::kRewrite ? "rewrite" : "factorize";
      line["query"] = e.source.to_string();
      Json subset = Json::array();
      for (const auto& a : e.subset) subset.push_back(a.to_string());
      line["subset"] = subset;
      line["tgd"] = e.tgd_used.to_string();
      line["result"] = e.result.to_string();
      line["added"] = e.added;
      out << line.dump() << "\n";
    };
  }
  const auto result = xrewrite_detailed(q, options);
  if (c.json()) {
    Json j = header("rewrite");
    Json disjuncts = Json::array();
    for (const auto& d : result.ucq.disjuncts()) disjuncts.push_back(d.to_string());
    j["disjuncts"] = disjuncts;
    j["steps"] = result.steps;
    j["generated"] = result.generated;
    j["program"] = ucq_text(query, result.ucq);
    out << j.dump(2) << "\n";
  } else {
    out << ucq_text(query, result.ucq);
  }
  return kPositive;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "auto") return Strategy::kAuto;
  if (s == "chase") return Strategy::kChase;
  if (s == "rewriting") return Strategy::kRewriting;
  throw NameError("unknown strategy '" + s + "'");
}

int cmd_eval(const Common& c, const std::string& query, const std::string& db_name,
             const std::vector<std::string>& tuple_words, const std::string& strategy,
             std::ostream& out) {
  const Program p = load(c.program_path);
  const OMQ q = p.omq(query, c.tgds);
  const PreparedOMQ prepared(q, parse_strategy(strategy), rewrite_options(c));
  const Database& db = p.database(db_name);
  if (!tuple_words.empty()) {
    const auto tuple = parse_tuple(tuple_words);
    if (tuple.size() != q.arity()) {
      throw ArityError("tuple of length " + std::to_string(tuple.size()) +
                       " for a query of arity " + std::to_string(q.arity()));
    }
    const bool member = prepared.contains(db, tuple);
    if (c.json()) {
      Json j = header("eval");
      j["strategy"] = to_string(prepared.strategy());
      j["tuple"] = tuple_json(tuple);
      j["member"] = member;
      out << j.dump(2) << "\n";
    } else {
      out << tuple_to_string(tuple) << (member ? " is" : " is not") << " a certain answer\n";
    }
    return member ? kPositive : kNegative;
  }
  const auto answers = prepared.answers(db);
  if (c.json()) {
    Json j = header("eval");
    j["strategy"] = to_string(prepared.strategy());
    Json list = Json::array();
    for (const auto& t : answers) list.push_back(tuple_json(t));
    j["answers"] = list;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& t : answers) out << tuple_to_string(t) << "\n";
  }
  return kPositive;
}

// Oracle bounds: the witness bound when the enumeration stays small enough,
// otherwise the largest bounds that fit.
BruteForceOptions oracle_bounds(const OMQ& q1, const RewriteOptions& rewrite) {
  BruteForceOptions o;
  o.rewrite = rewrite;
  std::uint64_t bound = 1;
  try {
    bound = witness_bound(q1).value;
  } catch (const UnsupportedClass&) {
  }
  const std::uint64_t arity = std::max<std::uint64_t>(1, q1.data_schema().max_arity());
  o.max_atoms = static_cast<std::size_t>(std::min<std::uint64_t>(bound, 4));
  o.max_constants = static_cast<std::size_t>(std::min<std::uint64_t>(arity * bound, 4));
  const auto known = constants_of(q1).size();
  while (o.max_constants > 1 &&
         ground_atoms(q1.data_schema(), fresh_constants(o.max_constants + known)).size() >
             o.max_ground) {
    --o.max_constants;
  }
  return o;
}

int cmd_contains(const Common& c, const std::string& n1, const std::string& n2,
                 const std::string& tgds1, const std::string& tgds2, bool oracle,
                 std::ostream& out, std::ostream& err) {
  const Program p = load(c.program_path);
  const OMQ q1 = p.omq(n1, tgds1.empty() ? c.tgds : tgds1);
  const OMQ q2 = p.omq(n2, tgds2.empty() ? c.tgds : tgds2);
  const auto options = rewrite_options(c);
  const auto verdict = contains(q1, q2, options);
  std::optional<ContainmentVerdict> check;
  if (oracle) check = brute_force_contains(q1, q2, oracle_bounds(q1, options));
  const bool agrees = !check || check->contained == verdict.contained;

  if (c.json()) {
    Json j = header("contains");
    j["contained"] = verdict.contained;
    if (verdict.counterexample) {
      Json ce;
      ce["database"] = database_text("counterexample", verdict.counterexample->database);
      ce["tuple"] = tuple_json(verdict.counterexample->tuple);
      j["counterexample"] = ce;
    }
    if (check) {
      j["oracleAgrees"] = agrees;
      j["oracleExact"] = check->exact;
    }
    out << j.dump(2) << "\n";
  } else {
    out << (verdict.contained ? "contained" : "not contained") << "\n";
    if (verdict.counterexample) {
      out << database_text("counterexample", verdict.counterexample->database)
          << "\ntuple " << tuple_to_string(verdict.counterexample->tuple) << "\n";
    }
    if (check) {
      out << "oracle " << (agrees ? "agrees" : "disagrees")
          << (check->exact ? "" : " (bounded verdict)") << "\n";
    }
  }
  if (!agrees) {
    err << "error: the brute-force oracle disagrees with the containment verdict\n";
    return kFailure;
  }
  return verdict.contained ? kPositive : kNegative;
}

int cmd_distributes(const Common& c, const std::string& query, bool verify, std::ostream& out,
                    std::ostream& err) {
  const Program p = load(c.program_path);
  const OMQ q = p.omq(query, c.tgds);
  const auto verdict = distributes(q, rewrite_options(c));
  std::optional<Database> counterexample;
  if (verify) counterexample = distribution_counterexample(q, 3, 4);
  const bool agrees = !verify || verdict.distributes == !counterexample.has_value();
  if (c.json()) {
    Json j = header("distributes");
    j["distributes"] = verdict.distributes;
    j["witness"] = verdict.witness;
    if (!verdict.diagnostics.empty()) j["diagnostics"] = verdict.diagnostics;
    if (verify) {
      j["verified"] = agrees;
      if (counterexample) j["counterexample"] = database_text("counterexample", *counterexample);
    }
    out << j.dump(2) << "\n";
  } else {
    out << (verdict.distributes ? "distributes" : "does not distribute") << ": "
        << verdict.witness << "\n";
    for (const auto& d : verdict.diagnostics) out << "% " << d << "\n";
    if (counterexample) out << database_text("counterexample", *counterexample) << "\n";
  }
  if (!agrees) {
    err << "error: the bounded definitional check disagrees with the verdict\n";
    return kFailure;
  }
  return verdict.distributes ? kPositive : kNegative;
}

int cmd_unsat(const Common& c, const std::string& query, std::ostream& out) {
  const Program p = load(c.program_path);
  const bool unsat = is_unsatisfiable(p.omq(query, c.tgds), rewrite_options(c));
  if (c.json()) {
    Json j = header("unsat");
    j["unsatisfiable"] = unsat;
    out << j.dump(2) << "\n";
  } else {
    out << (unsat ? "unsatisfiable" : "satisfiable") << "\n";
  }
  return unsat ? kPositive : kNegative;
}

int cmd_gen(const Common& c, const std::string& family, std::size_t n, bool random,
            GeneratorConfig cfg, const std::string& target, std::ostream& out) {
  std::optional<OMQ> q;
  if (!family.empty()) {
    if (family != "sticky-n") throw NameError("unknown family '" + family + "'");
    q = sticky_family(n);
  } else if (random) {
    cfg.target = parse_target_class(target);
    q = random_omq(cfg);
  } else {
    throw PreconditionViolated("gen needs --family or --random");
  }
  Program p;
  p.schema = q->data_schema();
  p.predicates = q->full_schema();
  p.tgds.emplace("t", q->tgds());
  p.queries.emplace("q", q->query());
  const std::string text = serialize_program(p);
  if (c.json()) {
    Json j = header("gen");
    j["program"] = text;
    j["classes"] = class_json(classify(q->tgds()));
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
  return kPositive;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reasoning and static analysis for ontology-mediated queries", "omq"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success or positive verdict (contained, distributes, unsatisfiable,\n"
      "member), 1 negative verdict, 2 error. OMQ_BUDGET overrides the rewriting budget.");

  Common common;
  auto shared = [&](CLI::App* sub, bool with_program = true) {
    if (with_program) {
      sub->add_option("program", common.program_path, "Program file")->required();
    }
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto with_tgds = [&](CLI::App* sub) {
    sub->add_option("--tgds", common.tgds, "Tgd block (default: every block)");
  };
  auto with_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", common.budget, "Rewriting step budget");
  };

  auto* classify_cmd = app.add_subcommand("classify", "Class membership of a tgd set");
  shared(classify_cmd);
  with_tgds(classify_cmd);

  std::string db_name;
  std::optional<std::size_t> max_level;
  bool require_termination = false;
  auto* chase_cmd = app.add_subcommand("chase", "Chase a database");
  shared(chase_cmd);
  chase_cmd->add_option("database", db_name, "Database name")->required();
  with_tgds(chase_cmd);
  chase_cmd->add_option("--max-level", max_level, "Stop after atoms of this level");
  chase_cmd->add_flag("--require-termination", require_termination,
                      "Fail unless the tgds are non-recursive");

  std::string query;
  bool trace = false;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "UCQ rewriting of an OMQ");
  shared(rewrite_cmd);
  rewrite_cmd->add_option("query", query, "Query name")->required();
  with_tgds(rewrite_cmd);
  with_budget(rewrite_cmd);
  rewrite_cmd->add_flag("--trace", trace, "Print every step as a JSON line");
  rewrite_cmd->add_flag("--no-prune", common.no_prune,
                        "Keep rewritings contained in earlier ones");

  std::vector<std::string> tuple;
  std::string strategy = "auto";
  auto* eval_cmd = app.add_subcommand("eval", "Certain answers or tuple membership");
  shared(eval_cmd);
  eval_cmd->add_option("query", query, "Query name")->required();
  eval_cmd->add_option("database", db_name, "Database name")->required();
  eval_cmd->add_option("tuple", tuple, "Constants of the tuple to check");
  with_tgds(eval_cmd);
  with_budget(eval_cmd);
  eval_cmd->add_option("--strategy", strategy, "auto, chase or rewriting")
      ->check(CLI::IsMember({"auto", "chase", "rewriting"}));

  std::string query2;
  std::string tgds1;
  std::string tgds2;
  bool oracle = false;
  auto* contains_cmd = app.add_subcommand("contains", "Is the first OMQ contained in the second?");
  shared(contains_cmd);
  contains_cmd->add_option("query1", query, "Left query")->required();
  contains_cmd->add_option("query2", query2, "Right query")->required();
  with_tgds(contains_cmd);
  with_budget(contains_cmd);
  contains_cmd->add_option("--tgds1", tgds1, "Tgd block of the left OMQ");
  contains_cmd->add_option("--tgds2", tgds2, "Tgd block of the right OMQ");
  contains_cmd->add_flag("--oracle", oracle, "Cross-check by database enumeration");

  bool verify = false;
  auto* dist_cmd = app.add_subcommand("distributes", "Distribution over components");
  shared(dist_cmd);
  dist_cmd->add_option("query", query, "Query name")->required();
  with_tgds(dist_cmd);
  with_budget(dist_cmd);
  dist_cmd->add_flag("--verify", verify,
                     "Check the definition on databases with 3 constants and 4 atoms");

  auto* unsat_cmd = app.add_subcommand("unsat", "Is the OMQ unsatisfiable?");
  shared(unsat_cmd);
  unsat_cmd->add_option("query", query, "Query name")->required();
  with_tgds(unsat_cmd);
  with_budget(unsat_cmd);

  std::string family;
  std::size_t n = 3;
  bool random = false;
  std::string target = "any";
  GeneratorConfig cfg;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a program");
  shared(gen_cmd, false);
  gen_cmd->add_option("--family", family, "Fixture family (sticky-n)");
  gen_cmd->add_option("--n", n, "Family parameter")->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--random", random, "Random OMQ");
  gen_cmd->add_option("--seed", cfg.seed, "Random seed");
  gen_cmd->add_option("--class", target, "L, NR, S, F or any");
  gen_cmd->add_option("--predicates", cfg.max_predicates, "Maximum number of predicates");
  gen_cmd->add_option("--arity", cfg.max_arity, "Maximum arity");
  gen_cmd->add_option("--max-tgds", cfg.max_tgds, "Maximum number of tgds");
  gen_cmd->add_option("--body-atoms", cfg.max_body_atoms, "Maximum body size");
  gen_cmd->add_option("--query-atoms", cfg.max_query_atoms, "Maximum query size");
  gen_cmd->add_option("--disjuncts", cfg.max_disjuncts, "Maximum number of disjuncts");
  gen_cmd->add_option("--answer-arity", cfg.max_answer_arity, "Maximum answer arity");
  gen_cmd->add_flag("--full-schema", cfg.full_data_schema, "Put every predicate in the data schema");
  gen_cmd->add_flag("--facts", cfg.fact_tgds, "Allow fact tgds");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPositive;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kPositive;
    }
    err << "error: " << e.what() << "\n";
    return kFailure;
  }

  try {
    if (*classify_cmd) return cmd_classify(common, out);
    if (*chase_cmd) return cmd_chase(common, db_name, max_level, require_termination, out);
    if (*rewrite_cmd) return cmd_rewrite(common, query, trace, out);
    if (*eval_cmd) return cmd_eval(common, query, db_name, tuple, strategy, out);
    if (*contains_cmd) {
      return cmd_contains(common, query, query2, tgds1, tgds2, oracle, out, err);
    }
    if (*dist_cmd) return cmd_distributes(common, query, verify, out, err);
    if (*unsat_cmd) return cmd_unsat(common, query, out);
    if (*gen_cmd) return cmd_gen(common, family, n, random, cfg, target, out);
  } catch (const std::exception& e) {
    if (common.json()) {
      Json j;
      j["version"] = kFormatVersion;
      j["error"] = e.what();
      out << j.dump(2) << "\n";
    }
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace omq::cli
