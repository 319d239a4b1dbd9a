#include "unicausal/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "unicausal/json_io.hpp"
#include "unicausal/kan.hpp"
#include "unicausal/yoneda.hpp"

namespace unicausal::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string format = "json";
  std::uint64_t seed = 0;
  Limits limits;

  std::vector<std::string> x, y, z;
  std::string object;
  std::string source;
  std::string target;
  std::string mode = "left";
  std::vector<std::string> set;
  std::size_t value = 1;
  std::size_t n = 0;
  std::string output;
  std::vector<std::string> observable;
  bool bijective = false;
};

// `violation` marks a mathematical violation reported by the engine.
struct Outcome {
  json payload;
  bool violation = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

const std::string& input(const RunConfig& cfg, std::size_t k, const char* what) {
  if (cfg.inputs.size() <= k) throw UsageError(std::string("missing input file: ") + what);
  return cfg.inputs[k];
}

json load(const RunConfig& cfg, std::size_t k, const char* what) { return io::read_json_file(input(cfg, k, what)); }

fs::path dir_of(const RunConfig& cfg, std::size_t k) { return fs::path(cfg.inputs.at(k)).parent_path(); }

const std::string& single(const std::vector<std::string>& v, const char* flag) {
  if (v.size() != 1) throw UsageError(std::string(flag) + " takes exactly one variable");
  return v.front();
}

const std::string& required(const std::string& s, const char* flag) {
  if (s.empty()) throw UsageError(std::string(flag) + " is required");
  return s;
}

json sizes(const SetFunctor& f) {
  json j = json::object();
  for (std::size_t o = 0; o < f.base().num_objects(); ++o) j[f.base().object_name(o)] = f.size(o);
  return j;
}

std::string kind_of(const json& j) {
  if (!j.is_object()) return "unknown";
  if (j.contains("index")) return "diagram";
  if (j.contains("source") && j.contains("target")) return "functor-between-categories";
  if (j.contains("category")) return "set-functor";
  if (j.contains("dag")) return "scm";
  if (j.contains("variables")) return "dag";
  if (j.contains("nodes")) return "quiver";
  if (j.contains("objects")) return "category";
  if (j.contains("strata")) return "propensity";
  return "unknown";
}

Outcome cmd_validate(const RunConfig& cfg) {
  const json j = load(cfg, 0, "model");
  const std::string kind = kind_of(j);
  Outcome o;
  o.payload["kind"] = kind;
  json violations = json::array();
  auto capture = [&](const std::function<void()>& f) {
    try {
      f();
    } catch (const SizeGuardError&) {
      throw;
    } catch (const Error& e) {
      violations.push_back(e.what());
    }
  };
  if (kind == "category") {
    CategoryDescription d;
    capture([&] {
      // Parse names only; the axioms are checked below without throwing.
      d.objects = j.at("objects").get<std::vector<std::string>>();
      if (j.contains("morphisms")) {
        for (const auto& m : j.at("morphisms")) {
          d.morphisms.push_back({m.at("name").get<std::string>(), m.at("dom").get<std::string>(),
                                 m.at("cod").get<std::string>()});
        }
      }
      if (j.contains("identities")) d.identities = j.at("identities").get<std::map<std::string, std::string>>();
      if (j.contains("compose")) {
        for (const auto& c : j.at("compose")) {
          d.compose.push_back({c.at("f").get<std::string>(), c.at("g").get<std::string>(), c.at("gf").get<std::string>()});
        }
      }
    });
    if (violations.empty()) {
      for (const auto& v : validate_category(d).violations) violations.push_back(v);
    }
    if (violations.empty()) {
      const FinCategory c = io::category_from_json(j, cfg.limits);
      o.payload["objects"] = c.num_objects();
      o.payload["morphisms"] = c.num_morphisms();
    }
  } else if (kind == "quiver" || kind == "dag") {
    capture([&] {
      const FinCategory c = io::load_category(j, cfg.limits);
      o.payload["objects"] = c.num_objects();
      o.payload["morphisms"] = c.num_morphisms();
    });
  } else if (kind == "set-functor") {
    capture([&] { io::functor_from_json(j, cfg.limits, dir_of(cfg, 0)); });
  } else if (kind == "functor-between-categories") {
    capture([&] { io::cat_functor_from_json(j, cfg.limits, dir_of(cfg, 0)); });
  } else if (kind == "diagram") {
    capture([&] { io::diagram_from_json(j, cfg.limits, dir_of(cfg, 0)); });
  } else if (kind == "scm") {
    capture([&] { io::scm_from_json(j); });
  } else if (kind == "propensity") {
    capture([&] { io::propensity_from_json(j); });
  } else {
    throw UsageError("cannot tell what kind of model the input is");
  }
  o.payload["valid"] = violations.empty();
  o.payload["violations"] = violations;
  o.violation = !violations.empty();
  return o;
}

Outcome cmd_free_cat(const RunConfig& cfg) {
  const FinCategory c = io::load_category(load(cfg, 0, "quiver or DAG"), cfg.limits, dir_of(cfg, 0));
  Outcome o;
  o.payload["objects"] = c.num_objects();
  o.payload["morphisms"] = c.num_morphisms();
  o.payload["category"] = io::category_to_json(c);
  return o;
}

Outcome cmd_nats(const RunConfig& cfg) {
  const SetFunctor f = io::functor_from_json(load(cfg, 0, "source functor"), cfg.limits, dir_of(cfg, 0));
  const SetFunctor g = io::functor_from_json(load(cfg, 1, "target functor"), cfg.limits, dir_of(cfg, 1));
  NatEnumerationOptions opts;
  opts.bijective_only = cfg.bijective;
  const auto nats = enumerate_nats(f, g, cfg.limits, opts);
  Outcome o;
  o.payload["count"] = nats.size();
  o.payload["transformations"] = json::array();
  for (const auto& eta : nats) o.payload["transformations"].push_back(io::nat_to_json(eta));
  return o;
}

Outcome cmd_yoneda(const RunConfig& cfg) {
  const SetFunctor f = io::functor_from_json(load(cfg, 0, "presheaf"), cfg.limits, dir_of(cfg, 0));
  const std::size_t x = f.base().object_index(required(cfg.object, "--object"));
  const auto r = yoneda_lemma_check(f.base(), x, f, cfg.limits);
  Outcome o;
  o.payload["object"] = cfg.object;
  o.payload["nat_count"] = r.nat_count;
  o.payload["fx_count"] = r.fx_count;
  o.payload["bijection"] = r.bijection;
  o.payload["witness"] = json::array();
  for (const auto& [k, e] : r.witness) o.payload["witness"].push_back({{"nat", k}, {"element", e}});
  o.violation = !r.bijection;
  return o;
}

Outcome cmd_crp(const RunConfig& cfg) {
  const FinCategory c = io::load_category(load(cfg, 0, "category"), cfg.limits, dir_of(cfg, 0));
  auto one = [&](std::size_t x, std::size_t y) {
    const auto r = crp_check(c, x, y, cfg.limits);
    json j;
    j["source"] = c.object_name(x);
    j["target"] = c.object_name(y);
    j["hom_count"] = r.hom_count;
    j["nat_count"] = r.nat_count;
    j["bijection"] = r.bijection;
    j["witness"] = json::array();
    for (const auto& [m, k] : r.witness) j["witness"].push_back({{"morphism", m}, {"nat", k}});
    return j;
  };
  Outcome o;
  if (!cfg.source.empty() || !cfg.target.empty()) {
    o.payload = one(c.object_index(required(cfg.source, "--source")), c.object_index(required(cfg.target, "--target")));
    o.violation = !o.payload["bijection"].get<bool>();
    return o;
  }
  o.payload["pairs"] = json::array();
  bool all = true;
  for (std::size_t x = 0; x < c.num_objects(); ++x) {
    for (std::size_t y = 0; y < c.num_objects(); ++y) {
      json j = one(x, y);
      all = all && j["bijection"].get<bool>();
      o.payload["pairs"].push_back(std::move(j));
    }
  }
  o.payload["bijection"] = all;
  o.violation = !all;
  return o;
}

Outcome cmd_uct(const RunConfig& cfg) {
  const SetFunctor p = io::functor_from_json(load(cfg, 0, "presheaf"), cfg.limits, dir_of(cfg, 0));
  const auto r = uct_decompose(p, cfg.limits);
  Outcome o;
  o.payload["elements_objects"] = r.elements.category.num_objects();
  o.payload["elements_morphisms"] = r.elements.category.num_morphisms();
  o.payload["colimit_sizes"] = sizes(r.colimit);
  o.payload["presheaf_sizes"] = sizes(p);
  o.payload["iso"] = io::nat_to_json(r.iso);
  o.payload["verified"] = r.verified;
  o.violation = !r.verified;
  return o;
}

Outcome cmd_kan(const RunConfig& cfg) {
  const SetFunctor f = io::functor_from_json(load(cfg, 0, "functor"), cfg.limits, dir_of(cfg, 0));
  const CatFunctor k = io::cat_functor_from_json(load(cfg, 1, "along-functor"), cfg.limits, dir_of(cfg, 1));
  if (cfg.mode != "left" && cfg.mode != "right") throw UsageError("--mode must be left or right");
  const KanResult r = cfg.mode == "left" ? left_kan(f, k, cfg.limits) : right_kan(f, k, cfg.limits);
  Outcome o;
  o.payload["mode"] = cfg.mode;
  o.payload["sizes"] = sizes(r.extension);
  o.payload["extension"] = io::functor_to_json(r.extension, false);
  o.payload[cfg.mode == "left" ? "unit" : "counit"] = io::nat_to_json(r.unit);
  return o;
}

CausalDag load_dag(const RunConfig& cfg) {
  const json j = load(cfg, 0, "DAG");
  return io::dag_from_json(j.contains("dag") ? j.at("dag") : j);
}

Outcome cmd_dsep(const RunConfig& cfg) {
  const CausalDag g = load_dag(cfg);
  Outcome o;
  o.payload["x"] = cfg.x;
  o.payload["y"] = cfg.y;
  o.payload["z"] = cfg.z;
  o.payload["d_separated"] = d_separated(g, cfg.x, cfg.y, cfg.z);
  return o;
}

Outcome cmd_backdoor(const RunConfig& cfg) {
  const CausalDag g = load_dag(cfg);
  Outcome o;
  o.payload["treatment"] = single(cfg.x, "-x");
  o.payload["outcome"] = single(cfg.y, "-y");
  o.payload["z"] = cfg.z;
  o.payload["backdoor"] = is_backdoor_set(g, cfg.x.front(), cfg.y.front(), cfg.z);
  return o;
}

Outcome cmd_intervene(const RunConfig& cfg) {
  const CausalDag g = load_dag(cfg);
  Outcome o;
  o.payload["targets"] = cfg.x;
  o.payload["dag"] = io::dag_to_json(intervene(g, cfg.x));
  return o;
}

Outcome cmd_alexandroff(const RunConfig& cfg) {
  const CausalDag g = load_dag(cfg);
  const AlexandroffSpace s = alexandroff_space(g, cfg.limits);
  Outcome o;
  o.payload["space"] = io::space_to_json(s);
  json order = json::array();
  const auto le = s.specialization();
  for (std::size_t a = 0; a < le.size(); ++a) {
    for (std::size_t b = 0; b < le.size(); ++b) {
      if (le[a][b] && a != b) order.push_back({s.points()[a], s.points()[b]});
    }
  }
  o.payload["specialization"] = order;
  return o;
}

Outcome cmd_presheaf(const RunConfig& cfg) {
  const CausalDag g = load_dag(cfg);
  const std::string& x = cfg.object.empty() ? single(cfg.x, "-x") : cfg.object;
  const SetFunctor p = causal_presheaf(g, x, cfg.limits);
  Outcome o;
  o.payload["object"] = x;
  o.payload["sizes"] = sizes(p);
  o.payload["presheaf"] = io::functor_to_json(p, false);
  return o;
}

DiscreteScm load_scm(const RunConfig& cfg, std::size_t k = 0) { return io::scm_from_json(load(cfg, k, "SCM")); }

Outcome cmd_joint(const RunConfig& cfg) {
  const JointTable t = joint_distribution(load_scm(cfg), cfg.limits);
  Outcome o;
  o.payload = io::joint_to_json(t);
  o.payload["total"] = t.total();
  return o;
}

std::map<std::string, std::size_t> parse_assignment(const std::vector<std::string>& items) {
  std::map<std::string, std::size_t> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects VAR=VALUE, got '" + item + "'");
    const std::string value = item.substr(eq + 1);
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--set expects a non-negative integer value, got '" + item + "'");
    }
    out[item.substr(0, eq)] = std::stoul(value);
  }
  return out;
}

Outcome cmd_do(const RunConfig& cfg) {
  const auto assignment = parse_assignment(cfg.set);
  const JointTable t = do_distribution(load_scm(cfg), assignment, cfg.limits);
  Outcome o;
  o.payload["intervention"] = assignment;
  o.payload["distribution"] = io::joint_to_json(t);
  o.payload["total"] = t.total();
  return o;
}

Outcome cmd_adjust(const RunConfig& cfg) {
  const DiscreteScm m = load_scm(cfg);
  const std::string& x = single(cfg.x, "-x");
  const std::string& y = single(cfg.y, "-y");
  Outcome o;
  o.payload["treatment"] = x;
  o.payload["value"] = cfg.value;
  o.payload["outcome"] = y;
  o.payload["z"] = cfg.z;
  o.payload["distribution"] = adjustment_estimate(m, x, cfg.value, y, cfg.z, cfg.limits);
  return o;
}

Outcome cmd_ate(const RunConfig& cfg) {
  const DiscreteScm m = load_scm(cfg);
  Outcome o;
  o.payload["treatment"] = single(cfg.x, "-x");
  o.payload["outcome"] = single(cfg.y, "-y");
  o.payload["ate"] = ate_exact(m, cfg.x.front(), cfg.y.front(), {}, cfg.limits);
  return o;
}

Outcome cmd_confounded(const RunConfig& cfg) {
  const DiscreteScm m = load_scm(cfg);
  const auto r = is_confounded(m, single(cfg.x, "-x"), single(cfg.y, "-y"), cfg.limits);
  Outcome o;
  o.payload["treatment"] = cfg.x.front();
  o.payload["outcome"] = cfg.y.front();
  o.payload["confounded"] = r.confounded;
  o.payload["max_gap"] = r.max_gap;
  o.payload["skipped"] = r.skipped;
  return o;
}

Outcome cmd_sample(const RunConfig& cfg) {
  const Dataset d = sample(load_scm(cfg), cfg.n, cfg.seed);
  std::ostringstream csv;
  write_csv(csv, d);
  Outcome o;
  o.payload["rows"] = d.rows.size();
  o.payload["columns"] = d.columns;
  o.payload["seed"] = d.seed;
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) throw UsageError("cannot write '" + cfg.output + "'");
    out << csv.str();
    o.payload["output"] = cfg.output;
  } else {
    o.payload["csv"] = csv.str();
  }
  return o;
}

Outcome cmd_ht(const RunConfig& cfg) {
  std::ifstream in(input(cfg, 0, "dataset CSV"));
  if (!in) throw UsageError("cannot read file '" + cfg.inputs[0] + "'");
  const Dataset d = read_csv(in);
  const std::string& t = single(cfg.x, "-x");
  const std::string& y = single(cfg.y, "-y");
  const json pj = load(cfg, 1, "propensity model or SCM");
  const PropensityModel p = pj.contains("dag") ? true_propensity(io::scm_from_json(pj), t) : io::propensity_from_json(pj);
  Outcome o;
  o.payload["treatment"] = t;
  o.payload["outcome"] = y;
  o.payload["rows"] = d.rows.size();
  o.payload["estimate"] = ht_estimate(d, t, y, p);
  return o;
}

Outcome cmd_confound_kan(const RunConfig& cfg) {
  const FinCategory c = io::load_category(load(cfg, 0, "category"), cfg.limits, dir_of(cfg, 0));
  const std::string& x = cfg.object.empty() ? single(cfg.x, "-x") : cfg.object;
  if (cfg.observable.empty()) throw UsageError("--observable is required");
  const auto r = confounder_approximation(c, cfg.observable, x, cfg.limits);
  Outcome o;
  o.payload["object"] = x;
  o.payload["observable"] = cfg.observable;
  o.payload["rows"] = json::array();
  bool hidden_disagrees = false;
  for (const auto& row : r.rows) {
    o.payload["rows"].push_back({{"object", row.object},
                                 {"observable", row.observable},
                                 {"true_size", row.true_size},
                                 {"left_size", row.left_size},
                                 {"right_size", row.right_size},
                                 {"left_agrees", row.left_agrees},
                                 {"right_agrees", row.right_agrees}});
    if (!row.observable && (!row.left_agrees || !row.right_agrees)) hidden_disagrees = true;
  }
  o.payload["disagreement_on_unobserved"] = hidden_disagrees;
  return o;
}

const std::map<std::string, std::function<Outcome(const RunConfig&)>>& commands() {
  static const std::map<std::string, std::function<Outcome(const RunConfig&)>> table{
      {"validate", cmd_validate},   {"free-cat", cmd_free_cat},       {"nats", cmd_nats},
      {"yoneda", cmd_yoneda},       {"crp", cmd_crp},                 {"uct", cmd_uct},
      {"kan", cmd_kan},             {"dsep", cmd_dsep},               {"backdoor", cmd_backdoor},
      {"intervene", cmd_intervene}, {"alexandroff", cmd_alexandroff}, {"presheaf", cmd_presheaf},
      {"joint", cmd_joint},         {"do", cmd_do},                   {"adjust", cmd_adjust},
      {"ate", cmd_ate},             {"confounded", cmd_confounded},   {"sample", cmd_sample},
      {"ht", cmd_ht},               {"confound-kan", cmd_confound_kan}};
  return table;
}

void emit(std::ostream& out, const RunConfig& cfg, const std::string& status, const json& payload, double ms) {
  if (cfg.format == "text") {
    if (cfg.command == "sample" && status == "ok" && payload.contains("csv")) {
      out << payload["csv"].get<std::string>();
      return;
    }
    out << cfg.command << ": " << status << "\n";
    for (const auto& [k, v] : payload.items()) out << "  " << k << ": " << v.dump() << "\n";
    return;
  }
  json report;
  report["command"] = cfg.command;
  report["status"] = status;
  report["payload"] = payload;
  report["ms"] = ms;
  out << report.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Finite category theory and discrete causal inference engine", "unicausal"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.add_option("-i,--input", cfg.inputs, "Input file (repeatable)");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--max-objects", cfg.limits.max_objects, "Size guard on category objects");
  app.add_option("--max-morphisms", cfg.limits.max_morphisms, "Size guard on category morphisms");
  app.add_option("--max-set", cfg.limits.max_set, "Size guard on functor element sets");
  app.add_option("--max-assignments", cfg.limits.max_assignments, "Size guard on exhaustive searches");

  auto vars = [](CLI::App* s, const char* flag, std::vector<std::string>& v, const char* help) {
    s->add_option(flag, v, help)->delimiter(',');
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, _] : commands()) subs[name] = app.add_subcommand(name);
  subs["validate"]->description("Validate a category, functor, diagram, DAG or SCM file");
  subs["free-cat"]->description("Free category on a quiver or DAG");
  subs["nats"]->description("Enumerate natural transformations between two functors");
  subs["nats"]->add_flag("--bijective", cfg.bijective, "Only natural isomorphisms");
  subs["yoneda"]->description("Yoneda bijection for a presheaf at an object");
  subs["yoneda"]->add_option("--object", cfg.object, "Representing object")->required();
  subs["crp"]->description("Hom(X,Y) against Nat(Hom(-,X),Hom(-,Y))");
  subs["crp"]->add_option("--source", cfg.source, "Object X");
  subs["crp"]->add_option("--target", cfg.target, "Object Y");
  subs["uct"]->description("Presheaf as the colimit of representables over its elements");
  subs["kan"]->description("Pointwise Kan extension of a set functor along a functor");
  subs["kan"]->add_option("--mode", cfg.mode, "left or right")->check(CLI::IsMember({"left", "right"}));
  subs["dsep"]->description("d-separation test");
  subs["backdoor"]->description("Back-door criterion");
  subs["intervene"]->description("Remove edges entering the targets");
  subs["alexandroff"]->description("Alexandroff topology of a DAG");
  subs["presheaf"]->description("Directed paths into a variable as a presheaf");
  subs["presheaf"]->add_option("--object", cfg.object, "Variable");
  subs["joint"]->description("Joint distribution of an SCM");
  subs["do"]->description("Interventional distribution");
  subs["do"]->add_option("--set", cfg.set, "VAR=VALUE (repeatable)")->delimiter(',');
  subs["adjust"]->description("Adjustment formula");
  subs["adjust"]->add_option("--value", cfg.value, "Treatment value");
  subs["ate"]->description("Exact average treatment effect");
  subs["confounded"]->description("Compare P(Y|do(X)) with P(Y|X)");
  subs["sample"]->description("Ancestral sampling to CSV");
  subs["sample"]->add_option("-n,--rows", cfg.n, "Number of rows");
  subs["sample"]->add_option("-o,--output", cfg.output, "CSV output path");
  subs["ht"]->description("Horvitz-Thompson estimate from a CSV and a propensity model or SCM");
  subs["confound-kan"]->description("Kan approximation of a representable with hidden objects");
  subs["confound-kan"]->add_option("--observable", cfg.observable, "Observable objects")->delimiter(',');
  subs["confound-kan"]->add_option("--object", cfg.object, "Representing object");
  for (const char* name : {"dsep", "backdoor", "adjust", "ate", "confounded", "ht", "intervene", "presheaf",
                           "confound-kan"}) {
    vars(subs[name], "-x", cfg.x, "Treatment, target or first variable set");
  }
  for (const char* name : {"dsep", "backdoor", "adjust", "ate", "confounded", "ht"}) {
    vars(subs[name], "-y", cfg.y, "Outcome or second variable set");
  }
  for (const char* name : {"dsep", "backdoor", "adjust"}) vars(subs[name], "-z", cfg.z, "Conditioning set");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) cfg.command = name;
    }
    emit(out, cfg, "error", json{{"error", e.what()}}, 0.0);
    return usage;
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cfg.command = name;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    const Outcome o = commands().at(cfg.command)(cfg);
    emit(out, cfg, o.violation ? "violation" : "ok", o.payload, elapsed());
    return o.violation ? violation : ok;
  } catch (const SizeGuardError& e) {
    emit(out, cfg, "error",
         json{{"error", e.what()}, {"guard", e.guard()}, {"limit", e.limit()}, {"requested", e.requested()}}, elapsed());
  } catch (const std::exception& e) {
    emit(out, cfg, "error", json{{"error", e.what()}}, elapsed());
  }
  return usage;
}

}  // namespace unicausal::cli
