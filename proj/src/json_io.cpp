#include "unicausal/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace unicausal::io {

namespace {

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object()) throw Error(std::string(what) + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw Error(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(std::string(what) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string text(const json& j, const char* what) {
  if (!j.is_string()) throw Error(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::vector<std::size_t> parse_key(const std::string& key, std::size_t arity) {
  std::vector<std::size_t> out;
  if (!key.empty()) {
    std::stringstream s(key);
    std::string part;
    while (std::getline(s, part, ',')) {
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != part.size() || part.front() == '-') throw Error("bad stratum key \"" + key + "\"");
      out.push_back(v);
    }
  }
  if (out.size() != arity) throw Error("stratum key \"" + key + "\" has the wrong number of values");
  return out;
}

std::string make_key(const std::vector<std::size_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

FinCategory category_from_json(const json& j, const Limits& limits) {
  CategoryDescription d;
  d.objects = string_list(field(j, "objects", "category"), "\"objects\"");
  if (j.contains("morphisms")) {
    for (const auto& m : j.at("morphisms")) {
      d.morphisms.push_back({text(field(m, "name", "morphism"), "morphism name"), text(field(m, "dom", "morphism"), "dom"),
                             text(field(m, "cod", "morphism"), "cod")});
    }
  }
  if (j.contains("identities")) {
    for (const auto& [obj, id] : j.at("identities").items()) d.identities[obj] = text(id, "identity");
  }
  if (j.contains("compose")) {
    for (const auto& c : j.at("compose")) {
      d.compose.push_back({text(field(c, "f", "composite"), "f"), text(field(c, "g", "composite"), "g"),
                           text(field(c, "gf", "composite"), "gf")});
    }
  }
  return FinCategory::from_description(d, limits);
}

json category_to_json(const FinCategory& c) {
  json j;
  j["objects"] = json::array();
  for (std::size_t o = 0; o < c.num_objects(); ++o) j["objects"].push_back(c.object_name(o));
  j["morphisms"] = json::array();
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    const auto& mor = c.morphism(m);
    j["morphisms"].push_back({{"name", mor.name}, {"dom", c.object_name(mor.dom)}, {"cod", c.object_name(mor.cod)}});
  }
  j["identities"] = json::object();
  for (std::size_t o = 0; o < c.num_objects(); ++o) j["identities"][c.object_name(o)] = c.morphism_name(c.identity(o));
  j["compose"] = json::array();
  for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
    if (c.is_identity(f)) continue;
    for (std::size_t g : c.outgoing(c.cod(f))) {
      if (c.is_identity(g)) continue;
      j["compose"].push_back({{"f", c.morphism_name(f)}, {"g", c.morphism_name(g)},
                              {"gf", c.morphism_name(c.compose(g, f))}});
    }
  }
  return j;
}

Quiver quiver_from_json(const json& j) {
  Quiver q;
  q.vertices = string_list(field(j, "nodes", "quiver"), "\"nodes\"");
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      q.arrows.push_back({text(field(e, "label", "edge"), "label"), text(field(e, "src", "edge"), "src"),
                          text(field(e, "dst", "edge"), "dst")});
    }
  }
  return q;
}

json quiver_to_json(const Quiver& q) {
  json j;
  j["nodes"] = q.vertices;
  j["edges"] = json::array();
  for (const auto& a : q.arrows) j["edges"].push_back({{"label", a.label}, {"src", a.source}, {"dst", a.target}});
  return j;
}

CausalDag dag_from_json(const json& j) {
  auto vars = string_list(field(j, "variables", "DAG"), "\"variables\"");
  std::vector<std::pair<std::string, std::string>> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error("DAG edges must be [parent, child] pairs");
      edges.emplace_back(text(e[0], "edge endpoint"), text(e[1], "edge endpoint"));
    }
  }
  return CausalDag::create(std::move(vars), edges);
}

json dag_to_json(const CausalDag& g) {
  json j;
  j["variables"] = g.variables();
  j["edges"] = json::array();
  for (const auto& [p, c] : g.named_edges()) j["edges"].push_back({p, c});
  return j;
}

namespace {

json resolve(const json& j, const std::filesystem::path& base, std::filesystem::path& where) {
  where = base;
  if (!j.is_string()) return j;
  std::filesystem::path p = j.get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  where = p.parent_path();
  return read_json_file(p);
}

}  // namespace

FinCategory load_category(const json& raw, const Limits& limits, const std::filesystem::path& base) {
  std::filesystem::path where;
  const json j = resolve(raw, base, where);
  if (j.is_object() && j.contains("objects")) return category_from_json(j, limits);
  if (j.is_object() && j.contains("nodes")) return free_category(quiver_from_json(j), limits);
  if (j.is_object() && j.contains("variables")) return free_category(to_quiver(dag_from_json(j)), limits);
  if (j.is_object() && j.contains("dag")) return free_category(to_quiver(dag_from_json(j.at("dag"))), limits);
  throw Error("expected a category, a quiver or a DAG");
}

SetFunctor functor_from_json(const json& raw, const Limits& limits, const std::filesystem::path& base) {
  std::filesystem::path where;
  const json j = resolve(raw, base, where);
  const FinCategory c = load_category(field(j, "category", "functor"), limits, where);
  Variance variance = Variance::covariant;
  if (j.contains("variance")) {
    const std::string v = text(j.at("variance"), "variance");
    if (v == "contra" || v == "contravariant") {
      variance = Variance::contravariant;
    } else if (v != "co" && v != "covariant") {
      throw Error("variance must be \"co\" or \"contra\"");
    }
  }

  SetFunctorDescription d{c, variance, std::vector<std::vector<std::string>>(c.num_objects()), {}};
  std::vector<bool> given(c.num_objects(), false);
  for (const auto& [obj, elems] : field(j, "on_objects", "functor").items()) {
    const auto o = c.find_object(obj);
    if (!o) throw Error("functor names unknown object '" + obj + "'");
    d.elements[*o] = string_list(elems, "element list");
    given[*o] = true;
  }
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    if (!given[o]) throw Error("functor gives no set for object '" + c.object_name(o) + "'");
  }
  auto index_of = [&](std::size_t obj, const std::string& e) -> std::size_t {
    const auto& v = d.elements[obj];
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == e) return i;
    }
    throw Error("unknown element '" + e + "' at '" + c.object_name(obj) + "'");
  };
  auto reads = [&](std::size_t m) { return variance == Variance::covariant ? c.dom(m) : c.cod(m); };
  auto writes = [&](std::size_t m) { return variance == Variance::covariant ? c.cod(m) : c.dom(m); };

  d.actions.assign(c.num_morphisms(), {});
  std::vector<bool> known(c.num_morphisms(), false);
  if (j.contains("on_morphisms")) {
    for (const auto& [name, table] : j.at("on_morphisms").items()) {
      const auto m = c.find_morphism(name);
      if (!m) throw Error("functor names unknown morphism '" + name + "'");
      if (!table.is_object()) throw Error("action of '" + name + "' must be an object");
      std::vector<std::size_t> act(d.elements[reads(*m)].size(), npos);
      for (const auto& [x, y] : table.items()) {
        act[index_of(reads(*m), x)] = index_of(writes(*m), text(y, "element"));
      }
      for (std::size_t v : act) {
        if (v == npos) throw Error("action of '" + name + "' is not total");
      }
      d.actions[*m] = std::move(act);
      known[*m] = true;
    }
  }
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    const std::size_t id = c.identity(o);
    if (known[id]) continue;
    for (std::size_t i = 0; i < d.elements[o].size(); ++i) d.actions[id].push_back(i);
    known[id] = true;
  }
  // Fill composites from listed factors until nothing changes.
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
      if (!known[f] || c.is_identity(f)) continue;
      for (std::size_t g : c.outgoing(c.cod(f))) {
        const std::size_t gf = c.compose(g, f);
        if (!known[g] || c.is_identity(g) || known[gf]) continue;
        std::vector<std::size_t> act;
        if (variance == Variance::covariant) {
          for (std::size_t x : d.actions[f]) act.push_back(d.actions[g][x]);
        } else {
          for (std::size_t x : d.actions[g]) act.push_back(d.actions[f][x]);
        }
        d.actions[gf] = std::move(act);
        known[gf] = progress = true;
      }
    }
  }
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    if (!known[m]) throw Error("functor gives no action for morphism '" + c.morphism_name(m) + "'");
  }
  SetFunctor f = SetFunctor::create(std::move(d));
  f.check_limits(limits);
  return f;
}

json functor_to_json(const SetFunctor& f, bool inline_category) {
  const auto& c = f.base();
  json j;
  if (inline_category) j["category"] = category_to_json(c);
  j["variance"] = f.is_presheaf() ? "contra" : "co";
  j["on_objects"] = json::object();
  for (std::size_t o = 0; o < c.num_objects(); ++o) j["on_objects"][c.object_name(o)] = f.elements(o);
  j["on_morphisms"] = json::object();
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    json table = json::object();
    const std::size_t from = f.action_source(m);
    const std::size_t to = f.action_target(m);
    for (std::size_t x = 0; x < f.size(from); ++x) table[f.elements(from)[x]] = f.elements(to)[f.apply(m, x)];
    j["on_morphisms"][c.morphism_name(m)] = std::move(table);
  }
  return j;
}

namespace {

CatFunctor cat_functor_between(const FinCategory& s, const FinCategory& t, const json& j) {
  FunctorDescription d{s, t, std::vector<std::size_t>(s.num_objects(), npos),
                       std::vector<std::size_t>(s.num_morphisms(), npos)};
  for (const auto& [a, x] : field(j, "on_objects", "functor").items()) {
    const auto o = s.find_object(a);
    if (!o) throw Error("functor names unknown source object '" + a + "'");
    d.object_map[*o] = t.object_index(text(x, "object"));
  }
  if (j.contains("on_morphisms")) {
    for (const auto& [f, g] : j.at("on_morphisms").items()) {
      const auto m = s.find_morphism(f);
      if (!m) throw Error("functor names unknown source morphism '" + f + "'");
      d.morphism_map[*m] = t.morphism_index(text(g, "morphism"));
    }
  }
  for (std::size_t o = 0; o < s.num_objects(); ++o) {
    if (d.object_map[o] == npos) throw Error("functor does not map object '" + s.object_name(o) + "'");
    if (d.morphism_map[s.identity(o)] == npos) d.morphism_map[s.identity(o)] = t.identity(d.object_map[o]);
  }
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t f = 0; f < s.num_morphisms(); ++f) {
      if (d.morphism_map[f] == npos) continue;
      for (std::size_t g : s.outgoing(s.cod(f))) {
        const std::size_t gf = s.compose(g, f);
        if (d.morphism_map[g] == npos || d.morphism_map[gf] != npos) continue;
        if (t.cod(d.morphism_map[f]) != t.dom(d.morphism_map[g])) continue;
        d.morphism_map[gf] = t.compose(d.morphism_map[g], d.morphism_map[f]);
        progress = true;
      }
    }
  }
  for (std::size_t m = 0; m < s.num_morphisms(); ++m) {
    if (d.morphism_map[m] == npos) throw Error("functor does not map morphism '" + s.morphism_name(m) + "'");
  }
  return CatFunctor::create(std::move(d));
}

}  // namespace

CatFunctor cat_functor_from_json(const json& raw, const Limits& limits, const std::filesystem::path& base) {
  std::filesystem::path where;
  const json j = resolve(raw, base, where);
  const FinCategory s = load_category(field(j, "source", "functor"), limits, where);
  const FinCategory t = load_category(field(j, "target", "functor"), limits, where);
  return cat_functor_between(s, t, j);
}

json cat_functor_to_json(const CatFunctor& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  json j;
  j["source"] = category_to_json(s);
  j["target"] = category_to_json(t);
  j["on_objects"] = json::object();
  for (std::size_t o = 0; o < s.num_objects(); ++o) j["on_objects"][s.object_name(o)] = t.object_name(f.on_object(o));
  j["on_morphisms"] = json::object();
  for (std::size_t m = 0; m < s.num_morphisms(); ++m) {
    j["on_morphisms"][s.morphism_name(m)] = t.morphism_name(f.on_morphism(m));
  }
  return j;
}

std::variant<SetFunctor, CatFunctor> diagram_from_json(const json& raw, const Limits& limits,
                                                       const std::filesystem::path& base) {
  std::filesystem::path where;
  const json j = resolve(raw, base, where);
  const json& target = field(j, "target", "diagram");
  if (target.is_string() && target.get<std::string>() == "set") {
    json f = j;
    f["category"] = j.at("index");
    f["variance"] = "co";
    return functor_from_json(f, limits, where);
  }
  const FinCategory index = load_category(field(j, "index", "diagram"), limits, where);
  const FinCategory t = load_category(target, limits, where);
  return cat_functor_between(index, t, j);
}

DiscreteScm scm_from_json(const json& j) {
  CausalDag dag = dag_from_json(field(j, "dag", "SCM"));
  const json& card = field(j, "card", "SCM");
  const json& cpt = field(j, "cpt", "SCM");
  std::vector<std::size_t> cards(dag.size(), 0);
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const auto it = card.find(dag.name(v));
    if (it == card.end() || !it->is_number_unsigned()) {
      throw Error("SCM gives no cardinality for '" + dag.name(v) + "'");
    }
    cards[v] = it->get<std::size_t>();
  }
  for (const auto& [name, _] : card.items()) dag.index(name);
  for (const auto& [name, _] : cpt.items()) dag.index(name);

  std::vector<std::vector<std::vector<double>>> tables(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const std::string& name = dag.name(v);
    const auto it = cpt.find(name);
    if (it == cpt.end()) throw Error("SCM gives no table for '" + name + "'");
    const auto listed = it->contains("parents") ? string_list(it->at("parents"), "\"parents\"")
                                                : std::vector<std::string>{};
    const auto& parents = dag.parents(v);
    std::set<std::size_t> a(parents.begin(), parents.end());
    std::vector<std::size_t> listed_idx = dag.indices(listed);
    if (std::set<std::size_t>(listed_idx.begin(), listed_idx.end()) != a || listed_idx.size() != a.size()) {
      throw Error("table of '" + name + "' lists parents that differ from the DAG");
    }
    std::vector<std::size_t> radix;
    for (std::size_t p : parents) radix.push_back(cards[p]);
    std::size_t rows = 1;
    for (std::size_t r : radix) rows *= r;
    tables[v].assign(rows, {});
    std::vector<bool> seen(rows, false);
    for (const auto& [key, row] : field(*it, "rows", "table").items()) {
      const auto values = parse_key(key, listed.size());
      std::size_t code = 0;
      for (std::size_t k = 0; k < parents.size(); ++k) {
        std::size_t pos = 0;
        while (listed_idx[pos] != parents[k]) ++pos;
        if (values[pos] >= radix[k]) throw Error("row key \"" + key + "\" of '" + name + "' is out of range");
        code = code * radix[k] + values[pos];
      }
      if (seen[code]) throw Error("row key \"" + key + "\" of '" + name + "' repeats a row");
      seen[code] = true;
      if (!row.is_array()) throw Error("rows of '" + name + "' must be arrays of probabilities");
      for (const auto& p : row) {
        if (!p.is_number()) throw Error("rows of '" + name + "' must be arrays of probabilities");
        tables[v][code].push_back(p.get<double>());
      }
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (!seen[r]) throw Error("table of '" + name + "' is missing a row");
    }
  }
  return DiscreteScm::create(std::move(dag), std::move(cards), std::move(tables));
}

json scm_to_json(const DiscreteScm& m) {
  const auto& g = m.dag();
  json j;
  j["dag"] = dag_to_json(g);
  j["card"] = json::object();
  for (std::size_t v = 0; v < g.size(); ++v) j["card"][g.name(v)] = m.cardinality(v);
  j["cpt"] = json::object();
  for (std::size_t v = 0; v < g.size(); ++v) {
    json entry;
    entry["parents"] = json::array();
    std::vector<std::size_t> radix;
    for (std::size_t p : g.parents(v)) {
      entry["parents"].push_back(g.name(p));
      radix.push_back(m.cardinality(p));
    }
    entry["rows"] = json::object();
    std::vector<std::size_t> digits(radix.size(), 0);
    std::size_t r = 0;
    do {
      entry["rows"][make_key(digits)] = m.table(v)[r++];
    } while (advance(digits, radix));
    j["cpt"][g.name(v)] = std::move(entry);
  }
  return j;
}

PropensityModel propensity_from_json(const json& j) {
  PropensityModel p;
  if (j.contains("covariates")) p.covariates = string_list(j.at("covariates"), "\"covariates\"");
  for (const auto& [key, e] : field(j, "strata", "propensity").items()) {
    if (!e.is_number()) throw Error("propensities must be numbers");
    p.strata[parse_key(key, p.covariates.size())] = e.get<double>();
  }
  return p;
}

json propensity_to_json(const PropensityModel& p) {
  json j;
  j["covariates"] = p.covariates;
  j["strata"] = json::object();
  for (const auto& [k, e] : p.strata) j["strata"][make_key(k)] = e;
  return j;
}

json nat_to_json(const NatTransformation& eta) {
  const auto& c = eta.source.base();
  json j = json::object();
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    json comp = json::object();
    for (std::size_t x = 0; x < eta.components[o].size(); ++x) {
      comp[eta.source.elements(o)[x]] = eta.target.elements(o)[eta.components[o][x]];
    }
    j[c.object_name(o)] = std::move(comp);
  }
  return j;
}

json joint_to_json(const JointTable& t) {
  json j;
  j["variables"] = t.variables();
  j["card"] = t.cardinalities();
  j["probabilities"] = t.probabilities();
  return j;
}

json space_to_json(const AlexandroffSpace& s) {
  json j;
  j["points"] = s.points();
  j["opens"] = json::array();
  for (const auto& o : s.opens()) {
    json names = json::array();
    for (std::size_t p : o) names.push_back(s.points()[p]);
    j["opens"].push_back(std::move(names));
  }
  return j;
}

}  // namespace unicausal::io
