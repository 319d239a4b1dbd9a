#include "unicausal/fincat.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace unicausal {

struct FinCategory::Data {
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<std::size_t> identities;
  // composites[f][k] = outgoing[cod f][k] after f
  std::vector<std::vector<std::size_t>> composites;
  std::vector<std::size_t> out_position;
  std::vector<std::size_t> hom_position;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::vector<std::size_t>> in;
  std::vector<bool> is_identity;
  std::unordered_map<std::size_t, std::vector<std::size_t>> homs;
  std::unordered_map<std::string, std::size_t> object_index;
  std::unordered_map<std::string, std::size_t> morphism_index;
};

namespace {

const std::vector<std::size_t>& empty_list() {
  static const std::vector<std::size_t> empty;
  return empty;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

FinCategory build_category(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                           std::vector<std::size_t> identities,
                           const std::function<std::size_t(std::size_t, std::size_t)>& compose) {
  auto d = std::make_shared<FinCategory::Data>();
  d->objects = std::move(objects);
  d->morphisms = std::move(morphisms);
  d->identities = std::move(identities);
  const std::size_t n = d->objects.size();
  d->out.assign(n, {});
  d->in.assign(n, {});
  d->out_position.assign(d->morphisms.size(), 0);
  d->is_identity.assign(d->morphisms.size(), false);
  for (std::size_t i = 0; i < n; ++i) {
    d->object_index.emplace(d->objects[i], i);
    d->is_identity[d->identities[i]] = true;
  }
  for (std::size_t m = 0; m < d->morphisms.size(); ++m) {
    const auto& mor = d->morphisms[m];
    d->morphism_index.emplace(mor.name, m);
    d->out_position[m] = d->out[mor.dom].size();
    d->out[mor.dom].push_back(m);
    d->in[mor.cod].push_back(m);
    auto& h = d->homs[mor.dom * n + mor.cod];
    d->hom_position.push_back(h.size());
    h.push_back(m);
  }
  d->composites.assign(d->morphisms.size(), {});
  for (std::size_t f = 0; f < d->morphisms.size(); ++f) {
    const auto& after = d->out[d->morphisms[f].cod];
    d->composites[f].reserve(after.size());
    for (std::size_t g : after) d->composites[f].push_back(compose(g, f));
  }
  return FinCategory(std::move(d));
}

FinCategory::FinCategory()
    : FinCategory(build_category({}, {}, {}, [](std::size_t, std::size_t) { return npos; })) {}

std::size_t FinCategory::num_objects() const noexcept { return data_->objects.size(); }
std::size_t FinCategory::num_morphisms() const noexcept { return data_->morphisms.size(); }

const std::string& FinCategory::object_name(std::size_t obj) const { return data_->objects.at(obj); }
const Morphism& FinCategory::morphism(std::size_t m) const { return data_->morphisms.at(m); }
std::size_t FinCategory::identity(std::size_t obj) const { return data_->identities.at(obj); }
bool FinCategory::is_identity(std::size_t m) const { return data_->is_identity.at(m); }

std::size_t FinCategory::compose(std::size_t g, std::size_t f) const {
  const auto& mf = morphism(f);
  const auto& mg = morphism(g);
  if (mf.cod != mg.dom) {
    throw Error("cannot compose " + mg.name + " after " + mf.name + ": not composable");
  }
  return data_->composites[f][data_->out_position[g]];
}

std::optional<std::size_t> FinCategory::find_object(std::string_view name) const {
  auto it = data_->object_index.find(std::string(name));
  if (it == data_->object_index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FinCategory::find_morphism(std::string_view name) const {
  auto it = data_->morphism_index.find(std::string(name));
  if (it == data_->morphism_index.end()) return std::nullopt;
  return it->second;
}

std::size_t FinCategory::object_index(std::string_view name) const {
  if (auto i = find_object(name)) return *i;
  throw Error("unknown object '" + std::string(name) + "'");
}

std::size_t FinCategory::morphism_index(std::string_view name) const {
  if (auto i = find_morphism(name)) return *i;
  throw Error("unknown morphism '" + std::string(name) + "'");
}

const std::vector<std::size_t>& FinCategory::hom(std::size_t x, std::size_t y) const {
  auto it = data_->homs.find(x * num_objects() + y);
  return it == data_->homs.end() ? empty_list() : it->second;
}

std::size_t FinCategory::hom_position(std::size_t m) const { return data_->hom_position.at(m); }

const std::vector<std::size_t>& FinCategory::outgoing(std::size_t x) const { return data_->out.at(x); }
const std::vector<std::size_t>& FinCategory::incoming(std::size_t x) const { return data_->in.at(x); }

CategoryDescription FinCategory::describe() const {
  CategoryDescription out;
  out.objects = data_->objects;
  for (const auto& m : data_->morphisms) {
    out.morphisms.push_back({m.name, data_->objects[m.dom], data_->objects[m.cod]});
  }
  for (std::size_t i = 0; i < num_objects(); ++i) {
    out.identities.emplace(data_->objects[i], data_->morphisms[data_->identities[i]].name);
  }
  for (std::size_t f = 0; f < num_morphisms(); ++f) {
    const auto& after = data_->out[data_->morphisms[f].cod];
    for (std::size_t k = 0; k < after.size(); ++k) {
      out.compose.push_back({data_->morphisms[f].name, data_->morphisms[after[k]].name,
                             data_->morphisms[data_->composites[f][k]].name});
    }
  }
  return out;
}

bool FinCategory::operator==(const FinCategory& other) const {
  if (data_ == other.data_) return true;
  return data_->objects == other.data_->objects && data_->morphisms == other.data_->morphisms &&
         data_->identities == other.data_->identities &&
         data_->composites == other.data_->composites;
}

// ---------------------------------------------------------------------------
// Validation of raw descriptions

namespace {

struct Normalized {
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<std::size_t> identities;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> table;  // (g, f) -> gf
  bool structurally_sound = true;
};

Normalized normalize(const CategoryDescription& raw, std::vector<std::string>& violations) {
  Normalized n;
  std::unordered_map<std::string, std::size_t> obj;
  for (const auto& o : raw.objects) {
    if (!obj.emplace(o, n.objects.size()).second) {
      violations.push_back("duplicate object '" + o + "'");
      n.structurally_sound = false;
      continue;
    }
    n.objects.push_back(o);
  }
  std::unordered_map<std::string, std::size_t> mor;
  for (const auto& a : raw.morphisms) {
    auto d = obj.find(a.dom);
    auto c = obj.find(a.cod);
    if (d == obj.end() || c == obj.end()) {
      violations.push_back("morphism '" + a.name + "' refers to an unknown object");
      n.structurally_sound = false;
      continue;
    }
    if (!mor.emplace(a.name, n.morphisms.size()).second) {
      violations.push_back("duplicate morphism '" + a.name + "'");
      n.structurally_sound = false;
      continue;
    }
    n.morphisms.push_back({a.name, d->second, c->second});
  }
  for (const auto& [o, m] : raw.identities) {
    if (!obj.count(o)) {
      violations.push_back("identity declared for unknown object '" + o + "'");
      n.structurally_sound = false;
    }
  }
  n.identities.assign(n.objects.size(), npos);
  for (std::size_t i = 0; i < n.objects.size(); ++i) {
    const auto& o = n.objects[i];
    std::string id_name = "id_" + o;
    if (auto it = raw.identities.find(o); it != raw.identities.end()) id_name = it->second;
    auto m = mor.find(id_name);
    if (m == mor.end()) {
      if (raw.identities.count(o)) {
        violations.push_back("identity '" + id_name + "' of '" + o + "' is not a declared morphism");
        n.structurally_sound = false;
        continue;
      }
      mor.emplace(id_name, n.morphisms.size());
      n.morphisms.push_back({id_name, i, i});
      n.identities[i] = n.morphisms.size() - 1;
      continue;
    }
    if (n.morphisms[m->second].dom != i || n.morphisms[m->second].cod != i) {
      violations.push_back("identity '" + id_name + "' of '" + o + "' is not an endomorphism of it");
      n.structurally_sound = false;
      continue;
    }
    n.identities[i] = m->second;
  }

  for (const auto& c : raw.compose) {
    auto f = mor.find(c.f);
    auto g = mor.find(c.g);
    auto gf = mor.find(c.gf);
    if (f == mor.end() || g == mor.end() || gf == mor.end()) {
      violations.push_back("composite (" + c.g + "," + c.f + ") = " + c.gf +
                           " refers to an unknown morphism");
      n.structurally_sound = false;
      continue;
    }
    const auto key = std::make_pair(g->second, f->second);
    if (n.morphisms[f->second].cod != n.morphisms[g->second].dom) {
      violations.push_back("composite listed for non-composable pair (" + c.g + "," + c.f + ")");
      continue;
    }
    auto [it, inserted] = n.table.emplace(key, gf->second);
    if (!inserted && it->second != gf->second) {
      violations.push_back("conflicting composites for (" + c.g + "," + c.f + ")");
    }
  }
  if (!n.structurally_sound) return n;

  // Identity composites are implied when not listed.
  for (std::size_t f = 0; f < n.morphisms.size(); ++f) {
    n.table.emplace(std::make_pair(n.identities[n.morphisms[f].cod], f), f);
    n.table.emplace(std::make_pair(f, n.identities[n.morphisms[f].dom]), f);
  }
  return n;
}

void check_axioms(const Normalized& n, std::vector<std::string>& violations) {
  const auto& ms = n.morphisms;
  auto name = [&](std::size_t m) { return ms[m].name; };
  std::vector<std::vector<std::size_t>> out(n.objects.size());
  for (std::size_t m = 0; m < ms.size(); ++m) out[ms[m].dom].push_back(m);

  bool total = true;
  for (std::size_t f = 0; f < ms.size(); ++f) {
    for (std::size_t g : out[ms[f].cod]) {
      auto it = n.table.find({g, f});
      if (it == n.table.end()) {
        violations.push_back("missing composite (" + name(g) + "," + name(f) + ")");
        total = false;
        continue;
      }
      const auto& gf = ms[it->second];
      if (gf.dom != ms[f].dom || gf.cod != ms[g].cod) {
        violations.push_back("composite (" + name(g) + "," + name(f) + ") = " + gf.name +
                             " has the wrong domain or codomain");
        total = false;
      }
    }
  }
  for (std::size_t f = 0; f < ms.size(); ++f) {
    const std::size_t left = n.identities[ms[f].cod];
    const std::size_t right = n.identities[ms[f].dom];
    auto l = n.table.find({left, f});
    auto r = n.table.find({f, right});
    if (l != n.table.end() && l->second != f) {
      violations.push_back("identity law fails: " + name(left) + " after " + name(f));
    }
    if (r != n.table.end() && r->second != f) {
      violations.push_back("identity law fails: " + name(f) + " after " + name(right));
    }
  }
  if (!total) return;
  for (std::size_t f = 0; f < ms.size(); ++f) {
    for (std::size_t g : out[ms[f].cod]) {
      const std::size_t gf = n.table.at({g, f});
      for (std::size_t h : out[ms[g].cod]) {
        const std::size_t hg = n.table.at({h, g});
        if (n.table.at({h, gf}) != n.table.at({hg, f})) {
          violations.push_back("associativity fails for (" + name(h) + "," + name(g) + "," +
                               name(f) + ")");
        }
      }
    }
  }
}

}  // namespace

ValidationReport validate_category(const CategoryDescription& raw) {
  ValidationReport report;
  Normalized n = normalize(raw, report.violations);
  if (n.structurally_sound) check_axioms(n, report.violations);
  return report;
}

FinCategory FinCategory::from_description(const CategoryDescription& raw, const Limits& limits) {
  std::vector<std::string> violations;
  Normalized n = normalize(raw, violations);
  detail::guard("max_objects", limits.max_objects, n.objects.size());
  detail::guard("max_morphisms", limits.max_morphisms, n.morphisms.size());
  if (n.structurally_sound) check_axioms(n, violations);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid category: " << violations.front();
    if (violations.size() > 1) msg << " (and " << violations.size() - 1 << " more)";
    throw Error(msg.str());
  }
  return build_category(std::move(n.objects), std::move(n.morphisms), std::move(n.identities),
                        [&](std::size_t g, std::size_t f) { return n.table.at({g, f}); });
}

// ---------------------------------------------------------------------------
// Generated categories

FinCategory free_category(const Quiver& q, const Limits& limits) {
  std::unordered_map<std::string, std::size_t> vertex;
  for (const auto& v : q.vertices) {
    if (!vertex.emplace(v, vertex.size()).second) throw Error("duplicate quiver vertex '" + v + "'");
  }
  const std::size_t nv = q.vertices.size();
  std::set<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> arrows;
  for (const auto& a : q.arrows) {
    if (!labels.insert(a.label).second) throw Error("duplicate quiver arrow '" + a.label + "'");
    auto s = vertex.find(a.source);
    auto t = vertex.find(a.target);
    if (s == vertex.end() || t == vertex.end()) {
      throw Error("arrow '" + a.label + "' refers to an undeclared vertex");
    }
    arrows.emplace_back(s->second, t->second);
  }
  detail::guard("max_objects", limits.max_objects, nv);

  std::vector<std::vector<std::size_t>> out(nv);
  std::vector<std::size_t> indegree(nv, 0);
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    out[arrows[a].first].push_back(a);
    ++indegree[arrows[a].second];
  }
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < nv; ++v) {
    if (indegree[v] == 0) stack.push_back(v);
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (std::size_t a : out[v]) {
      if (--indegree[arrows[a].second] == 0) stack.push_back(arrows[a].second);
    }
  }
  if (order.size() != nv) throw Error("free category is infinite on cyclic quiver");

  // Count before materializing.
  std::vector<std::size_t> paths_from(nv, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (std::size_t a : out[*it]) {
      paths_from[*it] = std::min<std::size_t>(paths_from[*it] + paths_from[arrows[a].second],
                                              limits.max_morphisms + 1);
    }
  }
  std::size_t total = 0;
  for (std::size_t c : paths_from) total = std::min(total + c, limits.max_morphisms + 1);
  detail::guard("max_morphisms", limits.max_morphisms, total);

  std::vector<std::vector<std::size_t>> paths;
  std::vector<std::size_t> current;
  std::function<void(std::size_t)> extend = [&](std::size_t v) {
    for (std::size_t a : out[v]) {
      current.push_back(a);
      paths.push_back(current);
      extend(arrows[a].second);
      current.pop_back();
    }
  };
  for (std::size_t v = 0; v < nv; ++v) extend(v);

  auto label_seq = [&](const std::vector<std::size_t>& p) {
    std::vector<std::string> s;
    for (std::size_t a : p) s.push_back(q.arrows[a].label);
    return s;
  };
  std::sort(paths.begin(), paths.end(),
            [&](const auto& x, const auto& y) { return label_seq(x) < label_seq(y); });

  std::vector<Morphism> morphisms;
  std::vector<std::size_t> identities;
  std::map<std::vector<std::size_t>, std::size_t> path_index;
  for (std::size_t v = 0; v < nv; ++v) {
    identities.push_back(morphisms.size());
    morphisms.push_back({"id_" + q.vertices[v], v, v});
  }
  for (const auto& p : paths) {
    auto labels_in_order = label_seq(p);
    std::reverse(labels_in_order.begin(), labels_in_order.end());
    path_index[p] = morphisms.size();
    morphisms.push_back({join(labels_in_order, "."), arrows[p.front()].first,
                         arrows[p.back()].second});
  }
  std::vector<std::vector<std::size_t>> path_of(morphisms.size());
  for (const auto& p : paths) path_of[path_index[p]] = p;

  return build_category(
      q.vertices, morphisms, identities, [&](std::size_t g, std::size_t f) -> std::size_t {
        if (g < nv) return f;
        if (f < nv) return g;
        std::vector<std::size_t> joined = path_of[f];
        joined.insert(joined.end(), path_of[g].begin(), path_of[g].end());
        return path_index.at(joined);
      });
}

FinCategory opposite(const FinCategory& c) {
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < c.num_objects(); ++i) objects.push_back(c.object_name(i));
  std::vector<Morphism> morphisms;
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    const auto& mor = c.morphism(m);
    morphisms.push_back({mor.name, mor.cod, mor.dom});
  }
  std::vector<std::size_t> identities;
  for (std::size_t i = 0; i < c.num_objects(); ++i) identities.push_back(c.identity(i));
  return build_category(std::move(objects), std::move(morphisms), std::move(identities),
                        [&](std::size_t g, std::size_t f) { return c.compose(f, g); });
}

FinCategory terminal_category() {
  return build_category({"*"}, {{"id_*", 0, 0}}, {0}, [](std::size_t, std::size_t) { return 0; });
}

// ---------------------------------------------------------------------------
// Functors

ValidationReport validate_functor(const FunctorDescription& f) {
  ValidationReport report;
  auto& v = report.violations;
  const auto& s = f.source;
  const auto& t = f.target;
  if (f.object_map.size() != s.num_objects()) v.push_back("object map is not total");
  if (f.morphism_map.size() != s.num_morphisms()) v.push_back("morphism map is not total");
  if (!v.empty()) return report;
  for (std::size_t o = 0; o < s.num_objects(); ++o) {
    if (f.object_map[o] >= t.num_objects()) v.push_back("object '" + s.object_name(o) + "' maps outside the target");
  }
  for (std::size_t m = 0; m < s.num_morphisms(); ++m) {
    if (f.morphism_map[m] >= t.num_morphisms()) v.push_back("morphism '" + s.morphism_name(m) + "' maps outside the target");
  }
  if (!v.empty()) return report;
  for (std::size_t m = 0; m < s.num_morphisms(); ++m) {
    const auto& src = s.morphism(m);
    const auto& img = t.morphism(f.morphism_map[m]);
    if (img.dom != f.object_map[src.dom] || img.cod != f.object_map[src.cod]) {
      v.push_back("morphism '" + src.name + "' is not sent between the images of its endpoints");
    }
  }
  for (std::size_t o = 0; o < s.num_objects(); ++o) {
    if (f.morphism_map[s.identity(o)] != t.identity(f.object_map[o])) {
      v.push_back("identity of '" + s.object_name(o) + "' is not preserved");
    }
  }
  if (!v.empty()) return report;
  for (std::size_t fm = 0; fm < s.num_morphisms(); ++fm) {
    for (std::size_t g : s.outgoing(s.cod(fm))) {
      if (f.morphism_map[s.compose(g, fm)] != t.compose(f.morphism_map[g], f.morphism_map[fm])) {
        v.push_back("composition not preserved for (" + s.morphism_name(g) + "," + s.morphism_name(fm) + ")");
      }
    }
  }
  return report;
}

CatFunctor CatFunctor::create(FunctorDescription desc) {
  auto report = validate_functor(desc);
  if (!report.valid()) throw Error("invalid functor: " + report.violations.front());
  return CatFunctor(std::make_shared<const FunctorDescription>(std::move(desc)));
}

CatFunctor identity_functor(const FinCategory& c) {
  FunctorDescription d{c, c, {}, {}};
  for (std::size_t i = 0; i < c.num_objects(); ++i) d.object_map.push_back(i);
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) d.morphism_map.push_back(m);
  return CatFunctor::create(std::move(d));
}

CatFunctor constant_functor(const FinCategory& target, std::size_t obj) {
  return CatFunctor::create({terminal_category(), target, {obj}, {target.identity(obj)}});
}

CatFunctor to_terminal(const FinCategory& c) {
  return CatFunctor::create({c, terminal_category(), std::vector<std::size_t>(c.num_objects(), 0),
                             std::vector<std::size_t>(c.num_morphisms(), 0)});
}

CatFunctor compose(const CatFunctor& g, const CatFunctor& f) {
  if (!(f.target() == g.source())) throw Error("functors are not composable");
  FunctorDescription d{f.source(), g.target(), {}, {}};
  for (std::size_t i = 0; i < f.source().num_objects(); ++i) d.object_map.push_back(g.on_object(f.on_object(i)));
  for (std::size_t m = 0; m < f.source().num_morphisms(); ++m) d.morphism_map.push_back(g.on_morphism(f.on_morphism(m)));
  return CatFunctor::create(std::move(d));
}

CatFunctor opposite(const CatFunctor& f) {
  const auto& d = f.describe();
  return CatFunctor::create({opposite(d.source), opposite(d.target), d.object_map, d.morphism_map});
}

FullSubcategory full_subcategory(const FinCategory& c, const std::vector<std::string>& keep) {
  std::vector<bool> kept(c.num_objects(), false);
  for (const auto& name : keep) kept[c.object_index(name)] = true;
  std::vector<std::size_t> new_index(c.num_objects(), npos);
  std::vector<std::string> objects;
  std::vector<std::size_t> object_map;
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    if (!kept[o]) continue;
    new_index[o] = objects.size();
    objects.push_back(c.object_name(o));
    object_map.push_back(o);
  }
  std::vector<Morphism> morphisms;
  std::vector<std::size_t> morphism_map;
  std::vector<std::size_t> new_morphism(c.num_morphisms(), npos);
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    const auto& mor = c.morphism(m);
    if (!kept[mor.dom] || !kept[mor.cod]) continue;
    new_morphism[m] = morphisms.size();
    morphisms.push_back({mor.name, new_index[mor.dom], new_index[mor.cod]});
    morphism_map.push_back(m);
  }
  std::vector<std::size_t> identities;
  for (std::size_t o : object_map) identities.push_back(new_morphism[c.identity(o)]);
  FinCategory sub = build_category(std::move(objects), std::move(morphisms), std::move(identities),
                                   [&](std::size_t g, std::size_t f) {
                                     return new_morphism[c.compose(morphism_map[g], morphism_map[f])];
                                   });
  auto inclusion = CatFunctor::create({sub, c, object_map, morphism_map});
  return {sub, inclusion};
}

// ---------------------------------------------------------------------------
// Comma categories

std::optional<std::size_t> CommaCategory::find(std::size_t a, std::size_t b, std::size_t arrow) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].a == a && entries[i].b == b && entries[i].arrow == arrow) return i;
  }
  return std::nullopt;
}

CommaCategory comma_category(const CatFunctor& f, const CatFunctor& g, const Limits& limits) {
  if (!(f.target() == g.target())) throw Error("comma category needs functors with a common target");
  const auto& A = f.source();
  const auto& B = g.source();
  const auto& C = f.target();

  std::vector<CommaCategory::Entry> entries;
  for (std::size_t a = 0; a < A.num_objects(); ++a) {
    for (std::size_t b = 0; b < B.num_objects(); ++b) {
      for (std::size_t u : C.hom(f.on_object(a), g.on_object(b))) entries.push_back({a, b, u});
    }
  }
  detail::guard("max_assignments", limits.max_assignments, entries.size());
  auto entry_key = [&](const CommaCategory::Entry& e) {
    return std::make_tuple(A.object_name(e.a), B.object_name(e.b), C.morphism_name(e.arrow));
  };
  std::sort(entries.begin(), entries.end(),
            [&](const auto& x, const auto& y) { return entry_key(x) < entry_key(y); });

  struct Arrow {
    std::size_t s, t, alpha, beta;
  };
  std::vector<Arrow> arrows;
  for (std::size_t s = 0; s < entries.size(); ++s) {
    for (std::size_t t = 0; t < entries.size(); ++t) {
      const auto& es = entries[s];
      const auto& et = entries[t];
      for (std::size_t alpha : A.hom(es.a, et.a)) {
        for (std::size_t beta : B.hom(es.b, et.b)) {
          if (C.compose(g.on_morphism(beta), es.arrow) == C.compose(et.arrow, f.on_morphism(alpha))) {
            arrows.push_back({s, t, alpha, beta});
            detail::guard("max_assignments", limits.max_assignments, arrows.size());
          }
        }
      }
    }
  }
  auto arrow_key = [&](const Arrow& x) {
    return std::make_tuple(A.morphism_name(x.alpha), B.morphism_name(x.beta),
                           C.morphism_name(entries[x.s].arrow), C.morphism_name(entries[x.t].arrow));
  };
  std::sort(arrows.begin(), arrows.end(),
            [&](const auto& x, const auto& y) { return arrow_key(x) < arrow_key(y); });

  std::vector<std::string> objects;
  for (const auto& e : entries) {
    objects.push_back("(" + A.object_name(e.a) + "," + B.object_name(e.b) + "," + C.morphism_name(e.arrow) + ")");
  }
  std::vector<Morphism> morphisms;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, std::size_t> index;
  for (const auto& x : arrows) {
    index[{x.s, x.t, x.alpha, x.beta}] = morphisms.size();
    morphisms.push_back({"(" + A.morphism_name(x.alpha) + "," + B.morphism_name(x.beta) + "):" +
                             C.morphism_name(entries[x.s].arrow) + "=>" + C.morphism_name(entries[x.t].arrow),
                         x.s, x.t});
  }
  std::vector<std::size_t> identities;
  for (std::size_t s = 0; s < entries.size(); ++s) {
    identities.push_back(index.at({s, s, A.identity(entries[s].a), B.identity(entries[s].b)}));
  }
  FinCategory cat = build_category(
      std::move(objects), std::move(morphisms), identities, [&](std::size_t second, std::size_t first) {
        const auto& x = arrows[first];
        const auto& y = arrows[second];
        return index.at({x.s, y.t, A.compose(y.alpha, x.alpha), B.compose(y.beta, x.beta)});
      });

  FunctorDescription left{cat, A, {}, {}};
  FunctorDescription right{cat, B, {}, {}};
  for (const auto& e : entries) {
    left.object_map.push_back(e.a);
    right.object_map.push_back(e.b);
  }
  for (const auto& x : arrows) {
    left.morphism_map.push_back(x.alpha);
    right.morphism_map.push_back(x.beta);
  }
  return {cat, CatFunctor::create(std::move(left)), CatFunctor::create(std::move(right)), std::move(entries)};
}

}  // namespace unicausal
