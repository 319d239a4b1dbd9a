#include "unicausal/causal.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>

#include "unicausal/yoneda.hpp"

namespace unicausal {

CausalDag CausalDag::create(std::vector<std::string> variables,
                            const std::vector<std::pair<std::string, std::string>>& edges) {
  CausalDag g;
  g.variables_ = std::move(variables);
  for (std::size_t i = 0; i < g.variables_.size(); ++i) {
    if (!g.index_.emplace(g.variables_[i], i).second) throw Error("duplicate variable '" + g.variables_[i] + "'");
  }
  const std::size_t n = g.variables_.size();
  g.parents_.assign(n, {});
  g.children_.assign(n, {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [p, c] : edges) {
    const std::size_t pi = g.index(p);
    const std::size_t ci = g.index(c);
    if (pi == ci) throw Error("self-loop on '" + p + "'");
    if (!seen.emplace(pi, ci).second) throw Error("repeated edge " + p + "->" + c);
  }
  g.edges_.assign(seen.begin(), seen.end());
  for (const auto& [p, c] : g.edges_) {
    g.parents_[c].push_back(p);
    g.children_[p].push_back(c);
  }
  for (auto& v : g.parents_) std::sort(v.begin(), v.end());

  std::vector<std::size_t> indegree(n, 0);
  for (const auto& e : g.edges_) ++indegree[e.second];
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(v);
  }
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    g.topo_.push_back(v);
    for (std::size_t c : g.children_[v]) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }
  if (g.topo_.size() != n) throw Error("graph has a directed cycle");
  return g;
}

std::size_t CausalDag::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown variable '" + name + "'");
  return it->second;
}

std::vector<std::size_t> CausalDag::indices(const std::vector<std::string>& names) const {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(index(n));
  return out;
}

std::vector<std::pair<std::string, std::string>> CausalDag::named_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [p, c] : edges_) out.emplace_back(variables_[p], variables_[c]);
  return out;
}

bool CausalDag::has_edge(std::size_t parent, std::size_t child) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(parent, child));
}

std::vector<std::size_t> CausalDag::descendants(std::size_t v) const {
  std::vector<bool> mark(size(), false);
  std::vector<std::size_t> stack(children_.at(v));
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    if (mark[u]) continue;
    mark[u] = true;
    for (std::size_t c : children_[u]) stack.push_back(c);
  }
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < size(); ++u) {
    if (mark[u]) out.push_back(u);
  }
  return out;
}

namespace {

std::vector<bool> membership(const CausalDag& g, const std::vector<std::string>& names,
                             std::vector<bool>& used) {
  std::vector<bool> in(g.size(), false);
  for (std::size_t v : g.indices(names)) {
    if (used[v]) throw Error("variable sets overlap at '" + g.name(v) + "'");
    used[v] = true;
    in[v] = true;
  }
  return in;
}

}  // namespace

bool d_separated(const CausalDag& g, const std::vector<std::string>& x, const std::vector<std::string>& y,
                 const std::vector<std::string>& z) {
  std::vector<bool> used(g.size(), false);
  const auto in_x = membership(g, x, used);
  const auto in_y = membership(g, y, used);
  const auto in_z = membership(g, z, used);

  // Z together with its ancestors: the colliders that are opened.
  std::vector<bool> opened(in_z);
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (in_z[v]) stack.push_back(v);
  }
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t p : g.parents(v)) {
      if (!opened[p]) {
        opened[p] = true;
        stack.push_back(p);
      }
    }
  }

  // Bayes ball: state (v, up) means the ball arrived at v from a child.
  std::vector<std::array<bool, 2>> visited(g.size(), {false, false});
  std::vector<std::pair<std::size_t, bool>> queue;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (in_x[v]) queue.emplace_back(v, true);
  }
  while (!queue.empty()) {
    const auto [v, up] = queue.back();
    queue.pop_back();
    if (visited[v][up]) continue;
    visited[v][up] = true;
    if (in_y[v]) return false;
    if (up && !in_z[v]) {
      for (std::size_t p : g.parents(v)) queue.emplace_back(p, true);
      for (std::size_t c : g.children(v)) queue.emplace_back(c, false);
    } else if (!up) {
      if (!in_z[v]) {
        for (std::size_t c : g.children(v)) queue.emplace_back(c, false);
      }
      if (opened[v]) {
        for (std::size_t p : g.parents(v)) queue.emplace_back(p, true);
      }
    }
  }
  return true;
}

bool is_backdoor_set(const CausalDag& g, const std::string& treatment, const std::string& outcome,
                     const std::vector<std::string>& z) {
  const std::size_t t = g.index(treatment);
  const std::size_t o = g.index(outcome);
  if (t == o) throw Error("treatment and outcome must differ");
  const auto zi = g.indices(z);
  for (std::size_t v : zi) {
    if (v == t || v == o) throw Error("adjustment set must exclude treatment and outcome");
  }
  const auto desc = g.descendants(t);
  for (std::size_t v : zi) {
    if (std::binary_search(desc.begin(), desc.end(), v)) return false;
  }
  std::vector<std::pair<std::string, std::string>> kept;
  for (const auto& [p, c] : g.edges()) {
    if (p != t) kept.emplace_back(g.name(p), g.name(c));
  }
  const CausalDag cut = CausalDag::create(g.variables(), kept);
  return d_separated(cut, {treatment}, {outcome}, z);
}

CausalDag intervene(const CausalDag& g, const std::vector<std::string>& targets) {
  std::vector<bool> hit(g.size(), false);
  for (std::size_t v : g.indices(targets)) hit[v] = true;
  std::vector<std::pair<std::string, std::string>> kept;
  for (const auto& [p, c] : g.edges()) {
    if (!hit[c]) kept.emplace_back(g.name(p), g.name(c));
  }
  return CausalDag::create(g.variables(), kept);
}

Quiver to_quiver(const CausalDag& g) {
  Quiver q{g.variables(), {}};
  for (const auto& [p, c] : g.named_edges()) q.arrows.push_back({p + "->" + c, p, c});
  return q;
}

SetFunctor causal_presheaf(const CausalDag& g, const std::string& x, const Limits& limits) {
  g.index(x);
  return hom_presheaf(free_category(to_quiver(g), limits), x);
}

namespace {

using Subset = std::vector<std::size_t>;

bool canonical_less(const Subset& a, const Subset& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Subset set_union(const Subset& a, const Subset& b) {
  Subset out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Subset set_intersection(const Subset& a, const Subset& b) {
  Subset out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

AlexandroffSpace AlexandroffSpace::create(std::vector<std::string> points, std::vector<std::vector<std::size_t>> opens) {
  AlexandroffSpace s;
  s.points_ = std::move(points);
  const std::size_t n = s.points_.size();
  std::set<std::string> names(s.points_.begin(), s.points_.end());
  if (names.size() != n) throw Error("duplicate point name");
  for (auto& o : opens) {
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    if (!o.empty() && o.back() >= n) throw Error("open set refers to an unknown point");
  }
  std::sort(opens.begin(), opens.end(), canonical_less);
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  s.opens_ = std::move(opens);

  Subset all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (!s.is_open({})) throw Error("the empty set must be open");
  if (!s.is_open(all)) throw Error("the whole space must be open");
  // Finite families: pairwise closure gives closure under arbitrary unions and intersections.
  for (const auto& a : s.opens_) {
    for (const auto& b : s.opens_) {
      if (!s.is_open(set_union(a, b))) throw Error("opens are not closed under union");
      if (!s.is_open(set_intersection(a, b))) throw Error("opens are not closed under intersection");
    }
  }
  return s;
}

bool AlexandroffSpace::is_open(const std::vector<std::size_t>& subset) const {
  Subset key(subset);
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  return std::binary_search(opens_.begin(), opens_.end(), key, canonical_less);
}

std::vector<std::size_t> AlexandroffSpace::minimal_open(std::size_t point) const {
  if (point >= points_.size()) throw Error("unknown point");
  Subset best = opens_.back();
  for (const auto& o : opens_) {
    if (std::binary_search(o.begin(), o.end(), point)) best = set_intersection(best, o);
  }
  return best;
}

std::vector<std::vector<bool>> AlexandroffSpace::specialization() const {
  const std::size_t n = points_.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y : minimal_open(x)) le[x][y] = true;
  }
  return le;
}

AlexandroffSpace alexandroff_space(const CausalDag& g, const Limits& limits) {
  const std::size_t n = g.size();
  detail::guard("max_assignments", limits.max_assignments, detail::sat_pow(2, n));
  // The closure of the minimal opens is exactly the family of descendant-closed sets.
  std::vector<std::uint64_t> down_mask(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t d : g.descendants(v)) down_mask[v] |= std::uint64_t{1} << d;
  }
  std::vector<Subset> opens;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    bool closed = true;
    Subset members;
    for (std::size_t v = 0; v < n && closed; ++v) {
      if (s >> v & 1) {
        closed = (down_mask[v] & ~s) == 0;
        members.push_back(v);
      }
    }
    if (closed) opens.push_back(std::move(members));
  }
  return AlexandroffSpace::create(g.variables(), std::move(opens));
}

namespace {

void check_total(const std::vector<std::size_t>& map, const AlexandroffSpace& source,
                 const AlexandroffSpace& target) {
  if (map.size() != source.points().size()) throw Error("point map is not total on the source");
  for (std::size_t v : map) {
    if (v >= target.points().size()) throw Error("point map leaves the target space");
  }
}

}  // namespace

bool is_continuous(const std::vector<std::size_t>& map, const AlexandroffSpace& source,
                   const AlexandroffSpace& target) {
  check_total(map, source, target);
  for (const auto& open : target.opens()) {
    Subset pre;
    for (std::size_t p = 0; p < map.size(); ++p) {
      if (std::binary_search(open.begin(), open.end(), map[p])) pre.push_back(p);
    }
    if (!source.is_open(pre)) return false;
  }
  return true;
}

bool preserves_specialization(const std::vector<std::size_t>& map, const AlexandroffSpace& source,
                              const AlexandroffSpace& target) {
  check_total(map, source, target);
  const auto s = source.specialization();
  const auto t = target.specialization();
  for (std::size_t x = 0; x < map.size(); ++x) {
    for (std::size_t y = 0; y < map.size(); ++y) {
      if (s[x][y] && !t[map[x]][map[y]]) return false;
    }
  }
  return true;
}

FinCategory intervention_category(const CausalDag& g, const Limits& limits) {
  const std::size_t n = g.size();
  const std::size_t objects = detail::sat_pow(2, n);
  detail::guard("max_objects", limits.max_objects, objects);
  detail::guard("max_morphisms", limits.max_morphisms, detail::sat_pow(3, n));

  std::vector<std::string> names;
  for (std::size_t s = 0; s < objects; ++s) {
    std::string name = "{";
    for (std::size_t v = 0; v < n; ++v) {
      if (s >> v & 1) name += (name.size() > 1 ? "," : "") + g.name(v);
    }
    names.push_back(name + "}");
  }

  std::vector<Morphism> morphisms;
  std::vector<std::size_t> identities(objects, npos);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> arrow;
  for (std::size_t s = 0; s < objects; ++s) {
    for (std::size_t t = 0; t < objects; ++t) {
      if ((s & ~t) != 0) continue;
      arrow[{s, t}] = morphisms.size();
      if (s == t) identities[s] = morphisms.size();
      morphisms.push_back({s == t ? "id_" + names[s] : names[s] + "<=" + names[t], s, t});
    }
  }
  return build_category(std::move(names), morphisms, std::move(identities), [&](std::size_t h, std::size_t f) {
    return arrow.at({morphisms[f].dom, morphisms[h].cod});
  });
}

}  // namespace unicausal
