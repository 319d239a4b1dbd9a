#include "oracles.hpp"

#include <functional>
#include <tuple>

namespace testsupport {

std::size_t count_paths(const CausalDag& g, std::size_t u, std::size_t v) {
  if (u == v) return 1;
  std::size_t n = 0;
  for (std::size_t c : g.children(u)) n += count_paths(g, c, v);
  return n;
}

std::vector<std::vector<bool>> reachability(const CausalDag& g) {
  std::vector<std::vector<bool>> r(g.size(), std::vector<bool>(g.size(), false));
  for (std::size_t u = 0; u < g.size(); ++u) {
    std::function<void(std::size_t)> dfs = [&](std::size_t w) {
      if (r[u][w]) return;
      r[u][w] = true;
      for (std::size_t c : g.children(w)) dfs(c);
    };
    dfs(u);
  }
  return r;
}

bool dsep_by_paths(const CausalDag& g, const std::vector<std::size_t>& x, const std::vector<std::size_t>& y,
                   const std::vector<std::size_t>& z) {
  const auto reach = reachability(g);
  std::vector<bool> in_y(g.size(), false), in_z(g.size(), false);
  for (std::size_t v : y) in_y[v] = true;
  for (std::size_t v : z) in_z[v] = true;

  auto blocked = [&](const std::vector<std::size_t>& path) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const std::size_t a = path[i - 1], b = path[i], c = path[i + 1];
      const bool collider = g.has_edge(a, b) && g.has_edge(c, b);
      if (collider) {
        bool opened = false;
        for (std::size_t w = 0; w < g.size(); ++w) opened = opened || (reach[b][w] && in_z[w]);
        if (!opened) return true;
      } else if (in_z[b]) {
        return true;
      }
    }
    return false;
  };

  std::vector<std::size_t> path;
  std::vector<bool> on_path(g.size(), false);
  std::function<bool(std::size_t)> open_path_from = [&](std::size_t v) {
    path.push_back(v);
    on_path[v] = true;
    bool found = false;
    if (in_y[v]) {
      found = !blocked(path);
    } else {
      for (std::size_t w = 0; w < g.size() && !found; ++w) {
        if (on_path[w] || !(g.has_edge(v, w) || g.has_edge(w, v))) continue;
        found = open_path_from(w);
      }
    }
    on_path[v] = false;
    path.pop_back();
    return found;
  };
  for (std::size_t s : x) {
    if (open_path_from(s)) return false;
  }
  return true;
}

double joint_oracle(const DiscreteScm& m, const std::vector<std::size_t>& a) {
  double p = 1.0;
  for (std::size_t v = 0; v < m.dag().size(); ++v) {
    std::size_t row = 0;
    for (std::size_t q : m.dag().parents(v)) row = row * m.cardinality(q) + a[q];
    p *= m.table(v)[row][a[v]];
  }
  return p;
}

double ate_oracle(const DiscreteScm& m, std::size_t x, std::size_t y) {
  const auto order = m.dag().topological_order();
  std::vector<std::size_t> a(m.dag().size(), 0);
  std::function<double(std::size_t, double)> expect = [&](std::size_t k, double weight) -> double {
    if (k == order.size()) return weight * static_cast<double>(a[y]);
    const std::size_t v = order[k];
    if (v == x) return expect(k + 1, weight);
    std::size_t row = 0;
    for (std::size_t q : m.dag().parents(v)) row = row * m.cardinality(q) + a[q];
    double sum = 0.0;
    for (std::size_t val = 0; val < m.cardinality(v); ++val) {
      a[v] = val;
      sum += expect(k + 1, weight * m.table(v)[row][val]);
    }
    return sum;
  };
  a[x] = 1;
  const double e1 = expect(0, 1.0);
  a[x] = 0;
  const double e0 = expect(0, 1.0);
  return e1 - e0;
}

FinSetCategory finset_category(const std::vector<std::size_t>& sizes, const Limits& limits) {
  FinSetCategory out;
  out.sizes = sizes;
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < sizes.size(); ++i) objects.push_back("S" + std::to_string(i));
  std::vector<Morphism> morphisms;
  std::vector<std::size_t> identities(sizes.size(), npos);
  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>, std::size_t> index;
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      std::vector<std::size_t> f(sizes[a], 0);
      if (sizes[a] > 0 && sizes[b] == 0) continue;
      for (;;) {
        std::string name = objects[a] + ">" + objects[b] + ":";
        bool identity = a == b;
        for (std::size_t i = 0; i < f.size(); ++i) {
          name += std::to_string(f[i]);
          identity = identity && f[i] == i;
        }
        if (identity) identities[a] = morphisms.size();
        index[{a, b, f}] = morphisms.size();
        morphisms.push_back({name, a, b});
        out.functions.push_back(f);
        std::size_t i = f.size();
        while (i > 0 && ++f[i - 1] == sizes[b]) f[--i] = 0;
        if (i == 0) break;
      }
    }
  }
  if (morphisms.size() > limits.max_morphisms) throw SizeGuardError("max_morphisms", limits.max_morphisms, morphisms.size());
  const auto functions = out.functions;
  out.category = build_category(objects, morphisms, identities, [&](std::size_t g, std::size_t f) {
    std::vector<std::size_t> h;
    for (std::size_t v : functions[f]) h.push_back(functions[g][v]);
    return index.at({morphisms[f].dom, morphisms[g].cod, h});
  });
  return out;
}

std::vector<std::vector<std::size_t>> action_components(const SetFunctor& d, std::size_t& count) {
  const auto& c = d.base();
  std::vector<std::vector<std::size_t>> label(c.num_objects());
  for (std::size_t o = 0; o < c.num_objects(); ++o) label[o].assign(d.size(o), npos);
  // adjacency over (object, element)
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> adj;
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    for (std::size_t x = 0; x < d.size(c.dom(m)); ++x) {
      const std::pair<std::size_t, std::size_t> a{c.dom(m), x}, b{c.cod(m), d.apply(m, x)};
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  count = 0;
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    for (std::size_t x = 0; x < d.size(o); ++x) {
      if (label[o][x] != npos) continue;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{o, x}};
      while (!stack.empty()) {
        auto [p, e] = stack.back();
        stack.pop_back();
        if (label[p][e] != npos) continue;
        label[p][e] = count;
        for (const auto& n : adj[{p, e}]) stack.push_back(n);
      }
      ++count;
    }
  }
  return label;
}

}  // namespace testsupport
