#include "unicausal/universal.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "unicausal/disjoint_set.hpp"

namespace unicausal {

namespace {

void require_covariant(const SetFunctor& d) {
  if (d.is_presheaf()) throw Error("a diagram of sets must be a covariant functor on its index");
}

// Advances a mixed-radix counter, last digit fastest; false once it wraps.
template <class Radix>
bool advance(std::vector<std::size_t>& digits, Radix radix) {
  for (std::size_t pos = digits.size(); pos > 0; --pos) {
    if (++digits[pos - 1] < radix(pos - 1)) return true;
    digits[pos - 1] = 0;
  }
  return false;
}

std::vector<std::size_t> non_identity_arrows(const FinCategory& j) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < j.num_morphisms(); ++m) {
    if (!j.is_identity(m)) out.push_back(m);
  }
  return out;
}

}  // namespace

SetCone limit_of_set_diagram(const SetFunctor& d, const Limits& limits) {
  require_covariant(d);
  const auto& J = d.base();
  const std::size_t n = J.num_objects();
  std::size_t space = 1;
  for (std::size_t j = 0; j < n; ++j) space = detail::sat_mul(space, d.size(j));
  detail::guard("max_assignments", limits.max_assignments, space);

  std::vector<std::vector<std::size_t>> checks(n);
  for (std::size_t m : non_identity_arrows(J)) checks[std::max(J.dom(m), J.cod(m))].push_back(m);

  SetCone cone{ConeKind::limit, {}, std::vector<std::vector<std::size_t>>(n)};
  std::vector<std::size_t> tuple(n, 0);
  std::function<void(std::size_t)> extend = [&](std::size_t j) {
    if (j == n) {
      std::string name = "(";
      for (std::size_t i = 0; i < n; ++i) {
        if (i != 0) name += ",";
        name += d.elements(i)[tuple[i]];
      }
      cone.apex.push_back(name + ")");
      for (std::size_t i = 0; i < n; ++i) cone.legs[i].push_back(tuple[i]);
      return;
    }
    for (std::size_t x = 0; x < d.size(j); ++x) {
      tuple[j] = x;
      bool ok = true;
      for (std::size_t m : checks[j]) ok = ok && d.apply(m, tuple[J.dom(m)]) == tuple[J.cod(m)];
      if (ok) extend(j + 1);
    }
  };
  extend(0);
  return cone;
}

SetCone colimit_of_set_diagram(const SetFunctor& d, const Limits& limits) {
  require_covariant(d);
  const auto& J = d.base();
  const std::size_t n = J.num_objects();
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) offset[j + 1] = offset[j] + d.size(j);
  detail::guard("max_assignments", limits.max_assignments, offset[n]);

  DisjointSet classes(offset[n]);
  for (std::size_t m : non_identity_arrows(J)) {
    for (std::size_t x = 0; x < d.size(J.dom(m)); ++x) {
      classes.unite(offset[J.dom(m)] + x, offset[J.cod(m)] + d.apply(m, x));
    }
  }

  using Key = std::pair<std::string, std::string>;
  auto key_of = [&](std::size_t j, std::size_t x) { return Key{J.object_name(j), d.elements(j)[x]}; };
  std::vector<std::size_t> rep_j(offset[n], npos), rep_x(offset[n], npos);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t x = 0; x < d.size(j); ++x) {
      const std::size_t root = classes.find(offset[j] + x);
      if (rep_j[root] == npos || key_of(j, x) < key_of(rep_j[root], rep_x[root])) {
        rep_j[root] = j;
        rep_x[root] = x;
      }
    }
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < offset[n]; ++i) {
    if (classes.find(i) == i) roots.push_back(i);
  }
  std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
    return key_of(rep_j[a], rep_x[a]) < key_of(rep_j[b], rep_x[b]);
  });
  std::vector<std::size_t> class_index(offset[n], npos);
  SetCone cone{ConeKind::colimit, {}, std::vector<std::vector<std::size_t>>(n)};
  for (std::size_t k = 0; k < roots.size(); ++k) {
    class_index[roots[k]] = k;
    const auto key = key_of(rep_j[roots[k]], rep_x[roots[k]]);
    cone.apex.push_back("[" + key.first + ":" + key.second + "]");
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t x = 0; x < d.size(j); ++x) cone.legs[j].push_back(class_index[classes.find(offset[j] + x)]);
  }
  return cone;
}

UniversalityReport verify_set_universality(const SetFunctor& d, const SetCone& cone, std::size_t max_apex,
                                           const Limits& limits) {
  require_covariant(d);
  const auto& J = d.base();
  const std::size_t n = J.num_objects();
  const auto arrows = non_identity_arrows(J);
  UniversalityReport report;

  if (cone.kind == ConeKind::limit) {
    std::size_t tuples = 1;
    for (std::size_t j = 0; j < n; ++j) tuples = detail::sat_mul(tuples, d.size(j));
    for (std::size_t k = 1; k <= max_apex; ++k) {
      detail::guard("max_assignments", limits.max_assignments, detail::sat_pow(tuples, k));
      // legs[j][a] for a competitor with apex {0..k-1}, enumerated as an odometer
      std::vector<std::size_t> flat(n * k, 0);
      if (tuples == 0) break;
      while (true) {
        bool compatible = true;
        for (std::size_t m : arrows) {
          for (std::size_t a = 0; a < k && compatible; ++a) {
            compatible = d.apply(m, flat[J.dom(m) * k + a]) == flat[J.cod(m) * k + a];
          }
        }
        if (compatible) {
          ++report.cones_checked;
          bool unique = true;
          for (std::size_t a = 0; a < k; ++a) {
            std::size_t hits = 0;
            for (std::size_t e = 0; e < cone.apex.size(); ++e) {
              bool match = true;
              for (std::size_t j = 0; j < n; ++j) match = match && cone.legs[j][e] == flat[j * k + a];
              if (match) ++hits;
            }
            unique = unique && hits == 1;
          }
          if (!unique) ++report.failures;
        }
        if (!advance(flat, [&](std::size_t pos) { return d.size(pos / k); })) break;
      }
    }
    return report;
  }

  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) offset[j + 1] = offset[j] + d.size(j);
  const std::size_t total = offset[n];
  for (std::size_t k = 1; k <= max_apex; ++k) {
    detail::guard("max_assignments", limits.max_assignments, detail::sat_pow(k, total));
    std::vector<std::size_t> flat(total, 0);
    while (true) {
      bool compatible = true;
      for (std::size_t m : arrows) {
        for (std::size_t x = 0; x < d.size(J.dom(m)) && compatible; ++x) {
          compatible = flat[offset[J.cod(m)] + d.apply(m, x)] == flat[offset[J.dom(m)] + x];
        }
      }
      if (compatible) {
        ++report.cones_checked;
        std::vector<std::size_t> value(cone.apex.size(), npos);
        bool consistent = true;
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t x = 0; x < d.size(j); ++x) {
            auto& v = value[cone.legs[j][x]];
            if (v != npos && v != flat[offset[j] + x]) consistent = false;
            v = flat[offset[j] + x];
          }
        }
        std::size_t count = consistent ? 1 : 0;
        for (std::size_t v : value) {
          if (v == npos) count = detail::sat_mul(count, k);
        }
        if (count != 1) ++report.failures;
      }
      if (!advance(flat, [&](std::size_t) { return k; })) break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Limits inside a finite category

std::vector<CategoryCone> enumerate_cones(const CatFunctor& d, const Limits& limits) {
  const auto& J = d.source();
  const auto& C = d.target();
  const std::size_t n = J.num_objects();
  std::vector<std::vector<std::size_t>> checks(n);
  for (std::size_t m : non_identity_arrows(J)) checks[std::max(J.dom(m), J.cod(m))].push_back(m);

  std::size_t space = 0;
  for (std::size_t w = 0; w < C.num_objects(); ++w) {
    std::size_t s = 1;
    for (std::size_t j = 0; j < n; ++j) s = detail::sat_mul(s, C.hom(w, d.on_object(j)).size());
    space = std::min(space + s, static_cast<std::size_t>(-1) / 2);
  }
  detail::guard("max_assignments", limits.max_assignments, space);

  std::vector<CategoryCone> cones;
  CategoryCone current;
  std::function<void(std::size_t)> extend = [&](std::size_t j) {
    if (j == n) {
      cones.push_back(current);
      return;
    }
    for (std::size_t leg : C.hom(current.apex, d.on_object(j))) {
      current.legs[j] = leg;
      bool ok = true;
      for (std::size_t m : checks[j]) {
        ok = ok && C.compose(d.on_morphism(m), current.legs[J.dom(m)]) == current.legs[J.cod(m)];
      }
      if (ok) extend(j + 1);
    }
  };
  for (std::size_t w = 0; w < C.num_objects(); ++w) {
    current.apex = w;
    current.legs.assign(n, npos);
    extend(0);
  }
  return cones;
}

std::optional<CategoryConeResult> limit_in_category(const CatFunctor& d, const Limits& limits) {
  const auto& C = d.target();
  const std::size_t n = d.source().num_objects();
  const auto cones = enumerate_cones(d, limits);
  for (const auto& candidate : cones) {
    CategoryConeResult result{ConeKind::limit, candidate, {}};
    bool universal = true;
    for (const auto& other : cones) {
      std::size_t found = npos;
      std::size_t hits = 0;
      for (std::size_t h : C.hom(other.apex, candidate.apex)) {
        bool factors = true;
        for (std::size_t j = 0; j < n && factors; ++j) {
          factors = C.compose(candidate.legs[j], h) == other.legs[j];
        }
        if (factors) {
          ++hits;
          found = h;
        }
      }
      if (hits != 1) {
        universal = false;
        break;
      }
      result.mediators.emplace_back(other, found);
    }
    if (universal) return result;
  }
  return std::nullopt;
}

std::optional<CategoryConeResult> colimit_in_category(const CatFunctor& d, const Limits& limits) {
  auto dual = limit_in_category(opposite(d), limits);
  if (dual) dual->kind = ConeKind::colimit;
  return dual;
}

// ---------------------------------------------------------------------------
// Shapes

Shape parse_shape(const std::string& name) {
  if (name == "product") return Shape::product;
  if (name == "coproduct") return Shape::coproduct;
  if (name == "pullback") return Shape::pullback;
  if (name == "pushout") return Shape::pushout;
  if (name == "equalizer") return Shape::equalizer;
  if (name == "coequalizer") return Shape::coequalizer;
  throw Error("unknown shape '" + name + "'");
}

std::string to_string(Shape s) {
  switch (s) {
    case Shape::product: return "product";
    case Shape::coproduct: return "coproduct";
    case Shape::pullback: return "pullback";
    case Shape::pushout: return "pushout";
    case Shape::equalizer: return "equalizer";
    case Shape::coequalizer: return "coequalizer";
  }
  return "unknown";
}

FinCategory shape_index(Shape s) {
  Quiver q;
  switch (s) {
    case Shape::product:
    case Shape::coproduct:
      q.vertices = {"a", "b"};
      break;
    case Shape::pullback:
      q.vertices = {"a", "b", "c"};
      q.arrows = {{"f", "a", "c"}, {"g", "b", "c"}};
      break;
    case Shape::pushout:
      q.vertices = {"a", "b", "c"};
      q.arrows = {{"f", "c", "a"}, {"g", "c", "b"}};
      break;
    case Shape::equalizer:
    case Shape::coequalizer:
      q.vertices = {"a", "b"};
      q.arrows = {{"f", "a", "b"}, {"g", "a", "b"}};
      break;
  }
  return free_category(q);
}

namespace {

std::size_t arrow_count(Shape s) {
  return (s == Shape::product || s == Shape::coproduct) ? 0 : 2;
}

}  // namespace

SetFunctor shape_set_diagram(Shape s, const std::vector<std::vector<std::string>>& sets,
                             const std::vector<std::map<std::string, std::string>>& functions) {
  const FinCategory J = shape_index(s);
  if (sets.size() != J.num_objects() || functions.size() != arrow_count(s)) {
    throw Error("arity mismatch: " + to_string(s) + " takes " + std::to_string(J.num_objects()) + " sets and " +
                std::to_string(arrow_count(s)) + " functions");
  }
  SetFunctorDescription desc{J, Variance::covariant, sets, std::vector<std::vector<std::size_t>>(J.num_morphisms())};
  for (std::size_t o = 0; o < J.num_objects(); ++o) {
    auto& act = desc.actions[J.identity(o)];
    for (std::size_t i = 0; i < sets[o].size(); ++i) act.push_back(i);
  }
  const char* names[] = {"f", "g"};
  for (std::size_t k = 0; k < functions.size(); ++k) {
    const std::size_t m = J.morphism_index(names[k]);
    const auto& src = sets[J.dom(m)];
    const auto& dst = sets[J.cod(m)];
    for (const auto& x : src) {
      auto it = functions[k].find(x);
      if (it == functions[k].end()) throw Error(std::string("function ") + names[k] + " is not total");
      auto pos = std::find(dst.begin(), dst.end(), it->second);
      if (pos == dst.end()) throw Error(std::string("function ") + names[k] + " leaves its codomain");
      desc.actions[m].push_back(static_cast<std::size_t>(pos - dst.begin()));
    }
  }
  return SetFunctor::create(std::move(desc));
}

CatFunctor shape_diagram(Shape s, const FinCategory& target, const std::vector<std::string>& objects,
                         const std::vector<std::string>& morphisms) {
  const FinCategory J = shape_index(s);
  if (objects.size() != J.num_objects() || morphisms.size() != arrow_count(s)) {
    throw Error("arity mismatch: " + to_string(s) + " takes " + std::to_string(J.num_objects()) + " objects and " +
                std::to_string(arrow_count(s)) + " morphisms");
  }
  FunctorDescription desc{J, target, {}, std::vector<std::size_t>(J.num_morphisms(), npos)};
  for (const auto& o : objects) desc.object_map.push_back(target.object_index(o));
  for (std::size_t o = 0; o < J.num_objects(); ++o) desc.morphism_map[J.identity(o)] = target.identity(desc.object_map[o]);
  const char* names[] = {"f", "g"};
  for (std::size_t k = 0; k < morphisms.size(); ++k) {
    desc.morphism_map[J.morphism_index(names[k])] = target.morphism_index(morphisms[k]);
  }
  return CatFunctor::create(std::move(desc));
}

}  // namespace unicausal
