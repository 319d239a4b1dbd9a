#include "unicausal/setfun.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "unicausal/yoneda.hpp"

namespace unicausal {

struct SetFunctor::Data {
  SetFunctorDescription desc;
  std::vector<std::unordered_map<std::string, std::size_t>> index;
};

const FinCategory& SetFunctor::base() const noexcept { return data_->desc.base; }
Variance SetFunctor::variance() const noexcept { return data_->desc.variance; }
std::size_t SetFunctor::size(std::size_t obj) const { return data_->desc.elements.at(obj).size(); }
const std::vector<std::string>& SetFunctor::elements(std::size_t obj) const { return data_->desc.elements.at(obj); }
const std::vector<std::size_t>& SetFunctor::action(std::size_t m) const { return data_->desc.actions.at(m); }
const SetFunctorDescription& SetFunctor::describe() const noexcept { return data_->desc; }

namespace {

std::size_t reads(const FinCategory& c, Variance v, std::size_t m) {
  return v == Variance::covariant ? c.dom(m) : c.cod(m);
}

std::size_t writes(const FinCategory& c, Variance v, std::size_t m) {
  return v == Variance::covariant ? c.cod(m) : c.dom(m);
}

void require_parallel(const SetFunctor& f, const SetFunctor& g) {
  if (f.variance() != g.variance()) throw Error("functors have different variance");
  if (!(f.base() == g.base())) throw Error("functors live on different categories");
}

}  // namespace

ValidationReport validate_functor(const SetFunctorDescription& f) {
  ValidationReport report;
  auto& v = report.violations;
  const auto& c = f.base;
  if (f.elements.size() != c.num_objects()) v.push_back("element sets are not given for every object");
  if (f.actions.size() != c.num_morphisms()) v.push_back("actions are not given for every morphism");
  if (!v.empty()) return report;
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    std::set<std::string> seen;
    for (const auto& e : f.elements[o]) {
      if (!seen.insert(e).second) v.push_back("duplicate element '" + e + "' at '" + c.object_name(o) + "'");
    }
  }
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    const auto& act = f.actions[m];
    if (act.size() != f.elements[reads(c, f.variance, m)].size()) {
      v.push_back("action of '" + c.morphism_name(m) + "' is not total");
      continue;
    }
    const std::size_t bound = f.elements[writes(c, f.variance, m)].size();
    for (std::size_t x : act) {
      if (x >= bound) {
        v.push_back("action of '" + c.morphism_name(m) + "' leaves its codomain set");
        break;
      }
    }
  }
  if (!v.empty()) return report;
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    const auto& act = f.actions[c.identity(o)];
    for (std::size_t i = 0; i < act.size(); ++i) {
      if (act[i] != i) {
        v.push_back("identity of '" + c.object_name(o) + "' does not act as the identity");
        break;
      }
    }
  }
  for (std::size_t fm = 0; fm < c.num_morphisms(); ++fm) {
    for (std::size_t g : c.outgoing(c.cod(fm))) {
      const auto& composite = f.actions[c.compose(g, fm)];
      bool ok = true;
      if (f.variance == Variance::covariant) {
        for (std::size_t x = 0; x < composite.size(); ++x) ok = ok && composite[x] == f.actions[g][f.actions[fm][x]];
      } else {
        for (std::size_t x = 0; x < composite.size(); ++x) ok = ok && composite[x] == f.actions[fm][f.actions[g][x]];
      }
      if (!ok) {
        v.push_back("action of composite (" + c.morphism_name(g) + "," + c.morphism_name(fm) +
                    ") differs from the composite of actions");
      }
    }
  }
  return report;
}

SetFunctor SetFunctor::create(SetFunctorDescription desc) {
  auto report = validate_functor(desc);
  if (!report.valid()) throw Error("invalid set functor: " + report.violations.front());
  auto d = std::make_shared<Data>();
  d->index.resize(desc.elements.size());
  for (std::size_t o = 0; o < desc.elements.size(); ++o) {
    for (std::size_t i = 0; i < desc.elements[o].size(); ++i) d->index[o].emplace(desc.elements[o][i], i);
  }
  d->desc = std::move(desc);
  return SetFunctor(std::move(d));
}

std::size_t SetFunctor::element_index(std::size_t obj, std::string_view name) const {
  const auto& idx = data_->index.at(obj);
  auto it = idx.find(std::string(name));
  if (it == idx.end()) {
    throw Error("unknown element '" + std::string(name) + "' at '" + base().object_name(obj) + "'");
  }
  return it->second;
}

std::size_t SetFunctor::action_source(std::size_t m) const { return reads(base(), variance(), m); }
std::size_t SetFunctor::action_target(std::size_t m) const { return writes(base(), variance(), m); }

void SetFunctor::check_limits(const Limits& limits) const {
  for (std::size_t o = 0; o < base().num_objects(); ++o) detail::guard("max_set", limits.max_set, size(o));
}

bool SetFunctor::operator==(const SetFunctor& other) const {
  if (data_ == other.data_) return true;
  const auto& a = data_->desc;
  const auto& b = other.data_->desc;
  return a.variance == b.variance && a.base == b.base && a.elements == b.elements && a.actions == b.actions;
}

// ---------------------------------------------------------------------------
// Natural transformations

ValidationReport check_naturality(const NatTransformation& eta) {
  ValidationReport report;
  const auto& f = eta.source;
  const auto& g = eta.target;
  require_parallel(f, g);
  const auto& c = f.base();
  if (eta.components.size() != c.num_objects()) {
    report.violations.push_back("components are not given for every object");
    return report;
  }
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    const auto& comp = eta.components[o];
    bool ok = comp.size() == f.size(o);
    for (std::size_t x : comp) ok = ok && x < g.size(o);
    if (!ok) report.violations.push_back("component at '" + c.object_name(o) + "' is not a function");
  }
  if (!report.valid()) return report;
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    const std::size_t from = f.action_source(m);
    const std::size_t to = f.action_target(m);
    for (std::size_t x = 0; x < f.size(from); ++x) {
      if (eta.components[to][f.apply(m, x)] != g.apply(m, eta.components[from][x])) {
        report.violations.push_back("naturality square fails at '" + c.morphism_name(m) + "'");
        break;
      }
    }
  }
  return report;
}

NatTransformation identity_nat(const SetFunctor& f) {
  NatTransformation eta{f, f, {}};
  for (std::size_t o = 0; o < f.base().num_objects(); ++o) {
    std::vector<std::size_t> id(f.size(o));
    std::iota(id.begin(), id.end(), std::size_t{0});
    eta.components.push_back(std::move(id));
  }
  return eta;
}

NatTransformation compose(const NatTransformation& beta, const NatTransformation& alpha) {
  if (!(alpha.target == beta.source)) throw Error("natural transformations are not composable");
  NatTransformation out{alpha.source, beta.target, {}};
  for (std::size_t o = 0; o < alpha.components.size(); ++o) {
    std::vector<std::size_t> comp;
    for (std::size_t x : alpha.components[o]) comp.push_back(beta.components[o][x]);
    out.components.push_back(std::move(comp));
  }
  return out;
}

std::vector<NatTransformation> enumerate_nats(const SetFunctor& f, const SetFunctor& g, const Limits& limits,
                                              const NatEnumerationOptions& options) {
  require_parallel(f, g);
  const auto& c = f.base();
  const std::size_t n = c.num_objects();
  std::vector<NatTransformation> out;

  std::size_t space = 1;
  for (std::size_t o = 0; o < n; ++o) {
    if (options.bijective_only) {
      if (f.size(o) != g.size(o)) return out;
      for (std::size_t k = 2; k <= f.size(o); ++k) space = detail::sat_mul(space, k);
    } else {
      space = detail::sat_mul(space, detail::sat_pow(g.size(o), f.size(o)));
    }
  }
  detail::guard("max_assignments", limits.max_assignments, space);
  if (space == 0) return out;

  // Squares are checked as soon as both of their objects carry a component.
  std::vector<std::vector<std::size_t>> squares(n);
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    if (c.is_identity(m)) continue;
    squares[std::max(c.dom(m), c.cod(m))].push_back(m);
  }

  std::vector<std::vector<std::size_t>> comps(n);
  auto square_holds = [&](std::size_t m) {
    const std::size_t from = f.action_source(m);
    const std::size_t to = f.action_target(m);
    for (std::size_t x = 0; x < f.size(from); ++x) {
      if (comps[to][f.apply(m, x)] != g.apply(m, comps[from][x])) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> assign = [&](std::size_t o) -> bool {
    if (o == n) {
      out.push_back({f, g, comps});
      return out.size() < options.max_results;
    }
    const std::size_t a = f.size(o);
    const std::size_t b = g.size(o);
    auto& comp = comps[o];
    comp.assign(a, 0);
    if (options.bijective_only) std::iota(comp.begin(), comp.end(), std::size_t{0});
    while (true) {
      bool ok = true;
      for (std::size_t m : squares[o]) {
        if (!square_holds(m)) {
          ok = false;
          break;
        }
      }
      if (ok && !assign(o + 1)) return false;
      if (options.bijective_only) {
        if (!std::next_permutation(comp.begin(), comp.end())) break;
        continue;
      }
      // Odometer with the first element most significant.
      std::size_t k = a;
      while (k > 0) {
        --k;
        if (++comp[k] < b) break;
        comp[k] = 0;
        if (k == 0) {
          k = npos;
          break;
        }
      }
      if (a == 0 || k == npos) break;
    }
    return true;
  };
  assign(0);
  return out;
}

std::size_t count_nats(const SetFunctor& f, const SetFunctor& g, const Limits& limits) {
  return enumerate_nats(f, g, limits).size();
}

FullFaithfulReport check_fully_faithful(const CatFunctor& f) {
  FullFaithfulReport r;
  const auto& s = f.source();
  const auto& t = f.target();
  for (std::size_t x = 0; x < s.num_objects(); ++x) {
    for (std::size_t y = 0; y < s.num_objects(); ++y) {
      std::set<std::size_t> image;
      for (std::size_t m : s.hom(x, y)) image.insert(f.on_morphism(m));
      if (image.size() != s.hom(x, y).size()) r.faithful = false;
      if (image.size() != t.hom(f.on_object(x), f.on_object(y)).size()) r.full = false;
    }
  }
  return r;
}

std::optional<NatTransformation> natural_iso_check(const SetFunctor& f, const SetFunctor& g,
                                                   const Limits& limits) {
  auto found = enumerate_nats(f, g, limits, {.bijective_only = true, .max_results = 1});
  if (found.empty()) return std::nullopt;
  return std::move(found.front());
}

// ---------------------------------------------------------------------------
// Cartesian closed structure

SetFunctor presheaf_terminal(const FinCategory& base, Variance variance) {
  SetFunctorDescription d{base, variance, {}, {}};
  d.elements.assign(base.num_objects(), {"*"});
  d.actions.assign(base.num_morphisms(), {0});
  return SetFunctor::create(std::move(d));
}

SetFunctor presheaf_product(const SetFunctor& p, const SetFunctor& q) {
  require_parallel(p, q);
  const auto& c = p.base();
  SetFunctorDescription d{c, p.variance(), {}, {}};
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    std::vector<std::string> elems;
    for (const auto& x : p.elements(o)) {
      for (const auto& y : q.elements(o)) elems.push_back("(" + x + "," + y + ")");
    }
    d.elements.push_back(std::move(elems));
  }
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    const std::size_t from = p.action_source(m);
    const std::size_t to = p.action_target(m);
    std::vector<std::size_t> act;
    for (std::size_t x = 0; x < p.size(from); ++x) {
      for (std::size_t y = 0; y < q.size(from); ++y) act.push_back(p.apply(m, x) * q.size(to) + q.apply(m, y));
    }
    d.actions.push_back(std::move(act));
  }
  return SetFunctor::create(std::move(d));
}

SetFunctor presheaf_exponential(const SetFunctor& p, const SetFunctor& q, const Limits& limits) {
  require_parallel(p, q);
  if (!p.is_presheaf()) throw Error("exponentials are defined here for presheaves only");
  const auto& c = p.base();
  const std::size_t n = c.num_objects();

  std::vector<std::vector<NatTransformation>> nats(n);
  std::vector<std::map<std::vector<std::vector<std::size_t>>, std::size_t>> lookup(n);
  SetFunctorDescription d{c, Variance::contravariant, {}, {}};
  for (std::size_t o = 0; o < n; ++o) {
    nats[o] = enumerate_nats(presheaf_product(hom_presheaf(c, o), p), q, limits);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < nats[o].size(); ++k) {
      names.push_back("nt" + std::to_string(k));
      lookup[o].emplace(nats[o][k].components, k);
    }
    d.elements.push_back(std::move(names));
  }
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    const std::size_t src = c.dom(m);  // Hom(-, src) x P
    const std::size_t dst = c.cod(m);
    std::vector<std::size_t> act;
    for (const auto& eta : nats[dst]) {
      std::vector<std::vector<std::size_t>> comps(n);
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t h : c.hom(x, src)) {
          const std::size_t moved = c.hom_position(c.compose(m, h));
          for (std::size_t e = 0; e < p.size(x); ++e) comps[x].push_back(eta.components[x][moved * p.size(x) + e]);
        }
      }
      act.push_back(lookup[src].at(comps));
    }
    d.actions.push_back(std::move(act));
  }
  return SetFunctor::create(std::move(d));
}

SetFunctor precompose(const SetFunctor& f, const CatFunctor& k) {
  if (!(f.base() == k.target())) throw Error("functor does not live on the target of the functor it follows");
  const auto& c = k.source();
  SetFunctorDescription d{c, f.variance(), {}, {}};
  for (std::size_t o = 0; o < c.num_objects(); ++o) d.elements.push_back(f.elements(k.on_object(o)));
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) d.actions.push_back(f.action(k.on_morphism(m)));
  return SetFunctor::create(std::move(d));
}

SetFunctor flip_variance(const SetFunctor& f, const FinCategory& new_base) {
  if (!(new_base == opposite(f.base()))) throw Error("flip_variance needs the opposite category");
  auto d = f.describe();
  d.base = new_base;
  d.variance = f.is_presheaf() ? Variance::covariant : Variance::contravariant;
  return SetFunctor::create(std::move(d));
}

}  // namespace unicausal
