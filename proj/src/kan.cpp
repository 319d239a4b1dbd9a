#include "unicausal/kan.hpp"

#include <map>

#include "unicausal/yoneda.hpp"

namespace unicausal {

namespace {

KanResult left_covariant(const SetFunctor& f, const CatFunctor& k, const Limits& limits) {
  const auto& C = k.source();
  const auto& D = k.target();
  KanResult r{KanKind::left, f, k, f, identity_nat(f), {}, {}};
  for (std::size_t d = 0; d < D.num_objects(); ++d) {
    r.commas.push_back(comma_category(k, constant_functor(D, d), limits));
    r.cones.push_back(colimit_of_set_diagram(precompose(f, r.commas.back().to_left), limits));
  }

  SetFunctorDescription ext{D, Variance::covariant, {}, {}};
  for (const auto& cone : r.cones) ext.elements.push_back(cone.apex);
  for (std::size_t g = 0; g < D.num_morphisms(); ++g) {
    const std::size_t d = D.dom(g);
    const std::size_t dp = D.cod(g);
    std::vector<std::size_t> act(r.cones[d].apex.size(), npos);
    const auto& comma = r.commas[d];
    for (std::size_t e = 0; e < comma.entries.size(); ++e) {
      const auto& entry = comma.entries[e];
      const auto moved = r.commas[dp].find(entry.a, 0, D.compose(g, entry.arrow));
      for (std::size_t x = 0; x < f.size(entry.a); ++x) {
        const std::size_t image = r.cones[dp].legs[*moved][x];
        auto& slot = act[r.cones[d].legs[e][x]];
        if (slot != npos && slot != image) throw Error("left Kan extension action is not well defined; engine defect");
        slot = image;
      }
    }
    ext.actions.push_back(std::move(act));
  }
  r.extension = SetFunctor::create(std::move(ext));

  NatTransformation unit{f, precompose(r.extension, k), {}};
  for (std::size_t c = 0; c < C.num_objects(); ++c) {
    const std::size_t kc = k.on_object(c);
    const auto e = r.commas[kc].find(c, 0, D.identity(kc));
    unit.components.push_back(r.cones[kc].legs[*e]);
  }
  r.unit = std::move(unit);
  return r;
}

std::map<std::vector<std::size_t>, std::size_t> tuple_index(const SetCone& cone) {
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t a = 0; a < cone.apex.size(); ++a) {
    std::vector<std::size_t> t;
    for (const auto& leg : cone.legs) t.push_back(leg[a]);
    index.emplace(std::move(t), a);
  }
  return index;
}

KanResult right_covariant(const SetFunctor& f, const CatFunctor& k, const Limits& limits) {
  const auto& C = k.source();
  const auto& D = k.target();
  KanResult r{KanKind::right, f, k, f, identity_nat(f), {}, {}};
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> index;
  for (std::size_t d = 0; d < D.num_objects(); ++d) {
    r.commas.push_back(comma_category(constant_functor(D, d), k, limits));
    r.cones.push_back(limit_of_set_diagram(precompose(f, r.commas.back().to_right), limits));
    index.push_back(tuple_index(r.cones.back()));
  }

  SetFunctorDescription ext{D, Variance::covariant, {}, {}};
  for (const auto& cone : r.cones) ext.elements.push_back(cone.apex);
  for (std::size_t g = 0; g < D.num_morphisms(); ++g) {
    const std::size_t d = D.dom(g);
    const std::size_t dp = D.cod(g);
    const auto& target_comma = r.commas[dp];
    std::vector<std::size_t> act;
    for (std::size_t a = 0; a < r.cones[d].apex.size(); ++a) {
      std::vector<std::size_t> t;
      for (const auto& entry : target_comma.entries) {
        const auto source = r.commas[d].find(0, entry.b, D.compose(entry.arrow, g));
        t.push_back(r.cones[d].legs[*source][a]);
      }
      auto it = index[dp].find(t);
      if (it == index[dp].end()) throw Error("right Kan extension action leaves the limit; engine defect");
      act.push_back(it->second);
    }
    ext.actions.push_back(std::move(act));
  }
  r.extension = SetFunctor::create(std::move(ext));

  NatTransformation counit{precompose(r.extension, k), f, {}};
  for (std::size_t c = 0; c < C.num_objects(); ++c) {
    const std::size_t kc = k.on_object(c);
    const auto e = r.commas[kc].find(0, c, D.identity(kc));
    counit.components.push_back(r.cones[kc].legs[*e]);
  }
  r.unit = std::move(counit);
  return r;
}

using Engine = KanResult (*)(const SetFunctor&, const CatFunctor&, const Limits&);

KanResult extend(Engine engine, const SetFunctor& f, const CatFunctor& k, const Limits& limits) {
  if (!(f.base() == k.source())) throw Error("functor does not live on the source of the extension functor");
  if (!f.is_presheaf()) return engine(f, k, limits);

  const CatFunctor kop = opposite(k);
  KanResult r = engine(flip_variance(f, kop.source()), kop, limits);
  r.functor = f;
  r.along = k;
  r.extension = flip_variance(r.extension, k.target());
  const SetFunctor ext_k = precompose(r.extension, k);
  if (r.kind == KanKind::left) {
    r.unit = NatTransformation{f, ext_k, std::move(r.unit.components)};
  } else {
    r.unit = NatTransformation{ext_k, f, std::move(r.unit.components)};
  }
  return r;
}

}  // namespace

KanResult left_kan(const SetFunctor& f, const CatFunctor& k, const Limits& limits) {
  return extend(&left_covariant, f, k, limits);
}

KanResult right_kan(const SetFunctor& f, const CatFunctor& k, const Limits& limits) {
  return extend(&right_covariant, f, k, limits);
}

KanUniversalityReport kan_universality_check(const KanResult& kr, const SetFunctor& g,
                                             const NatTransformation& gamma, const Limits& limits) {
  KanUniversalityReport report;
  const auto& k = kr.along;
  const auto& C = k.source();
  const auto& D = k.target();
  const bool left = kr.kind == KanKind::left;

  try {
    if (g.variance() != kr.functor.variance() || !(g.base() == D)) {
      report.violation = "G must be a functor of the same variance on the target of K";
      return report;
    }
    const SetFunctor gk = precompose(g, k);
    const bool typed = left ? (gamma.source == kr.functor && gamma.target == gk)
                            : (gamma.source == gk && gamma.target == kr.functor);
    if (!typed) {
      report.violation = left ? "gamma must run from F to G.K" : "gamma must run from G.K to F";
      return report;
    }
    auto nat = check_naturality(gamma);
    if (!nat.valid()) {
      report.violation = "gamma is not a natural transformation: " + nat.violations.front();
      return report;
    }
  } catch (const Error& e) {
    report.violation = e.what();
    return report;
  }

  // Comma arrows index morphisms of D for either variance, and the action of
  // G on them reads exactly the set the covariant computation expects.
  auto g_along = [&](std::size_t u, std::size_t y) { return g.apply(u, y); };

  auto factors_through = [&](const std::vector<std::vector<std::size_t>>& alpha) {
    for (std::size_t c = 0; c < C.num_objects(); ++c) {
      const std::size_t kc = k.on_object(c);
      if (left) {
        for (std::size_t x = 0; x < kr.functor.size(c); ++x) {
          if (alpha[kc][kr.unit.components[c][x]] != gamma.components[c][x]) return false;
        }
      } else {
        for (std::size_t y = 0; y < g.size(kc); ++y) {
          if (kr.unit.components[c][alpha[kc][y]] != gamma.components[c][y]) return false;
        }
      }
    }
    return true;
  };

  std::vector<std::vector<std::size_t>> alpha(D.num_objects());
  bool built = true;
  if (left) {
    for (std::size_t d = 0; d < D.num_objects(); ++d) {
      alpha[d].assign(kr.cones[d].apex.size(), npos);
      const auto& comma = kr.commas[d];
      for (std::size_t e = 0; e < comma.entries.size(); ++e) {
        const auto& entry = comma.entries[e];
        for (std::size_t x = 0; x < kr.functor.size(entry.a); ++x) {
          const std::size_t value = g_along(entry.arrow, gamma.components[entry.a][x]);
          auto& slot = alpha[d][kr.cones[d].legs[e][x]];
          if (slot != npos && slot != value) built = false;
          slot = value;
        }
      }
    }
  } else {
    for (std::size_t d = 0; d < D.num_objects(); ++d) {
      const auto index = tuple_index(kr.cones[d]);
      const auto& comma = kr.commas[d];
      for (std::size_t y = 0; y < g.size(d); ++y) {
        std::vector<std::size_t> t;
        for (const auto& entry : comma.entries) t.push_back(gamma.components[entry.b][g_along(entry.arrow, y)]);
        auto it = index.find(t);
        if (it == index.end()) {
          built = false;
          alpha[d].push_back(npos);
        } else {
          alpha[d].push_back(it->second);
        }
      }
    }
  }

  if (built) {
    NatTransformation a = left ? NatTransformation{kr.extension, g, alpha} : NatTransformation{g, kr.extension, alpha};
    if (check_naturality(a).valid() && factors_through(alpha)) {
      report.factors = true;
      report.alpha = std::move(a);
    }
  }

  const auto candidates = left ? enumerate_nats(kr.extension, g, limits) : enumerate_nats(g, kr.extension, limits);
  std::size_t matching = 0;
  bool matches_alpha = false;
  for (const auto& beta : candidates) {
    ++report.candidates_checked;
    if (factors_through(beta.components)) {
      ++matching;
      matches_alpha = matches_alpha || (report.alpha && beta.components == report.alpha->components);
    }
  }
  report.unique = report.factors && matching == 1 && matches_alpha;
  return report;
}

ColimitAsKanReport colimit_as_kan(const SetFunctor& diagram, const Limits& limits) {
  const SetCone direct = colimit_of_set_diagram(diagram, limits);
  const KanResult kr = left_kan(diagram, to_terminal(diagram.base()), limits);
  ColimitAsKanReport report;
  report.kan_size = kr.extension.size(0);
  report.colimit_size = direct.apex.size();

  // The unit component at j sends x to its class in the Kan value.
  std::map<std::size_t, std::size_t> kan_to_direct;
  std::map<std::size_t, std::size_t> direct_to_kan;
  bool same = true;
  for (std::size_t j = 0; j < diagram.base().num_objects(); ++j) {
    for (std::size_t x = 0; x < diagram.size(j); ++x) {
      const std::size_t a = kr.unit.components[j][x];
      const std::size_t b = direct.legs[j][x];
      auto [it1, new1] = kan_to_direct.emplace(a, b);
      auto [it2, new2] = direct_to_kan.emplace(b, a);
      if (it1->second != b || it2->second != a) same = false;
    }
  }
  report.same_partition = same && kan_to_direct.size() == report.kan_size &&
                          direct_to_kan.size() == report.colimit_size;
  return report;
}

ConfounderReport confounder_approximation(const FinCategory& c, const std::vector<std::string>& observables,
                                          const std::string& x, const Limits& limits) {
  bool x_observable = false;
  for (const auto& o : observables) x_observable = x_observable || o == x;
  if (!x_observable) throw Error("object '" + x + "' is not observable");

  const SetFunctor truth = hom_presheaf(c, x);
  const FullSubcategory sub = full_subcategory(c, observables);
  const SetFunctor restricted = precompose(truth, sub.inclusion);
  const SetFunctor lan = left_kan(restricted, sub.inclusion, limits).extension;
  const SetFunctor ran = right_kan(restricted, sub.inclusion, limits).extension;

  ConfounderReport report{truth, restricted, lan, ran, {}};
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    ConfounderReport::ObjectRow row;
    row.object = c.object_name(o);
    row.observable = sub.category.find_object(row.object).has_value();
    row.true_size = truth.size(o);
    row.left_size = lan.size(o);
    row.right_size = ran.size(o);
    row.left_agrees = row.left_size == row.true_size;
    row.right_agrees = row.right_size == row.true_size;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace unicausal
