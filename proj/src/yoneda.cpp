#include "unicausal/yoneda.hpp"

#include <map>
#include <set>

#include "unicausal/universal.hpp"

namespace unicausal {

SetFunctor hom_presheaf(const FinCategory& c, std::size_t x) {
  SetFunctorDescription d{c, Variance::contravariant, {}, {}};
  for (std::size_t z = 0; z < c.num_objects(); ++z) {
    std::vector<std::string> names;
    for (std::size_t h : c.hom(z, x)) names.push_back(c.morphism_name(h));
    d.elements.push_back(std::move(names));
  }
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    std::vector<std::size_t> act;
    for (std::size_t h : c.hom(c.cod(m), x)) act.push_back(c.hom_position(c.compose(h, m)));
    d.actions.push_back(std::move(act));
  }
  return SetFunctor::create(std::move(d));
}

SetFunctor hom_presheaf(const FinCategory& c, const std::string& x) { return hom_presheaf(c, c.object_index(x)); }

SetFunctor hom_copresheaf(const FinCategory& c, std::size_t x) {
  SetFunctorDescription d{c, Variance::covariant, {}, {}};
  for (std::size_t y = 0; y < c.num_objects(); ++y) {
    std::vector<std::string> names;
    for (std::size_t h : c.hom(x, y)) names.push_back(c.morphism_name(h));
    d.elements.push_back(std::move(names));
  }
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    std::vector<std::size_t> act;
    for (std::size_t h : c.hom(x, c.dom(m))) act.push_back(c.hom_position(c.compose(m, h)));
    d.actions.push_back(std::move(act));
  }
  return SetFunctor::create(std::move(d));
}

YonedaReport yoneda_lemma_check(const FinCategory& c, std::size_t x, const SetFunctor& f, const Limits& limits) {
  if (!f.is_presheaf()) throw Error("the Yoneda check takes a presheaf");
  const SetFunctor rep = hom_presheaf(c, x);
  const auto nats = enumerate_nats(rep, f, limits);
  const std::size_t id_pos = c.hom_position(c.identity(x));

  YonedaReport report;
  report.nat_count = nats.size();
  report.fx_count = f.size(x);
  std::set<std::size_t> hit;
  std::map<std::vector<std::vector<std::size_t>>, std::size_t> index;
  for (std::size_t k = 0; k < nats.size(); ++k) {
    const std::size_t e = nats[k].components[x][id_pos];
    report.witness.emplace_back(k, f.elements(x)[e]);
    hit.insert(e);
    index.emplace(nats[k].components, k);
  }
  bool ok = hit.size() == nats.size() && nats.size() == f.size(x);
  // Inverse direction: each element x0 determines h -> F(h)(x0).
  for (std::size_t e = 0; e < f.size(x) && ok; ++e) {
    std::vector<std::vector<std::size_t>> comps(c.num_objects());
    for (std::size_t z = 0; z < c.num_objects(); ++z) {
      for (std::size_t h : c.hom(z, x)) comps[z].push_back(f.apply(h, e));
    }
    auto it = index.find(comps);
    ok = it != index.end() && nats[it->second].components[x][id_pos] == e;
  }
  report.bijection = ok;
  return report;
}

CrpReport crp_check(const FinCategory& c, std::size_t x, std::size_t y, const Limits& limits) {
  const auto nats = enumerate_nats(hom_presheaf(c, x), hom_presheaf(c, y), limits);
  std::map<std::vector<std::vector<std::size_t>>, std::size_t> index;
  for (std::size_t k = 0; k < nats.size(); ++k) index.emplace(nats[k].components, k);

  CrpReport report;
  report.hom_count = c.hom(x, y).size();
  report.nat_count = nats.size();
  std::set<std::size_t> hit;
  bool ok = report.hom_count == report.nat_count;
  for (std::size_t f : c.hom(x, y)) {
    std::vector<std::vector<std::size_t>> comps(c.num_objects());
    for (std::size_t z = 0; z < c.num_objects(); ++z) {
      for (std::size_t h : c.hom(z, x)) comps[z].push_back(c.hom_position(c.compose(f, h)));
    }
    auto it = index.find(comps);
    if (it == index.end()) {
      ok = false;
      continue;
    }
    report.witness.emplace_back(c.morphism_name(f), it->second);
    hit.insert(it->second);
  }
  report.bijection = ok && hit.size() == report.hom_count;
  return report;
}

ElementsCategory category_of_elements(const SetFunctor& p, const Limits& limits) {
  if (!p.is_presheaf()) throw Error("the category of elements is built here for presheaves");
  const auto& c = p.base();
  std::vector<std::string> objects;
  std::vector<std::pair<std::size_t, std::size_t>> points;
  std::vector<std::size_t> first(c.num_objects(), 0);
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    first[o] = points.size();
    for (std::size_t x = 0; x < p.size(o); ++x) {
      objects.push_back("(" + c.object_name(o) + "," + p.elements(o)[x] + ")");
      points.emplace_back(o, x);
    }
  }
  // morphism (f, x') with x' in P(cod f) sits at offset[f] + x'
  std::vector<std::size_t> offset(c.num_morphisms() + 1, 0);
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) offset[m + 1] = offset[m] + p.size(c.cod(m));
  detail::guard("max_assignments", limits.max_assignments, offset.back());

  std::vector<Morphism> morphisms;
  std::vector<std::size_t> base_morphism;
  std::vector<std::size_t> target_element;
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) {
    for (std::size_t xp = 0; xp < p.size(c.cod(m)); ++xp) {
      morphisms.push_back({"(" + c.morphism_name(m) + "," + p.elements(c.cod(m))[xp] + ")",
                           first[c.dom(m)] + p.apply(m, xp), first[c.cod(m)] + xp});
      base_morphism.push_back(m);
      target_element.push_back(xp);
    }
  }
  std::vector<std::size_t> identities;
  for (const auto& [o, x] : points) identities.push_back(offset[c.identity(o)] + x);

  FinCategory cat = build_category(objects, morphisms, identities, [&](std::size_t g, std::size_t f) {
    return offset[c.compose(base_morphism[g], base_morphism[f])] + target_element[g];
  });
  FunctorDescription proj{cat, c, {}, base_morphism};
  for (const auto& pt : points) proj.object_map.push_back(pt.first);
  return {p, cat, CatFunctor::create(std::move(proj)), std::move(points)};
}

UctReport uct_decompose(const SetFunctor& p, const Limits& limits) {
  ElementsCategory el = category_of_elements(p, limits);
  const auto& c = p.base();
  const auto& J = el.category;
  const std::size_t n = c.num_objects();

  // For each d: the diagram (c,x) -> Hom(d, c) over the elements, and its colimit.
  std::vector<SetCone> cones;
  for (std::size_t d = 0; d < n; ++d) {
    SetFunctorDescription diag{J, Variance::covariant, {}, {}};
    for (const auto& [o, x] : el.points) {
      std::vector<std::string> names;
      for (std::size_t h : c.hom(d, o)) names.push_back(c.morphism_name(h));
      diag.elements.push_back(std::move(names));
    }
    for (std::size_t m = 0; m < J.num_morphisms(); ++m) {
      const std::size_t f = el.projection.on_morphism(m);
      std::vector<std::size_t> act;
      for (std::size_t h : c.hom(d, c.dom(f))) act.push_back(c.hom_position(c.compose(f, h)));
      diag.actions.push_back(std::move(act));
    }
    cones.push_back(colimit_of_set_diagram(SetFunctor::create(std::move(diag)), limits));
  }

  bool verified = true;
  SetFunctorDescription colim{c, Variance::contravariant, {}, {}};
  for (const auto& cone : cones) colim.elements.push_back(cone.apex);
  for (std::size_t u = 0; u < c.num_morphisms(); ++u) {
    const std::size_t d = c.cod(u);       // reads colim(d)
    const std::size_t dprime = c.dom(u);  // writes colim(d')
    std::vector<std::size_t> act(cones[d].apex.size(), npos);
    for (std::size_t j = 0; j < J.num_objects(); ++j) {
      const std::size_t o = el.points[j].first;
      const auto& homs = c.hom(d, o);
      for (std::size_t i = 0; i < homs.size(); ++i) {
        const std::size_t image = cones[dprime].legs[j][c.hom_position(c.compose(homs[i], u))];
        auto& slot = act[cones[d].legs[j][i]];
        if (slot != npos && slot != image) verified = false;
        slot = image;
      }
    }
    colim.actions.push_back(std::move(act));
  }
  if (!verified) throw Error("colimit of representables is not well defined; engine defect");
  SetFunctor colimit = SetFunctor::create(std::move(colim));

  // Comparison [(c,x), h] -> P(h)(x).
  NatTransformation iso{colimit, p, {}};
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<std::size_t> comp(cones[d].apex.size(), npos);
    for (std::size_t j = 0; j < J.num_objects(); ++j) {
      const auto [o, x] = el.points[j];
      const auto& homs = c.hom(d, o);
      for (std::size_t i = 0; i < homs.size(); ++i) {
        const std::size_t value = p.apply(homs[i], x);
        auto& slot = comp[cones[d].legs[j][i]];
        if (slot != npos && slot != value) verified = false;
        slot = value;
      }
    }
    std::set<std::size_t> image(comp.begin(), comp.end());
    if (image.count(npos) || image.size() != comp.size() || comp.size() != p.size(d)) verified = false;
    iso.components.push_back(std::move(comp));
  }
  if (verified) verified = check_naturality(iso).valid();
  if (!verified) throw Error("comparison map to the presheaf is not a natural isomorphism; engine defect");
  return {std::move(el), std::move(colimit), std::move(iso), true};
}

}  // namespace unicausal
