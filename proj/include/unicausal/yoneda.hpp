#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "unicausal/fincat.hpp"
#include "unicausal/setfun.hpp"

namespace unicausal {

/// Hom(-, x): the presheaf of all morphisms into x, acting by precomposition.
/// Elements are morphism names in declaration order.
SetFunctor hom_presheaf(const FinCategory& c, std::size_t x);
SetFunctor hom_presheaf(const FinCategory& c, const std::string& x);

/// Hom(x, -): the covariant dual, acting by postcomposition.
SetFunctor hom_copresheaf(const FinCategory& c, std::size_t x);

struct YonedaReport {
  std::size_t nat_count = 0;
  std::size_t fx_count = 0;
  /// (index into the enumeration, element eta_X(id_X)) for every eta.
  std::vector<std::pair<std::size_t, std::string>> witness;
  /// The map eta -> eta_X(id_X) is a bijection onto F(X), and each element
  /// x is hit by the transformation h -> F(h)(x).
  bool bijection = false;
};

YonedaReport yoneda_lemma_check(const FinCategory& c, std::size_t x, const SetFunctor& f,
                                const Limits& limits = {});

struct CrpReport {
  std::size_t hom_count = 0;
  std::size_t nat_count = 0;
  /// (morphism name, index of the postcomposition transformation).
  std::vector<std::pair<std::string, std::size_t>> witness;
  bool bijection = false;
};

/// Hom(X, Y) against Nat(Hom(-,X), Hom(-,Y)) through f -> (h -> f . h).
CrpReport crp_check(const FinCategory& c, std::size_t x, std::size_t y, const Limits& limits = {});

struct ElementsCategory {
  SetFunctor presheaf;
  FinCategory category;
  CatFunctor projection;
  /// (base object, element index) per object of `category`.
  std::vector<std::pair<std::size_t, std::size_t>> points;
};

/// The category of elements of a presheaf: objects (c, x) with x in P(c);
/// a morphism (c,x) -> (c',x') for each f: c -> c' with P(f)(x') = x.
ElementsCategory category_of_elements(const SetFunctor& p, const Limits& limits = {});

struct UctReport {
  ElementsCategory elements;
  /// The pointwise colimit of the representables over the elements.
  SetFunctor colimit;
  /// Comparison colimit => P, checked bijective and natural.
  NatTransformation iso;
  bool verified = false;
};

/// Rebuilds P as the colimit of representables indexed by its category of
/// elements and verifies the comparison map is a natural isomorphism.
/// Throws if the verification fails.
UctReport uct_decompose(const SetFunctor& p, const Limits& limits = {});

}  // namespace unicausal
