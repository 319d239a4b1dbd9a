#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unicausal/fincat.hpp"
#include "unicausal/setfun.hpp"

namespace unicausal {

enum class ConeKind { limit, colimit };

/// A limit or colimit of a diagram of finite sets.
///
/// For a limit, `legs[j][a]` is the image of apex element `a` in the set at
/// index object `j`. For a colimit, `legs[j][x]` is the apex element that
/// element `x` of the set at `j` is sent to.
struct SetCone {
  ConeKind kind = ConeKind::limit;
  std::vector<std::string> apex;
  std::vector<std::vector<std::size_t>> legs;
};

/// Limit of a covariant diagram J -> FinSet: compatible tuples, named
/// "(x_1,...,x_k)" in index-object order.
SetCone limit_of_set_diagram(const SetFunctor& diagram, const Limits& limits = {});

/// Colimit of a covariant diagram J -> FinSet: the disjoint union quotiented
/// by x ~ F(f)(x). Members of the disjoint union are identified as
/// "<object>:<element>"; each class is named "[rep]" after its
/// lexicographically least member and classes are listed in that order.
SetCone colimit_of_set_diagram(const SetFunctor& diagram, const Limits& limits = {});

/// Exhaustive check of the universal property against every competitor
/// cone with an apex of 1..max_apex elements.
struct UniversalityReport {
  std::size_t cones_checked = 0;
  std::size_t failures = 0;

  bool holds() const noexcept { return failures == 0; }
};

UniversalityReport verify_set_universality(const SetFunctor& diagram, const SetCone& cone,
                                           std::size_t max_apex = 2, const Limits& limits = {});

/// A cone (or cocone) over a diagram inside a finite category. Legs are
/// apex -> d(j) for limits and d(j) -> apex for colimits.
struct CategoryCone {
  std::size_t apex = 0;
  std::vector<std::size_t> legs;

  bool operator==(const CategoryCone&) const = default;
};

struct CategoryConeResult {
  ConeKind kind = ConeKind::limit;
  CategoryCone cone;
  /// For every competitor cone, its unique factoring morphism.
  std::vector<std::pair<CategoryCone, std::size_t>> mediators;
};

std::vector<CategoryCone> enumerate_cones(const CatFunctor& diagram, const Limits& limits = {});

/// The limit of `diagram` inside its target category, found by checking the
/// universal property against every cone. Among isomorphic apexes the first
/// in object declaration order is returned.
std::optional<CategoryConeResult> limit_in_category(const CatFunctor& diagram, const Limits& limits = {});

/// Dual of limit_in_category, computed in the opposite category.
std::optional<CategoryConeResult> colimit_in_category(const CatFunctor& diagram, const Limits& limits = {});

enum class Shape { product, coproduct, pullback, pushout, equalizer, coequalizer };

Shape parse_shape(const std::string& name);
std::string to_string(Shape s);

/// Index category of a shape. Objects are named a, b (and c); arrows f, g.
///   product, coproduct: discrete {a, b}
///   pullback:           a -f-> c <-g- b
///   pushout:            a <-f- c -g-> b
///   equalizer, coequalizer: f, g : a -> b
FinCategory shape_index(Shape s);

/// A set-valued diagram of the given shape. `sets` are listed in the object
/// order above, `functions` in the arrow order, as element-name tables.
SetFunctor shape_set_diagram(Shape s, const std::vector<std::vector<std::string>>& sets,
                             const std::vector<std::map<std::string, std::string>>& functions);

/// A diagram of the given shape inside `target`, by object and morphism name.
CatFunctor shape_diagram(Shape s, const FinCategory& target, const std::vector<std::string>& objects,
                         const std::vector<std::string>& morphisms);

}  // namespace unicausal
