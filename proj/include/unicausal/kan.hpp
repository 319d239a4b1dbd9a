#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "unicausal/fincat.hpp"
#include "unicausal/setfun.hpp"
#include "unicausal/universal.hpp"

namespace unicausal {

enum class KanKind { left, right };

/// A pointwise Kan extension of a set-valued functor F on C along K: C -> D.
///
/// Presheaves are extended through the opposite categories, so `commas` and
/// `cones` always describe the covariant computation: for a left extension
/// commas[d] is (K | d) and cones[d] its colimit; for a right extension
/// commas[d] is (d | K) and cones[d] its limit.
struct KanResult {
  KanKind kind = KanKind::left;
  SetFunctor functor;
  CatFunctor along;
  SetFunctor extension;
  /// Left: the unit F => Lan . K. Right: the counit Ran . K => F.
  NatTransformation unit;
  std::vector<CommaCategory> commas;
  std::vector<SetCone> cones;
};

KanResult left_kan(const SetFunctor& f, const CatFunctor& k, const Limits& limits = {});
KanResult right_kan(const SetFunctor& f, const CatFunctor& k, const Limits& limits = {});

struct KanUniversalityReport {
  /// The factoring transformation built from the (co)limit mediators.
  std::optional<NatTransformation> alpha;
  bool factors = false;
  /// Exactly one transformation in the exhaustive search factors gamma.
  bool unique = false;
  std::size_t candidates_checked = 0;
  /// Set when the inputs break the contract (gamma not natural, wrong types).
  std::string violation;
};

/// Left: gamma is F => G.K and alpha is Lan => G with (alpha K) . unit = gamma.
/// Right: gamma is G.K => F and alpha is G => Ran with counit . (alpha K) = gamma.
KanUniversalityReport kan_universality_check(const KanResult& kr, const SetFunctor& g,
                                             const NatTransformation& gamma, const Limits& limits = {});

struct ColimitAsKanReport {
  std::size_t kan_size = 0;
  std::size_t colimit_size = 0;
  /// Both engines induce the same partition of the disjoint union.
  bool same_partition = false;

  bool agree() const noexcept { return kan_size == colimit_size && same_partition; }
};

/// Colimit of a set diagram computed as the left Kan extension along the
/// functor to the terminal category, compared with the direct engine.
ColimitAsKanReport colimit_as_kan(const SetFunctor& diagram, const Limits& limits = {});

struct ConfounderReport {
  struct ObjectRow {
    std::string object;
    bool observable = false;
    std::size_t true_size = 0;
    std::size_t left_size = 0;
    std::size_t right_size = 0;
    bool left_agrees = false;
    bool right_agrees = false;
  };

  SetFunctor true_presheaf;
  SetFunctor restricted;
  SetFunctor extended_left;
  SetFunctor extended_right;
  std::vector<ObjectRow> rows;
};

/// Restricts Hom(-, x) to the full subcategory of observable objects and
/// extends it back along the inclusion in both directions, comparing
/// pointwise cardinalities with the true presheaf.
ConfounderReport confounder_approximation(const FinCategory& c, const std::vector<std::string>& observables,
                                          const std::string& x, const Limits& limits = {});

}  // namespace unicausal
