#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unicausal/error.hpp"
#include "unicausal/fincat.hpp"

namespace unicausal {

enum class Variance { covariant, contravariant };

/// Raw data of a finite-set-valued functor.
///
/// `actions[m]` is an association table from element indices of the set the
/// action reads to element indices of the set it writes. For a covariant
/// functor that is F(dom m) -> F(cod m); for a presheaf it runs against the
/// arrow, F(cod m) -> F(dom m).
struct SetFunctorDescription {
  FinCategory base;
  Variance variance = Variance::covariant;
  std::vector<std::vector<std::string>> elements;
  std::vector<std::vector<std::size_t>> actions;
};

ValidationReport validate_functor(const SetFunctorDescription& f);

/// Validated, immutable set-valued functor (covariant) or presheaf
/// (contravariant). Copies share storage.
class SetFunctor {
 public:
  static SetFunctor create(SetFunctorDescription desc);

  const FinCategory& base() const noexcept;
  Variance variance() const noexcept;
  bool is_presheaf() const noexcept { return variance() == Variance::contravariant; }

  std::size_t size(std::size_t obj) const;
  const std::vector<std::string>& elements(std::size_t obj) const;
  std::size_t element_index(std::size_t obj, std::string_view name) const;

  const std::vector<std::size_t>& action(std::size_t m) const;
  std::size_t apply(std::size_t m, std::size_t element) const { return action(m).at(element); }
  /// Object whose set the action of `m` reads.
  std::size_t action_source(std::size_t m) const;
  /// Object whose set the action of `m` writes.
  std::size_t action_target(std::size_t m) const;

  const SetFunctorDescription& describe() const noexcept;

  /// Throws SizeGuardError if any element set exceeds `limits.max_set`.
  void check_limits(const Limits& limits) const;

  bool operator==(const SetFunctor& other) const;

 private:
  struct Data;
  explicit SetFunctor(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

/// A family of component functions between two parallel set functors.
struct NatTransformation {
  SetFunctor source;
  SetFunctor target;
  /// components[X][i] is the image of source element i at X.
  std::vector<std::vector<std::size_t>> components;
};

/// Reports every naturality square that fails, naming the morphism.
ValidationReport check_naturality(const NatTransformation& eta);

NatTransformation identity_nat(const SetFunctor& f);
/// Vertical composite beta after alpha.
NatTransformation compose(const NatTransformation& beta, const NatTransformation& alpha);

struct NatEnumerationOptions {
  bool bijective_only = false;
  std::size_t max_results = npos;
};

/// All natural transformations F => G in lexicographic component order
/// (objects in declaration order, each component read as a tuple).
std::vector<NatTransformation> enumerate_nats(const SetFunctor& f, const SetFunctor& g,
                                              const Limits& limits = {},
                                              const NatEnumerationOptions& options = {});

std::size_t count_nats(const SetFunctor& f, const SetFunctor& g, const Limits& limits = {});

struct FullFaithfulReport {
  bool faithful = true;
  bool full = true;
};

FullFaithfulReport check_fully_faithful(const CatFunctor& f);

/// A natural isomorphism F => G found by exhaustive search, if one exists.
std::optional<NatTransformation> natural_iso_check(const SetFunctor& f, const SetFunctor& g,
                                                   const Limits& limits = {});

SetFunctor presheaf_terminal(const FinCategory& base, Variance variance = Variance::contravariant);
/// Pointwise product; elements at X are named "(p,q)" in p-major order.
SetFunctor presheaf_product(const SetFunctor& p, const SetFunctor& q);
/// Exponential Q^P of presheaves: (Q^P)(c) = Nat(Hom(-,c) x P, Q), elements
/// named "nt<k>" by enumeration index, action by precomposition.
SetFunctor presheaf_exponential(const SetFunctor& p, const SetFunctor& q, const Limits& limits = {});

/// F after K, for F on the target of K; keeps the variance of F.
SetFunctor precompose(const SetFunctor& f, const CatFunctor& k);

/// A presheaf on C read as a covariant functor on the opposite of C (and
/// back). The element and action data are unchanged.
SetFunctor flip_variance(const SetFunctor& f, const FinCategory& new_base);

}  // namespace unicausal
