#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "unicausal/causal.hpp"
#include "unicausal/fincat.hpp"
#include "unicausal/scm.hpp"
#include "unicausal/setfun.hpp"

namespace testsupport {

using namespace unicausal;

struct NamedCategory {
  std::string name;
  FinCategory category;
};

struct NamedDag {
  std::string name;
  CausalDag dag;
};

FinCategory chain_category(std::size_t length);
CausalDag chain_dag(std::size_t length);
CausalDag collider_dag();
CausalDag fork_dag();
CausalDag diamond_dag();
/// Z -> X, Z -> Y, X -> Y.
CausalDag confounder_dag();

FinCategory free_of(const CausalDag& g);
/// a <= b as an explicit table.
FinCategory two_object_poset();
/// bottom <= x, bottom <= y.
FinCategory vee_poset();
/// Two objects joined by an inverse pair f, g.
FinCategory iso_pair();
/// One object with an idempotent e.
FinCategory idempotent_monoid();

std::vector<NamedCategory> category_corpus();
std::vector<NamedDag> dag_corpus();

/// Binary SCM on Z -> X, Z -> Y, X -> Y with dyadic parameters.
DiscreteScm confounded_scm();
/// Binary SCM with Y a copy of X.
DiscreteScm copy_scm();

/// A random presheaf (or covariant functor) with sets of at most `max_size`
/// elements, found by backtracking over the action tables.
SetFunctor random_functor(const FinCategory& c, Variance v, std::size_t max_size, std::mt19937_64& rng);

/// A random set-valued functor on `c` re-labelled with a random permutation of each set.
SetFunctor relabel(const SetFunctor& f, std::mt19937_64& rng);

}  // namespace testsupport
