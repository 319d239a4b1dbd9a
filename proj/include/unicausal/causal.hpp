#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "unicausal/error.hpp"
#include "unicausal/fincat.hpp"
#include "unicausal/setfun.hpp"

namespace unicausal {

/// A finite DAG over named variables. Immutable once created.
class CausalDag {
 public:
  CausalDag() = default;

  /// Throws on duplicate names, unknown endpoints, self-loops, repeated edges
  /// and directed cycles.
  static CausalDag create(std::vector<std::string> variables,
                          const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t size() const noexcept { return variables_.size(); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::string& name(std::size_t v) const { return variables_.at(v); }
  std::size_t index(const std::string& name) const;
  std::vector<std::size_t> indices(const std::vector<std::string>& names) const;

  /// Sorted (parent, child) pairs.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  std::vector<std::pair<std::string, std::string>> named_edges() const;
  bool has_edge(std::size_t parent, std::size_t child) const;

  /// Parents in variable order.
  const std::vector<std::size_t>& parents(std::size_t v) const { return parents_.at(v); }
  const std::vector<std::size_t>& children(std::size_t v) const { return children_.at(v); }
  /// Strict descendants in variable order.
  std::vector<std::size_t> descendants(std::size_t v) const;
  std::vector<std::size_t> topological_order() const { return topo_; }

  bool operator==(const CausalDag& other) const {
    return variables_ == other.variables_ && edges_ == other.edges_;
  }

 private:
  std::vector<std::string> variables_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> topo_;
};

/// True iff every undirected path between x and y is blocked by z. Sets must
/// be pairwise disjoint.
bool d_separated(const CausalDag& g, const std::vector<std::string>& x, const std::vector<std::string>& y,
                 const std::vector<std::string>& z);

/// Back-door criterion for a single treatment and outcome.
bool is_backdoor_set(const CausalDag& g, const std::string& treatment, const std::string& outcome,
                     const std::vector<std::string>& z);

/// Removes every edge entering a target.
CausalDag intervene(const CausalDag& g, const std::vector<std::string>& targets);

/// One arrow per edge, labelled "<parent>-><child>".
Quiver to_quiver(const CausalDag& g);

/// Hom(-, x) on the free category of the DAG: the directed paths into x.
SetFunctor causal_presheaf(const CausalDag& g, const std::string& x, const Limits& limits = {});

/// A finite topology closed under arbitrary unions and intersections.
///
/// Opens are kept as a sorted list of sorted point-index subsets.
class AlexandroffSpace {
 public:
  /// Validates closure; throws on violation.
  static AlexandroffSpace create(std::vector<std::string> points, std::vector<std::vector<std::size_t>> opens);

  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::vector<std::vector<std::size_t>>& opens() const noexcept { return opens_; }
  bool is_open(const std::vector<std::size_t>& subset) const;
  /// The smallest open containing the point.
  std::vector<std::size_t> minimal_open(std::size_t point) const;
  /// specialization()[x][y] iff every open containing x contains y.
  std::vector<std::vector<bool>> specialization() const;

 private:
  std::vector<std::string> points_;
  std::vector<std::vector<std::size_t>> opens_;
};

/// Topology whose minimal open at v is v with its descendants.
AlexandroffSpace alexandroff_space(const CausalDag& g, const Limits& limits = {});

/// `map[i]` is the image of point i of `source`. Throws if the map is not total.
bool is_continuous(const std::vector<std::size_t>& map, const AlexandroffSpace& source,
                   const AlexandroffSpace& target);

bool preserves_specialization(const std::vector<std::size_t>& map, const AlexandroffSpace& source,
                              const AlexandroffSpace& target);

/// Poset of intervention target sets ordered by inclusion. Objects are
/// "{A,B}" in bitmask order (variable i is bit i); the morphism S -> T is
/// named "S<=T", identities "id_S".
FinCategory intervention_category(const CausalDag& g, const Limits& limits = {});

}  // namespace unicausal
