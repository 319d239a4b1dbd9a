#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unicausal/error.hpp"

namespace unicausal {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Morphism {
  std::string name;
  std::size_t dom = 0;
  std::size_t cod = 0;

  bool operator==(const Morphism&) const = default;
};

/// Unvalidated, name-based description of a finite category.
///
/// Identities may be omitted: an object without an entry in `identities`
/// uses the morphism `id_<object>` (added if absent), and composites with
/// identities are filled in when the table does not list them.
struct CategoryDescription {
  struct Arrow {
    std::string name;
    std::string dom;
    std::string cod;
  };
  /// `gf` is the composite g after f.
  struct Composite {
    std::string f;
    std::string g;
    std::string gf;
  };

  std::vector<std::string> objects;
  std::vector<Arrow> morphisms;
  std::map<std::string, std::string> identities;
  std::vector<Composite> compose;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool valid() const noexcept { return violations.empty(); }
};

/// Checks every category axiom on a description; violations are returned as
/// data and name the offending morphisms.
ValidationReport validate_category(const CategoryDescription& raw);

/// An explicit finite category with a total composition table.
///
/// Instances are immutable and cheap to copy (shared storage). Objects and
/// morphisms are addressed by index; names are unique identifiers.
class FinCategory {
 public:
  /// The empty category.
  FinCategory();

  static FinCategory from_description(const CategoryDescription& raw,
                                      const Limits& limits = {});

  std::size_t num_objects() const noexcept;
  std::size_t num_morphisms() const noexcept;

  const std::string& object_name(std::size_t obj) const;
  const Morphism& morphism(std::size_t m) const;
  const std::string& morphism_name(std::size_t m) const { return morphism(m).name; }
  std::size_t dom(std::size_t m) const { return morphism(m).dom; }
  std::size_t cod(std::size_t m) const { return morphism(m).cod; }

  std::size_t identity(std::size_t obj) const;
  bool is_identity(std::size_t m) const;

  /// g after f; throws if cod(f) != dom(g).
  std::size_t compose(std::size_t g, std::size_t f) const;

  std::optional<std::size_t> find_object(std::string_view name) const;
  std::optional<std::size_t> find_morphism(std::string_view name) const;
  std::size_t object_index(std::string_view name) const;
  std::size_t morphism_index(std::string_view name) const;

  /// Morphisms x -> y in declaration order.
  const std::vector<std::size_t>& hom(std::size_t x, std::size_t y) const;
  /// Position of `m` inside hom(dom m, cod m).
  std::size_t hom_position(std::size_t m) const;
  const std::vector<std::size_t>& outgoing(std::size_t x) const;
  const std::vector<std::size_t>& incoming(std::size_t x) const;

  CategoryDescription describe() const;

  /// Exact equality of the data representation (names, order, tables).
  bool operator==(const FinCategory& other) const;

  bool same_storage(const FinCategory& other) const noexcept { return data_ == other.data_; }

 private:
  struct Data;
  explicit FinCategory(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;

  friend FinCategory build_category(std::vector<std::string> objects,
                                    std::vector<Morphism> morphisms,
                                    std::vector<std::size_t> identities,
                                    const std::function<std::size_t(std::size_t, std::size_t)>& compose);
};

/// Assembles a category from trusted generated data. `compose(g, f)` is
/// queried once for each composable pair. Axioms are not re-checked.
FinCategory build_category(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                           std::vector<std::size_t> identities,
                           const std::function<std::size_t(std::size_t, std::size_t)>& compose);

/// Directed multigraph; the generator of a free category.
struct Quiver {
  struct Arrow {
    std::string label;
    std::string source;
    std::string target;
  };

  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;
};

/// Path category of an acyclic quiver. Identities are `id_<vertex>`; a path
/// is named by its arrow labels in composition order joined with '.'.
FinCategory free_category(const Quiver& q, const Limits& limits = {});

FinCategory opposite(const FinCategory& c);

FinCategory terminal_category();

/// Data for a functor between finite categories, by index.
struct FunctorDescription {
  FinCategory source;
  FinCategory target;
  std::vector<std::size_t> object_map;
  std::vector<std::size_t> morphism_map;
};

/// Checks totality, endpoint preservation, identities and composition.
ValidationReport validate_functor(const FunctorDescription& f);

class CatFunctor {
 public:
  /// Validates and throws `Error` listing the violations.
  static CatFunctor create(FunctorDescription desc);

  const FinCategory& source() const noexcept { return desc_->source; }
  const FinCategory& target() const noexcept { return desc_->target; }
  std::size_t on_object(std::size_t obj) const { return desc_->object_map.at(obj); }
  std::size_t on_morphism(std::size_t m) const { return desc_->morphism_map.at(m); }
  const FunctorDescription& describe() const noexcept { return *desc_; }

 private:
  explicit CatFunctor(std::shared_ptr<const FunctorDescription> d) : desc_(std::move(d)) {}
  std::shared_ptr<const FunctorDescription> desc_;
};

CatFunctor identity_functor(const FinCategory& c);
/// The functor from the terminal category picking `obj`.
CatFunctor constant_functor(const FinCategory& target, std::size_t obj);
/// The unique functor to the terminal category.
CatFunctor to_terminal(const FinCategory& c);
/// g after f.
CatFunctor compose(const CatFunctor& g, const CatFunctor& f);
/// The same assignment viewed between opposite categories.
CatFunctor opposite(const CatFunctor& f);

struct FullSubcategory {
  FinCategory category;
  CatFunctor inclusion;
};

/// Objects are kept in the order of `c`; throws on unknown names.
FullSubcategory full_subcategory(const FinCategory& c, const std::vector<std::string>& keep);

struct CommaCategory {
  struct Entry {
    std::size_t a;
    std::size_t b;
    std::size_t arrow;  // morphism F a -> G b of the common target
  };

  FinCategory category;
  CatFunctor to_left;   // projection to the source of F
  CatFunctor to_right;  // projection to the source of G
  std::vector<Entry> entries;  // indexed like category objects

  /// Object index of (a, b, arrow), if present.
  std::optional<std::size_t> find(std::size_t a, std::size_t b, std::size_t arrow) const;
};

/// The comma category (F | G). Objects are triples (a, b, f: F a -> G b),
/// listed in lexicographic order of their component names.
CommaCategory comma_category(const CatFunctor& f, const CatFunctor& g, const Limits& limits = {});

}  // namespace unicausal
