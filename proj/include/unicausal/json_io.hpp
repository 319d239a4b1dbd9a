#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "unicausal/causal.hpp"
#include "unicausal/fincat.hpp"
#include "unicausal/scm.hpp"
#include "unicausal/setfun.hpp"
#include "unicausal/universal.hpp"

namespace unicausal::io {

using json = nlohmann::ordered_json;

/// Reads and parses a JSON file; throws `Error` naming the path.
json read_json_file(const std::filesystem::path& path);

/// {"objects", "morphisms":[{"name","dom","cod"}], "compose":[{"f","g","gf"}], "identities"?}
FinCategory category_from_json(const json& j, const Limits& limits = {});
json category_to_json(const FinCategory& c);

/// {"nodes", "edges":[{"label","src","dst"}]}
Quiver quiver_from_json(const json& j);
json quiver_to_json(const Quiver& q);

/// {"variables", "edges":[["parent","child"]]}
CausalDag dag_from_json(const json& j);
json dag_to_json(const CausalDag& g);

/// A category given as a category, a quiver (free category) or a DAG (free
/// category on its edges). A string is a path relative to `base`.
FinCategory load_category(const json& j, const Limits& limits = {}, const std::filesystem::path& base = {});

/// {"category", "variance":"co|contra", "on_objects":{"A":["x"]}, "on_morphisms":{"f":{"x":"y"}}}.
/// Identities may be omitted, and so may any morphism that is a composite of
/// listed ones.
SetFunctor functor_from_json(const json& j, const Limits& limits = {}, const std::filesystem::path& base = {});
json functor_to_json(const SetFunctor& f, bool inline_category = true);

/// {"source", "target", "on_objects":{"a":"x"}, "on_morphisms":{"f":"g"}}; identities may be omitted.
CatFunctor cat_functor_from_json(const json& j, const Limits& limits = {}, const std::filesystem::path& base = {});
json cat_functor_to_json(const CatFunctor& f);

/// {"index", "on_objects", "on_morphisms", "target":"set"|<category>}
std::variant<SetFunctor, CatFunctor> diagram_from_json(const json& j, const Limits& limits = {},
                                                       const std::filesystem::path& base = {});

/// {"dag", "card":{"X":2}, "cpt":{"X":{"parents":["Z"], "rows":{"0":[0.7,0.3]}}}}.
/// Row keys are comma-separated parent values in the listed parent order;
/// a parentless variable uses the key "".
DiscreteScm scm_from_json(const json& j);
json scm_to_json(const DiscreteScm& m);

/// {"covariates":["Z"], "strata":{"0":0.3,"1":0.6}}, keys as for CPT rows.
PropensityModel propensity_from_json(const json& j);
json propensity_to_json(const PropensityModel& p);

json nat_to_json(const NatTransformation& eta);
json joint_to_json(const JointTable& t);
json space_to_json(const AlexandroffSpace& s);

}  // namespace unicausal::io
