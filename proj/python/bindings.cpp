#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unicausal/cli.hpp"
#include "unicausal/json_io.hpp"
#include "unicausal/kan.hpp"
#include "unicausal/yoneda.hpp"

namespace py = pybind11;
using namespace unicausal;
using unicausal::io::json;

namespace {

std::vector<std::size_t> sizes(const SetFunctor& f) {
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o < f.base().num_objects(); ++o) out.push_back(f.size(o));
  return out;
}

}  // namespace

PYBIND11_MODULE(_unicausal, m) {
  m.doc() = "Finite categories, presheaves, Kan extensions and discrete causal models";

  const auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<SizeGuardError>(m, "SizeGuardError", error.ptr());

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        const int code = cli::run(args, out);
        return py::make_tuple(code, out.str());
      },
      py::arg("args"), "Run a CLI command; returns (exit code, output).");

  py::class_<Limits>(m, "Limits")
      .def(py::init<>())
      .def_readwrite("max_objects", &Limits::max_objects)
      .def_readwrite("max_morphisms", &Limits::max_morphisms)
      .def_readwrite("max_set", &Limits::max_set)
      .def_readwrite("max_assignments", &Limits::max_assignments);

  py::class_<FinCategory>(m, "Category")
      .def_static(
          "from_json",
          [](const std::string& text, const Limits& limits) { return io::load_category(json::parse(text), limits); },
          py::arg("text"), py::arg("limits") = Limits{})
      .def("to_json", [](const FinCategory& c) { return io::category_to_json(c).dump(); })
      .def_property_readonly("objects",
                             [](const FinCategory& c) {
                               std::vector<std::string> out;
                               for (std::size_t o = 0; o < c.num_objects(); ++o) out.push_back(c.object_name(o));
                               return out;
                             })
      .def_property_readonly("num_morphisms", &FinCategory::num_morphisms)
      .def("hom", [](const FinCategory& c, const std::string& x, const std::string& y) {
        std::vector<std::string> out;
        for (auto m : c.hom(c.object_index(x), c.object_index(y))) out.push_back(c.morphism_name(m));
        return out;
      });

  py::class_<SetFunctor>(m, "SetFunctor")
      .def_static(
          "from_json",
          [](const std::string& text, const Limits& limits) { return io::functor_from_json(json::parse(text), limits); },
          py::arg("text"), py::arg("limits") = Limits{})
      .def("to_json", [](const SetFunctor& f) { return io::functor_to_json(f).dump(); })
      .def_property_readonly("sizes", &sizes)
      .def_property_readonly("is_presheaf", &SetFunctor::is_presheaf);

  m.def("hom_presheaf", py::overload_cast<const FinCategory&, const std::string&>(&hom_presheaf));
  m.def("count_nats", &count_nats, py::arg("f"), py::arg("g"), py::arg("limits") = Limits{});
  m.def(
      "crp_check",
      [](const FinCategory& c, const std::string& x, const std::string& y) {
        const auto r = crp_check(c, c.object_index(x), c.object_index(y));
        return py::dict(py::arg("hom_count") = r.hom_count, py::arg("nat_count") = r.nat_count,
                        py::arg("bijection") = r.bijection);
      },
      py::arg("category"), py::arg("source"), py::arg("target"));
  m.def(
      "yoneda_check",
      [](const SetFunctor& f, const std::string& x) {
        const auto r = yoneda_lemma_check(f.base(), f.base().object_index(x), f);
        return py::dict(py::arg("nat_count") = r.nat_count, py::arg("fx_count") = r.fx_count,
                        py::arg("bijection") = r.bijection);
      },
      py::arg("presheaf"), py::arg("object"));
  m.def(
      "uct_verified", [](const SetFunctor& p) { return uct_decompose(p).verified; }, py::arg("presheaf"));
  m.def(
      "confounder_approximation",
      [](const FinCategory& c, const std::vector<std::string>& observables, const std::string& x) {
        py::list rows;
        for (const auto& r : confounder_approximation(c, observables, x).rows) {
          rows.append(py::dict(py::arg("object") = r.object, py::arg("observable") = r.observable,
                               py::arg("true_size") = r.true_size, py::arg("left_size") = r.left_size,
                               py::arg("right_size") = r.right_size));
        }
        return rows;
      },
      py::arg("category"), py::arg("observables"), py::arg("object"));

  py::class_<CausalDag>(m, "Dag")
      .def(py::init(&CausalDag::create), py::arg("variables"), py::arg("edges"))
      .def_property_readonly("variables", &CausalDag::variables)
      .def_property_readonly("edges", &CausalDag::named_edges)
      .def("category", [](const CausalDag& g, const Limits& limits) { return free_category(to_quiver(g), limits); },
           py::arg("limits") = Limits{});

  m.def("d_separated", &d_separated, py::arg("dag"), py::arg("x"), py::arg("y"), py::arg("z") = std::vector<std::string>{});
  m.def("is_backdoor_set", &is_backdoor_set, py::arg("dag"), py::arg("treatment"), py::arg("outcome"), py::arg("z"));
  m.def("intervene", &intervene, py::arg("dag"), py::arg("targets"));
  m.def(
      "alexandroff_opens",
      [](const CausalDag& g) {
        const auto space = alexandroff_space(g);
        std::vector<std::vector<std::string>> out;
        for (const auto& open : space.opens()) {
          std::vector<std::string> names;
          for (auto v : open) names.push_back(g.name(v));
          out.push_back(std::move(names));
        }
        return out;
      },
      py::arg("dag"));

  py::class_<DiscreteScm>(m, "Scm")
      .def_static("from_json", [](const std::string& text) { return io::scm_from_json(json::parse(text)); })
      .def("to_json", [](const DiscreteScm& s) { return io::scm_to_json(s).dump(); })
      .def_property_readonly("dag", &DiscreteScm::dag);

  m.def(
      "joint",
      [](const DiscreteScm& s) { return joint_distribution(s).probabilities(); }, py::arg("scm"));
  m.def(
      "do_marginal",
      [](const DiscreteScm& s, const std::map<std::string, std::size_t>& assignment, const std::string& y) {
        return do_distribution(s, assignment).marginal({y}).probabilities();
      },
      py::arg("scm"), py::arg("assignment"), py::arg("outcome"));
  m.def("adjustment_estimate", &adjustment_estimate, py::arg("scm"), py::arg("x"), py::arg("x_value"), py::arg("y"),
        py::arg("z"), py::arg("limits") = Limits{});
  m.def("ate_exact", &ate_exact, py::arg("scm"), py::arg("x"), py::arg("y"), py::arg("y_values") = std::vector<double>{},
        py::arg("limits") = Limits{});
  m.def(
      "is_confounded", [](const DiscreteScm& s, const std::string& x, const std::string& y) {
        return is_confounded(s, x, y).confounded;
      },
      py::arg("scm"), py::arg("x"), py::arg("y"));
  m.def(
      "sample",
      [](const DiscreteScm& s, std::size_t n, std::uint64_t seed) {
        const auto d = sample(s, n, seed);
        return py::make_tuple(d.columns, d.rows);
      },
      py::arg("scm"), py::arg("n"), py::arg("seed") = 0);
  m.def(
      "ht_estimate",
      [](const DiscreteScm& s, std::size_t n, std::uint64_t seed, const std::string& t, const std::string& y) {
        return ht_estimate(sample(s, n, seed), t, y, true_propensity(s, t));
      },
      py::arg("scm"), py::arg("n"), py::arg("seed"), py::arg("treatment"), py::arg("outcome"),
      "Horvitz-Thompson estimate on a fresh sample, weighted by the SCM's own propensity.");
}
