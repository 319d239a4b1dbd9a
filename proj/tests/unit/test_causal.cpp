#include <doctest.h>

#include <algorithm>
#include <iterator>
#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "unicausal/causal.hpp"

using namespace unicausal;
using namespace testsupport;

namespace {

CausalDag random_dag(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back("V" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> edges;
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.emplace_back(vars[i], vars[j]);
    }
  }
  return CausalDag::create(vars, edges);
}

std::vector<std::string> names(const CausalDag& g, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(g.name(i));
  return out;
}

std::vector<std::size_t> sizes(const SetFunctor& f) {
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o < f.base().num_objects(); ++o) out.push_back(f.size(o));
  return out;
}

using Opens = std::vector<std::vector<std::size_t>>;

}  // namespace

TEST_CASE("dag validation") {
  CHECK_THROWS_AS(CausalDag::create({"A", "B"}, {{"A", "B"}, {"B", "A"}}), Error);
  CHECK_THROWS_AS(CausalDag::create({"A"}, {{"A", "A"}}), Error);
  CHECK_THROWS_AS(CausalDag::create({"A", "B"}, {{"A", "B"}, {"A", "B"}}), Error);
  CHECK_THROWS_AS(CausalDag::create({"A", "A"}, {}), Error);
  CHECK_THROWS_AS(CausalDag::create({"A"}, {{"A", "Q"}}), Error);
  const auto g = diamond_dag();
  CHECK(g.parents(g.index("D")) == std::vector<std::size_t>{1, 2});
  CHECK(g.descendants(0) == std::vector<std::size_t>{1, 2, 3});
  CHECK(g.topological_order() == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("d-separation examples") {
  const auto col = collider_dag();
  CHECK(d_separated(col, {"A"}, {"C"}, {}));
  CHECK_FALSE(d_separated(col, {"A"}, {"C"}, {"B"}));
  const auto chain = chain_dag(2);
  CHECK(d_separated(chain, {"A"}, {"C"}, {"B"}));
  CHECK_FALSE(d_separated(chain, {"A"}, {"C"}, {}));
  const auto fork = fork_dag();
  CHECK(d_separated(fork, {"A"}, {"C"}, {"B"}));
  CHECK_THROWS_AS(d_separated(chain, {"A"}, {"A"}, {}), Error);
  CHECK_THROWS_AS(d_separated(chain, {"A"}, {"Q"}, {}), Error);
  // Conditioning on a descendant of a collider opens it.
  const auto wide = CausalDag::create({"A", "B", "C", "D"}, {{"A", "B"}, {"C", "B"}, {"B", "D"}});
  CHECK_FALSE(d_separated(wide, {"A"}, {"C"}, {"D"}));
}

TEST_CASE("d-separation agrees with the path oracle") {
  std::mt19937_64 rng(17);
  std::vector<CausalDag> dags;
  for (const auto& nd : dag_corpus()) dags.push_back(nd.dag);
  for (int k = 0; k < 15; ++k) dags.push_back(random_dag(5, 0.45, rng));
  for (const auto& g : dags) {
    const std::size_t n = g.size();
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          if (mask >> x & 1 || mask >> y & 1) continue;
          std::vector<std::size_t> z;
          for (std::size_t v = 0; v < n; ++v) {
            if (mask >> v & 1) z.push_back(v);
          }
          CHECK(d_separated(g, {g.name(x)}, {g.name(y)}, names(g, z)) == dsep_by_paths(g, {x}, {y}, z));
        }
      }
    }
  }
}

TEST_CASE("back-door criterion") {
  const auto acd = CausalDag::create({"X", "Z", "Y"}, {{"X", "Z"}, {"X", "Y"}, {"Z", "Y"}});
  CHECK(is_backdoor_set(acd, "Z", "Y", {"X"}));
  CHECK_FALSE(is_backdoor_set(acd, "Z", "Y", {}));
  CHECK_FALSE(is_backdoor_set(chain_dag(2), "A", "C", {"B"}));
  CHECK_THROWS_AS(is_backdoor_set(acd, "Z", "Z", {}), Error);

  std::mt19937_64 rng(23);
  for (int k = 0; k < 30; ++k) {
    const auto g = random_dag(5, 0.5, rng);
    const auto reach = reachability(g);
    for (std::size_t x = 0; x < g.size(); ++x) {
      for (std::size_t y = 0; y < g.size(); ++y) {
        if (x == y || g.parents(x).empty()) continue;
        bool touches = false;
        for (auto p : g.parents(x)) touches = touches || p == y;
        if (touches) continue;
        CHECK(is_backdoor_set(g, g.name(x), g.name(y), names(g, g.parents(x))));

        // Oracle: no descendant of x in z, and z separates x from y once x's out-edges are gone.
        for (std::size_t mask = 0; mask < (std::size_t{1} << g.size()); ++mask) {
          if (mask >> x & 1 || mask >> y & 1) continue;
          std::vector<std::size_t> z;
          bool descends = false;
          for (std::size_t v = 0; v < g.size(); ++v) {
            if (!(mask >> v & 1)) continue;
            z.push_back(v);
            descends = descends || reach[x][v];
          }
          std::vector<std::pair<std::string, std::string>> kept;
          for (const auto& [a, b] : g.named_edges()) {
            if (a != g.name(x)) kept.emplace_back(a, b);
          }
          const auto cut = CausalDag::create(g.variables(), kept);
          const bool expected = !descends && dsep_by_paths(cut, {x}, {y}, z);
          CHECK(is_backdoor_set(g, g.name(x), g.name(y), names(g, z)) == expected);
        }
      }
    }
  }
}

TEST_CASE("interventions") {
  const auto col = collider_dag();
  CHECK(intervene(col, {"B"}).edges().empty());
  CHECK(intervene(col, {}) == col);
  const auto cut = intervene(chain_dag(2), {"B"});
  CHECK(cut.named_edges() == std::vector<std::pair<std::string, std::string>>{{"B", "C"}});
  CHECK_THROWS_AS(intervene(col, {"Q"}), Error);

  std::mt19937_64 rng(29);
  for (int k = 0; k < 20; ++k) {
    const auto g = random_dag(5, 0.5, rng);
    const std::vector<std::string> s{"V1", "V3"};
    const std::vector<std::string> t{"V2", "V3"};
    CHECK(intervene(intervene(g, s), t) == intervene(g, {"V1", "V2", "V3"}));
    const auto h = intervene(g, s);
    for (const auto& [a, b] : g.edges()) {
      const bool targeted = g.name(b) == "V1" || g.name(b) == "V3";
      CHECK(h.has_edge(a, b) == !targeted);
    }
    CHECK(h.edges().size() <= g.edges().size());
  }
}

TEST_CASE("causal presheaves count directed paths") {
  CHECK(sizes(causal_presheaf(chain_dag(2), "C")) == std::vector<std::size_t>{1, 1, 1});
  CHECK(sizes(causal_presheaf(collider_dag(), "A")) == std::vector<std::size_t>{1, 0, 0});
  CHECK(causal_presheaf(diamond_dag(), "D").size(0) == 2);
  std::mt19937_64 rng(31);
  for (int k = 0; k < 10; ++k) {
    const auto g = random_dag(5, 0.4, rng);
    for (std::size_t x = 0; x < g.size(); ++x) {
      const auto p = causal_presheaf(g, g.name(x));
      for (std::size_t z = 0; z < g.size(); ++z) CHECK(p.size(z) == count_paths(g, z, x));
    }
  }
}

TEST_CASE("alexandroff spaces") {
  CHECK(alexandroff_space(CausalDag::create({"A"}, {})).opens() == Opens{{}, {0}});
  CHECK(alexandroff_space(chain_dag(1)).opens() == Opens{{}, {1}, {0, 1}});
  CHECK(alexandroff_space(collider_dag()).opens() == Opens{{}, {1}, {0, 1}, {1, 2}, {0, 1, 2}});
  CHECK_THROWS_AS(AlexandroffSpace::create({"a", "b"}, {{}, {0}, {1}}), Error);

  std::mt19937_64 rng(37);
  std::vector<CausalDag> dags;
  for (const auto& nd : dag_corpus()) dags.push_back(nd.dag);
  for (int k = 0; k < 10; ++k) dags.push_back(random_dag(5, 0.4, rng));
  for (const auto& g : dags) {
    const auto s = alexandroff_space(g);
    const auto& opens = s.opens();
    for (const auto& u : opens) {
      for (const auto& v : opens) {
        std::vector<std::size_t> uni;
        std::vector<std::size_t> inter;
        std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(uni));
        std::set_intersection(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(inter));
        CHECK(s.is_open(uni));
        CHECK(s.is_open(inter));
      }
    }
    const auto reach = reachability(g);
    CHECK(s.specialization() == reach);
    for (std::size_t v = 0; v < g.size(); ++v) {
      auto expected = g.descendants(v);
      expected.insert(std::lower_bound(expected.begin(), expected.end(), v), v);
      CHECK(s.minimal_open(v) == expected);
    }
  }
}

TEST_CASE("continuity") {
  const auto chain = alexandroff_space(chain_dag(1));
  const auto col = alexandroff_space(collider_dag());
  CHECK(is_continuous({0, 1}, chain, chain));
  CHECK(is_continuous({0, 0, 0}, col, chain));
  CHECK_FALSE(is_continuous({1, 0}, chain, chain));
  CHECK_THROWS_AS(is_continuous({0}, chain, chain), Error);

  std::vector<AlexandroffSpace> spaces;
  for (const auto& nd : dag_corpus()) {
    if (nd.dag.size() <= 4) spaces.push_back(alexandroff_space(nd.dag));
  }
  spaces.push_back(chain);
  for (const auto& s : spaces) {
    for (const auto& t : spaces) {
      const std::size_t n = s.points().size();
      const std::size_t m = t.points().size();
      std::vector<std::size_t> map(n, 0);
      for (;;) {
        CHECK(is_continuous(map, s, t) == preserves_specialization(map, s, t));
        std::size_t i = 0;
        while (i < n && ++map[i] == m) map[i++] = 0;
        if (i == n) break;
      }
    }
  }
}

TEST_CASE("intervention category") {
  const auto one = intervention_category(CausalDag::create({"A"}, {}));
  CHECK(one.num_objects() == 2);
  CHECK(one.num_morphisms() == 3);
  CHECK(one.object_name(0) == "{}");
  CHECK(one.object_name(1) == "{A}");
  CHECK(one.find_morphism("{}<={A}").has_value());

  const auto two = intervention_category(CausalDag::create({"A", "B"}, {{"A", "B"}}));
  CHECK(two.num_objects() == 4);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t t = 0; t < 4; ++t) CHECK(two.hom(s, t).size() == ((s & t) == s ? 1u : 0u));
  }
  CHECK(two.object_name(3) == "{A,B}");
  CHECK(intervention_category(CausalDag::create({}, {})).num_objects() == 1);
  CHECK_THROWS_AS(intervention_category(chain_dag(6)), SizeGuardError);
}
