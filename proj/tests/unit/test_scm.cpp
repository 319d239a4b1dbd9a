#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "oracles.hpp"
#include "unicausal/scm.hpp"

using namespace unicausal;
using namespace testsupport;

namespace {

constexpr double tol = 1e-9;

DiscreteScm chain_scm() {
  return DiscreteScm::create(chain_dag(2), {2, 3, 2},
                             {{{0.25, 0.75}},
                              {{0.5, 0.25, 0.25}, {0.125, 0.125, 0.75}},
                              {{0.9, 0.1}, {0.4, 0.6}, {0.3, 0.7}}});
}

double expectation(const std::vector<double>& dist) {
  double e = 0.0;
  for (std::size_t v = 0; v < dist.size(); ++v) e += static_cast<double>(v) * dist[v];
  return e;
}

std::vector<double> do_marginal(const DiscreteScm& m, const std::string& x, std::size_t xv, const std::string& y) {
  return do_distribution(m, {{x, xv}}).marginal({y}).probabilities();
}

std::vector<double> conditional(const JointTable& j, const std::string& x, std::size_t xv, const std::string& y) {
  const auto xy = j.marginal({x, y});
  const std::size_t ny = xy.cardinalities()[1];
  std::vector<double> out(ny);
  double mass = 0.0;
  for (std::size_t v = 0; v < ny; ++v) mass += xy.at({xv, v});
  for (std::size_t v = 0; v < ny; ++v) out[v] = xy.at({xv, v}) / mass;
  return out;
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double eps = tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > eps) return false;
  }
  return true;
}

PropensityModel constant_propensity(double e) { return {{}, {{{}, e}}}; }

}  // namespace

TEST_CASE("scm validation") {
  const auto g = chain_dag(1);
  CHECK_THROWS_AS(DiscreteScm::create(g, {2, 2}, {{{0.5, 0.4}}, {{1, 0}, {0, 1}}}), Error);
  CHECK_THROWS_AS(DiscreteScm::create(g, {2, 2}, {{{0.5, 0.5}}, {{1, 0}}}), Error);
  CHECK_THROWS_AS(DiscreteScm::create(g, {2, 2}, {{{1.5, -0.5}}, {{1, 0}, {0, 1}}}), Error);
  CHECK_THROWS_AS(DiscreteScm::create(g, {0, 2}, {{{}}, {{1, 0}, {0, 1}}}), Error);
  const auto m = confounded_scm();
  CHECK(m.exogenous() == std::vector<std::size_t>{0});
}

TEST_CASE("joint distributions") {
  const auto single = DiscreteScm::create(CausalDag::create({"A"}, {}), {2}, {{{0.3, 0.7}}});
  CHECK(close(joint_distribution(single).probabilities(), {0.3, 0.7}));

  const auto pair = DiscreteScm::create(CausalDag::create({"A", "B"}, {}), {2, 3},
                                        {{{0.25, 0.75}}, {{0.5, 0.25, 0.25}}});
  const auto pj = joint_distribution(pair);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 3; ++b) CHECK(pj.at({a, b}) == doctest::Approx(pair.table(0)[0][a] * pair.table(1)[0][b]));
  }

  std::vector<DiscreteScm> models{chain_scm(), confounded_scm(), copy_scm()};
  for (const auto& nd : dag_corpus()) models.push_back(random_scm(nd.dag, std::vector<std::size_t>(nd.dag.size(), 2), 11));
  for (const auto& m : models) {
    const auto j = joint_distribution(m);
    CHECK(std::abs(j.total() - 1.0) <= tol);
    for (std::size_t k = 0; k < j.size(); ++k) CHECK(std::abs(j.probabilities()[k] - joint_oracle(m, j.decode(k))) <= tol);
    const auto d = do_distribution(m, {{m.dag().name(0), 1}});
    CHECK(std::abs(d.total() - 1.0) <= tol);
  }
}

TEST_CASE("joint table layout") {
  const auto j = joint_distribution(chain_scm());
  CHECK(j.variables() == std::vector<std::string>{"A", "B", "C"});
  CHECK(j.encode({1, 2, 0}) == 1 * 6 + 2 * 2 + 0);
  CHECK(j.decode(11) == std::vector<std::size_t>{1, 2, 1});
  const auto cb = j.marginal({"C", "B"});
  CHECK(cb.variables() == std::vector<std::string>{"C", "B"});
  CHECK(std::abs(cb.total() - 1.0) <= tol);
}

TEST_CASE("interventional distributions") {
  const auto m = chain_scm();
  const auto root = do_distribution(m, {{"A", 1}});
  CHECK(root.variables() == std::vector<std::string>{"B", "C"});
  const auto joint = joint_distribution(m);
  const auto cond = conditional(joint, "A", 1, "C");
  CHECK(close(root.marginal({"C"}).probabilities(), cond));

  const auto mid = do_distribution(m, {{"B", 2}});
  CHECK(close(mid.marginal({"A"}).probabilities(), {0.25, 0.75}));
  CHECK(close(mid.marginal({"C"}).probabilities(), {0.3, 0.7}));

  const auto all = do_distribution(m, {{"A", 0}, {"B", 1}, {"C", 1}});
  CHECK(all.size() == 1);
  CHECK(std::abs(all.total() - 1.0) <= tol);
  CHECK_THROWS_AS(do_distribution(m, {{"B", 3}}), Error);
  CHECK_THROWS_AS(do_distribution(m, {{"Q", 0}}), Error);
}

TEST_CASE("conditional independence") {
  const auto pair = DiscreteScm::create(CausalDag::create({"A", "B"}, {}), {2, 2}, {{{0.25, 0.75}}, {{0.5, 0.5}}});
  const auto ind = ci_check(joint_distribution(pair), {"A"}, {"B"}, {});
  CHECK(ind.holds);
  CHECK(ind.max_deviation <= tol);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto chain = random_scm(chain_dag(2), {2, 2, 2}, seed);
    CHECK(ci_check(joint_distribution(chain), {"A"}, {"C"}, {"B"}).holds);
    const auto col = random_scm(collider_dag(), {2, 2, 2}, seed);
    CHECK_FALSE(ci_check(joint_distribution(col), {"A"}, {"C"}, {"B"}).holds);
  }
}

TEST_CASE("d-separation implies conditional independence") {
  for (const auto& [name, g] : dag_corpus()) {
    CAPTURE(name);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto j = joint_distribution(random_scm(g, std::vector<std::size_t>(g.size(), 2), seed));
      const std::size_t n = g.size();
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
          for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            if (mask >> x & 1 || mask >> y & 1) continue;
            std::vector<std::string> z;
            for (std::size_t v = 0; v < n; ++v) {
              if (mask >> v & 1) z.push_back(g.name(v));
            }
            const auto ci = ci_check(j, {g.name(x)}, {g.name(y)}, z);
            if (d_separated(g, {g.name(x)}, {g.name(y)}, z)) CHECK(ci.holds);
            if (dsep_by_paths(g, {x}, {y}, g.indices(z))) CHECK(ci.max_deviation <= tol);
          }
        }
      }
    }
  }
}

TEST_CASE("adjustment") {
  const auto m = confounded_scm();
  CHECK(close(adjustment_estimate(m, "X", 1, "Y", {"Z"}), do_marginal(m, "X", 1, "Y")));
  CHECK(close(adjustment_estimate(m, "X", 0, "Y", {"Z"}), do_marginal(m, "X", 0, "Y")));
  CHECK_FALSE(close(adjustment_estimate(m, "X", 1, "Y", {}), do_marginal(m, "X", 1, "Y")));

  const auto chain = chain_scm();
  CHECK(close(adjustment_estimate(chain, "A", 1, "C", {}), conditional(joint_distribution(chain), "A", 1, "C")));
  CHECK(close(adjustment_estimate(chain, "A", 1, "C", {}), do_marginal(chain, "A", 1, "C")));

  const auto lone = DiscreteScm::create(CausalDag::create({"X", "Y"}, {}), {2, 2}, {{{0.5, 0.5}}, {{0.125, 0.875}}});
  CHECK(close(adjustment_estimate(lone, "X", 0, "Y", {}), {0.125, 0.875}));

  const auto blocked = DiscreteScm::create(confounder_dag(), {2, 2, 2},
                                           {{{0.5, 0.5}}, {{1.0, 0.0}, {0.5, 0.5}}, {{1, 0}, {0, 1}, {1, 0}, {0, 1}}});
  try {
    adjustment_estimate(blocked, "X", 1, "Y", {"Z"});
    FAIL("expected a positivity violation");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("positivity violation") != std::string::npos);
    CHECK(std::string(e.what()).find("Z=0") != std::string::npos);
  }

  for (const auto& [name, g] : dag_corpus()) {
    CAPTURE(name);
    const auto rm = random_scm(g, std::vector<std::size_t>(g.size(), 2), 41);
    for (std::size_t x = 0; x < g.size(); ++x) {
      for (std::size_t y = 0; y < g.size(); ++y) {
        if (x == y) continue;
        for (std::size_t mask = 0; mask < (std::size_t{1} << g.size()); ++mask) {
          if (mask >> x & 1 || mask >> y & 1) continue;
          std::vector<std::string> z;
          for (std::size_t v = 0; v < g.size(); ++v) {
            if (mask >> v & 1) z.push_back(g.name(v));
          }
          if (!is_backdoor_set(g, g.name(x), g.name(y), z)) continue;
          for (std::size_t xv = 0; xv < 2; ++xv) {
            CHECK(close(adjustment_estimate(rm, g.name(x), xv, g.name(y), z), do_marginal(rm, g.name(x), xv, g.name(y))));
          }
        }
      }
    }
  }
}

TEST_CASE("average treatment effect") {
  CHECK(ate_exact(copy_scm(), "X", "Y") == 1.0);
  const auto apart = DiscreteScm::create(CausalDag::create({"X", "Y"}, {}), {2, 3}, {{{0.5, 0.5}}, {{0.25, 0.25, 0.5}}});
  CHECK(ate_exact(apart, "X", "Y") == 0.0);
  const auto m = confounded_scm();
  CHECK(ate_exact(m, "X", "Y") == ate_oracle(m, 1, 2));
  CHECK(ate_exact(m, "X", "Y", {10.0, 20.0}) == doctest::Approx(10.0 * ate_oracle(m, 1, 2)));
  CHECK(ate_exact(m, "X", "Y") == expectation(do_marginal(m, "X", 1, "Y")) - expectation(do_marginal(m, "X", 0, "Y")));
  CHECK_THROWS_AS(ate_exact(chain_scm(), "B", "C"), Error);

  for (const auto& [name, g] : dag_corpus()) {
    CAPTURE(name);
    const auto rm = random_scm(g, std::vector<std::size_t>(g.size(), 2), 5);
    for (std::size_t x = 0; x < g.size(); ++x) {
      for (std::size_t y = 0; y < g.size(); ++y) {
        if (x != y) CHECK(std::abs(ate_exact(rm, g.name(x), g.name(y)) - ate_oracle(rm, x, y)) <= tol);
      }
    }
  }
}

TEST_CASE("confounding") {
  const auto m = confounded_scm();
  CHECK(is_confounded(m, "X", "Y").confounded);
  CHECK(is_confounded(m, "X", "Y").max_gap > 1e-3);
  CHECK_FALSE(is_confounded(copy_scm(), "X", "Y").confounded);
  const auto apart = DiscreteScm::create(CausalDag::create({"X", "Y"}, {}), {2, 2}, {{{0.5, 0.5}}, {{0.25, 0.75}}});
  CHECK_FALSE(is_confounded(apart, "X", "Y").confounded);

  const auto stuck = DiscreteScm::create(CausalDag::create({"X", "Y"}, {{"X", "Y"}}), {2, 2},
                                         {{{1.0, 0.0}}, {{0.5, 0.5}, {0.25, 0.75}}});
  const auto r = is_confounded(stuck, "X", "Y");
  CHECK_FALSE(r.confounded);
  CHECK(r.skipped == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(is_confounded(m, "X", "X"), Error);
}

TEST_CASE("sampling") {
  const auto m = chain_scm();
  CHECK(sample(m, 0, 1).rows.empty());
  const auto a = sample(m, 50, 9);
  const auto b = sample(m, 50, 9);
  CHECK(a.rows == b.rows);
  CHECK(a.columns == std::vector<std::string>{"A", "B", "C"});
  for (const auto& row : a.rows) {
    for (std::size_t v = 0; v < 3; ++v) CHECK(row[v] < m.cardinality(v));
  }
  const auto point = DiscreteScm::create(chain_dag(1), {2, 2}, {{{0.0, 1.0}}, {{1.0, 0.0}, {1.0, 0.0}}});
  for (const auto& row : sample(point, 100, 3).rows) CHECK(row == std::vector<std::size_t>{1, 0});

  const auto coin = DiscreteScm::create(CausalDag::create({"A"}, {}), {2}, {{{0.3, 0.7}}});
  const auto big = sample(coin, 100000, 123);
  double ones = 0;
  for (const auto& row : big.rows) ones += static_cast<double>(row[0]);
  CHECK(std::abs(ones / 100000.0 - 0.7) <= 0.01);
}

TEST_CASE("csv round trip") {
  const auto d = sample(chain_scm(), 20, 4);
  std::stringstream s;
  write_csv(s, d);
  CHECK(s.str().rfind("A,B,C\n", 0) == 0);
  const auto back = read_csv(s);
  CHECK(back.columns == d.columns);
  CHECK(back.rows == d.rows);
  std::stringstream bad("A,B\n1\n");
  CHECK_THROWS_AS(read_csv(bad), Error);
}

TEST_CASE("Horvitz-Thompson estimation") {
  const auto copy = sample(copy_scm(), 10000, 2);
  double treated = 0;
  for (const auto& row : copy.rows) treated += static_cast<double>(row[0]);
  const double est = ht_estimate(copy, "X", "Y", constant_propensity(0.5));
  CHECK(est == doctest::Approx(2.0 * treated / 10000.0));
  CHECK(std::abs(est - 1.0) <= 3 * 2.0 * 0.5 / std::sqrt(10000.0));

  const auto flat = DiscreteScm::create(CausalDag::create({"X", "Y"}, {}), {2, 2}, {{{0.5, 0.5}}, {{0.0, 1.0}}});
  const double zero = ht_estimate(sample(flat, 10000, 3), "X", "Y", constant_propensity(0.5));
  CHECK(std::abs(zero) <= 3 * 2.0 / std::sqrt(10000.0));

  CHECK_THROWS_WITH_AS(ht_estimate(Dataset{{"X", "Y"}, {}, 0}, "X", "Y", constant_propensity(0.5)), "no rows", Error);
  CHECK_THROWS_AS(ht_estimate(copy, "X", "Y", constant_propensity(1.0)), Error);
  CHECK_THROWS_AS(ht_estimate(copy, "X", "Y", constant_propensity(0.0)), Error);

  const auto m = confounded_scm();
  const auto e = true_propensity(m, "X");
  CHECK(e.covariates == std::vector<std::string>{"Z"});
  CHECK(e.strata.at({0}) == 0.125);
  CHECK(e.strata.at({1}) == 0.75);
}

TEST_CASE("random scms") {
  const auto g = diamond_dag();
  const auto a = random_scm(g, {2, 3, 2, 2}, 7);
  const auto b = random_scm(g, {2, 3, 2, 2}, 7);
  for (std::size_t v = 0; v < g.size(); ++v) {
    CHECK(a.table(v) == b.table(v));
    for (const auto& row : a.table(v)) {
      double sum = 0;
      for (double p : row) {
        CHECK(p >= 0.05 - tol);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) <= tol);
    }
  }
}
