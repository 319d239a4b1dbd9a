#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "unicausal/yoneda.hpp"

using namespace unicausal;
using namespace testsupport;

namespace {

// Every family of functions, filtered by naturality; no pruning.
std::size_t brute_force_nats(const SetFunctor& f, const SetFunctor& g) {
  const auto& c = f.base();
  std::vector<std::vector<std::size_t>> comps(c.num_objects());
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t o = 0; o < c.num_objects(); ++o) {
    if (f.size(o) > 0 && g.size(o) == 0) return 0;
    comps[o].assign(f.size(o), 0);
    for (std::size_t x = 0; x < f.size(o); ++x) slots.emplace_back(o, x);
  }
  std::size_t count = 0;
  for (;;) {
    if (check_naturality(NatTransformation{f, g, comps}).valid()) ++count;
    std::size_t k = slots.size();
    while (k > 0) {
      auto [o, x] = slots[k - 1];
      if (++comps[o][x] < g.size(o)) break;
      comps[o][x] = 0;
      --k;
    }
    if (k == 0) return count;
  }
}

SetFunctor singleton(const FinCategory& c, Variance v) { return presheaf_terminal(c, v); }

}  // namespace

TEST_CASE("functor validation") {
  const auto c = chain_category(2);
  CHECK(validate_functor(singleton(c, Variance::covariant).describe()).valid());
  CHECK(validate_functor(hom_presheaf(chain_category(1), "B").describe()).valid());

  SetFunctorDescription bad{c, Variance::covariant, {{"a0", "a1"}, {"b0", "b1"}, {"c0", "c1"}}, {}};
  for (std::size_t m = 0; m < c.num_morphisms(); ++m) bad.actions.push_back({0, 1});
  bad.actions[c.morphism_index("A->B")] = {1, 0};
  const auto r = validate_functor(bad);
  REQUIRE_FALSE(r.valid());
  CHECK(r.violations.front().find("(B->C,A->B)") != std::string::npos);
  CHECK_THROWS_AS(SetFunctor::create(bad), Error);
}

TEST_CASE("natural transformation counts on small bases") {
  const auto c = chain_category(1);
  CHECK(enumerate_nats(singleton(c, Variance::covariant), singleton(c, Variance::covariant)).size() == 1);
  CHECK(enumerate_nats(hom_presheaf(c, "A"), hom_presheaf(c, "B")).size() == 1);
  CHECK(enumerate_nats(hom_presheaf(c, "B"), hom_presheaf(c, "A")).empty());
}

TEST_CASE("enumeration matches brute force, is natural and deterministic") {
  std::mt19937_64 rng(7);
  for (const auto& [name, c] : category_corpus()) {
    if (c.num_objects() > 4) continue;
    CAPTURE(name);
    for (int k = 0; k < 4; ++k) {
      const auto v = k % 2 ? Variance::covariant : Variance::contravariant;
      const auto f = random_functor(c, v, 2, rng);
      const auto g = random_functor(c, v, 3, rng);
      const auto nats = enumerate_nats(f, g);
      CHECK(nats.size() == brute_force_nats(f, g));
      for (const auto& eta : nats) CHECK(check_naturality(eta).valid());
      const auto again = enumerate_nats(f, g);
      REQUIRE(again.size() == nats.size());
      for (std::size_t i = 0; i < nats.size(); ++i) CHECK(again[i].components == nats[i].components);
      for (std::size_t i = 1; i < nats.size(); ++i) CHECK(nats[i - 1].components < nats[i].components);
      CHECK(count_nats(relabel(f, rng), relabel(g, rng)) == nats.size());
    }
  }
}

TEST_CASE("nat enumeration respects the size guard") {
  const auto c = idempotent_monoid();
  SetFunctorDescription d{c, Variance::covariant, {{"0", "1", "2", "3", "4", "5", "6", "7"}}, {}};
  d.actions.assign(2, {0, 0, 0, 0, 0, 0, 0, 0});
  d.actions[c.identity(0)] = {0, 1, 2, 3, 4, 5, 6, 7};
  const auto f = SetFunctor::create(d);
  Limits tight;
  tight.max_assignments = 1000;
  CHECK_THROWS_AS(enumerate_nats(f, f, tight), SizeGuardError);
}

TEST_CASE("full and faithful") {
  const auto c = chain_category(1);
  const auto id = check_fully_faithful(identity_functor(c));
  CHECK((id.full && id.faithful));
  const auto inc = check_fully_faithful(full_subcategory(free_of(collider_dag()), {"A", "B"}).inclusion);
  CHECK((inc.full && inc.faithful));
  // Every hom-set of free(A->B) has at most one element, so collapsing is
  // injective; Hom(B,A) is empty while its image is not, so it is not full.
  const auto collapse = check_fully_faithful(to_terminal(c));
  CHECK(collapse.faithful);
  CHECK_FALSE(collapse.full);
  const auto idem = check_fully_faithful(to_terminal(idempotent_monoid()));
  CHECK_FALSE(idem.faithful);
  CHECK(idem.full);
}

TEST_CASE("natural isomorphism search") {
  std::mt19937_64 rng(3);
  const auto c = free_of(collider_dag());
  const auto p = random_functor(c, Variance::contravariant, 3, rng);
  const auto self = natural_iso_check(p, p);
  REQUIRE(self.has_value());
  CHECK(self->components == identity_nat(p).components);
  CHECK(natural_iso_check(p, relabel(p, rng)).has_value());
  CHECK_FALSE(natural_iso_check(hom_presheaf(c, "A"), hom_presheaf(c, "B")).has_value());

  const auto iso = iso_pair();
  CHECK(natural_iso_check(hom_presheaf(iso, "A"), hom_presheaf(iso, "B")).has_value());
}

TEST_CASE("terminal and product presheaves") {
  std::mt19937_64 rng(11);
  for (const auto& [name, c] : category_corpus()) {
    if (c.num_objects() > 4) continue;
    CAPTURE(name);
    const auto one = presheaf_terminal(c);
    const auto p = random_functor(c, Variance::contravariant, 2, rng);
    const auto q = random_functor(c, Variance::contravariant, 3, rng);
    const auto pq = presheaf_product(p, q);
    for (std::size_t o = 0; o < c.num_objects(); ++o) {
      CHECK(one.size(o) == 1);
      CHECK(pq.size(o) == p.size(o) * q.size(o));
    }
    CHECK(natural_iso_check(presheaf_product(p, one), p).has_value());
  }
  const auto col = free_of(collider_dag());
  const auto ac = presheaf_product(hom_presheaf(col, "A"), hom_presheaf(col, "C"));
  CHECK(ac.size(col.object_index("B")) == 0);
}

TEST_CASE("exponentials") {
  const auto point = terminal_category();
  SetFunctorDescription dp{point, Variance::contravariant, {{"p0", "p1"}}, {{0, 1}}};
  SetFunctorDescription dq{point, Variance::contravariant, {{"q0", "q1", "q2"}}, {{0, 1, 2}}};
  const auto p = SetFunctor::create(dp);
  const auto q = SetFunctor::create(dq);
  CHECK(presheaf_exponential(p, q).size(0) == 9);

  std::mt19937_64 rng(5);
  for (const auto& [name, c] : category_corpus()) {
    if (c.num_objects() > 3) continue;
    CAPTURE(name);
    for (int k = 0; k < 3; ++k) {
      const auto r = random_functor(c, Variance::contravariant, 2, rng);
      const auto pp = random_functor(c, Variance::contravariant, 2, rng);
      const auto qq = random_functor(c, Variance::contravariant, 2, rng);
      const auto exp = presheaf_exponential(pp, qq);
      CHECK(count_nats(presheaf_product(r, pp), qq) == count_nats(r, exp));
      CHECK(natural_iso_check(presheaf_exponential(presheaf_terminal(c), qq), qq).has_value());
    }
  }
}

TEST_CASE("precompose and flip variance") {
  const auto c = chain_category(2);
  const auto h = hom_presheaf(c, "C");
  const auto sub = full_subcategory(c, {"A", "C"});
  const auto r = precompose(h, sub.inclusion);
  CHECK(r.size(0) == 1);
  CHECK(r.size(1) == 1);
  const auto flipped = flip_variance(h, opposite(c));
  CHECK(flipped.variance() == Variance::covariant);
  CHECK(flip_variance(flipped, c) == h);
}
