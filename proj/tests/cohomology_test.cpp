#include "obstruct/cohomology.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace obstruct;
using namespace obstruct::testing;

namespace {

AbelianInvariants inv(std::vector<long> d) {
  std::vector<Integer> v(d.begin(), d.end());
  return invariants_from_diagonal(v, 0);
}

PermGroup cyclic(std::size_t n) {
  std::vector<Point> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>((i + 1) % n);
  return PermGroup(n, {Perm(img)});
}

Perm image_under(const FiniteGroup& g, const PermGroup& action, ElementId e) {
  return g.word(e).evaluate(action.generators(), action.degree());
}

}  // namespace

TEST(H1, CyclicExamples) {
  FiniteGroup c2(cyclic(2));
  Subgroup all2 = whole_group(c2);
  GIntModule sign = scalar_module({-1});
  EXPECT_EQ(h1(sign), inv({2}));
  EXPECT_EQ(h1(trivial_module(1, 1)), inv({}));
  EXPECT_EQ(h1_bruteforce(c2, all2, sign), inv({2}));

  FiniteGroup c4(cyclic(4));
  EXPECT_EQ(h1(scalar_module({-1})), inv({2}));
  // Z[C4/C2]
  GIntModule m(2, {IntMatrix::from_rows({{0, 1}, {1, 0}}, 2)});
  EXPECT_EQ(h1(m), inv({}));
  EXPECT_EQ(h1_bruteforce(c4, whole_group(c4), m), inv({}));
  for (std::size_t n : {2, 3, 4, 5, 6, 7}) {
    PermGroup c = cyclic(n);
    EXPECT_EQ(h1(augmentation_module(c.generators(), n)), inv({static_cast<long>(n)})) << n;
  }
}

TEST(H1, KleinFourSign) {
  PermGroup v4(4, {Perm::from_cycles(4, {{0, 1}, {2, 3}}), Perm::from_cycles(4, {{0, 2}, {1, 3}})});
  FiniteGroup g(v4);
  Subgroup all = whole_group(g);
  GIntModule s = scalar_module({-1, -1});
  EXPECT_EQ(h1(s), inv({2}));
  EXPECT_EQ(h1_presentation(g, all, s), inv({2}));
  EXPECT_EQ(h1_bruteforce(g, all, s), inv({2}));
  GIntModule ss = direct_sum(scalar_module({-1, 1}), scalar_module({1, -1}));
  EXPECT_EQ(h1(ss), inv({2, 2}));
}

TEST(H1, MethodsAgreeOnSmallSubgroups) {
  const auto& g = model().group();
  const auto& lat = lattice();
  std::size_t checked = 0;
  for (const auto& c : lat.classes()) {
    if (c.order > 12) continue;
    for (const auto& m : small_modules(g, c.rep)) {
      ASSERT_LE(m.rank(), 6u);
      AbelianInvariants a = h1(m);
      EXPECT_EQ(a, h1_bruteforce(g, c.rep, m)) << "class " << c.id << " rank " << m.rank();
      EXPECT_EQ(a, h1_presentation(g, c.rep, m)) << "class " << c.id;
      EXPECT_TRUE(h1_rank_consistent(g, c.rep, m)) << "class " << c.id;
      EXPECT_EQ(c.order % exponent(a).get_ui(), 0u);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(H1, BruteforceGuard) {
  const auto& g = model().group();
  Subgroup big = model().point_stabilizer(0);
  EXPECT_THROW(h1_bruteforce(g, big, trivial_module(big.gens.size(), 1)), CohomologyError);
}

TEST(H1, ShapiroVanishingOnRandomPairs) {
  const auto& g = model().group();
  const auto& lat = lattice();
  std::mt19937_64 rng(20240601);
  std::vector<std::size_t> pool;
  for (const auto& c : lat.classes())
    if (c.order >= 2 && c.order <= 2000) pool.push_back(c.id);
  std::size_t pairs = 0;
  while (pairs < 50) {
    const Subgroup& p = lat[pool[rng() % pool.size()]].rep;
    std::vector<ElementId> qgens{p.elements[rng() % p.order()]};
    if (rng() % 2) qgens.push_back(p.elements[rng() % p.order()]);
    Subgroup q = closure(g, qgens);
    if (p.order() / q.order() > 120) continue;
    FiniteGroup pg(to_perm_group(g, p));
    GIntModule m = perm_module(coset_action(pg, map_into(g, pg, q)).action);
    EXPECT_TRUE(h1(m).trivial()) << "|P|=" << p.order() << " |Q|=" << q.order();
    EXPECT_EQ(h0(m), 1u);
    ++pairs;
  }
}

TEST(H1, AugmentationModulesOverAllClasses) {
  const auto& m = model();
  const auto& g = m.group();
  PermGroup pairs = m.perp_pair_action();
  for (const auto& c : lattice().classes()) {
    const Subgroup& h = c.rep;
    GIntModule i40 = augmentation_module(perms_of(g, h), 40);
    std::vector<Perm> on45;
    for (ElementId e : h.gens) on45.push_back(image_under(g, pairs, e));
    GIntModule i45 = augmentation_module(on45, 45);
    PermGroup h45(45, on45);
    std::size_t gcd45 = 0, orbits45 = 0;
    std::vector<bool> seen(45, false);
    for (Point p = 0; p < 45; ++p) {
      if (seen[p]) continue;
      auto orb = h45.orbit(p);
      for (Point q : orb) seen[q] = true;
      gcd45 = std::gcd(gcd45, orb.size());
      ++orbits45;
    }
    AbelianInvariants a = h1(i40), b = h1(i45);
    EXPECT_EQ(a, inv({static_cast<long>(orbit_gcd(g, h))})) << "class " << c.id;
    EXPECT_EQ(b, inv({static_cast<long>(gcd45)})) << "class " << c.id;
    EXPECT_EQ(c.order % exponent(a).get_ui(), 0u);
    EXPECT_EQ(c.order % exponent(b).get_ui(), 0u);
    EXPECT_EQ(h0(i45), orbits45 - 1);
    EXPECT_TRUE(h1_rank_consistent(g, h, i40)) << "class " << c.id;
  }
}

TEST(H1, AdditiveOverDirectSums) {
  const auto& g = model().group();
  const auto& lat = lattice();
  for (std::size_t id = 0; id < lat.size(); id += 7) {
    const Subgroup& h = lat[id].rep;
    if (h.gens.empty()) continue;
    GIntModule a = augmentation_module(perms_of(g, h), 40);
    GIntModule b = h.order() <= 12 ? small_modules(g, h).back() : dual(a);
    AbelianInvariants s = h1(direct_sum(a, b));
    std::vector<Integer> d = h1(a).divisors;
    for (const auto& x : h1(b).divisors) d.push_back(x);
    EXPECT_EQ(s, invariants_from_diagonal(d, 0)) << "class " << id;
  }
}

TEST(H1, ConjugationInvariance) {
  const auto& g = model().group();
  std::mt19937_64 rng(5);
  for (const auto& c : lattice().classes()) {
    if (c.id % 5) continue;
    ElementId x = static_cast<ElementId>(rng() % g.order());
    Subgroup hx = conjugate(g, c.rep, x);
    GIntModule a = augmentation_module(perms_of(g, c.rep), 40);
    GIntModule b = augmentation_module(perms_of(g, hx), 40);
    EXPECT_EQ(h1(a), h1(b)) << "class " << c.id;
  }
}

TEST(H0, Examples) {
  const auto& g = model().group();
  Subgroup stab = model().point_stabilizer(0);
  EXPECT_EQ(h0(perm_module(model().psp4())), 1u);
  EXPECT_EQ(h0(augmentation_module(perms_of(g, stab), 40)), 2u);
  EXPECT_EQ(h0(trivial_module(0, 3)), 3u);
  EXPECT_EQ(h0(scalar_module({-1})), 0u);
}

TEST(Exponent, Values) {
  EXPECT_EQ(exponent(inv({})), 1);
  EXPECT_EQ(exponent(inv({2, 6})), 6);
  EXPECT_THROW(exponent(invariants_from_diagonal({}, 1)), CohomologyError);
}
