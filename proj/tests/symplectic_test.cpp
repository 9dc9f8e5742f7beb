#include "obstruct/checks.hpp"
#include "obstruct/symplectic.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace obstruct;

namespace {

const SymplecticModel& model() {
  static const SymplecticModel m;
  return m;
}

// conjugacy classes by brute-force closure under all elements
std::vector<std::size_t> class_sizes_by_closure(const FiniteGroup& g) {
  std::vector<bool> done(g.order(), false);
  std::vector<std::size_t> sizes;
  for (ElementId e = 0; e < g.order(); ++e) {
    if (done[e]) continue;
    std::set<ElementId> cls;
    Perm pe = g.perm(e);
    for (ElementId x = 0; x < g.order(); ++x) cls.insert(*g.index_of(pe.conjugate(g.perm(x))));
    for (ElementId c : cls) done[c] = true;
    sizes.push_back(cls.size());
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

F3Matrix matrix_of_linear_perm(const Perm& p) {
  F3Matrix m;
  for (int i = 0; i < 4; ++i) {
    F3Vector e{};
    e[i] = 1;
    F3Vector img = vector_from_code(p[vector_code(e) - 1] + 1);
    for (int j = 0; j < 4; ++j) m.a[i][j] = img[j];
  }
  return m;
}

Subgroup sylow5(const FiniteGroup& g) {
  for (ElementId e = 0; e < g.order(); ++e)
    if (g.element_order(e) == 5) return closure(g, {e});
  throw std::logic_error("no element of order 5");
}

}  // namespace

TEST(Sp4, OrderAndGenerators) {
  const auto& m = model();
  EXPECT_EQ(m.sp4().order(), 81u * 8u * 80u);
  for (const auto& g : m.generator_matrices()) EXPECT_TRUE(is_symplectic(g));
}

TEST(Sp4, RandomElementsPreserveForm) {
  std::mt19937_64 rng(7);
  const auto& m = model();
  for (int i = 0; i < 1000; ++i) {
    Perm p = m.sp4().random_element(rng);
    auto w = m.sp4().sift(p);
    ASSERT_TRUE(w.has_value());
    ASSERT_EQ(w->evaluate(m.sp4().generators(), 80), p);
    EXPECT_TRUE(is_symplectic(matrix_of_linear_perm(p)));
  }
}

TEST(Sp4, CenterIsPlusMinusIdentity) {
  auto all = matrix_closure(model().generator_matrices());
  ASSERT_EQ(all.size(), 51840u);
  std::size_t central = 0;
  for (const auto& x : all) {
    bool c = true;
    for (const auto& g : model().generator_matrices()) c = c && x * g == g * x;
    central += c;
  }
  EXPECT_EQ(central, 2u);
}

TEST(PSp4, PointAction) {
  const auto& m = model();
  EXPECT_EQ(m.psp4().degree(), 40u);
  EXPECT_EQ(m.psp4().order(), 25920u);
  EXPECT_TRUE(m.psp4().is_transitive());
  Subgroup stab = m.point_stabilizer(0);
  EXPECT_EQ(stab.order(), 648u);
  std::vector<bool> seen(40, false);
  std::size_t orbits = 0;
  for (Point p = 0; p < 40; ++p) {
    if (seen[p]) continue;
    ++orbits;
    for (ElementId e : stab.elements) seen[m.group().images(e)[p]] = true;
  }
  EXPECT_EQ(orbits, 3u);
}

TEST(PSp4, ConjugacyClassesMatchClosure) {
  const auto& g = model().group();
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& c : g.classes()) {
    EXPECT_EQ(g.order() % c.size, 0u);
    EXPECT_EQ(c.size * c.centralizer.size(), g.order());
    sizes.push_back(c.size);
    total += c.size;
  }
  EXPECT_EQ(total, 25920u);
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, class_sizes_by_closure(g));
}

TEST(PSp4, ClassConjugatorsAreCorrect) {
  const auto& g = model().group();
  for (ElementId e = 0; e < g.order(); e += 37)
    EXPECT_EQ(g.conj(g.classes()[g.class_of(e)].rep, g.class_conjugator(e)), e);
}

TEST(PSp4, WordsEvaluateToElements) {
  const auto& g = model().group();
  for (ElementId e = 0; e < g.order(); e += 101) EXPECT_EQ(g.word(e).evaluate(g.generators(), 40), g.perm(e));
}

TEST(PSp4, IsotropicLineAction) {
  const auto& m = model();
  PermGroup lines = m.isotropic_line_action();
  EXPECT_EQ(lines.degree(), 40u);
  EXPECT_TRUE(lines.is_transitive());
  EXPECT_EQ(lines.order(), 25920u);
  Subgroup ls = m.subspace_stabilizer(m.isotropic_lines().front());
  Subgroup ps = m.point_stabilizer(0);
  EXPECT_EQ(ls.order(), 648u);
  EXPECT_FALSE(conjugating_element(m.group(), ls, ps).has_value());
}

TEST(PSp4, PerpPairAction) {
  const auto& m = model();
  PermGroup pairs = m.perp_pair_action();
  EXPECT_EQ(pairs.degree(), 45u);
  EXPECT_TRUE(pairs.is_transitive());
  EXPECT_EQ(m.perp_pair_stabilizer(m.perp_pairs().front()).order(), 576u);
  std::size_t planes = 0;
  for (const auto& s : proper_subspaces()) planes += s.basis.size() == 2;
  EXPECT_EQ(planes, 130u);
}

TEST(Subgroups, PointStabilizersAreConjugate) {
  const auto& m = model();
  Subgroup a = m.point_stabilizer(0), b = m.point_stabilizer(17);
  auto x = conjugating_element(m.group(), a, b);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(conjugate(m.group(), a, *x), b);
  EXPECT_EQ(conjugating_element(m.group(), a, a).has_value(), true);
}

TEST(Subgroups, NormalizerExamples) {
  const auto& g = model().group();
  EXPECT_EQ(normalizer(g, trivial_subgroup(g)).order(), g.order());
  EXPECT_EQ(normalizer(g, whole_group(g)).order(), g.order());
  Subgroup p = sylow5(g);
  Subgroup n = normalizer(g, p);
  EXPECT_EQ(n.order(), 20u);
  std::size_t brute = 0;
  for (ElementId x = 0; x < g.order(); ++x) brute += conjugate(g, p, x) == p;
  EXPECT_EQ(brute, 20u);
}

TEST(Subgroups, ConjugacyIsSymmetricAndTransitive) {
  const auto& g = model().group();
  std::mt19937 rng(3);
  std::uniform_int_distribution<ElementId> pick(0, static_cast<ElementId>(g.order() - 1));
  std::vector<Subgroup> pool;
  Subgroup base = closure(g, {pick(rng), pick(rng)});
  while (base.order() > 200 || base.order() < 4) base = closure(g, {pick(rng), pick(rng)});
  for (int i = 0; i < 4; ++i) pool.push_back(conjugate(g, base, pick(rng)));
  pool.push_back(closure(g, {pick(rng)}));
  for (const auto& a : pool)
    for (const auto& b : pool) {
      bool ab = conjugating_element(g, a, b).has_value();
      EXPECT_EQ(ab, conjugating_element(g, b, a).has_value());
      for (const auto& c : pool)
        if (ab && conjugating_element(g, b, c)) {
          EXPECT_TRUE(conjugating_element(g, a, c).has_value());
        }
    }
}

TEST(Subgroups, CosetActions) {
  const auto& m = model();
  const auto& g = m.group();
  EXPECT_EQ(coset_action(g, whole_group(g)).action.degree(), 1u);
  auto act = coset_action(g, m.perp_pair_stabilizer(m.perp_pairs().front()));
  EXPECT_EQ(act.action.degree(), 45u);
  EXPECT_TRUE(act.action.is_transitive());
  EXPECT_EQ(act.action.order(), 25920u);
}

TEST(Subgroups, DerivedSubgroups) {
  const auto& g = model().group();
  EXPECT_TRUE(is_perfect(g, whole_group(g)));
  EXPECT_FALSE(is_perfect(g, sylow5(g)));
  EXPECT_EQ(derived_subgroup(g, normalizer(g, sylow5(g))).order(), 5u);
}

TEST(Srg, Parameters) {
  IntMatrix a = model().srg_adjacency();
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    Integer s = 0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j);
    EXPECT_EQ(s, 12);
  }
  IntMatrix id = IntMatrix::identity(n), all(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) all(i, j) = 1;
  EXPECT_EQ(a * a, Integer(12) * id + Integer(2) * a + Integer(4) * (all - id - a));
  auto proj_rank = [&](long x, long y) {
    return snf((a - Integer(x) * id) * (a - Integer(y) * id)).rank;
  };
  EXPECT_EQ(proj_rank(2, -4), 1u);
  EXPECT_EQ(proj_rank(12, -4), 24u);
  EXPECT_EQ(proj_rank(12, 2), 15u);
}

TEST(Characters, Chi24) {
  const auto& m = model();
  const auto& g = m.group();
  ClassFunction chi = m.chi24();
  EXPECT_EQ(chi[0], 24);
  EXPECT_EQ(inner_product(g, chi, chi), 1);
  for (std::size_t c = 0; c < g.classes().size(); ++c)
    EXPECT_EQ(chi[c], chi[g.class_of(g.inv(g.classes()[c].rep))]);
  ClassFunction pi40 = permutation_character(g, m.point_stabilizer(0));
  EXPECT_EQ(pi40, trivial_character(g) + chi + m.chi15());
}

TEST(Lifts, Orders) {
  const auto& m = model();
  const auto& g = m.group();
  EXPECT_EQ(m.lift_to_sp(trivial_subgroup(g)).order, 2u);
  EXPECT_EQ(m.lift_to_sp(whole_group(g)).order, 51840u);
  Subgroup p = sylow5(g);
  EXPECT_EQ(m.lift_to_sp(p).order, 10u);
  for (ElementId e = 0; e < g.order(); e += 53) EXPECT_EQ(m.element_of(m.lift(e)), e);
}

TEST(Lifts, AbsoluteIrreducibility) {
  const auto& m = model();
  const auto& g = m.group();
  EXPECT_TRUE(m.is_absolutely_irreducible(whole_group(g)));
  EXPECT_FALSE(m.is_absolutely_irreducible(trivial_subgroup(g)));
  EXPECT_TRUE(m.is_absolutely_irreducible(normalizer(g, sylow5(g))));
  EXPECT_EQ(commutant_dimension({F3Matrix::identity()}), 16u);
}

TEST(Lifts, UnipotentRow6Generator) {
  F3Matrix row = row6_generator();
  ASSERT_TRUE(is_symplectic(row));
  auto e = model().element_of(row);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(model().group().element_order(*e), 3u);
  Subgroup c = closure(model().group(), {*e});
  EXPECT_EQ(c.order(), 3u);
}
