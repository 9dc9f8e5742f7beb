#include "obstruct/burnside.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace obstruct;
using namespace obstruct::testing;

namespace {

struct ClassData {
  FiniteGroup h;
  PermCharacterMatrix perm;
  ClassFunction chi;
  Integer order;
};

// Burnside data for every class, computed once
const std::vector<ClassData>& all_classes() {
  static const std::vector<ClassData> data = [] {
    const auto& g = model().group();
    std::vector<ClassData> out;
    for (const auto& c : lattice().classes()) {
      FiniteGroup h(to_perm_group(g, c.rep));
      PermCharacterMatrix m = c.order == g.order() ? perm_characters(h, lattice()) : perm_characters(h);
      ClassFunction chi = restrict_classfn(g, model().chi24(), h);
      Integer b = burnside_order(h, m, chi);
      out.push_back({std::move(h), std::move(m), std::move(chi), b});
    }
    return out;
  }();
  return data;
}

}  // namespace

TEST(PermCharacters, SmallExamples) {
  FiniteGroup one(PermGroup(2, {}));
  PermCharacterMatrix t = perm_characters(one);
  EXPECT_EQ(t.rows, IntMatrix::from_rows({{1}}, 1));
  FiniteGroup c2(PermGroup(2, {Perm::from_cycles(2, {{0, 1}})}));
  PermCharacterMatrix m = perm_characters(c2);
  EXPECT_EQ(m.rows, IntMatrix::from_rows({{2, 0}, {1, 1}}, 2));
  EXPECT_EQ(burnside_order(one, t, ClassFunction{{Integer(24)}}), 1);
}

TEST(PermCharacters, RowInvariants) {
  for (const auto& d : all_classes()) {
    const auto& rows = d.perm.rows;
    const std::size_t last = rows.rows() - 1;
    for (std::size_t c = 0; c < rows.cols(); ++c) EXPECT_EQ(rows(last, c), 1);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      EXPECT_EQ(rows(r, 0), static_cast<unsigned long>(d.h.order() / d.perm.subgroup_orders[r]));
      ClassFunction row{rows.row(r)};
      for (const auto& v : row.values) EXPECT_GE(v, 0);
      EXPECT_EQ(inner_product(d.h, row, trivial_character(d.h)), 1);
    }
  }
}

TEST(PermCharacters, WholeGroupHas116Rows) {
  EXPECT_EQ(all_classes().back().perm.rows.rows(), 116u);
}

TEST(Restriction, Basics) {
  const auto& g = model().group();
  FiniteGroup whole(model().psp4());
  ClassFunction chi = model().chi24();
  ClassFunction r = restrict_classfn(g, chi, whole);
  for (std::size_t c = 0; c < whole.classes().size(); ++c)
    EXPECT_EQ(r[c], chi[g.class_of(*g.index_of(whole.perm(whole.classes()[c].rep)))]);
  for (const auto& d : all_classes()) EXPECT_EQ(d.chi[0], 24);
  EXPECT_EQ(all_classes().front().chi.values, std::vector<Integer>{24});
}

TEST(Burnside, WholeGroupOrderTwo) {
  const auto& d = all_classes().back();
  EXPECT_EQ(d.order, 2);
  EXPECT_FALSE(in_burnside_span(d.perm, d.chi));
  ClassFunction twice = d.chi + d.chi;
  EXPECT_TRUE(in_burnside_span(d.perm, twice));
}

TEST(Burnside, NontrivialClasses) {
  // agrees with the elementwise oracle below; the order-24 class is C3 x Q8,
  // whose faithful rational 4-dimensional representation occurs once in chi24
  std::multiset<std::size_t> orders;
  for (std::size_t i = 0; i < all_classes().size(); ++i) {
    const auto& b = all_classes()[i].order;
    EXPECT_TRUE(b == 1 || b == 2) << "class " << i << " has order " << b;
    if (b > 1) orders.insert(lattice()[i].order);
  }
  EXPECT_EQ(orders, (std::multiset<std::size_t>{24, 72, 96, 216, 288, 576, 648, 25920}));
  for (const auto& c : lattice().classes())
    if (c.order == 24 && all_classes()[c.id].order == 2) {
      EXPECT_TRUE(c.fp.nilpotent);
      EXPECT_EQ(c.fp.abelianization.to_string(), "Z/2 x Z/6");
      EXPECT_EQ(c.fp.class_count, 15u);
    }
}

TEST(Burnside, MonotoneUnderMaximalSubgroups) {
  // restriction of a permutation character is one, so n_H * chi|K lies in K's span
  const auto& lat = lattice();
  for (const auto& c : lat.classes())
    for (std::size_t m : c.maximal) {
      const auto& k = all_classes()[m];
      ClassFunction multiple = k.chi;
      for (auto& v : multiple.values) v *= all_classes()[c.id].order;
      EXPECT_TRUE(in_burnside_span(k.perm, multiple)) << m << " in " << c.id;
    }
}

TEST(Burnside, MatchesElementwiseOracleOnSmallClasses) {
  // every subgroup, fixed points counted coset by coset, columns indexed by elements
  const auto& g = model().group();
  const ClassFunction chi = model().chi24();
  std::size_t checked = 0;
  for (const auto& c : lattice().classes()) {
    if (c.order > 48) continue;
    const auto& elems = c.rep.elements;
    IntMatrix rows(0, elems.size());
    for (const auto& k : all_subgroups(g, c.rep)) {
      ElementSet in_k = g.empty_set();
      for (ElementId y : k) in_k.set(y);
      IntVector row;
      for (ElementId x : elems) {
        std::size_t fixed = 0;
        for (ElementId t : elems) fixed += in_k.test(g.mul(g.mul(t, x), g.inv(t)));
        row.push_back(Integer(static_cast<unsigned long>(fixed / k.size())));
      }
      rows.append_row(row);
    }
    IntVector target;
    for (ElementId x : elems) target.push_back(chi[g.class_of(x)]);
    Integer oracle = minimal_multiplier(rows, target, Integer(static_cast<unsigned long>(c.order)));
    EXPECT_EQ(oracle, all_classes()[c.id].order) << "class " << c.id << " order " << c.order;
    ++checked;
  }
  EXPECT_GT(checked, 60u);
}
