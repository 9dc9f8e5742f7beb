#pragma once

#include "obstruct/finite_group.hpp"
#include "obstruct/linalg.hpp"

#include <stdexcept>
#include <vector>

namespace obstruct {

/// Integer-valued function on the conjugacy classes of one FiniteGroup,
/// indexed like FiniteGroup::classes().
struct ClassFunction {
  std::vector<Integer> values;

  const Integer& operator[](std::size_t c) const { return values[c]; }
  Integer& operator[](std::size_t c) { return values[c]; }
  std::size_t size() const noexcept { return values.size(); }

  friend ClassFunction operator+(ClassFunction a, const ClassFunction& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a.values[i] += b.values[i];
    return a;
  }
  friend ClassFunction operator-(ClassFunction a, const ClassFunction& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a.values[i] -= b.values[i];
    return a;
  }
  friend bool operator==(const ClassFunction&, const ClassFunction&) = default;
};

inline ClassFunction trivial_character(const FiniteGroup& g) {
  return ClassFunction{std::vector<Integer>(g.classes().size(), Integer(1))};
}

/// Character of Z[G/H]: number of cosets fixed by each class.
inline ClassFunction permutation_character(const FiniteGroup& g, const Subgroup& h) {
  auto dist = class_distribution(g, h);
  ClassFunction f;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    Integer v = Integer(static_cast<unsigned long>(g.classes()[c].centralizer.size())) *
                static_cast<unsigned long>(dist[c]);
    f.values.push_back(v / static_cast<unsigned long>(h.order()));
  }
  return f;
}

/// (1/|G|) sum_g a(g) b(g); both functions are real-valued here.
inline Integer inner_product(const FiniteGroup& g, const ClassFunction& a, const ClassFunction& b) {
  Integer s = 0;
  for (std::size_t c = 0; c < a.size(); ++c)
    s += Integer(static_cast<unsigned long>(g.classes()[c].size)) * a[c] * b[c];
  Integer n(static_cast<unsigned long>(g.order()));
  if (s % n != 0) throw std::domain_error("inner_product: not an integer");
  return s / n;
}

}  // namespace obstruct
