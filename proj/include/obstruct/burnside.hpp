#pragma once

// Permutation characters of a group and the order of a rational character
// modulo their integer span.

#include "obstruct/class_function.hpp"
#include "obstruct/finite_group.hpp"
#include "obstruct/lattice.hpp"
#include "obstruct/linalg.hpp"

#include <vector>

namespace obstruct {

/// One row per subgroup class K of h (lattice order), one column per
/// element class of h; entry = fixed points on h/K.
struct PermCharacterMatrix {
  IntMatrix rows;
  std::vector<std::size_t> subgroup_orders;
};

inline PermCharacterMatrix perm_characters(const FiniteGroup& h, const SubgroupLattice& lat) {
  PermCharacterMatrix m{IntMatrix(0, h.classes().size()), {}};
  for (const auto& c : lat.classes()) {
    m.rows.append_row(permutation_character(h, c.rep).values);
    m.subgroup_orders.push_back(c.order);
  }
  return m;
}

inline PermCharacterMatrix perm_characters(const FiniteGroup& h, const LatticeOptions& opt = {}) {
  return perm_characters(h, subgroup_classes(h, opt));
}

/// chi on g read off on the classes of h, where h is built from elements of g.
inline ClassFunction restrict_classfn(const FiniteGroup& g, const ClassFunction& chi, const FiniteGroup& h) {
  ClassFunction out;
  for (const auto& c : h.classes()) {
    auto e = g.index_of(h.perm(c.rep));
    if (!e) throw GroupError("restrict_classfn: element outside the ambient group");
    out.values.push_back(chi[g.class_of(*e)]);
  }
  return out;
}

/// Minimal n >= 1 with n * chi in the span of the rows of m.
inline Integer burnside_order(const FiniteGroup& h, const PermCharacterMatrix& m, const ClassFunction& chi) {
  return minimal_multiplier(m.rows, chi.values, Integer(static_cast<unsigned long>(h.order())));
}

/// Whether chi lies in the span of the rows of m.
inline bool in_burnside_span(const PermCharacterMatrix& m, const ClassFunction& chi) {
  return solve_in_lattice(m.rows, chi.values).has_value();
}

}  // namespace obstruct
