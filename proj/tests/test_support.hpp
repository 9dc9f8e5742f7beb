#pragma once

#include "obstruct/gmodule.hpp"
#include "obstruct/linalg.hpp"
#include "obstruct/lattice.hpp"
#include "obstruct/symplectic.hpp"

#include <numeric>
#include <set>

namespace obstruct::testing {

using ElementList = std::vector<ElementId>;

// every subgroup of h, by adjoining one element at a time
inline std::set<ElementList> all_subgroups(const FiniteGroup& g, const Subgroup& h) {
  std::set<ElementList> found{trivial_subgroup(g).elements};
  std::vector<ElementList> queue(found.begin(), found.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::set<ElementId> members(queue[i].begin(), queue[i].end());
    for (ElementId x : h.elements) {
      if (members.count(x)) continue;
      ElementList gens = queue[i];
      gens.push_back(x);
      Subgroup t = closure(g, gens);
      if (found.insert(t.elements).second) queue.push_back(t.elements);
    }
  }
  return found;
}

inline const SymplecticModel& model() {
  static const SymplecticModel m;
  return m;
}

inline const SubgroupLattice& lattice() {
  static const SubgroupLattice lat = subgroup_classes(model().group());
  return lat;
}

/// Kernel of the augmentation Z[X] -> Z, basis e_i - e_{n-1}.
inline GIntModule augmentation_module(const std::vector<Perm>& gens, std::size_t degree) {
  const std::size_t n = degree - 1;
  std::vector<IntMatrix> mats;
  for (const auto& p : gens) {
    IntMatrix m(n, n);
    const Point last = p[static_cast<Point>(n)];
    for (std::size_t i = 0; i < n; ++i) {
      const Point img = p[static_cast<Point>(i)];
      if (img != n) m(i, img) += 1;
      if (last != n) m(i, last) -= 1;
    }
    mats.push_back(std::move(m));
  }
  return GIntModule(n, std::move(mats));
}

inline std::vector<Perm> perms_of(const FiniteGroup& g, const Subgroup& h) {
  std::vector<Perm> out;
  for (ElementId e : h.gens) out.push_back(g.perm(e));
  return out;
}

/// gcd of the orbit lengths of h on the points of g.
inline std::size_t orbit_gcd(const FiniteGroup& g, const Subgroup& h) {
  std::vector<bool> seen(g.degree(), false);
  std::size_t d = 0;
  for (Point p = 0; p < g.degree(); ++p) {
    if (seen[p]) continue;
    std::size_t len = 0;
    for (ElementId e : h.elements) {
      Point q = g.images(e)[p];
      if (!seen[q]) {
        seen[q] = true;
        ++len;
      }
    }
    d = std::gcd(d, len);
  }
  return d;
}

inline GIntModule scalar_module(std::vector<long> signs) {
  std::vector<IntMatrix> mats;
  for (long s : signs) mats.push_back(IntMatrix::from_rows({{s}}, 1));
  return GIntModule(1, std::move(mats));
}

inline Subgroup map_into(const FiniteGroup& from, const FiniteGroup& to, const Subgroup& h) {
  std::vector<ElementId> gens;
  for (ElementId e : h.gens) gens.push_back(*to.index_of(from.perm(e)));
  return closure(to, gens);
}

// trivial, sign and degree <= 6 permutation modules over the generators of h
inline std::vector<GIntModule> small_modules(const FiniteGroup& g, const Subgroup& h) {
  const std::size_t k = h.gens.size();
  std::vector<GIntModule> out{trivial_module(k, 1), trivial_module(k, 2)};
  FiniteGroup hg(to_perm_group(g, h));
  SubgroupLattice sub = subgroup_classes(hg);
  for (const auto& c : sub.classes()) {
    const std::size_t index = hg.order() / c.order;
    if (index == 2) {
      std::vector<long> s;
      for (std::size_t i = 0; i < k; ++i) s.push_back(c.rep.contains(hg.generator_element(i)) ? 1 : -1);
      out.push_back(scalar_module(s));
    }
    if (index >= 2 && index <= 6) out.push_back(perm_module(coset_action(hg, c.rep).action));
  }
  return out;
}

/// Rank-61 module with character pi40 + pi45 - chi24: Z[40] modulo its
/// eigenvalue-2 sublattice for the collinearity graph, plus Z[45].
/// Not the Picard lattice; only the character agrees.
inline GIntModule surrogate_picard_module(const SymplecticModel& m) {
  IntMatrix p = m.srg_adjacency() - Integer(2) * IntMatrix::identity(40);
  GIntModule a = quotient_by_pairing(perm_module(m.psp4()), p);
  return direct_sum(a, perm_module(m.perp_pair_action()));
}

}  // namespace obstruct::testing
