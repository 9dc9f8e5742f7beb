#pragma once

// Named pass/fail checks on the symplectic model, shared by the CLI and
// the acceptance runner.

#include "obstruct/class_function.hpp"
#include "obstruct/lattice.hpp"
#include "obstruct/symplectic.hpp"

#include <string>
#include <vector>

namespace obstruct {

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

inline bool all_ok(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    if (!c.ok) return false;
  return true;
}

inline std::vector<Check> group_checks(const SymplecticModel& m) {
  std::vector<Check> out;
  auto num = [](auto x) { return std::to_string(x); };
  out.push_back({"|Sp4(F3)| = 51840", m.sp4().order() == 51840, num(m.sp4().order())});
  out.push_back({"|PSp4(F3)| = 25920", m.psp4().order() == 25920, num(m.psp4().order())});
  PermGroup lines = m.isotropic_line_action(), pairs = m.perp_pair_action();
  out.push_back({"points: degree 40, transitive", m.psp4().degree() == 40 && m.psp4().is_transitive(), ""});
  out.push_back({"isotropic lines: degree 40, transitive", lines.degree() == 40 && lines.is_transitive(), ""});
  out.push_back({"perpendicular pairs: degree 45, transitive", pairs.degree() == 45 && pairs.is_transitive(), ""});
  const auto& g = m.group();
  Subgroup g40 = m.point_stabilizer(0);
  Subgroup line = m.subspace_stabilizer(m.isotropic_lines().front());
  Subgroup g45 = m.perp_pair_stabilizer(m.perp_pairs().front());
  out.push_back({"stabilizer orders 648, 648, 576",
                 g40.order() == 648 && line.order() == 648 && g45.order() == 576,
                 num(g40.order()) + ", " + num(line.order()) + ", " + num(g45.order())});
  out.push_back({"point and line stabilizers not conjugate", !conjugating_element(g, g40, line).has_value(), ""});
  return out;
}

/// Class counts of index-40 and index-45 subgroups.
inline std::vector<Check> index_class_checks(const SymplecticModel& m, const SubgroupLattice& lat) {
  std::size_t i40 = 0, i45 = 0;
  for (const auto& c : lat.classes()) {
    i40 += c.order * 40 == m.group().order();
    i45 += c.order * 45 == m.group().order();
  }
  return {{"two classes of index 40", i40 == 2, std::to_string(i40)},
          {"one class of index 45", i45 == 1, std::to_string(i45)}};
}

inline std::vector<Check> character_checks(const SymplecticModel& m) {
  const auto& g = m.group();
  // spectral_character throws unless every value is an exact integer
  ClassFunction chi = m.chi24(), chi15 = m.chi15();
  ClassFunction pi40 = permutation_character(g, m.point_stabilizer(0));
  return {{"chi24(1) = 24", chi[0] == 24, chi[0].get_str()},
          {"chi24 integer valued", chi.size() == g.classes().size(), std::to_string(chi.size()) + " classes"},
          {"<chi24, chi24> = 1", inner_product(g, chi, chi) == 1, inner_product(g, chi, chi).get_str()},
          {"pi40 = 1 + chi15 + chi24", pi40 == trivial_character(g) + chi15 + chi, ""}};
}

/// The order-3 unipotent generator of fixture row 6, with coordinates 3
/// and 4 swapped to match the Gram matrix here and transposed for the row
/// action.
inline F3Matrix row6_generator() {
  return F3Matrix::from_rows({{{1, 0, 2, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}}}).transpose();
}

}  // namespace obstruct
