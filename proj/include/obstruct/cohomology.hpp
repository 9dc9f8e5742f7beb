#pragma once

// H^0 and H^1 of a finite subgroup with coefficients in a free Z-module.
// Convention: right action, cocycles satisfy c(gh) = c(g) h + c(h),
// coboundaries are g -> m g - m.

#include "obstruct/finite_group.hpp"
#include "obstruct/gmodule.hpp"
#include "obstruct/lattice.hpp"
#include "obstruct/linalg.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace obstruct {

class CohomologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CohomologyResult {
  std::size_t h0_rank = 0;
  AbelianInvariants h1;
};

namespace detail {

// [A_1 - I | ... | A_k - I]: row m maps to the coboundary of m.
inline IntMatrix coboundary_matrix(const std::vector<IntMatrix>& mats, std::size_t n) {
  IntMatrix d(n, n * mats.size());
  for (std::size_t k = 0; k < mats.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, k * n + j) = mats[k](i, j) - (i == j ? 1 : 0);
  return d;
}

}  // namespace detail

/// Rank of the fixed sublattice of m (m given over generators of some group).
inline std::size_t h0(const GIntModule& m) {
  if (m.generator_count() == 0) return m.rank();
  return kernel_saturated(detail::coboundary_matrix(m.matrices(), m.rank())).rows();
}

/// Z^1 of a finite group is saturated in Z^{nk} and has the rank of B^1,
/// so H^1 is the torsion of Z^{nk} / B^1. The module must be given over
/// a generating set of a finite group.
inline AbelianInvariants h1(const GIntModule& m) {
  const std::size_t n = m.rank(), k = m.generator_count();
  if (n == 0 || k == 0) return {};
  IntMatrix d = detail::coboundary_matrix(m.matrices(), n);
  auto diag = elementary_divisors(d);
  return invariants_from_diagonal(diag, 0);
}

namespace detail {

struct RelatorSystem {
  IntMatrix sys;               // x * sys == 0 exactly for cocycles x
  std::vector<IntMatrix> strong;  // module matrices of the strong generators
};

// Relator r = x_1 ... x_L gives c(r) = sum_j c(x_j) x_{j+1}...x_L.
inline RelatorSystem relator_system(const FiniteGroup& g, const Subgroup& h, const GIntModule& m) {
  const std::size_t n = m.rank();
  Presentation pres = to_perm_group(g, h).presentation();
  RelatorSystem rs;
  std::vector<IntMatrix> sinv;
  for (const auto& w : pres.generator_words) {
    rs.strong.push_back(m.evaluate(w));
    sinv.push_back(m.evaluate(w.inverse()));
  }
  rs.sys = IntMatrix(n * pres.generator_count, n * pres.relators.size());
  for (std::size_t r = 0; r < pres.relators.size(); ++r) {
    const auto& letters = pres.relators[r].letters();
    IntMatrix suffix = IntMatrix::identity(n);
    for (std::size_t j = letters.size(); j-- > 0;) {
      const auto& l = letters[j];
      IntMatrix coef;
      if (l.exp > 0) {
        coef = suffix;
        suffix = rs.strong[l.gen] * suffix;
      } else {
        suffix = sinv[l.gen] * suffix;
        coef = Integer(-1) * suffix;  // c(s^-1) = -c(s) s^-1
      }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) rs.sys(l.gen * n + a, r * n + b) += coef(a, b);
    }
  }
  return rs;
}

}  // namespace detail

/// Z^1 from the relator system of h's chain presentation (Fox calculus),
/// then H^1 = Z^1 / B^1. Module m is given over h.gens.
inline AbelianInvariants h1_presentation(const FiniteGroup& g, const Subgroup& h, const GIntModule& m) {
  const std::size_t n = m.rank();
  if (m.generator_count() != h.gens.size()) throw CohomologyError("h1_presentation: module/generator mismatch");
  if (h.gens.empty() || n == 0) return {};
  auto rs = detail::relator_system(g, h, m);
  IntMatrix z1 = kernel_saturated(rs.sys);
  IntMatrix b1 = detail::coboundary_matrix(rs.strong, n);
  IntMatrix coords(0, z1.rows());
  for (std::size_t i = 0; i < b1.rows(); ++i) {
    auto x = solve_in_lattice(z1, b1.row(i));
    if (!x) throw CohomologyError("h1_presentation: coboundary outside the cocycle lattice");
    coords.append_row(*x);
  }
  auto inv = quotient_invariants(z1.rows(), coords);
  if (inv.free_rank != 0) throw CohomologyError("h1_presentation: positive free rank");
  return inv;
}

/// Cross-check for h1(): over F_p the cocycle space of the relator system
/// has the dimension of the coboundary space.
inline bool h1_rank_consistent(const FiniteGroup& g, const Subgroup& h, const GIntModule& m) {
  const std::size_t n = m.rank();
  if (h.gens.empty() || n == 0) return true;
  auto rs = detail::relator_system(g, h, m);
  const std::size_t z1_rank = rs.sys.rows() - rank_mod_p(rs.sys);
  return z1_rank == rank_mod_p(detail::coboundary_matrix(rs.strong, n));
}

inline constexpr std::size_t kBruteforceMaxOrder = 16;
inline constexpr std::size_t kBruteforceMaxWork = 100'000;

/// Bar-resolution H^1 over the full element list of h.
inline AbelianInvariants h1_bruteforce(const FiniteGroup& g, const Subgroup& h, const GIntModule& m) {
  const std::size_t n = m.rank(), q = h.order();
  if (q > kBruteforceMaxOrder || n * q * q > kBruteforceMaxWork)
    throw CohomologyError("h1_bruteforce: resource guard (|H| <= 16, rank*|H|^2 <= 100000)");
  if (m.generator_count() != h.gens.size()) throw CohomologyError("h1_bruteforce: module/generator mismatch");
  // element matrices by closure over the generator matrices
  std::vector<ElementId> elems{FiniteGroup::identity()};
  std::vector<IntMatrix> mats{IntMatrix::identity(n)};
  std::unordered_map<ElementId, std::size_t> pos{{FiniteGroup::identity(), 0}};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t k = 0; k < h.gens.size(); ++k) {
      ElementId y = g.mul(elems[i], h.gens[k]);
      if (pos.count(y)) continue;
      pos[y] = elems.size();
      elems.push_back(y);
      mats.push_back(mats[i] * m.matrix(k));
    }
  if (elems.size() != q) throw CohomologyError("h1_bruteforce: generators do not span the subgroup");
  // d1 f (a, b) = f(a) b + f(b) - f(ab), columns indexed by (a, b, coordinate)
  IntMatrix d1(n * q, n * q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) {
      const std::size_t ab = pos.at(g.mul(elems[a], elems[b]));
      const std::size_t col = (a * q + b) * n;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d1(a * n + i, col + j) += mats[b](i, j);
        d1(b * n + i, col + i) += 1;
        d1(ab * n + i, col + i) -= 1;
      }
    }
  IntMatrix z1 = kernel_saturated(d1);
  // d0 m (a) = m a - m
  IntMatrix d0(n, n * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d0(i, a * n + j) = mats[a](i, j) - (i == j ? 1 : 0);
  IntMatrix coords(0, z1.rows());
  for (std::size_t i = 0; i < n; ++i) {
    auto x = solve_in_lattice(z1, d0.row(i));
    if (!x) throw CohomologyError("h1_bruteforce: coboundary outside the cocycle lattice");
    coords.append_row(*x);
  }
  return quotient_invariants(z1.rows(), coords);
}

/// Largest invariant factor; 1 for the trivial group.
inline Integer exponent(const AbelianInvariants& inv) {
  if (inv.free_rank != 0) throw CohomologyError("exponent: group has positive free rank");
  return inv.divisors.empty() ? Integer(1) : inv.divisors.back();
}

struct ClassCohomology {
  AbelianInvariants h1_m, h1_mdual;
};

/// lcm of both exponents over every class contained in `id`; `witness`
/// receives a contained class realizing the largest single exponent.
inline Integer lcm_obstruction(const SubgroupLattice& lat, std::size_t id, const std::vector<ClassCohomology>& coh,
                               std::size_t* witness = nullptr) {
  Integer l = 1, best = 1;
  std::size_t w = 0;
  for (std::size_t p : lat.classes_contained_in(id)) {
    Integer e = lcm(exponent(coh.at(p).h1_m), exponent(coh.at(p).h1_mdual));
    l = lcm(l, e);
    if (e > best) {
      best = e;
      w = p;
    }
  }
  if (witness) *witness = w;
  return l;
}

}  // namespace obstruct
