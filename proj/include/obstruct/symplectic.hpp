#pragma once

// Sp4(F3) and PSp4(F3) as permutation groups. Vectors are rows and matrices
// act on the right. The Gram matrix pairs e1 with e3 and e2 with e4.

#include "obstruct/class_function.hpp"
#include "obstruct/finite_group.hpp"
#include "obstruct/linalg.hpp"
#include "obstruct/perm_group.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <unordered_set>
#include <utility>
#include <vector>

namespace obstruct {

using F3 = std::uint8_t;
using F3Vector = std::array<F3, 4>;

inline F3 f3(long v) { return static_cast<F3>(((v % 3) + 3) % 3); }

struct F3Matrix {
  std::array<std::array<F3, 4>, 4> a{};

  static F3Matrix identity() { return scalar(1); }
  static F3Matrix scalar(F3 s) {
    F3Matrix m;
    for (int i = 0; i < 4; ++i) m.a[i][i] = s;
    return m;
  }
  static F3Matrix from_rows(std::array<std::array<int, 4>, 4> rows) {
    F3Matrix m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m.a[i][j] = f3(rows[i][j]);
    return m;
  }

  F3 operator()(int i, int j) const { return a[i][j]; }
  F3& operator()(int i, int j) { return a[i][j]; }

  F3Matrix transpose() const {
    F3Matrix t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) t.a[i][j] = a[j][i];
    return t;
  }
  /// 2 bits per entry, row-major.
  std::uint32_t code() const {
    std::uint32_t c = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) c |= std::uint32_t{a[i][j]} << (2 * (4 * i + j));
    return c;
  }

  friend F3Matrix operator*(const F3Matrix& x, const F3Matrix& y) {
    F3Matrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        int s = 0;
        for (int k = 0; k < 4; ++k) s += x.a[i][k] * y.a[k][j];
        r.a[i][j] = static_cast<F3>(s % 3);
      }
    return r;
  }
  friend auto operator<=>(const F3Matrix&, const F3Matrix&) = default;
  friend bool operator==(const F3Matrix&, const F3Matrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const F3Matrix& m) {
    for (int i = 0; i < 4; ++i) {
      os << (i ? " / " : "");
      for (int j = 0; j < 4; ++j) os << (j ? " " : "") << int(m.a[i][j]);
    }
    return os;
  }
};

inline F3Vector operator*(const F3Vector& v, const F3Matrix& m) {
  F3Vector r{};
  for (int j = 0; j < 4; ++j) {
    int s = 0;
    for (int k = 0; k < 4; ++k) s += v[k] * m.a[k][j];
    r[j] = static_cast<F3>(s % 3);
  }
  return r;
}

inline F3Matrix symplectic_gram() { return F3Matrix::from_rows({{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}}); }

inline F3 symplectic_form(const F3Vector& x, const F3Vector& y) {
  return f3(x[0] * y[2] - x[2] * y[0] + x[1] * y[3] - x[3] * y[1]);
}

/// Row-action preservation of the form: M J M^T == J.
inline bool is_symplectic(const F3Matrix& m) { return m * symplectic_gram() * m.transpose() == symplectic_gram(); }

/// x -> x + <x, v> v
inline F3Matrix transvection(const F3Vector& v) {
  F3Matrix t = F3Matrix::identity();
  F3Matrix j = symplectic_gram();
  for (int i = 0; i < 4; ++i) {
    int jv = 0;
    for (int k = 0; k < 4; ++k) jv += j.a[i][k] * v[k];
    for (int c = 0; c < 4; ++c) t.a[i][c] = f3(t.a[i][c] + jv * v[c]);
  }
  return t;
}

inline std::uint32_t vector_code(const F3Vector& v) { return v[0] + 3u * v[1] + 9u * v[2] + 27u * v[3]; }

inline F3Vector vector_from_code(std::uint32_t c) {
  F3Vector v{};
  for (int i = 0; i < 4; ++i, c /= 3) v[i] = static_cast<F3>(c % 3);
  return v;
}

/// Scales so the first nonzero coordinate is 1.
inline F3Vector normalize(F3Vector v) {
  for (int i = 0; i < 4; ++i)
    if (v[i]) {
      if (v[i] == 2)
        for (auto& x : v) x = static_cast<F3>((2 * x) % 3);
      break;
    }
  return v;
}

/// A subspace of F3^4 as a set of vector codes (81 bits).
struct F3Subspace {
  std::vector<F3Vector> basis;
  std::uint64_t lo = 0, hi = 0;

  bool contains(const F3Vector& v) const {
    std::uint32_t c = vector_code(v);
    return c < 64 ? (lo >> c) & 1u : (hi >> (c - 64)) & 1u;
  }
  std::pair<std::uint64_t, std::uint64_t> key() const { return {hi, lo}; }
  bool invariant_under(const F3Matrix& m) const {
    for (const auto& b : basis)
      if (!contains(b * m)) return false;
    return true;
  }
  F3Subspace image(const F3Matrix& m) const {
    std::vector<F3Vector> b;
    for (const auto& v : basis) b.push_back(v * m);
    return span(b);
  }

  static F3Subspace span(const std::vector<F3Vector>& gens) {
    F3Subspace s;
    std::vector<F3Vector> members{F3Vector{}};
    for (const auto& g : gens) {
      bool in = false;
      for (const auto& m : members) in = in || m == g;
      if (in) continue;
      s.basis.push_back(g);
      std::size_t n = members.size();
      for (int k = 1; k <= 2; ++k)
        for (std::size_t i = 0; i < n; ++i) {
          F3Vector w;
          for (int c = 0; c < 4; ++c) w[c] = f3(members[i][c] + k * g[c]);
          members.push_back(w);
        }
    }
    for (const auto& m : members) {
      std::uint32_t c = vector_code(m);
      if (c < 64)
        s.lo |= std::uint64_t{1} << c;
      else
        s.hi |= std::uint64_t{1} << (c - 64);
    }
    return s;
  }

  F3Subspace perp() const {
    std::vector<F3Vector> out;
    for (std::uint32_t c = 1; c < 81; ++c) {
      F3Vector x = vector_from_code(c);
      bool ok = true;
      for (const auto& b : basis) ok = ok && symplectic_form(x, b) == 0;
      if (ok) out.push_back(x);
    }
    return span(out);
  }
};

/// Every proper nonzero subspace of F3^4, listed by dimension.
inline const std::vector<F3Subspace>& proper_subspaces() {
  static const std::vector<F3Subspace> all = [] {
    std::vector<F3Subspace> out;
    std::vector<F3Vector> pts;
    for (std::uint32_t c = 1; c < 81; ++c) {
      F3Vector v = vector_from_code(c);
      if (normalize(v) == v) pts.push_back(v);
    }
    std::map<std::pair<std::uint64_t, std::uint64_t>, F3Subspace> planes, hyper;
    for (const auto& p : pts) out.push_back(F3Subspace::span({p}));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        auto s = F3Subspace::span({pts[i], pts[j]});
        planes.emplace(s.key(), s);
      }
    for (auto& [k, s] : planes) out.push_back(s);
    for (const auto& p : pts) {
      std::vector<F3Vector> ker;
      for (std::uint32_t c = 1; c < 81; ++c) {
        F3Vector x = vector_from_code(c);
        if ((x[0] * p[0] + x[1] * p[1] + x[2] * p[2] + x[3] * p[3]) % 3 == 0) ker.push_back(x);
      }
      auto s = F3Subspace::span(ker);
      hyper.emplace(s.key(), s);
    }
    for (auto& [k, s] : hyper) out.push_back(s);
    return out;
  }();
  return all;
}

/// Dimension over F3 of {X : X g = g X for all g}.
inline std::size_t commutant_dimension(const std::vector<F3Matrix>& gens) {
  IntMatrix eq(0, 16);
  for (const auto& g : gens)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        // (X g - g X)_{ij}
        IntVector row(16, Integer(0));
        for (int k = 0; k < 4; ++k) {
          row[4 * i + k] += g.a[k][j];
          row[4 * k + j] -= g.a[i][k];
        }
        eq.append_row(row);
      }
  return 16 - rank_mod_p(eq, 3);
}

/// No invariant proper subspace and scalar commutant.
inline bool is_absolutely_irreducible(const std::vector<F3Matrix>& gens) {
  for (const auto& s : proper_subspaces()) {
    bool inv = true;
    for (const auto& g : gens) inv = inv && s.invariant_under(g);
    if (inv) return false;
  }
  return commutant_dimension(gens) == 1;
}

/// All elements of the matrix group generated by gens.
inline std::vector<F3Matrix> matrix_closure(const std::vector<F3Matrix>& gens) {
  std::vector<F3Matrix> out{F3Matrix::identity()};
  std::unordered_set<std::uint32_t> seen{F3Matrix::identity().code()};
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& g : gens) {
      F3Matrix y = out[k] * g;
      if (seen.insert(y.code()).second) out.push_back(y);
    }
  return out;
}

struct LiftedSubgroup {
  std::vector<F3Matrix> generators;  // lifts of the projective generators, then -I
  std::size_t order = 0;
};

class SymplecticModel {
 public:
  SymplecticModel() {
    const std::array<F3Vector, 5> dirs{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 0, 0}}};
    for (const auto& v : dirs) gen_mats_.push_back(transvection(v));
    for (std::uint32_t c = 1; c < 81; ++c) {
      F3Vector v = vector_from_code(c);
      if (normalize(v) == v) {
        point_of_code_[c] = static_cast<Point>(points_.size());
        points_.push_back(v);
      }
    }
    std::vector<Perm> lin, proj;
    for (const auto& m : gen_mats_) {
      std::vector<Point> img80(80);
      for (std::uint32_t c = 1; c < 81; ++c) img80[c - 1] = vector_code(vector_from_code(c) * m) - 1;
      lin.push_back(Perm(std::move(img80)));
      proj.push_back(point_perm(m));
    }
    sp4_ = PermGroup(80, std::move(lin));
    psp4_ = PermGroup(40, std::move(proj));
    group_ = std::make_unique<FiniteGroup>(psp4_);
    lifts_.resize(group_->order());
    lifts_[0] = F3Matrix::identity();
    for (ElementId e = 1; e < group_->order(); ++e)
      lifts_[e] = lifts_[group_->parent(e)] * gen_mats_[group_->parent_generator(e)];
  }

  SymplecticModel(const SymplecticModel&) = delete;
  SymplecticModel& operator=(const SymplecticModel&) = delete;

  const std::vector<F3Matrix>& generator_matrices() const noexcept { return gen_mats_; }
  const PermGroup& sp4() const noexcept { return sp4_; }
  const PermGroup& psp4() const noexcept { return psp4_; }
  const FiniteGroup& group() const noexcept { return *group_; }
  const std::vector<F3Vector>& points() const noexcept { return points_; }

  Point point_index(const F3Vector& v) const { return point_of_code_[vector_code(normalize(v))]; }

  Perm point_perm(const F3Matrix& m) const {
    std::vector<Point> img(points_.size());
    for (std::size_t p = 0; p < points_.size(); ++p) img[p] = point_index(points_[p] * m);
    return Perm(std::move(img));
  }

  /// One of the two matrices over e.
  const F3Matrix& lift(ElementId e) const { return lifts_[e]; }

  /// Image of a symplectic matrix in the projective group.
  std::optional<ElementId> element_of(const F3Matrix& m) const {
    if (!is_symplectic(m)) return std::nullopt;
    return group_->index_of(point_perm(m));
  }

  LiftedSubgroup lift_to_sp(const Subgroup& h) const {
    LiftedSubgroup l;
    for (ElementId e : h.gens) {
      if (e >= lifts_.size()) throw GroupError("lift_to_sp: generator outside the group");
      l.generators.push_back(lifts_[e]);
    }
    l.generators.push_back(F3Matrix::scalar(2));
    l.order = matrix_closure(l.generators).size();
    return l;
  }

  bool is_absolutely_irreducible(const Subgroup& h) const {
    return obstruct::is_absolutely_irreducible(lift_to_sp(h).generators);
  }

  std::vector<F3Subspace> isotropic_lines() const {
    std::vector<F3Subspace> out;
    for (const auto& s : proper_subspaces())
      if (s.basis.size() == 2 && symplectic_form(s.basis[0], s.basis[1]) == 0) out.push_back(s);
    return out;
  }

  /// Non-degenerate planes V with V < V-perp in key order, one per pair.
  std::vector<F3Subspace> perp_pairs() const {
    std::vector<F3Subspace> out;
    for (const auto& s : proper_subspaces())
      if (s.basis.size() == 2 && symplectic_form(s.basis[0], s.basis[1]) != 0 && s.key() < s.perp().key())
        out.push_back(s);
    return out;
  }

  PermGroup isotropic_line_action() const { return subspace_action(isotropic_lines(), false); }
  PermGroup perp_pair_action() const { return subspace_action(perp_pairs(), true); }

  Subgroup point_stabilizer(Point p) const {
    return stabilizer([&](const F3Matrix& m) { return point_index(points_[p] * m) == p; });
  }
  Subgroup subspace_stabilizer(const F3Subspace& s) const {
    return stabilizer([&](const F3Matrix& m) { return s.invariant_under(m); });
  }
  Subgroup perp_pair_stabilizer(const F3Subspace& s) const {
    F3Subspace q = s.perp();
    return stabilizer([&](const F3Matrix& m) {
      auto k = s.image(m).key();
      return k == s.key() || k == q.key();
    });
  }

  /// x ~ y iff x != y and <x, y> = 0.
  IntMatrix srg_adjacency() const {
    const std::size_t n = points_.size();
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && symplectic_form(points_[i], points_[j]) == 0) a(i, j) = 1;
    return a;
  }

  /// trace(P(g) N) / d for each class, with N an integral multiple d of a projector.
  ClassFunction spectral_character(const IntMatrix& n, long d) const {
    ClassFunction f;
    for (const auto& cc : group_->classes()) {
      auto im = group_->images(cc.rep);
      Integer s = 0;
      for (std::size_t i = 0; i < points_.size(); ++i) s += n(im[i], i);
      if (s % d != 0) throw std::domain_error("spectral_character: non-integral value");
      f.values.push_back(s / d);
    }
    return f;
  }

  ClassFunction chi24() const { return spectral_character(projector_numerator(12, -4), -60); }
  ClassFunction chi15() const { return spectral_character(projector_numerator(12, 2), 96); }

 private:
  // (A - a I)(A - b I)
  IntMatrix projector_numerator(long a, long b) const {
    IntMatrix adj = srg_adjacency();
    IntMatrix id = IntMatrix::identity(adj.rows());
    return (adj - Integer(a) * id) * (adj - Integer(b) * id);
  }

  template <class Pred>
  Subgroup stabilizer(Pred keep) const {
    ElementSet s = group_->empty_set();
    for (ElementId e = 0; e < group_->order(); ++e)
      if (keep(lifts_[e])) s.set(e);
    std::vector<ElementId> gens;
    Subgroup span = closure(*group_, {});
    const std::size_t n = s.count();
    s.for_each([&](ElementId e) {
      if (span.order() == n || span.contains(e)) return;
      gens.push_back(e);
      span = closure(*group_, gens);
    });
    return span;
  }

  PermGroup subspace_action(const std::vector<F3Subspace>& objs, bool pairs) const {
    std::map<std::pair<std::uint64_t, std::uint64_t>, Point> label;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      label[objs[i].key()] = static_cast<Point>(i);
      if (pairs) label[objs[i].perp().key()] = static_cast<Point>(i);
    }
    std::vector<Perm> gens;
    for (const auto& m : gen_mats_) {
      std::vector<Point> img(objs.size());
      for (std::size_t i = 0; i < objs.size(); ++i) img[i] = label.at(objs[i].image(m).key());
      gens.push_back(Perm(std::move(img)));
    }
    return PermGroup(objs.size(), std::move(gens));
  }

  std::vector<F3Matrix> gen_mats_;
  std::vector<F3Vector> points_;
  std::array<Point, 81> point_of_code_{};
  PermGroup sp4_, psp4_;
  std::unique_ptr<FiniteGroup> group_;
  std::vector<F3Matrix> lifts_;
};

}  // namespace obstruct
