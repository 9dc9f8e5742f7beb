#pragma once

// Free Z-modules with a right action of an enumerated group: one unimodular
// matrix per generator, rows acted on as x -> x * A.

#include "obstruct/class_function.hpp"
#include "obstruct/finite_group.hpp"
#include "obstruct/linalg.hpp"

#include <fstream>
#include <istream>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace obstruct {

class ModuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw ModuleError("unimodular_inverse: matrix not square");
  HermiteForm hf = hnf(a);
  if (hf.h != IntMatrix::identity(a.rows())) throw ModuleError("unimodular_inverse: matrix not unimodular");
  return hf.u;
}

class GIntModule {
 public:
  GIntModule() = default;
  GIntModule(std::size_t rank, std::vector<IntMatrix> gens) : rank_(rank), gens_(std::move(gens)) {
    for (const auto& m : gens_)
      if (m.rows() != rank_ || m.cols() != rank_) throw ModuleError("GIntModule: matrix size differs from rank");
  }
  GIntModule(const GIntModule& o) : rank_(o.rank_), gens_(o.gens_) {}
  GIntModule& operator=(const GIntModule& o) {
    rank_ = o.rank_;
    gens_ = o.gens_;
    std::lock_guard lock(mu_);
    inv_.clear();
    return *this;
  }

  std::size_t rank() const noexcept { return rank_; }
  std::size_t generator_count() const noexcept { return gens_.size(); }
  const IntMatrix& matrix(std::size_t k) const { return gens_.at(k); }
  const std::vector<IntMatrix>& matrices() const noexcept { return gens_; }

  IntMatrix evaluate(const Word& w) const {
    IntMatrix acc = IntMatrix::identity(rank_);
    for (const auto& l : w.letters()) acc = acc * (l.exp > 0 ? gens_.at(l.gen) : inverse(l.gen));
    return acc;
  }

  /// Matrix of group element e, along its Cayley-tree word in g; the
  /// generators of g must be the generators of this module.
  IntMatrix element_matrix(const FiniteGroup& g, ElementId e) const {
    std::vector<std::uint32_t> path;
    for (; e != FiniteGroup::identity(); e = g.parent(e)) path.push_back(g.parent_generator(e));
    IntMatrix acc = IntMatrix::identity(rank_);
    for (auto it = path.rbegin(); it != path.rend(); ++it) acc = acc * gens_.at(*it);
    return acc;
  }

  friend bool operator==(const GIntModule& a, const GIntModule& b) { return a.rank_ == b.rank_ && a.gens_ == b.gens_; }

 private:
  const IntMatrix& inverse(std::size_t k) const {
    std::lock_guard lock(mu_);
    auto it = inv_.find(k);
    if (it == inv_.end()) it = inv_.emplace(k, unimodular_inverse(gens_.at(k))).first;
    return it->second;
  }

  std::size_t rank_ = 0;
  std::vector<IntMatrix> gens_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::size_t, IntMatrix> inv_;
};

inline IntMatrix permutation_matrix(const Perm& p) {
  IntMatrix m(p.degree(), p.degree());
  for (std::size_t i = 0; i < p.degree(); ++i) m(i, p[static_cast<Point>(i)]) = 1;
  return m;
}

/// Z[points] with the generators permuting the basis.
inline GIntModule perm_module(const std::vector<Perm>& gens, std::size_t degree) {
  std::vector<IntMatrix> mats;
  for (const auto& g : gens) {
    if (g.degree() != degree) throw ModuleError("perm_module: degree mismatch");
    mats.push_back(permutation_matrix(g));
  }
  return GIntModule(degree, std::move(mats));
}

inline GIntModule perm_module(const PermGroup& g) { return perm_module(g.generators(), g.degree()); }

inline GIntModule trivial_module(std::size_t generators, std::size_t rank) {
  return GIntModule(rank, std::vector<IntMatrix>(generators, IntMatrix::identity(rank)));
}

inline GIntModule direct_sum(const GIntModule& a, const GIntModule& b) {
  if (a.generator_count() != b.generator_count()) throw ModuleError("direct_sum: generator counts differ");
  std::vector<IntMatrix> mats;
  const std::size_t n = a.rank() + b.rank();
  for (std::size_t k = 0; k < a.generator_count(); ++k) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < a.rank(); ++i)
      for (std::size_t j = 0; j < a.rank(); ++j) m(i, j) = a.matrix(k)(i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
      for (std::size_t j = 0; j < b.rank(); ++j) m(a.rank() + i, a.rank() + j) = b.matrix(k)(i, j);
    mats.push_back(std::move(m));
  }
  return GIntModule(n, std::move(mats));
}

/// Hom(M, Z): each generator acts by the inverse transpose.
inline GIntModule dual(const GIntModule& m) {
  std::vector<IntMatrix> mats;
  for (const auto& a : m.matrices()) mats.push_back(unimodular_inverse(a).transpose());
  return GIntModule(m.rank(), std::move(mats));
}

/// Module over the subgroup h, one matrix per generator of h.
inline GIntModule restrict_module(const GIntModule& m, const FiniteGroup& g, const Subgroup& h) {
  std::vector<IntMatrix> mats;
  for (ElementId e : h.gens) mats.push_back(m.element_matrix(g, e));
  return GIntModule(m.rank(), std::move(mats));
}

inline ClassFunction character(const GIntModule& m, const FiniteGroup& g) {
  ClassFunction f;
  for (const auto& c : g.classes()) {
    IntMatrix a = m.element_matrix(g, c.rep);
    Integer t = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    f.values.push_back(t);
  }
  return f;
}

// ---- text format ----------------------------------------------------------

namespace detail {

inline std::string next_content_line(std::istream& in, std::size_t& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    return line;
  }
  throw ModuleError("unexpected end of input after line " + std::to_string(lineno));
}

inline std::size_t header_field(const std::string& line, const std::string& key, std::size_t lineno) {
  auto p = line.find(key + "=");
  if (p == std::string::npos) throw ModuleError("line " + std::to_string(lineno) + ": missing " + key + "=");
  try {
    return std::stoul(line.substr(p + key.size() + 1));
  } catch (const std::exception&) {
    throw ModuleError("line " + std::to_string(lineno) + ": bad value for " + key);
  }
}

inline IntMatrix read_square(std::istream& in, std::size_t n, std::size_t& lineno) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::istringstream row(next_content_line(in, lineno));
    for (std::size_t j = 0; j < n; ++j) {
      std::string tok;
      if (!(row >> tok)) throw ModuleError("line " + std::to_string(lineno) + ": too few entries");
      if (m(i, j).set_str(tok, 10) != 0) throw ModuleError("line " + std::to_string(lineno) + ": bad integer '" + tok + "'");
    }
    std::string extra;
    if (row >> extra) throw ModuleError("line " + std::to_string(lineno) + ": too many entries");
  }
  return m;
}

}  // namespace detail

/// `gmodule rank=<n> gens=<k>`, then k blocks `matrix <i>` + n rows.
inline GIntModule parse_module(std::istream& in) {
  std::size_t lineno = 0;
  std::string head = detail::next_content_line(in, lineno);
  if (head.rfind("gmodule", 0) != 0) throw ModuleError("line " + std::to_string(lineno) + ": expected 'gmodule' header");
  const std::size_t n = detail::header_field(head, "rank", lineno);
  const std::size_t k = detail::header_field(head, "gens", lineno);
  std::vector<IntMatrix> mats;
  for (std::size_t b = 0; b < k; ++b) {
    std::istringstream tag(detail::next_content_line(in, lineno));
    std::string word;
    std::size_t idx = 0;
    if (!(tag >> word >> idx) || word != "matrix" || idx != b)
      throw ModuleError("line " + std::to_string(lineno) + ": expected 'matrix " + std::to_string(b) + "'");
    mats.push_back(detail::read_square(in, n, lineno));
  }
  return GIntModule(n, std::move(mats));
}

inline void write_module(std::ostream& out, const GIntModule& m) {
  out << "gmodule rank=" << m.rank() << " gens=" << m.generator_count() << "\n";
  for (std::size_t b = 0; b < m.generator_count(); ++b) {
    out << "matrix " << b << "\n";
    const auto& a = m.matrix(b);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
      out << "\n";
    }
  }
}

inline GIntModule read_module_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModuleError("cannot open module file " + path);
  return parse_module(in);
}

/// `pairing rank=<n>` followed by n rows.
inline IntMatrix parse_pairing(std::istream& in) {
  std::size_t lineno = 0;
  std::string head = detail::next_content_line(in, lineno);
  if (head.rfind("pairing", 0) != 0) throw ModuleError("line " + std::to_string(lineno) + ": expected 'pairing' header");
  const std::size_t n = detail::header_field(head, "rank", lineno);
  return detail::read_square(in, n, lineno);
}

inline void write_pairing(std::ostream& out, const IntMatrix& p) {
  out << "pairing rank=" << p.rows() << "\n";
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) out << (j ? " " : "") << p(i, j);
    out << "\n";
  }
}

// ---- validation ------------------------------------------------------------

/// Unimodularity and the relators of g's presentation. Throws with the
/// offending generator or relator.
inline void validate_module(const GIntModule& m, const PermGroup& g) {
  if (m.generator_count() != g.generators().size())
    throw ModuleError("module has " + std::to_string(m.generator_count()) + " matrices, group has " +
                      std::to_string(g.generators().size()) + " generators");
  for (std::size_t k = 0; k < m.generator_count(); ++k) {
    Integer d = determinant(m.matrix(k));
    if (d != 1 && d != -1) throw ModuleError("matrix " + std::to_string(k) + " has determinant " + d.get_str());
  }
  Presentation pres = g.presentation();
  std::vector<IntMatrix> strong, strong_inv;
  for (const auto& w : pres.generator_words) strong.push_back(m.evaluate(w));
  for (const auto& w : pres.generator_words) strong_inv.push_back(m.evaluate(w.inverse()));
  const IntMatrix id = IntMatrix::identity(m.rank());
  for (std::size_t r = 0; r < pres.relators.size(); ++r) {
    IntMatrix acc = pres.relators[r].evaluate(strong, strong_inv, id, [](const IntMatrix& a, const IntMatrix& b) {
      return a * b;
    });
    if (acc != id) {
      std::ostringstream os;
      os << "relator " << r << " (" << pres.relators[r] << ") is not the identity";
      throw ModuleError(os.str());
    }
  }
}

/// Throws naming the first class where the character of m differs from expected.
inline void check_character(const GIntModule& m, const FiniteGroup& g, const ClassFunction& expected) {
  ClassFunction got = character(m, g);
  for (std::size_t c = 0; c < got.size(); ++c)
    if (got[c] != expected[c]) {
      std::ostringstream os;
      os << "character mismatch at class " << c << " (element order " << g.classes()[c].element_order << ", size "
         << g.classes()[c].size << "): got " << got[c] << ", expected " << expected[c];
      throw ModuleError(os.str());
    }
}

// ---- quotients ----------------------------------------------------------------

/// Z^n / ker(P) with the induced action, where ker(P) = { x : x P = 0 } is
/// saturated. The module must be compatible with P (A P A^T = P).
inline GIntModule quotient_by_pairing(const GIntModule& m, const IntMatrix& pairing) {
  const std::size_t n = m.rank();
  if (pairing.rows() != n || pairing.cols() != n) throw ModuleError("quotient_by_pairing: pairing size differs from rank");
  for (std::size_t k = 0; k < m.generator_count(); ++k)
    if (m.matrix(k) * pairing * m.matrix(k).transpose() != pairing)
      throw ModuleError("quotient_by_pairing: pairing not invariant under generator " + std::to_string(k));
  IntMatrix ker = kernel_saturated(pairing);
  const std::size_t r = ker.rows();
  if (r == 0) return m;
  // ker = u^-1 [I 0] v^-1, so the first r rows of v^-1 span ker
  SmithForm sf = snf(ker);
  IntMatrix basis = unimodular_inverse(sf.v);
  std::vector<IntMatrix> mats;
  IntMatrix binv = sf.v;
  for (std::size_t k = 0; k < m.generator_count(); ++k) {
    IntMatrix t = basis * m.matrix(k) * binv;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = r; j < n; ++j)
        if (t(i, j) != 0) throw ModuleError("quotient_by_pairing: kernel not invariant");
    IntMatrix q(n - r, n - r);
    for (std::size_t i = r; i < n; ++i)
      for (std::size_t j = r; j < n; ++j) q(i - r, j - r) = t(i, j);
    mats.push_back(std::move(q));
  }
  GIntModule out(n - r, std::move(mats));
  for (std::size_t k = 0; k < out.generator_count(); ++k) {
    Integer d = determinant(out.matrix(k));
    if (d != 1 && d != -1) throw ModuleError("quotient_by_pairing: induced action not unimodular");
  }
  return out;
}

}  // namespace obstruct
