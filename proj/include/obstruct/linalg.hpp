#pragma once

// Exact integer matrices and the lattice algorithms built on them:
// Hermite and Smith normal forms, saturated kernels, quotient invariants,
// lattice membership and minimal multipliers.
//
// Every lattice is a row lattice: a vector x acts on the left, x * A.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace obstruct {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw LinalgError("IntMatrix: ragged initializer");
      for (long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw LinalgError("IntMatrix::from_rows: row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  void append_row(const IntVector& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw LinalgError("IntMatrix::append_row: length mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  /// Keeps the first n rows.
  void truncate_rows(std::size_t n) {
    if (n < rows_) {
      rows_ = n;
      data_.resize(rows_ * cols_);
    }
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) {
      const Integer& s = (*this)(src, j);
      if (s != 0) (*this)(dst, j) += k * s;
    }
  }
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Integer& s = (*this)(i, src);
      if (s != 0) (*this)(i, dst) += k * s;
    }
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw LinalgError("IntMatrix product: dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Integer& bkj = b(k, j);
          if (bkj != 0) c(i, j) += aik * bkj;
        }
      }
    return c;
  }

  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("IntMatrix sum: dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("IntMatrix difference: dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend IntMatrix operator*(const Integer& k, IntMatrix a) {
    for (auto& v : a.data_) v *= k;
    return a;
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

inline IntVector vec_mat(const IntVector& x, const IntMatrix& a) {
  if (x.size() != a.rows()) throw LinalgError("vec_mat: dimension mismatch");
  IntVector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) y[j] += x[i] * a(i, j);
  }
  return y;
}

/// Horizontal concatenation [a | b].
inline IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw LinalgError("hconcat: row count mismatch");
  IntMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

/// Vertical concatenation.
inline IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw LinalgError("vconcat: column count mismatch");
  IntMatrix c(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
  return c;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix a) {
  if (a.rows() != a.cols()) throw LinalgError("determinant: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline int cmp_abs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

/// Floor division helper: q = floor(a / b) for b > 0 or b < 0.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Quotient rounded toward the nearest integer (ties toward floor).
inline Integer round_div(const Integer& a, const Integer& b) {
  Integer two_a = 2 * a + b;
  Integer two_b = 2 * b;
  return floor_div(two_a, two_b);
}

struct HermiteForm {
  IntMatrix h;  // row Hermite normal form of the input
  IntMatrix u;  // unimodular, u * input == h
  std::size_t rank = 0;
};

namespace detail {

// Row-style HNF on `a`, mirroring every row operation on `u` when non-null.
// Pivots are positive, entries above a pivot lie in [0, pivot).
inline std::size_t hnf_in_place(IntMatrix& a, IntMatrix* u) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (a(i, c) != 0 && (best == m || cmp_abs(a(i, c), a(best, c)) < 0)) best = i;
      if (best == m) break;
      a.swap_rows(r, best);
      if (u) u->swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (a(i, c) == 0) continue;
        Integer q = floor_div(a(i, c), a(r, c));
        a.add_row_multiple(i, r, -q);
        if (u) u->add_row_multiple(i, r, -q);
        if (a(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (r >= m || a(r, c) == 0) continue;
    if (a(r, c) < 0) {
      a.negate_row(r);
      if (u) u->negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (a(i, c) == 0) continue;
      Integer q = floor_div(a(i, c), a(r, c));
      a.add_row_multiple(i, r, -q);
      if (u) u->add_row_multiple(i, r, -q);
    }
    ++r;
  }
  return r;
}

}  // namespace detail

inline HermiteForm hnf(const IntMatrix& a) {
  HermiteForm out{a, IntMatrix::identity(a.rows()), 0};
  out.rank = detail::hnf_in_place(out.h, &out.u);
  return out;
}

/// HNF without the transform; returns only the nonzero rows.
inline IntMatrix hnf_basis(IntMatrix a) {
  std::size_t r = detail::hnf_in_place(a, nullptr);
  a.truncate_rows(r);
  return a;
}

struct SmithForm {
  IntMatrix s;  // diagonal, s(i,i) | s(i+1,i+1), nonnegative
  IntMatrix u;  // unimodular rows transform
  IntMatrix v;  // unimodular column transform, u * input * v == s
  std::size_t rank = 0;
};

namespace detail {

inline bool find_min_pivot(const IntMatrix& a, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      const Integer& v = a(i, j);
      if (v == 0) continue;
      if (!found || cmp_abs(v, a(pi, pj)) < 0) {
        pi = i;
        pj = j;
        found = true;
        if (v == 1 || v == -1) return true;
      }
    }
  return found;
}

// Diagonalises `a` in place by unimodular row/column operations. The
// diagonal satisfies the divisibility chain on exit.
inline std::size_t snf_in_place(IntMatrix& a, IntMatrix* u, IntMatrix* v) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    std::size_t pi = 0, pj = 0;
    if (!find_min_pivot(a, t, pi, pj)) break;
    for (;;) {
      a.swap_rows(t, pi);
      if (u) u->swap_rows(t, pi);
      a.swap_cols(t, pj);
      if (v) v->swap_cols(t, pj);
      bool again = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = floor_div(a(i, t), a(t, t));
        a.add_row_multiple(i, t, -q);
        if (u) u->add_row_multiple(i, t, -q);
        if (a(i, t) != 0) again = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = floor_div(a(t, j), a(t, t));
        a.add_col_multiple(j, t, -q);
        if (v) v->add_col_multiple(j, t, -q);
        if (a(t, j) != 0) again = true;
      }
      if (again) {
        // a smaller remainder now sits in row t or column t
        pi = t;
        pj = t;
        for (std::size_t i = t; i < m; ++i)
          if (a(i, t) != 0 && cmp_abs(a(i, t), a(pi, pj)) < 0) pi = i, pj = t;
        for (std::size_t j = t; j < n; ++j)
          if (a(t, j) != 0 && cmp_abs(a(t, j), a(pi, pj)) < 0) pi = t, pj = j;
        continue;
      }
      // row and column clear; enforce divisibility of the remaining block
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a(i, j) == 0) continue;
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            a.add_row_multiple(t, i, 1);
            if (u) u->add_row_multiple(t, i, 1);
            divides = false;
            break;
          }
        }
      if (divides) break;
      pi = t;
      pj = t;
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      if (u) u->negate_row(t);
    }
  }
  return t;
}

}  // namespace detail

inline SmithForm snf(const IntMatrix& a) {
  SmithForm out{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols()), 0};
  out.rank = detail::snf_in_place(out.s, &out.u, &out.v);
  return out;
}

/// Rows above which the invariant-factor computation switches to the
/// modular (determinant-reduced) strategy when the lattice has full rank.
inline constexpr std::size_t kModularRowThreshold = 200;

/// Rank modulo a word-size prime; a lower bound for the rational rank.
inline std::size_t rank_mod_p(const IntMatrix& a, std::uint64_t p = 2147483629ULL) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::uint64_t> w(m * n);
  Integer tmp;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpz_fdiv_r_ui(tmp.get_mpz_t(), a(i, j).get_mpz_t(), p);
      w[i * n + j] = tmp.get_ui();
    }
  auto inv = [p](std::uint64_t x) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = m;
    for (std::size_t i = r; i < m; ++i)
      if (w[i * n + c]) {
        piv = i;
        break;
      }
    if (piv == m) continue;
    if (piv != r)
      for (std::size_t j = 0; j < n; ++j) std::swap(w[piv * n + j], w[r * n + j]);
    std::uint64_t iv = inv(w[r * n + c]);
    for (std::size_t i = r + 1; i < m; ++i) {
      std::uint64_t f = w[i * n + c] * iv % p;
      if (!f) continue;
      for (std::size_t j = c; j < n; ++j) w[i * n + j] = (w[i * n + j] + (p - f) * w[r * n + j]) % p;
    }
    ++r;
  }
  return r;
}

/// Picks rank-many row indices independent modulo p, in index order.
inline std::vector<std::size_t> independent_rows_mod_p(const IntMatrix& a, std::uint64_t p = 2147483629ULL) {
  std::vector<std::size_t> chosen;
  IntMatrix acc(0, a.cols());
  for (std::size_t i = 0; i < a.rows() && chosen.size() < a.cols(); ++i) {
    IntMatrix trial = acc;
    trial.append_row(a.row(i));
    if (rank_mod_p(trial, p) > chosen.size()) {
      acc = std::move(trial);
      chosen.push_back(i);
    }
  }
  return chosen;
}

namespace detail {

// Row lattice of `a` (full column rank n) intersected with the knowledge that
// d * Z^n lies in it: returns an n x n upper triangular basis with entries
// reduced modulo d.
inline IntMatrix hnf_mod_determinant(const IntMatrix& a, const Integer& d) {
  const std::size_t n = a.cols();
  IntMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) w(i, i) = d;
  IntVector row(n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) mpz_fdiv_r(row[j].get_mpz_t(), a(r, j).get_mpz_t(), d.get_mpz_t());
    for (std::size_t c = 0; c < n; ++c) {
      if (row[c] == 0) continue;
      // gcd step between w row c and the incoming row on column c
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), w(c, c).get_mpz_t(), row[c].get_mpz_t());
      Integer wc = w(c, c) / g, rc = row[c] / g;
      for (std::size_t j = c; j < n; ++j) {
        Integer nw = s * w(c, j) + t * row[j];
        Integer nr = wc * row[j] - rc * w(c, j);
        mpz_fdiv_r(w(c, j).get_mpz_t(), nw.get_mpz_t(), d.get_mpz_t());
        mpz_fdiv_r(row[j].get_mpz_t(), nr.get_mpz_t(), d.get_mpz_t());
      }
      if (w(c, c) == 0) w(c, c) = d;
    }
  }
  return w;
}

}  // namespace detail

/// Finite abelian group data in canonical form: divisors d1 | d2 | ... with
/// every di >= 2, plus a free rank.
struct AbelianInvariants {
  std::vector<Integer> divisors;
  std::size_t free_rank = 0;

  bool trivial() const { return divisors.empty() && free_rank == 0; }
  Integer torsion_order() const {
    Integer o = 1;
    for (const auto& d : divisors) o *= d;
    return o;
  }

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;

  /// "0", "Z/3", "Z/2 x Z/6", "Z^2 x Z/2".
  std::string to_string() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank) {
      os << "Z";
      if (free_rank > 1) os << '^' << free_rank;
      first = false;
    }
    for (const auto& d : divisors) {
      os << (first ? "" : " x ") << "Z/" << d;
      first = false;
    }
    return os.str();
  }

  static AbelianInvariants parse(const std::string& text);
};

/// Canonicalises a diagonal: drops units, sorts into the divisibility chain.
inline AbelianInvariants invariants_from_diagonal(const std::vector<Integer>& diag, std::size_t free_rank) {
  // Rebuild the divisibility chain from the prime-power decomposition via
  // repeated gcd/lcm passes.
  std::vector<Integer> d;
  for (const auto& x : diag) {
    Integer a = abs(x);
    if (a != 0 && a != 1) d.push_back(a);
  }
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      Integer g = gcd(d[i], d[j]);
      Integer l = lcm(d[i], d[j]);
      d[i] = g;
      d[j] = l;
    }
  AbelianInvariants out;
  out.free_rank = free_rank;
  for (const auto& x : d)
    if (x != 1) out.divisors.push_back(x);
  return out;
}

inline AbelianInvariants AbelianInvariants::parse(const std::string& text) {
  AbelianInvariants out;
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty() || s == "0") return out;
  std::vector<Integer> diag;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find('x', pos);
    std::string part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    pos = next == std::string::npos ? s.size() : next + 1;
    if (part.rfind("Z/", 0) == 0) {
      std::string body = part.substr(2);
      std::size_t caret = body.find('^');
      std::size_t reps = 1;
      if (caret != std::string::npos) {
        reps = std::stoul(body.substr(caret + 1));
        body = body.substr(0, caret);
      }
      for (std::size_t k = 0; k < reps; ++k) diag.emplace_back(body);
    } else if (part == "Z") {
      ++out.free_rank;
    } else if (part.rfind("Z^", 0) == 0) {
      out.free_rank += std::stoul(part.substr(2));
    } else {
      throw LinalgError("AbelianInvariants::parse: cannot read '" + text + "'");
    }
  }
  auto canon = invariants_from_diagonal(diag, out.free_rank);
  return canon;
}

/// Invariant factors of the row lattice of `a` (diagonal of its SNF, zeros
/// omitted). Uses the determinant-reduced route for tall full-rank inputs.
inline std::vector<Integer> elementary_divisors(const IntMatrix& a, std::size_t modular_threshold = kModularRowThreshold) {
  if (a.rows() > modular_threshold && a.cols() > 0) {
    auto idx = independent_rows_mod_p(a);
    if (idx.size() == a.cols()) {
      IntMatrix sq(a.cols(), a.cols());
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) sq(i, j) = a(idx[i], j);
      Integer d = abs(determinant(sq));
      if (d != 0) {
        IntMatrix w = vconcat(detail::hnf_mod_determinant(a, d), d * IntMatrix::identity(a.cols()));
        std::size_t r = detail::snf_in_place(w, nullptr, nullptr);
        std::vector<Integer> diag;
        for (std::size_t i = 0; i < r; ++i) diag.push_back(w(i, i));
        return diag;
      }
    }
  }
  IntMatrix w = a;
  std::size_t r = detail::snf_in_place(w, nullptr, nullptr);
  std::vector<Integer> diag;
  for (std::size_t i = 0; i < r; ++i) diag.push_back(w(i, i));
  return diag;
}

/// Saturated basis (in Hermite form) of { x : x * a == 0 }.
inline IntMatrix kernel_saturated(const IntMatrix& a) {
  IntMatrix h = a;
  IntMatrix u = IntMatrix::identity(a.rows());
  std::size_t r = detail::hnf_in_place(h, &u);
  IntMatrix k(0, a.rows());
  for (std::size_t i = r; i < a.rows(); ++i) k.append_row(u.row(i));
  if (k.rows() == 0) return IntMatrix(0, a.rows());
  return hnf_basis(std::move(k));
}

/// Z^n modulo the row lattice spanned by `sub_generators`.
inline AbelianInvariants quotient_invariants(std::size_t ambient_rank, const IntMatrix& sub_generators,
                                             std::size_t modular_threshold = kModularRowThreshold) {
  if (sub_generators.rows() == 0) return AbelianInvariants{{}, ambient_rank};
  if (sub_generators.cols() != ambient_rank)
    throw LinalgError("quotient_invariants: generator width differs from ambient rank");
  auto diag = elementary_divisors(sub_generators, modular_threshold);
  return invariants_from_diagonal(diag, ambient_rank - diag.size());
}

/// x with x * a == b, if one exists.
inline std::optional<IntVector> solve_in_lattice(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.cols()) throw LinalgError("solve_in_lattice: dimension mismatch");
  HermiteForm hf = hnf(a);
  IntVector residual = b;
  IntVector y(a.rows());
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < hf.rank; ++c) {
    if (hf.h(row, c) == 0) {
      if (residual[c] != 0) return std::nullopt;
      continue;
    }
    if (!mpz_divisible_p(residual[c].get_mpz_t(), hf.h(row, c).get_mpz_t())) return std::nullopt;
    y[row] = residual[c] / hf.h(row, c);
    for (std::size_t j = c; j < a.cols(); ++j) residual[j] -= y[row] * hf.h(row, j);
    ++row;
  }
  for (const auto& v : residual)
    if (v != 0) return std::nullopt;
  return vec_mat(y, hf.u);
}

/// Smallest n >= 1 with n * b in the row lattice of a. Throws when no
/// n <= bound works, which signals inconsistent upstream data.
inline Integer minimal_multiplier(const IntMatrix& a, const IntVector& b, const Integer& bound) {
  if (bound < 1) throw LinalgError("minimal_multiplier: bound must be positive");
  if (b.size() != a.cols()) throw LinalgError("minimal_multiplier: dimension mismatch");
  SmithForm sf = snf(a);
  IntVector bv = vec_mat(b, sf.v);  // b in the column basis where the lattice is diagonal
  Integer n = 1;
  for (std::size_t i = 0; i < bv.size(); ++i) {
    if (bv[i] == 0) continue;
    if (i >= sf.rank)
      throw LinalgError("minimal_multiplier: vector has no multiple in the lattice (bound " + bound.get_str() + ")");
    const Integer& d = sf.s(i, i);
    Integer need = d / gcd(d, bv[i]);
    n = lcm(n, need);
  }
  if (n > bound)
    throw LinalgError("minimal_multiplier: minimal multiple " + n.get_str() + " exceeds bound " + bound.get_str());
  return n;
}

}  // namespace obstruct
