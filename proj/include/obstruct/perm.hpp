#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace obstruct {

using Point = std::uint32_t;

/// Permutation of {0, ..., n-1}. Points act on the right: p^(g*h) = (p^g)^h.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t degree) : images_(degree) { std::iota(images_.begin(), images_.end(), Point{0}); }
  explicit Perm(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point p : images_) {
      if (p >= images_.size() || seen[p]) throw std::invalid_argument("Perm: images are not a bijection");
      seen[p] = true;
    }
  }

  /// Builds from disjoint cycles, e.g. from_cycles(3, {{0, 1, 2}}).
  static Perm from_cycles(std::size_t degree, std::initializer_list<std::initializer_list<Point>> cycles) {
    std::vector<Point> img(degree);
    std::iota(img.begin(), img.end(), Point{0});
    for (const auto& c : cycles) {
      std::vector<Point> cyc(c);
      for (std::size_t i = 0; i < cyc.size(); ++i) img[cyc[i]] = cyc[(i + 1) % cyc.size()];
    }
    return Perm(std::move(img));
  }

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator[](Point p) const { return images_[p]; }
  const std::vector<Point>& images() const noexcept { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  Perm inverse() const {
    std::vector<Point> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
    Perm r;
    r.images_ = std::move(inv);
    return r;
  }

  friend Perm operator*(const Perm& a, const Perm& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("Perm product: degree mismatch");
    Perm r;
    r.images_.resize(a.degree());
    for (std::size_t i = 0; i < a.degree(); ++i) r.images_[i] = b.images_[a.images_[i]];
    return r;
  }

  /// g^-1 * this * g
  Perm conjugate(const Perm& g) const { return g.inverse() * *this * g; }

  Perm pow(long e) const {
    Perm base = e < 0 ? inverse() : *this;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Perm r(degree());
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  /// Sorted cycle lengths including fixed points.
  std::vector<std::size_t> cycle_type() const {
    std::vector<bool> seen(degree(), false);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (Point p = static_cast<Point>(i); !seen[p]; p = images_[p]) {
        seen[p] = true;
        ++len;
      }
      out.push_back(len);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t order() const {
    std::size_t o = 1;
    for (std::size_t len : cycle_type()) o = std::lcm(o, len);
    return o;
  }

  std::size_t fixed_points() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < degree(); ++i) n += images_[i] == i;
    return n;
  }

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Perm& p) {
    std::vector<bool> seen(p.degree(), false);
    bool any = false;
    for (std::size_t i = 0; i < p.degree(); ++i) {
      if (seen[i] || p[static_cast<Point>(i)] == i) continue;
      os << '(';
      for (Point q = static_cast<Point>(i); !seen[q]; q = p[q]) {
        seen[q] = true;
        os << q << (p[q] == i ? "" : " ");
      }
      os << ')';
      any = true;
    }
    if (!any) os << "()";
    return os;
  }

 private:
  std::vector<Point> images_;
};

struct Letter {
  std::uint32_t gen;
  int exp;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Word in the generators of some group; letters multiply left to right.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) { reduce(); }
  static Word generator(std::uint32_t g, int exp = 1) { return Word({Letter{g, exp}}); }

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  Word inverse() const {
    std::vector<Letter> r(letters_.rbegin(), letters_.rend());
    for (auto& l : r) l.exp = -l.exp;
    Word w;
    w.letters_ = std::move(r);
    return w;
  }

  Word& operator*=(const Word& other) {
    for (const auto& l : other.letters_) push(l);
    return *this;
  }
  friend Word operator*(Word a, const Word& b) { return a *= b; }
  friend bool operator==(const Word&, const Word&) = default;

  /// Evaluates in any monoid-like type given images of the generators and
  /// their inverses.
  template <class T, class Mul>
  T evaluate(const std::vector<T>& gens, const std::vector<T>& inverses, T identity, Mul mul) const {
    T acc = std::move(identity);
    for (const auto& l : letters_) acc = mul(acc, l.exp > 0 ? gens[l.gen] : inverses[l.gen]);
    return acc;
  }

  Perm evaluate(const std::vector<Perm>& gens, std::size_t degree) const {
    Perm acc(degree);
    for (const auto& l : letters_) acc = acc * (l.exp > 0 ? gens[l.gen] : gens[l.gen].inverse());
    return acc;
  }

  friend std::ostream& operator<<(std::ostream& os, const Word& w) {
    if (w.empty()) return os << "1";
    for (std::size_t i = 0; i < w.letters_.size(); ++i)
      os << (i ? "*" : "") << 'g' << w.letters_[i].gen << (w.letters_[i].exp < 0 ? "^-1" : "");
    return os;
  }

 private:
  void push(const Letter& l) {
    if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().exp == -l.exp)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
  void reduce() {
    std::vector<Letter> in = std::move(letters_);
    letters_.clear();
    for (const auto& l : in) push(l);
  }

  std::vector<Letter> letters_;
};

}  // namespace obstruct
