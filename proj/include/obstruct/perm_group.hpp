#pragma once

// Permutation groups with a verified stabilizer chain (deterministic
// Schreier-Sims). Every strong generator and transversal element carries a
// word in the original generators, so membership tests recover words.

#include "obstruct/perm.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace obstruct {

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generators are indices into the owning group's strong generators.
struct Presentation {
  std::size_t generator_count = 0;
  std::vector<Word> generator_words;  // each strong generator as a word in the original generators
  std::vector<Word> relators;
};

class PermGroup {
 public:
  PermGroup() = default;

  PermGroup(std::size_t degree, std::vector<Perm> generators) : degree_(degree), gens_(std::move(generators)) {
    for (const auto& g : gens_)
      if (g.degree() != degree_) throw GroupError("PermGroup: generator degree mismatch");
    build();
  }

  explicit PermGroup(std::vector<Perm> generators)
      : PermGroup(generators.empty() ? 0 : generators.front().degree(), std::move(generators)) {}

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Perm>& generators() const noexcept { return gens_; }
  const std::vector<Point>& base() const noexcept { return base_; }
  std::size_t strong_generator_count() const noexcept { return strong_.size(); }
  const Perm& strong_generator(std::size_t i) const { return strong_[i].perm; }
  const Word& strong_word(std::size_t i) const { return strong_[i].word; }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& lv : levels_) {
      std::uint64_t s = lv.orbit.size();
      if (o > std::numeric_limits<std::uint64_t>::max() / s) throw GroupError("PermGroup::order overflows 64 bits");
      o *= s;
    }
    return o;
  }

  /// Basic orbit sizes along the chain.
  std::vector<std::size_t> orbit_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& lv : levels_) out.push_back(lv.orbit.size());
    return out;
  }

  bool contains(const Perm& g) const {
    if (g.degree() != degree_) return false;
    return strip(g, 0).residue.is_identity();
  }

  /// Word in the original generators evaluating to g, or nullopt.
  std::optional<Word> sift(const Perm& g) const {
    if (g.degree() != degree_) return std::nullopt;
    Perm h = g;
    std::vector<const Word*> parts;
    for (const auto& lv : levels_) {
      Point b = h[lv.base_point];
      if (lv.tree_letter[b] == kNotInOrbit) return std::nullopt;
      const auto& t = lv.transversal[b];
      parts.push_back(&t.word);
      h = h * t.perm.inverse();
    }
    if (!h.is_identity()) return std::nullopt;
    Word w;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) w *= **it;
    return w;
  }

  template <class Rng>
  Perm random_element(Rng& rng) const {
    Perm g(degree_);
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
      std::uniform_int_distribution<std::size_t> pick(0, it->orbit.size() - 1);
      g = g * it->transversal[it->orbit[pick(rng)]].perm;
    }
    return g;
  }

  /// Orbit of a point under the original generators, in BFS order.
  std::vector<Point> orbit(Point p) const {
    std::vector<bool> seen(degree_, false);
    std::vector<Point> out{p};
    seen[p] = true;
    for (std::size_t k = 0; k < out.size(); ++k)
      for (const auto& g : gens_) {
        Point q = g[out[k]];
        if (!seen[q]) {
          seen[q] = true;
          out.push_back(q);
        }
      }
    return out;
  }

  bool is_transitive() const { return degree_ == 0 || orbit(0).size() == degree_; }

  /// Stabilizer-chain presentation on the strong generators.
  Presentation presentation() const {
    Presentation pres;
    pres.generator_count = strong_.size();
    for (const auto& s : strong_) pres.generator_words.push_back(s.word);
    // transversal words in strong-generator letters, per level
    std::vector<std::vector<Word>> tw(levels_.size());
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const auto& lv = levels_[i];
      tw[i].assign(degree_, Word{});
      for (Point b : lv.orbit) {
        if (b == lv.base_point) continue;
        std::uint32_t s = static_cast<std::uint32_t>(lv.tree_letter[b]);
        tw[i][b] = tw[i][lv.tree_parent[b]] * Word::generator(s);
      }
    }
    auto sift_letters = [&](Perm h, std::size_t from) {
      std::vector<const Word*> parts;
      for (std::size_t k = from; k < levels_.size(); ++k) {
        Point b = h[levels_[k].base_point];
        if (levels_[k].tree_letter[b] == kNotInOrbit) throw GroupError("presentation: chain not verified");
        parts.push_back(&tw[k][b]);
        h = h * levels_[k].transversal[b].perm.inverse();
      }
      if (!h.is_identity()) throw GroupError("presentation: chain not verified");
      Word w;
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) w *= **it;
      return w;
    };
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const auto& lv = levels_[i];
      for (Point b : lv.orbit)
        for (std::size_t s : lv.gens) {
          Point c = strong_[s].perm[b];
          if (lv.tree_parent[c] == b && lv.tree_letter[c] == static_cast<long>(s) && c != lv.base_point) continue;
          Perm h = lv.transversal[b].perm * strong_[s].perm * lv.transversal[c].perm.inverse();
          Word lower = sift_letters(h, i + 1);
          Word rel = tw[i][b] * Word::generator(static_cast<std::uint32_t>(s)) * tw[i][c].inverse() * lower.inverse();
          if (!rel.empty()) pres.relators.push_back(std::move(rel));
        }
    }
    return pres;
  }

 private:
  static constexpr long kNotInOrbit = -1;
  static constexpr long kRoot = -2;

  struct Strong {
    Perm perm;
    Word word;
  };
  struct Coset {
    Perm perm;
    Word word;
  };
  struct Level {
    Point base_point = 0;
    std::vector<std::size_t> gens;  // strong generator indices fixing earlier base points
    std::vector<Point> orbit;
    std::vector<long> tree_letter;  // strong generator index used to reach a point
    std::vector<Point> tree_parent;
    std::vector<Coset> transversal;  // indexed by point; valid inside the orbit
  };
  struct Stripped {
    std::size_t level;
    Perm residue;
    Word word;
  };

  Stripped strip(Perm h, std::size_t from, Word w = {}) const {
    for (std::size_t k = from; k < levels_.size(); ++k) {
      Point b = h[levels_[k].base_point];
      if (levels_[k].tree_letter[b] == kNotInOrbit) return {k, std::move(h), std::move(w)};
      const auto& t = levels_[k].transversal[b];
      h = h * t.perm.inverse();
      w *= t.word.inverse();
    }
    return {levels_.size(), std::move(h), std::move(w)};
  }

  static Point first_moved_point(const Perm& p) {
    for (std::size_t i = 0; i < p.degree(); ++i)
      if (p[static_cast<Point>(i)] != i) return static_cast<Point>(i);
    throw GroupError("first_moved_point: identity");
  }

  void rebuild_level(std::size_t i) {
    Level& lv = levels_[i];
    lv.base_point = base_[i];
    lv.gens.clear();
    for (std::size_t s = 0; s < strong_.size(); ++s) {
      bool fixes = true;
      for (std::size_t k = 0; k < i && fixes; ++k) fixes = strong_[s].perm[base_[k]] == base_[k];
      if (fixes) lv.gens.push_back(s);
    }
    lv.tree_letter.assign(degree_, kNotInOrbit);
    lv.tree_parent.assign(degree_, 0);
    lv.transversal.assign(degree_, Coset{});
    lv.orbit.assign(1, lv.base_point);
    lv.tree_letter[lv.base_point] = kRoot;
    lv.tree_parent[lv.base_point] = lv.base_point;
    lv.transversal[lv.base_point] = Coset{Perm(degree_), Word{}};
    for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
      Point b = lv.orbit[k];
      for (std::size_t s : lv.gens) {
        Point c = strong_[s].perm[b];
        if (lv.tree_letter[c] != kNotInOrbit) continue;
        lv.tree_letter[c] = static_cast<long>(s);
        lv.tree_parent[c] = b;
        lv.transversal[c] = Coset{lv.transversal[b].perm * strong_[s].perm, lv.transversal[b].word * strong_[s].word};
        lv.orbit.push_back(c);
      }
    }
  }

  void build() {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!gens_[i].is_identity()) strong_.push_back(Strong{gens_[i], Word::generator(static_cast<std::uint32_t>(i))});
    if (strong_.empty()) return;
    Point first = static_cast<Point>(degree_);
    for (const auto& s : strong_) first = std::min(first, first_moved_point(s.perm));
    base_.push_back(first);
    levels_.resize(1);
    rebuild_level(0);

    long i = static_cast<long>(base_.size()) - 1;
    while (i >= 0) {
      const std::size_t lvl = static_cast<std::size_t>(i);
      bool extended = false;
      const Level& lv = levels_[lvl];
      for (std::size_t oi = 0; oi < lv.orbit.size() && !extended; ++oi) {
        Point b = lv.orbit[oi];
        for (std::size_t s : lv.gens) {
          Point c = strong_[s].perm[b];
          Perm h = lv.transversal[b].perm * strong_[s].perm * lv.transversal[c].perm.inverse();
          if (h.is_identity()) continue;
          Word hw = lv.transversal[b].word * strong_[s].word * lv.transversal[c].word.inverse();
          Stripped st = strip(std::move(h), lvl + 1, std::move(hw));
          if (st.residue.is_identity()) continue;
          if (st.level == base_.size()) {
            base_.push_back(first_moved_point(st.residue));
            levels_.emplace_back();
          }
          // a residue equal to an existing strong generator only happens when
          // the base was just extended
          bool known = false;
          for (const auto& sg : strong_) known = known || sg.perm == st.residue;
          if (!known) strong_.push_back(Strong{std::move(st.residue), std::move(st.word)});
          for (std::size_t k = lvl + 1; k <= st.level; ++k) rebuild_level(k);
          i = static_cast<long>(st.level);
          extended = true;
          break;
        }
      }
      if (!extended) {
        --i;
        // strong generators added below may enlarge Schreier generator sets
        // of this level; orbits stay the same.
        if (i >= 0) rebuild_level(static_cast<std::size_t>(i));
      }
    }
  }

  std::size_t degree_ = 0;
  std::vector<Perm> gens_;
  std::vector<Point> base_;
  std::vector<Strong> strong_;
  std::vector<Level> levels_;
};

}  // namespace obstruct
