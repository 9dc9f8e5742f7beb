#pragma once

// Fully enumerated permutation groups. Every element gets a dense index,
// subgroups are bitsets over those indices, and conjugacy questions are
// answered by searching only the cosets of centralizers that can map a
// chosen generator into the target.

#include "obstruct/perm_group.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace obstruct {

using ElementId = std::uint32_t;

/// Bitset over the element indices of one FiniteGroup.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t universe() const noexcept { return n_; }
  bool test(ElementId i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(ElementId i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool subset_of(const ElementSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  ElementSet& operator&=(const ElementSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = std::countr_zero(bits);
        f(static_cast<ElementId>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }
  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
  friend bool operator==(const ElementSet&, const ElementSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

struct ConjugacyClass {
  ElementId rep = 0;
  std::size_t size = 0;
  std::size_t element_order = 1;
  std::vector<ElementId> centralizer;  // centralizer of rep, sorted
};

class FiniteGroup {
 public:
  static constexpr std::size_t kDefaultMaxOrder = 1'000'000;

  explicit FiniteGroup(const PermGroup& g, std::size_t max_order = kDefaultMaxOrder) : degree_(g.degree()) {
    if (g.order() > max_order) throw GroupError("FiniteGroup: order exceeds enumeration cap");
    gens_ = g.generators();
    base_ = g.base();
    bits_ = 1;
    while ((std::size_t{1} << bits_) < std::max<std::size_t>(degree_, 2)) ++bits_;
    if (base_.size() * bits_ > 64) throw GroupError("FiniteGroup: base too long for packed keys");
    enumerate(g.order());
    compute_classes();
  }

  std::size_t order() const noexcept { return parent_.size(); }
  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Perm>& generators() const noexcept { return gens_; }
  ElementId generator_element(std::size_t k) const { return gen_ids_[k]; }
  static constexpr ElementId identity() { return 0; }

  std::span<const Point> images(ElementId e) const {
    return {perms_.data() + static_cast<std::size_t>(e) * degree_, degree_};
  }
  Perm perm(ElementId e) const {
    auto im = images(e);
    return Perm(std::vector<Point>(im.begin(), im.end()));
  }

  std::optional<ElementId> index_of(std::span<const Point> images) const {
    auto it = index_.find(key(images));
    if (it == index_.end()) return std::nullopt;
    auto cand = this->images(it->second);
    if (!std::equal(cand.begin(), cand.end(), images.begin())) return std::nullopt;
    return it->second;
  }
  std::optional<ElementId> index_of(const Perm& p) const {
    if (p.degree() != degree_) return std::nullopt;
    return index_of(std::span<const Point>(p.images()));
  }

  ElementId mul(ElementId a, ElementId b) const {
    auto ia = images(a), ib = images(b);
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < base_.size(); ++i) k |= std::uint64_t{ib[ia[base_[i]]]} << (i * bits_);
    return index_.at(k);
  }
  ElementId inv(ElementId a) const { return inverse_[a]; }
  /// g^-1 a g
  ElementId conj(ElementId a, ElementId g) const { return mul(mul(inverse_[g], a), g); }
  ElementId pow(ElementId a, std::size_t e) const {
    ElementId r = identity();
    for (std::size_t i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
  std::size_t element_order(ElementId a) const { return classes_[class_of_[a]].element_order; }

  /// Shortest word in the original generators (Cayley-graph BFS tree).
  Word word(ElementId e) const {
    std::vector<Letter> letters;
    while (e != identity()) {
      letters.push_back(Letter{parent_gen_[e], 1});
      e = parent_[e];
    }
    std::reverse(letters.begin(), letters.end());
    return Word(std::move(letters));
  }
  std::size_t word_length(ElementId e) const { return depth_[e]; }
  ElementId parent(ElementId e) const { return parent_[e]; }
  std::uint32_t parent_generator(ElementId e) const { return parent_gen_[e]; }

  const std::vector<ConjugacyClass>& classes() const noexcept { return classes_; }
  std::size_t class_of(ElementId e) const { return class_of_[e]; }
  /// t with rep^t == e where rep is the representative of e's class.
  ElementId class_conjugator(ElementId e) const { return class_conj_[e]; }

  ElementSet empty_set() const { return ElementSet(order()); }

 private:
  std::uint64_t key(std::span<const Point> im) const {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < base_.size(); ++i) k |= std::uint64_t{im[base_[i]]} << (i * bits_);
    return k;
  }

  void enumerate(std::uint64_t expected) {
    perms_.reserve(expected * degree_);
    for (std::size_t i = 0; i < degree_; ++i) perms_.push_back(static_cast<Point>(i));
    parent_.push_back(0);
    parent_gen_.push_back(0);
    depth_.push_back(0);
    index_.emplace(key(images(0)), 0);
    std::vector<Point> buf(degree_);
    for (std::size_t e = 0; e < parent_.size(); ++e)
      for (std::uint32_t s = 0; s < gens_.size(); ++s) {
        auto im = images(static_cast<ElementId>(e));
        for (std::size_t i = 0; i < degree_; ++i) buf[i] = gens_[s][im[i]];
        auto [it, fresh] = index_.emplace(key(buf), static_cast<ElementId>(parent_.size()));
        if (!fresh) continue;
        perms_.insert(perms_.end(), buf.begin(), buf.end());
        parent_.push_back(static_cast<ElementId>(e));
        parent_gen_.push_back(s);
        depth_.push_back(depth_[e] + 1);
      }
    if (parent_.size() != expected) throw GroupError("FiniteGroup: enumeration disagrees with chain order");
    for (const auto& g : gens_) gen_ids_.push_back(*index_of(g));
    inverse_.resize(order());
    std::vector<Point> inv(degree_);
    for (ElementId e = 0; e < order(); ++e) {
      auto im = images(e);
      for (std::size_t i = 0; i < degree_; ++i) inv[im[i]] = static_cast<Point>(i);
      inverse_[e] = *index_of(std::span<const Point>(inv));
    }
  }

  void compute_classes() {
    const std::size_t n = order();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    class_of_.assign(n, kUnset);
    class_conj_.assign(n, 0);
    std::vector<ConjugacyClass> raw;
    for (ElementId e = 0; e < n; ++e) {
      if (class_of_[e] != kUnset) continue;
      std::size_t id = raw.size();
      std::vector<ElementId> members{e};
      class_of_[e] = id;
      class_conj_[e] = identity();
      for (std::size_t k = 0; k < members.size(); ++k)
        for (ElementId s : gen_ids_) {
          ElementId m = members[k];
          ElementId c = conj(m, s);
          if (class_of_[c] != kUnset) continue;
          class_of_[c] = id;
          class_conj_[c] = mul(class_conj_[m], s);
          members.push_back(c);
        }
      ConjugacyClass cc;
      cc.rep = e;
      cc.size = members.size();
      ElementId x = e;
      cc.element_order = 1;
      while (x != identity()) {
        x = mul(x, e);
        ++cc.element_order;
      }
      raw.push_back(std::move(cc));
    }
    // canonical order: element order, then class size, then representative index
    std::vector<std::size_t> perm(raw.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(raw[a].element_order, raw[a].size, raw[a].rep) <
             std::tie(raw[b].element_order, raw[b].size, raw[b].rep);
    });
    std::vector<std::size_t> where(raw.size());
    for (std::size_t i = 0; i < perm.size(); ++i) where[perm[i]] = i;
    for (auto& c : class_of_) c = where[c];
    classes_.clear();
    for (std::size_t i : perm) classes_.push_back(std::move(raw[i]));
    for (auto& cc : classes_)
      for (ElementId g = 0; g < n; ++g)
        if (conj(cc.rep, g) == cc.rep) cc.centralizer.push_back(g);
  }

  std::size_t degree_;
  std::vector<Perm> gens_;
  std::vector<Point> base_;
  std::size_t bits_ = 1;
  std::vector<Point> perms_;
  std::unordered_map<std::uint64_t, ElementId> index_;
  std::vector<ElementId> parent_;
  std::vector<std::uint32_t> parent_gen_;
  std::vector<std::uint32_t> depth_;
  std::vector<ElementId> gen_ids_;
  std::vector<ElementId> inverse_;
  std::vector<ConjugacyClass> classes_;
  std::vector<std::size_t> class_of_;
  std::vector<ElementId> class_conj_;
};

/// A subgroup of an enumerated group: generators plus full element set.
struct Subgroup {
  std::vector<ElementId> gens;
  std::vector<ElementId> elements;  // sorted
  ElementSet members;

  std::size_t order() const noexcept { return elements.size(); }
  bool contains(ElementId e) const { return members.test(e); }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members == b.members; }
};

inline Subgroup subgroup_from_set(const FiniteGroup& g, ElementSet members, std::vector<ElementId> gens) {
  Subgroup h;
  h.gens = std::move(gens);
  h.members = std::move(members);
  h.members.for_each([&](ElementId e) { h.elements.push_back(e); });
  (void)g;
  return h;
}

/// Closure that gives up once more than `cap` elements are found.
inline std::optional<Subgroup> closure_capped(const FiniteGroup& g, std::vector<ElementId> gens, std::size_t cap) {
  std::vector<ElementId> clean;
  for (ElementId x : gens)
    if (x != FiniteGroup::identity() && std::find(clean.begin(), clean.end(), x) == clean.end()) clean.push_back(x);
  ElementSet seen = g.empty_set();
  std::vector<ElementId> list{FiniteGroup::identity()};
  seen.set(FiniteGroup::identity());
  for (std::size_t k = 0; k < list.size(); ++k)
    for (ElementId s : clean) {
      ElementId y = g.mul(list[k], s);
      if (!seen.test(y)) {
        seen.set(y);
        list.push_back(y);
        if (list.size() > cap) return std::nullopt;
      }
    }
  return subgroup_from_set(g, std::move(seen), std::move(clean));
}

inline Subgroup closure(const FiniteGroup& g, std::vector<ElementId> gens) {
  return *closure_capped(g, std::move(gens), g.order());
}

inline Subgroup whole_group(const FiniteGroup& g) {
  std::vector<ElementId> gens;
  for (std::size_t k = 0; k < g.generators().size(); ++k) gens.push_back(g.generator_element(k));
  return closure(g, gens);
}

inline Subgroup trivial_subgroup(const FiniteGroup& g) { return closure(g, {}); }

/// Image of h under conjugation by x (h^x = x^-1 h x).
inline Subgroup conjugate(const FiniteGroup& g, const Subgroup& h, ElementId x) {
  ElementSet s = g.empty_set();
  for (ElementId e : h.elements) s.set(g.conj(e, x));
  std::vector<ElementId> gens;
  for (ElementId e : h.gens) gens.push_back(g.conj(e, x));
  return subgroup_from_set(g, std::move(s), std::move(gens));
}

/// Number of elements of h in each conjugacy class of g.
inline std::vector<std::size_t> class_distribution(const FiniteGroup& g, const Subgroup& h) {
  std::vector<std::size_t> d(g.classes().size(), 0);
  for (ElementId e : h.elements) ++d[g.class_of(e)];
  return d;
}

namespace detail {

// Calls visit(x) for every x with k^x in target, where k is a generator of
// `source` picked to minimise the candidate count. Stops when visit returns true.
inline void for_each_candidate_conjugator(const FiniteGroup& g, const Subgroup& source, const Subgroup& target,
                                          const std::function<bool(ElementId)>& visit) {
  if (source.gens.empty()) {
    for (ElementId x = 0; x < g.order(); ++x)
      if (visit(x)) return;
    return;
  }
  ElementId best = source.gens.front();
  std::size_t best_cost = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist = class_distribution(g, target);
  for (ElementId k : source.gens) {
    std::size_t c = g.class_of(k);
    std::size_t cost = dist[c] * g.classes()[c].centralizer.size();
    if (cost < best_cost) {
      best_cost = cost;
      best = k;
    }
  }
  const std::size_t cls = g.class_of(best);
  const ElementId tk_inv = g.inv(g.class_conjugator(best));
  for (ElementId r : target.elements) {
    if (g.class_of(r) != cls) continue;
    const ElementId tr = g.class_conjugator(r);
    for (ElementId z : g.classes()[cls].centralizer)
      if (visit(g.mul(g.mul(tk_inv, z), tr))) return;
  }
}

}  // namespace detail

/// x with a^x == b, if a and b are conjugate in g.
inline std::optional<ElementId> conjugating_element(const FiniteGroup& g, const Subgroup& a, const Subgroup& b) {
  if (a.order() != b.order()) return std::nullopt;
  if (class_distribution(g, a) != class_distribution(g, b)) return std::nullopt;
  std::optional<ElementId> found;
  detail::for_each_candidate_conjugator(g, a, b, [&](ElementId x) {
    for (ElementId k : a.gens)
      if (!b.contains(g.conj(k, x))) return false;
    found = x;
    return true;
  });
  return found;
}

/// x in `within` with a^x == b; `within` must contain both a and b.
inline std::optional<ElementId> conjugating_element_within(const FiniteGroup& g, const Subgroup& within,
                                                           const Subgroup& a, const Subgroup& b) {
  if (a.order() != b.order()) return std::nullopt;
  std::optional<ElementId> found;
  detail::for_each_candidate_conjugator(g, a, b, [&](ElementId x) {
    if (!within.contains(x)) return false;
    for (ElementId k : a.gens)
      if (!b.contains(g.conj(k, x))) return false;
    found = x;
    return true;
  });
  return found;
}

inline Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
  std::vector<ElementId> members;
  detail::for_each_candidate_conjugator(g, h, h, [&](ElementId x) {
    for (ElementId k : h.gens)
      if (!h.contains(g.conj(k, x))) return false;
    members.push_back(x);
    return false;
  });
  ElementSet s = g.empty_set();
  for (ElementId x : members) s.set(x);
  // a short generating set: greedily add elements outside the current span
  Subgroup span = closure(g, {});
  std::vector<ElementId> gens;
  std::sort(members.begin(), members.end());
  for (ElementId x : members) {
    if (span.contains(x)) continue;
    gens.push_back(x);
    span = closure(g, gens);
    if (span.order() == members.size()) break;
  }
  return subgroup_from_set(g, std::move(s), std::move(gens));
}

/// [a, b], closed under conjugation by <a, b>.
inline Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& a, const Subgroup& b) {
  // normal closure in <a, b> of commutators of generators
  std::vector<ElementId> comms;
  for (ElementId x : a.gens)
    for (ElementId y : b.gens) {
      ElementId c = g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y));
      if (c != FiniteGroup::identity()) comms.push_back(c);
    }
  std::vector<ElementId> ambient = a.gens;
  ambient.insert(ambient.end(), b.gens.begin(), b.gens.end());
  Subgroup n = closure(g, comms);
  for (bool grew = true; grew;) {
    grew = false;
    for (ElementId x : ambient) {
      for (ElementId k : std::vector<ElementId>(n.gens)) {
        ElementId c = g.conj(k, x);
        if (!n.contains(c)) {
          auto gens = n.gens;
          gens.push_back(c);
          n = closure(g, gens);
          grew = true;
        }
      }
    }
  }
  return n;
}

/// Commutator subgroup [h, h].
inline Subgroup derived_subgroup(const FiniteGroup& g, const Subgroup& h) { return commutator_subgroup(g, h, h); }

inline bool is_perfect(const FiniteGroup& g, const Subgroup& h) { return derived_subgroup(g, h).order() == h.order(); }

/// Rebuilds a PermGroup on the same points from subgroup generators.
inline PermGroup to_perm_group(const FiniteGroup& g, const Subgroup& h) {
  std::vector<Perm> gens;
  for (ElementId e : h.gens) gens.push_back(g.perm(e));
  return PermGroup(g.degree(), std::move(gens));
}

struct CosetAction {
  PermGroup action;                 // on right cosets, one generator per ambient generator
  std::vector<ElementId> coset_reps;  // representative of each coset label
};

/// Action of g on the right cosets of h by right multiplication.
inline CosetAction coset_action(const FiniteGroup& g, const Subgroup& h, std::size_t max_index = 1'000'000) {
  const std::size_t index = g.order() / h.order();
  if (index > max_index) throw GroupError("coset_action: index exceeds guard");
  constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(g.order(), kUnset);
  std::vector<ElementId> reps;
  for (ElementId e = 0; e < g.order(); ++e) {
    if (label[e] != kUnset) continue;
    auto l = static_cast<std::uint32_t>(reps.size());
    reps.push_back(e);
    for (ElementId x : h.elements) label[g.mul(x, e)] = l;
  }
  std::vector<Perm> gens;
  for (std::size_t k = 0; k < g.generators().size(); ++k) {
    std::vector<Point> img(index);
    for (std::size_t c = 0; c < index; ++c) img[c] = label[g.mul(reps[c], g.generator_element(k))];
    gens.push_back(Perm(std::move(img)));
  }
  return CosetAction{PermGroup(index, std::move(gens)), std::move(reps)};
}

}  // namespace obstruct
