#pragma once

// Conjugacy classes of subgroups of an enumerated group. Perfect subgroups
// come from an exhaustive two-generator search; every other subgroup is reached from
// its solvable residual by a tower of prime-index normal extensions inside
// normalizers.

#include "obstruct/finite_group.hpp"
#include "obstruct/linalg.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

namespace obstruct {

class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Fingerprint {
  std::size_t order = 1;
  AbelianInvariants abelianization;
  std::size_t exponent = 1;
  std::size_t class_count = 1;
  int derived_length = 0;  // -1 when not solvable
  bool nilpotent = true;

  auto key() const {
    std::vector<long> ab;
    for (const auto& d : abelianization.divisors) ab.push_back(d.get_si());
    return std::make_tuple(order, ab, abelianization.free_rank, exponent, class_count, derived_length, nilpotent);
  }
  friend bool operator==(const Fingerprint& a, const Fingerprint& b) { return a.key() == b.key(); }
  friend bool operator<(const Fingerprint& a, const Fingerprint& b) { return a.key() < b.key(); }

  std::string to_string() const {
    std::ostringstream os;
    os << "order=" << order << ";ab=" << abelianization.to_string() << ";exp=" << exponent << ";classes=" << class_count
       << ";dl=" << (derived_length < 0 ? std::string("inf") : std::to_string(derived_length))
       << ";nil=" << (nilpotent ? 1 : 0);
    return os.str();
  }
};

/// H/[H,H] from the exponent sums of a stabilizer-chain presentation.
inline AbelianInvariants abelianization(const FiniteGroup& g, const Subgroup& h) {
  if (h.gens.empty()) return {};
  Presentation pres = to_perm_group(g, h).presentation();
  IntMatrix rel(0, pres.generator_count);
  for (const auto& r : pres.relators) {
    IntVector row(pres.generator_count, Integer(0));
    for (const auto& l : r.letters()) row[l.gen] += l.exp;
    rel.append_row(row);
  }
  return quotient_invariants(pres.generator_count, rel);
}

inline std::size_t subgroup_class_count(const FiniteGroup& g, const Subgroup& h) {
  ElementSet seen = g.empty_set();
  std::size_t count = 0;
  std::vector<ElementId> stack;
  for (ElementId e : h.elements) {
    if (seen.test(e)) continue;
    ++count;
    seen.set(e);
    stack.assign(1, e);
    while (!stack.empty()) {
      ElementId x = stack.back();
      stack.pop_back();
      for (ElementId s : h.gens) {
        ElementId y = g.conj(x, s);
        if (!seen.test(y)) {
          seen.set(y);
          stack.push_back(y);
        }
      }
    }
  }
  return count;
}

inline Fingerprint fingerprint(const FiniteGroup& g, const Subgroup& h) {
  Fingerprint f;
  f.order = h.order();
  f.abelianization = abelianization(g, h);
  for (ElementId e : h.elements) f.exponent = std::lcm(f.exponent, g.element_order(e));
  f.class_count = subgroup_class_count(g, h);
  Subgroup d = h;
  f.derived_length = 0;
  while (d.order() > 1) {
    Subgroup next = derived_subgroup(g, d);
    if (next.order() == d.order()) {
      f.derived_length = -1;
      break;
    }
    d = std::move(next);
    ++f.derived_length;
  }
  Subgroup c = h;
  while (c.order() > 1) {
    Subgroup next = commutator_subgroup(g, c, h);
    if (next.order() == c.order()) break;
    c = std::move(next);
  }
  f.nilpotent = c.order() == 1;
  return f;
}

struct SubgroupClass {
  std::size_t id = 0;
  Subgroup rep;
  std::size_t order = 0;
  std::size_t normalizer_order = 0;
  Fingerprint fp;
  std::vector<std::size_t> maximal;     // ids, ascending
  std::vector<ElementId> transversal;   // rep^x over x gives each conjugate once

  std::size_t conjugate_count() const { return transversal.size(); }
};

struct LatticeOptions {
  std::uint64_t seed = 1;
  std::size_t class_cap = 10'000;
  std::size_t max_attempts = 2'000'000;  // closures in the perfect search; exceeding it is an error
};

class SubgroupLattice {
 public:
  SubgroupLattice() = default;
  explicit SubgroupLattice(std::vector<SubgroupClass> classes) : classes_(std::move(classes)) { close(); }

  std::size_t size() const noexcept { return classes_.size(); }
  const std::vector<SubgroupClass>& classes() const noexcept { return classes_; }
  const SubgroupClass& operator[](std::size_t id) const { return classes_.at(id); }

  const std::vector<std::size_t>& maximal_classes(std::size_t id) const { return classes_.at(id).maximal; }

  /// Classes with a representative inside id's representative, id included.
  const std::vector<std::size_t>& classes_contained_in(std::size_t id) const { return below_.at(id); }

  bool contained(std::size_t small, std::size_t big) const {
    const auto& b = below_.at(big);
    return std::binary_search(b.begin(), b.end(), small);
  }

  std::size_t total_subgroups() const {
    std::size_t n = 0;
    for (const auto& c : classes_) n += c.conjugate_count();
    return n;
  }

 private:
  void close() {
    below_.assign(classes_.size(), {});
    // maximal subgroups have smaller order, and ids follow order
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      std::set<std::size_t> s{i};
      for (std::size_t m : classes_[i].maximal) {
        if (m >= i) throw LatticeError("lattice: maximal subgroup id not below its overgroup");
        s.insert(below_[m].begin(), below_[m].end());
      }
      below_[i].assign(s.begin(), s.end());
    }
  }

  std::vector<SubgroupClass> classes_;
  std::vector<std::vector<std::size_t>> below_;
};

namespace detail {

inline std::vector<std::size_t> invariant_key(const FiniteGroup& g, const Subgroup& h) {
  std::vector<std::size_t> k = class_distribution(g, h);
  k.insert(k.begin(), h.order());
  return k;
}

// Collects subgroups up to conjugacy.
class ClassCollector {
 public:
  ClassCollector(const FiniteGroup& g, std::size_t cap) : g_(g), cap_(cap) {}

  bool add(const Subgroup& h) {
    auto& bucket = buckets_[invariant_key(g_, h)];
    for (std::size_t i : bucket)
      if (conjugating_element(g_, h, reps_[i])) return false;
    bucket.push_back(reps_.size());
    reps_.push_back(h);
    if (reps_.size() > cap_) throw LatticeError("lattice: class count exceeds cap");
    return true;
  }

  std::vector<Subgroup>& reps() { return reps_; }

 private:
  const FiniteGroup& g_;
  std::size_t cap_;
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> buckets_;
  std::vector<Subgroup> reps_;
};

inline std::vector<ElementId> sorted_conjugate(const FiniteGroup& g, const std::vector<ElementId>& elems, ElementId x) {
  std::vector<ElementId> out;
  out.reserve(elems.size());
  for (ElementId e : elems) out.push_back(g.conj(e, x));
  std::sort(out.begin(), out.end());
  return out;
}

struct VectorHash {
  std::size_t operator()(const std::vector<ElementId>& v) const {
    std::size_t h = v.size();
    for (ElementId x : v) h ^= x + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

// Greedy generating set: smallest element indices not yet in the span.
inline Subgroup with_canonical_generators(const FiniteGroup& g, const std::vector<ElementId>& sorted_elems) {
  std::vector<ElementId> gens;
  Subgroup span = closure(g, {});
  for (ElementId e : sorted_elems) {
    if (span.order() == sorted_elems.size()) break;
    if (span.contains(e)) continue;
    gens.push_back(e);
    span = closure(g, gens);
  }
  return span;
}

}  // namespace detail

/// Perfect subgroups up to conjugacy, including the trivial group and g
/// itself when perfect. Exhaustive over two-generator subgroups: the first
/// generator runs over class representatives a, the second over orbit
/// representatives of C(a) acting on g by conjugation. The seed only
/// permutes the visiting order.
inline std::vector<Subgroup> perfect_subgroup_classes(const FiniteGroup& g, const LatticeOptions& opt = {}) {
  detail::ClassCollector col(g, opt.class_cap);
  col.add(trivial_subgroup(g));
  Subgroup whole = whole_group(g);
  const bool perfect = is_perfect(g, whole);
  if (perfect) col.add(whole);
  if (g.order() == 1) return col.reps();
  // a perfect group has no proper subgroup of index below 5
  const std::size_t cap = g.order() / (perfect ? 5 : 2);
  const auto& cls = g.classes();
  std::unordered_set<ElementSet, ElementSetHash> tried;
  std::size_t attempts = 0;
  std::vector<ElementId> order(g.order() - 1);
  std::iota(order.begin(), order.end(), ElementId{1});
  std::mt19937_64 rng(opt.seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t ia = 1; ia < cls.size(); ++ia) {
    const ElementId a = cls[ia].rep;
    std::vector<ElementId> cgens;
    {
      Subgroup span = trivial_subgroup(g);
      for (ElementId z : cls[ia].centralizer)
        if (!span.contains(z)) {
          cgens.push_back(z);
          span = closure(g, cgens);
        }
    }
    ElementSet seen = g.empty_set();
    std::vector<ElementId> stack;
    for (ElementId b : order) {
      if (seen.test(b)) continue;
      seen.set(b);
      stack.assign(1, b);
      while (!stack.empty()) {
        ElementId x = stack.back();
        stack.pop_back();
        for (ElementId z : cgens) {
          ElementId y = g.conj(x, z);
          if (!seen.test(y)) {
            seen.set(y);
            stack.push_back(y);
          }
        }
      }
      if (g.class_of(b) < ia) continue;
      if (cls[ia].element_order == 2 && g.element_order(b) == 2) continue;
      if (++attempts > opt.max_attempts) throw LatticeError("perfect subgroup search exceeded its attempt cap");
      auto k = closure_capped(g, {a, b}, cap);
      if (!k || !tried.insert(k->members).second) continue;
      if (is_perfect(g, *k)) col.add(*k);
    }
  }
  return col.reps();
}

/// All conjugacy classes of subgroups with their maximal-subgroup relation.
inline SubgroupLattice subgroup_classes(const FiniteGroup& g, const LatticeOptions& opt = {}) {
  detail::ClassCollector col(g, opt.class_cap);
  for (auto& p : perfect_subgroup_classes(g, opt)) col.add(p);
  std::vector<std::size_t> norm_order;

  for (std::size_t idx = 0; idx < col.reps().size(); ++idx) {
    const Subgroup h = col.reps()[idx];
    const Subgroup n = normalizer(g, h);
    norm_order.push_back(n.order());
    ElementSet done = g.empty_set();
    std::unordered_set<ElementSet, ElementSetHash> seen;
    for (ElementId x : n.elements) {
      if (done.test(x)) continue;
      for (ElementId y : h.elements) done.set(g.mul(y, x));
      if (h.contains(x)) continue;
      // order of x modulo h must be prime
      std::size_t k = 1;
      for (ElementId p = x; !h.contains(p); p = g.mul(p, x)) ++k;
      bool prime = k > 1;
      for (std::size_t d = 2; d * d <= k && prime; ++d) prime = k % d != 0;
      if (!prime) continue;
      ElementSet members = g.empty_set();
      ElementId power = FiniteGroup::identity();
      for (std::size_t i = 0; i < k; ++i, power = g.mul(power, x))
        for (ElementId y : h.elements) members.set(g.mul(y, power));
      if (!seen.insert(members).second) continue;
      auto gens = h.gens;
      gens.push_back(x);
      col.add(subgroup_from_set(g, std::move(members), std::move(gens)));
    }
  }

  // canonical representative: the conjugate with the smallest sorted element list
  struct Pending {
    Subgroup rep;
    std::vector<ElementId> key;
    std::vector<ElementId> transversal;
    Fingerprint fp;
    std::size_t norm;
  };
  std::vector<Pending> pend;
  for (std::size_t i = 0; i < col.reps().size(); ++i) {
    const Subgroup& h = col.reps()[i];
    std::unordered_map<std::vector<ElementId>, ElementId, detail::VectorHash> orbit;
    std::vector<std::pair<std::vector<ElementId>, ElementId>> queue;
    queue.emplace_back(h.elements, FiniteGroup::identity());
    orbit.emplace(h.elements, FiniteGroup::identity());
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (std::size_t s = 0; s < g.generators().size(); ++s) {
        ElementId gen = g.generator_element(s);
        auto img = detail::sorted_conjugate(g, queue[q].first, gen);
        if (orbit.count(img)) continue;
        ElementId x = g.mul(queue[q].second, gen);
        orbit.emplace(img, x);
        queue.emplace_back(std::move(img), x);
      }
    std::size_t best = 0;
    for (std::size_t q = 1; q < queue.size(); ++q)
      if (queue[q].first < queue[best].first) best = q;
    Pending p;
    p.rep = detail::with_canonical_generators(g, queue[best].first);
    p.key = queue[best].first;
    const ElementId x0inv = g.inv(queue[best].second);
    for (const auto& [elems, x] : queue) p.transversal.push_back(g.mul(x0inv, x));
    p.fp = fingerprint(g, p.rep);
    p.norm = norm_order[i];
    if (p.norm * queue.size() != g.order()) throw LatticeError("lattice: orbit-stabilizer mismatch");
    pend.push_back(std::move(p));
  }
  std::sort(pend.begin(), pend.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.fp.order, a.fp, a.key) < std::tie(b.fp.order, b.fp, b.key);
  });

  std::vector<SubgroupClass> out;
  for (std::size_t i = 0; i < pend.size(); ++i) {
    SubgroupClass c;
    c.id = i;
    c.rep = std::move(pend[i].rep);
    c.order = c.rep.order();
    c.normalizer_order = pend[i].norm;
    c.fp = std::move(pend[i].fp);
    c.transversal = std::move(pend[i].transversal);
    out.push_back(std::move(c));
  }

  // maximal subgroups: sweep candidate classes by decreasing order; a
  // conjugate inside h is maximal unless it lies in a maximal one found earlier
  std::vector<std::vector<std::size_t>> dists;
  for (const auto& c : out) dists.push_back(class_distribution(g, c.rep));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Subgroup& h = out[i].rep;
    std::vector<ElementSet> found;
    std::set<std::size_t> ids;
    for (std::size_t j = i; j-- > 0;) {
      if (out[j].order == out[i].order || out[i].order % out[j].order != 0) continue;
      bool fits = true;
      for (std::size_t c = 0; c < dists[j].size() && fits; ++c) fits = dists[j][c] <= dists[i][c];
      if (!fits) continue;
      std::vector<ElementId> cg(out[j].rep.gens.size());
      for (ElementId x : out[j].transversal) {
        bool inside = true;
        for (std::size_t k = 0; k < cg.size() && inside; ++k) {
          cg[k] = g.conj(out[j].rep.gens[k], x);
          inside = h.contains(cg[k]);
        }
        if (!inside) continue;
        bool covered = false;
        for (const auto& m : found) {
          covered = true;
          for (ElementId e : cg) covered = covered && m.test(e);
          if (covered) break;
        }
        if (covered) continue;
        ElementSet s = g.empty_set();
        for (ElementId e : out[j].rep.elements) s.set(g.conj(e, x));
        found.push_back(std::move(s));
        ids.insert(j);
      }
    }
    out[i].maximal.assign(ids.begin(), ids.end());
  }
  return SubgroupLattice(std::move(out));
}

/// Every class's solvable residual is conjugate to a perfect class of the
/// lattice. Returns the ids violating that.
inline std::vector<std::size_t> residual_check(const FiniteGroup& g, const SubgroupLattice& lat) {
  std::vector<std::size_t> perfect, bad;
  for (const auto& c : lat.classes())
    if (c.fp.abelianization.trivial()) perfect.push_back(c.id);
  for (const auto& c : lat.classes()) {
    Subgroup d = c.rep;
    for (;;) {
      Subgroup next = derived_subgroup(g, d);
      if (next.order() == d.order()) break;
      d = std::move(next);
    }
    bool ok = false;
    for (std::size_t p : perfect) ok = ok || conjugating_element(g, d, lat[p].rep).has_value();
    if (!ok) bad.push_back(c.id);
  }
  return bad;
}

/// Id of the class containing a conjugate of h.
inline std::size_t locate_class(const FiniteGroup& g, const SubgroupLattice& lat, const Subgroup& h) {
  auto key = detail::invariant_key(g, h);
  for (const auto& c : lat.classes())
    if (c.order == h.order() && detail::invariant_key(g, c.rep) == key && conjugating_element(g, h, c.rep))
      return c.id;
  throw LatticeError("locate_class: subgroup not in lattice");
}

// ---- JSON cache --------------------------------------------------------

inline nlohmann::json lattice_to_json(const FiniteGroup& g, const SubgroupLattice& lat) {
  nlohmann::json j;
  j["format"] = "subgroup-lattice";
  j["version"] = 1;
  j["group_order"] = g.order();
  j["degree"] = g.degree();
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& p : g.generators()) gens.push_back(p.images());
  j["generators"] = gens;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : lat.classes()) {
    nlohmann::json e;
    e["id"] = c.id;
    e["order"] = c.order;
    e["normalizer_order"] = c.normalizer_order;
    e["fingerprint"] = c.fp.to_string();
    nlohmann::json rg = nlohmann::json::array();
    for (ElementId x : c.rep.gens) rg.push_back(g.perm(x).images());
    e["generators"] = rg;
    e["maximal"] = c.maximal;
    arr.push_back(e);
  }
  j["classes"] = arr;
  return j;
}

/// Rebuilds a lattice for g from its cache; transversals and fingerprints are recomputed.
inline SubgroupLattice lattice_from_json(const FiniteGroup& g, const nlohmann::json& j) {
  if (j.value("format", "") != "subgroup-lattice") throw LatticeError("lattice json: wrong format tag");
  if (j.at("group_order").get<std::size_t>() != g.order() || j.at("degree").get<std::size_t>() != g.degree())
    throw LatticeError("lattice json: group mismatch");
  const auto& jg = j.at("generators");
  if (jg.size() != g.generators().size()) throw LatticeError("lattice json: generator mismatch");
  for (std::size_t k = 0; k < jg.size(); ++k)
    if (jg[k].get<std::vector<Point>>() != g.generators()[k].images())
      throw LatticeError("lattice json: generator mismatch");
  std::vector<SubgroupClass> out;
  for (const auto& e : j.at("classes")) {
    SubgroupClass c;
    c.id = e.at("id").get<std::size_t>();
    if (c.id != out.size()) throw LatticeError("lattice json: ids out of sequence");
    std::vector<ElementId> gens;
    for (const auto& p : e.at("generators")) {
      auto idx = g.index_of(std::span<const Point>(p.get<std::vector<Point>>()));
      if (!idx) throw LatticeError("lattice json: generator outside the group");
      gens.push_back(*idx);
    }
    c.rep = closure(g, gens);
    c.rep.gens = gens;
    c.order = c.rep.order();
    if (c.order != e.at("order").get<std::size_t>()) throw LatticeError("lattice json: order mismatch");
    c.normalizer_order = e.at("normalizer_order").get<std::size_t>();
    c.maximal = e.at("maximal").get<std::vector<std::size_t>>();
    c.fp = fingerprint(g, c.rep);
    if (c.fp.to_string() != e.at("fingerprint").get<std::string>())
      throw LatticeError("lattice json: fingerprint mismatch for class " + std::to_string(c.id));
    std::unordered_set<std::vector<ElementId>, detail::VectorHash> orbit{c.rep.elements};
    std::vector<std::pair<std::vector<ElementId>, ElementId>> queue{{c.rep.elements, FiniteGroup::identity()}};
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (std::size_t s = 0; s < g.generators().size(); ++s) {
        ElementId gen = g.generator_element(s);
        auto img = detail::sorted_conjugate(g, queue[q].first, gen);
        if (!orbit.insert(img).second) continue;
        queue.emplace_back(std::move(img), g.mul(queue[q].second, gen));
      }
    for (const auto& q : queue) c.transversal.push_back(q.second);
    if (c.transversal.size() * c.normalizer_order != g.order())
      throw LatticeError("lattice json: normalizer order inconsistent for class " + std::to_string(c.id));
    out.push_back(std::move(c));
  }
  return SubgroupLattice(std::move(out));
}

}  // namespace obstruct
