#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wqo/bounds.hpp"
#include "wqo/errors.hpp"
#include "wqo/ordinal.hpp"
#include "wqo/poset.hpp"
#include "wqo/words.hpp"
#include "wqo/wpo.hpp"

namespace wqo {

// An ambient order with designated elements v_1..v_k, each maximal in the
// ambient minus the later ones, and Y = ambient minus all of them.  When the
// ambient is finite it is materialized so the separator construction can
// emit word terms over it.
struct MaximalDecomposition {
  WpoTerm ambient;
  std::vector<WpoElem> v;  // v[0] = v_1, ..., v[k-1] = v_k
  std::optional<Materialized> finite;

  // Letter index of v_i in the materialized alphabet.
  int v_atom(std::size_t i) const {
    if (!finite) throw std::invalid_argument("ambient was not materialized");
    for (std::size_t a = 0; a < finite->elems.size(); ++a)
      if (finite->elems[a] == v[i]) return static_cast<int>(a);
    throw invariant_error("designated element missing from the carrier");
  }

  std::vector<int> y_atoms() const {
    if (!finite) throw std::invalid_argument("ambient was not materialized");
    std::vector<int> out;
    for (std::size_t a = 0; a < finite->elems.size(); ++a) {
      bool excluded = false;
      for (const auto& e : v) excluded = excluded || finite->elems[a] == e;
      if (!excluded) out.push_back(static_cast<int>(a));
    }
    return out;
  }
};

// Checks the defining property of the decomposition elementwise (finite
// ambients only).
inline bool validate_maximal(const MaximalDecomposition& d) {
  if (!d.finite) return true;  // structural cases are maximal by construction
  const Poset& p = d.finite->poset;
  for (std::size_t i = 0; i < d.v.size(); ++i) {
    int vi = d.v_atom(i);
    for (std::size_t a = 0; a < d.finite->elems.size(); ++a) {
      bool later = false;
      for (std::size_t j = i + 1; j < d.v.size(); ++j)
        later = later || static_cast<int>(a) == d.v_atom(j);
      if (later) continue;
      if (p.strictly_less(vi, static_cast<int>(a))) return false;
    }
  }
  return true;
}

namespace detail {

// Greedy peel of one maximal element from the structural cases.
inline std::optional<WpoElem> peel_structural(const WpoTerm& t,
                                              std::vector<WpoElem>& taken) {
  using K = WpoTerm::K;
  auto already = [&](const WpoElem& e) {
    for (const auto& x : taken)
      if (x == e) return true;
    return false;
  };
  switch (t.k) {
    case K::Singleton: {
      WpoElem e = WpoElem::unit();
      if (already(e)) return std::nullopt;
      return e;
    }
    case K::H: {
      // trailing finite summands are fresh maximal points
      std::vector<Ordinal> exps = exponent_list(t.beta);
      for (std::size_t i = exps.size(); i-- > 0;) {
        if (!exps[i].is_zero()) break;
        WpoElem e = exps.size() == 1 ? WpoElem::unit()
                                     : WpoElem::inj(i, WpoElem::unit());
        if (!already(e)) return e;
      }
      return std::nullopt;
    }
    case K::DisjointUnion: {
      for (std::size_t i = 0; i < t.parts.size(); ++i) {
        std::vector<WpoElem> sub_taken;
        for (const auto& x : taken)
          if (x.k == WpoElem::K::Inj && x.index == i)
            sub_taken.push_back(x.subs[0]);
        if (auto e = peel_structural(t.parts[i], sub_taken))
          return WpoElem::inj(i, std::move(*e));
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace detail

// Peels k elements, each maximal in what remains.  Finite ambients are
// materialized and peeled by inspection; Singleton, H with a successor part,
// and disjoint unions of peelable terms are handled structurally.
inline MaximalDecomposition extract_maximals(const WpoTerm& t, int k) {
  MaximalDecomposition d;
  d.ambient = t;
  if (auto m = materialize(t)) {
    d.finite = std::move(*m);
    std::vector<bool> removed(d.finite->elems.size(), false);
    std::vector<int> picked;
    for (int round = 0; round < k; ++round) {
      int found = -1;
      for (std::size_t a = 0; a < d.finite->elems.size() && found < 0; ++a) {
        if (removed[a]) continue;
        bool maximal = true;
        for (std::size_t b = 0; b < d.finite->elems.size(); ++b)
          if (!removed[b] && b != a &&
              d.finite->poset.strictly_less(static_cast<int>(a),
                                            static_cast<int>(b)))
            maximal = false;
        if (maximal) found = static_cast<int>(a);
      }
      if (found < 0)
        throw std::invalid_argument("fewer peelable maximal elements than k");
      removed[found] = true;
      picked.push_back(found);
    }
    // peeled first = v_k; record as v_1..v_k
    for (auto it = picked.rbegin(); it != picked.rend(); ++it)
      d.v.push_back(d.finite->elems[*it]);
    return d;
  }
  std::vector<WpoElem> taken;
  for (int round = 0; round < k; ++round) {
    auto e = detail::peel_structural(t, taken);
    if (!e)
      throw std::invalid_argument("fewer peelable maximal elements than k");
    taken.push_back(std::move(*e));
  }
  // first peeled is v_k
  d.v.assign(taken.rbegin(), taken.rend());
  return d;
}

// Element of the k-fold iterated nonempty finite powerset of Y: level 0 is a
// Y-atom, level k is a nonempty set of level k-1 elements.
struct IterSet {
  int level = 0;
  int atom = -1;
  std::vector<IterSet> items;

  static IterSet leaf(int atom) {
    IterSet s;
    s.atom = atom;
    return s;
  }
  static IterSet set(std::vector<IterSet> items);
};

inline int iterset_cmp(const IterSet& a, const IterSet& b) {
  if (a.level != b.level) return a.level < b.level ? -1 : 1;
  if (a.atom != b.atom) return a.atom < b.atom ? -1 : 1;
  std::size_t n = std::min(a.items.size(), b.items.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = iterset_cmp(a.items[i], b.items[i])) return c;
  if (a.items.size() != b.items.size())
    return a.items.size() < b.items.size() ? -1 : 1;
  return 0;
}

inline bool operator==(const IterSet& a, const IterSet& b) {
  return iterset_cmp(a, b) == 0;
}

inline IterSet IterSet::set(std::vector<IterSet> in) {
  if (in.empty()) throw std::invalid_argument("powerset layers are nonempty");
  for (const auto& e : in)
    if (e.level != in[0].level)
      throw std::invalid_argument("mixed levels in an iterated powerset");
  std::sort(in.begin(), in.end(), [](const IterSet& x, const IterSet& y) {
    return iterset_cmp(x, y) < 0;
  });
  in.erase(std::unique(in.begin(), in.end()), in.end());
  IterSet s;
  s.level = in[0].level + 1;
  s.items = std::move(in);
  return s;
}

// Iterated majorization order over the alphabet order.
inline bool iterset_leq(const Poset& alphabet, const IterSet& a,
                        const IterSet& b) {
  if (a.level != b.level) return false;
  if (a.level == 0) return alphabet.le(a.atom, b.atom);
  for (const auto& s : a.items) {
    bool hit = false;
    for (const auto& t : b.items)
      if (iterset_leq(alphabet, s, t)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

inline void validate_iterset(const Poset& alphabet,
                             const std::vector<int>& y_atoms, const IterSet& s) {
  if (s.level == 0) {
    if (std::find(y_atoms.begin(), y_atoms.end(), s.atom) == y_atoms.end())
      throw std::invalid_argument("atom is not in Y");
    return;
  }
  for (const auto& e : s.items) validate_iterset(alphabet, y_atoms, e);
}

namespace detail {

inline WordTerm psi_rec(const MaximalDecomposition& d, const IterSet& s) {
  if (s.level == 0) return WordTerm::lit(s.atom);
  // separator v_{level-1}; the innermost layer separates with the empty word
  std::vector<WordTerm> items;
  for (const auto& sub : s.items) {
    if (s.level >= 2)
      items.push_back(WordTerm::lit(d.v_atom(s.level - 2)));
    items.push_back(psi_rec(d, sub));
  }
  return WordTerm::pow(WordTerm::cat(std::move(items)));
}

}  // namespace detail

// The separator construction: an indecomposable word of length w^k from a
// level-k iterated-powerset element over Y.
inline WordTerm psi(int k, const MaximalDecomposition& d, const IterSet& s) {
  if (k < 0 || k > 2)
    throw unsupported_level("psi emits word terms only up to level 2");
  if (s.level != k) throw std::invalid_argument("input level does not match k");
  if (static_cast<int>(d.v.size()) + 1 < k)
    throw std::invalid_argument("not enough designated elements for psi_k");
  if (d.finite) validate_iterset(d.finite->poset, d.y_atoms(), s);
  return detail::psi_rec(d, s);
}

// Word-level extension: v_k-separated psi_k images.
inline WordTerm psi_star(int k, const MaximalDecomposition& d,
                         const std::vector<IterSet>& word) {
  if (k < 0 || k > 1)
    throw unsupported_level("psi_star stays below level 2 so that the exact "
                            "decision applies");
  if (static_cast<int>(d.v.size()) < k)
    throw std::invalid_argument("not enough designated elements for psi'_k");
  std::vector<WordTerm> items;
  for (const auto& s : word) {
    if (k >= 1) items.push_back(WordTerm::lit(d.v_atom(k - 1)));
    items.push_back(psi(k, d, s));
  }
  return WordTerm::cat(std::move(items));
}

// The lower-bound instance at beta: the H-family order, its claimed type
// bound u(beta), and (at successors) the peeled decomposition the
// construction routes through.
struct LowerInstance {
  WpoTerm term;
  Ordinal claimed;
  std::optional<MaximalDecomposition> decomposition;
};

inline LowerInstance lowerbd_instance(const Ordinal& beta) {
  LowerInstance out;
  out.claimed = u_fun(beta);
  if (beta.is_zero()) {
    out.term = WpoTerm::base_of(Poset::antichain(0));
    return out;
  }
  out.term = WpoTerm::h_of(beta);
  if (beta.is_successor()) out.decomposition = extract_maximals(out.term, 1);
  return out;
}

}  // namespace wqo
