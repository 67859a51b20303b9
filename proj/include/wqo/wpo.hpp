#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wqo/bounds.hpp"
#include "wqo/errors.hpp"
#include "wqo/ordinal.hpp"
#include "wqo/poset.hpp"

namespace wqo {

// Term language for well partial orders.
struct WpoTerm {
  enum class K {
    Base,
    Singleton,
    DisjointUnion,
    Product,
    LexProduct,
    OrderedSum,
    Star,
    PfinNE,
    Pfin,
    H
  };
  K k = K::Singleton;
  Poset base;                  // Base
  std::vector<WpoTerm> parts;  // node children; Star/Pfin*: parts[0]
  Ordinal beta;                // H

  static WpoTerm base_of(Poset p) {
    WpoTerm t;
    t.k = K::Base;
    t.base = std::move(p);
    return t;
  }
  static WpoTerm singleton() { return WpoTerm{}; }
  static WpoTerm node(K kind, std::vector<WpoTerm> parts) {
    if ((kind == K::LexProduct || kind == K::OrderedSum ||
         kind == K::DisjointUnion || kind == K::Product) &&
        parts.empty())
      throw std::invalid_argument("empty component list");
    if ((kind == K::Star || kind == K::Pfin || kind == K::PfinNE) &&
        parts.size() != 1)
      throw std::invalid_argument("unary constructor arity");
    WpoTerm t;
    t.k = kind;
    t.parts = std::move(parts);
    return t;
  }
  static WpoTerm h_of(Ordinal beta) {
    if (beta.is_zero()) throw std::invalid_argument("H needs beta >= 1");
    WpoTerm t;
    t.k = K::H;
    t.beta = std::move(beta);
    return t;
  }
};

// Element of a WpoTerm, mirroring its structure.
struct WpoElem {
  enum class K { Unit, Atom, Inj, Tuple, Word, FinSet, HPair, HOrd };
  K k = K::Unit;
  int atom = -1;                // Atom
  std::size_t index = 0;        // Inj
  std::uint64_t layer = 0;      // HPair: (layer, pos), pos < layer
  std::uint64_t pos = 0;
  Ordinal ord;                  // HOrd summand index
  std::vector<WpoElem> subs;    // Inj/HOrd: subs[0]; Tuple/Word/FinSet: list

  static WpoElem unit() { return WpoElem{}; }
  static WpoElem atom_of(int i) {
    WpoElem e;
    e.k = K::Atom;
    e.atom = i;
    return e;
  }
  static WpoElem inj(std::size_t index, WpoElem sub) {
    WpoElem e;
    e.k = K::Inj;
    e.index = index;
    e.subs.push_back(std::move(sub));
    return e;
  }
  static WpoElem tuple(std::vector<WpoElem> subs) {
    WpoElem e;
    e.k = K::Tuple;
    e.subs = std::move(subs);
    return e;
  }
  static WpoElem word(std::vector<WpoElem> subs) {
    WpoElem e;
    e.k = K::Word;
    e.subs = std::move(subs);
    return e;
  }
  static WpoElem finset(std::vector<WpoElem> subs);
  static WpoElem hpair(std::uint64_t layer, std::uint64_t pos) {
    WpoElem e;
    e.k = K::HPair;
    e.layer = layer;
    e.pos = pos;
    return e;
  }
  static WpoElem hord(Ordinal index, WpoElem sub) {
    WpoElem e;
    e.k = K::HOrd;
    e.ord = std::move(index);
    e.subs.push_back(std::move(sub));
    return e;
  }
};

inline int elem_cmp(const WpoElem& a, const WpoElem& b) {
  if (a.k != b.k) return a.k < b.k ? -1 : 1;
  if (a.atom != b.atom) return a.atom < b.atom ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  if (a.layer != b.layer) return a.layer < b.layer ? -1 : 1;
  if (a.pos != b.pos) return a.pos < b.pos ? -1 : 1;
  auto c = compare(a.ord, b.ord);
  if (c != std::strong_ordering::equal)
    return c == std::strong_ordering::less ? -1 : 1;
  std::size_t n = std::min(a.subs.size(), b.subs.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int s = elem_cmp(a.subs[i], b.subs[i])) return s;
  if (a.subs.size() != b.subs.size())
    return a.subs.size() < b.subs.size() ? -1 : 1;
  return 0;
}

inline bool operator==(const WpoElem& a, const WpoElem& b) {
  return elem_cmp(a, b) == 0;
}

inline WpoElem WpoElem::finset(std::vector<WpoElem> in) {
  std::sort(in.begin(), in.end(),
            [](const WpoElem& x, const WpoElem& y) { return elem_cmp(x, y) < 0; });
  in.erase(std::unique(in.begin(), in.end()), in.end());
  WpoElem e;
  e.k = K::FinSet;
  e.subs = std::move(in);
  return e;
}

// ---------------------------------------------------------------------------
// The H family: one clause per shape of beta.

struct HClause {
  enum class K { One, Omega, OrdSum, Lex, Union };
  K k = K::One;
  Ordinal index_bound;         // OrdSum: summand indices run below this
  std::vector<Ordinal> exps;   // Union: H(w^e); Lex: factors H(w^(w^e))
};

inline HClause h_clause(const Ordinal& beta) {
  if (beta.is_zero()) throw std::invalid_argument("H needs beta >= 1");
  std::vector<Ordinal> exps = exponent_list(beta);
  HClause c;
  if (exps.size() > 1) {
    c.k = HClause::K::Union;
    c.exps = std::move(exps);
    return c;
  }
  const Ordinal& gamma = exps[0];
  if (gamma.is_zero()) {
    c.k = HClause::K::One;
  } else if (gamma == Ordinal::finite(1)) {
    c.k = HClause::K::Omega;
  } else if (gamma.is_power_of_omega()) {
    c.k = HClause::K::OrdSum;
    c.index_bound = gamma;
  } else {
    c.k = HClause::K::Lex;
    c.exps = exponent_list(gamma);
  }
  return c;
}

namespace detail {

inline bool h_valid(const Ordinal& beta, const WpoElem& x);
inline bool h_leq(const Ordinal& beta, const WpoElem& x, const WpoElem& y);

inline bool h_valid(const Ordinal& beta, const WpoElem& x) {
  HClause c = h_clause(beta);
  switch (c.k) {
    case HClause::K::One:
      return x.k == WpoElem::K::Unit;
    case HClause::K::Omega:
      return x.k == WpoElem::K::HPair && x.layer >= 1 && x.pos < x.layer;
    case HClause::K::OrdSum:
      return x.k == WpoElem::K::HOrd && x.subs.size() == 1 &&
             compare(x.ord, c.index_bound) == std::strong_ordering::less &&
             h_valid(omega_pow(x.ord), x.subs[0]);
    case HClause::K::Lex: {
      if (x.k != WpoElem::K::Tuple || x.subs.size() != c.exps.size())
        return false;
      for (std::size_t i = 0; i < c.exps.size(); ++i)
        if (!h_valid(omega_pow(omega_pow(c.exps[i])), x.subs[i])) return false;
      return true;
    }
    case HClause::K::Union:
      return x.k == WpoElem::K::Inj && x.index < c.exps.size() &&
             x.subs.size() == 1 &&
             h_valid(omega_pow(c.exps[x.index]), x.subs[0]);
  }
  return false;
}

inline bool h_leq(const Ordinal& beta, const WpoElem& x, const WpoElem& y) {
  HClause c = h_clause(beta);
  switch (c.k) {
    case HClause::K::One:
      return true;
    case HClause::K::Omega:
      return x.layer < y.layer || (x.layer == y.layer && x.pos == y.pos);
    case HClause::K::OrdSum: {
      auto cmp = compare(x.ord, y.ord);
      if (cmp == std::strong_ordering::less) return true;
      if (cmp == std::strong_ordering::greater) return false;
      return h_leq(omega_pow(x.ord), x.subs[0], y.subs[0]);
    }
    case HClause::K::Lex: {
      // rightmost factor most significant; equivalence is equality here
      for (std::size_t i = c.exps.size(); i-- > 0;) {
        if (x.subs[i] == y.subs[i]) continue;
        Ordinal fb = omega_pow(omega_pow(c.exps[i]));
        return h_leq(fb, x.subs[i], y.subs[i]) &&
               !h_leq(fb, y.subs[i], x.subs[i]);
      }
      return true;
    }
    case HClause::K::Union:
      return x.index == y.index &&
             h_leq(omega_pow(c.exps[x.index]), x.subs[0], y.subs[0]);
  }
  return false;
}

// Clause-driven evaluation of the type of H(beta); the sum clause uses the
// closed form of an increasing omega-power series, the others recurse.
inline Ordinal o_eval_h(const Ordinal& beta) {
  HClause c = h_clause(beta);
  switch (c.k) {
    case HClause::K::One:
      return Ordinal::finite(1);
    case HClause::K::Omega:
      return Ordinal::omega();
    case HClause::K::OrdSum:
      // sum over d < bound of w^d
      return omega_pow(c.index_bound);
    case HClause::K::Lex: {
      Ordinal acc = Ordinal::finite(1);
      for (const auto& e : c.exps)
        acc = ord_mul(acc, o_eval_h(omega_pow(omega_pow(e))));
      return acc;
    }
    case HClause::K::Union: {
      Ordinal acc;
      for (const auto& e : c.exps) acc = nat_add(acc, o_eval_h(omega_pow(e)));
      return acc;
    }
  }
  return Ordinal();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Element validity and the element-level order.

inline bool valid_elem(const WpoTerm& t, const WpoElem& x) {
  switch (t.k) {
    case WpoTerm::K::Base:
      return x.k == WpoElem::K::Atom && x.atom >= 0 && x.atom < t.base.size();
    case WpoTerm::K::Singleton:
      return x.k == WpoElem::K::Unit;
    case WpoTerm::K::DisjointUnion:
    case WpoTerm::K::OrderedSum:
      return x.k == WpoElem::K::Inj && x.index < t.parts.size() &&
             x.subs.size() == 1 && valid_elem(t.parts[x.index], x.subs[0]);
    case WpoTerm::K::Product:
    case WpoTerm::K::LexProduct: {
      if (x.k != WpoElem::K::Tuple || x.subs.size() != t.parts.size())
        return false;
      for (std::size_t i = 0; i < t.parts.size(); ++i)
        if (!valid_elem(t.parts[i], x.subs[i])) return false;
      return true;
    }
    case WpoTerm::K::Star: {
      if (x.k != WpoElem::K::Word) return false;
      for (const auto& s : x.subs)
        if (!valid_elem(t.parts[0], s)) return false;
      return true;
    }
    case WpoTerm::K::Pfin:
    case WpoTerm::K::PfinNE: {
      if (x.k != WpoElem::K::FinSet) return false;
      if (t.k == WpoTerm::K::PfinNE && x.subs.empty()) return false;
      for (const auto& s : x.subs)
        if (!valid_elem(t.parts[0], s)) return false;
      // canonical: sorted and deduplicated
      for (std::size_t i = 0; i + 1 < x.subs.size(); ++i)
        if (elem_cmp(x.subs[i], x.subs[i + 1]) >= 0) return false;
      return true;
    }
    case WpoTerm::K::H:
      return detail::h_valid(t.beta, x);
  }
  return false;
}

namespace detail {

inline bool leq_elem_rec(const WpoTerm& t, const WpoElem& x, const WpoElem& y);

inline bool higman_greedy(const WpoTerm& child, const std::vector<WpoElem>& xs,
                          const std::vector<WpoElem>& ys) {
  std::size_t j = 0;
  for (const auto& xi : xs) {
    while (j < ys.size() && !leq_elem_rec(child, xi, ys[j])) ++j;
    if (j == ys.size()) return false;
    ++j;
  }
  return true;
}

inline bool leq_elem_rec(const WpoTerm& t, const WpoElem& x, const WpoElem& y) {
  switch (t.k) {
    case WpoTerm::K::Base:
      return t.base.le(x.atom, y.atom);
    case WpoTerm::K::Singleton:
      return true;
    case WpoTerm::K::DisjointUnion:
      return x.index == y.index &&
             leq_elem_rec(t.parts[x.index], x.subs[0], y.subs[0]);
    case WpoTerm::K::OrderedSum:
      if (x.index != y.index) return x.index < y.index;
      return leq_elem_rec(t.parts[x.index], x.subs[0], y.subs[0]);
    case WpoTerm::K::Product: {
      for (std::size_t i = 0; i < t.parts.size(); ++i)
        if (!leq_elem_rec(t.parts[i], x.subs[i], y.subs[i])) return false;
      return true;
    }
    case WpoTerm::K::LexProduct: {
      // rightmost coordinate most significant; skip equivalent coordinates
      for (std::size_t i = t.parts.size(); i-- > 0;) {
        bool le = leq_elem_rec(t.parts[i], x.subs[i], y.subs[i]);
        bool ge = leq_elem_rec(t.parts[i], y.subs[i], x.subs[i]);
        if (le && ge) continue;
        return le;
      }
      return true;
    }
    case WpoTerm::K::Star:
      return higman_greedy(t.parts[0], x.subs, y.subs);
    case WpoTerm::K::Pfin:
    case WpoTerm::K::PfinNE: {
      for (const auto& s : x.subs) {
        bool hit = false;
        for (const auto& u : y.subs)
          if (leq_elem_rec(t.parts[0], s, u)) {
            hit = true;
            break;
          }
        if (!hit) return false;
      }
      return true;
    }
    case WpoTerm::K::H:
      return h_leq(t.beta, x, y);
  }
  return false;
}

}  // namespace detail

inline bool leq_elem(const WpoTerm& t, const WpoElem& x, const WpoElem& y) {
  if (!valid_elem(t, x) || !valid_elem(t, y))
    throw std::invalid_argument("element does not fit the order term");
  return detail::leq_elem_rec(t, x, y);
}

// ---------------------------------------------------------------------------
// Finite materialization.

struct Materialized {
  std::vector<WpoElem> elems;
  Poset poset;  // the element order, atoms named by printed elements
};

inline std::string print_elem(const WpoTerm& t, const WpoElem& x) {
  switch (x.k) {
    case WpoElem::K::Unit:
      return "*";
    case WpoElem::K::Atom:
      return t.k == WpoTerm::K::Base ? t.base.name(x.atom)
                                     : std::to_string(x.atom);
    case WpoElem::K::Inj:
      return std::to_string(x.index) + ":" +
             print_elem(t.parts[x.index], x.subs[0]);
    case WpoElem::K::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < x.subs.size(); ++i) {
        if (i) out += ",";
        out += print_elem(t.parts[i], x.subs[i]);
      }
      return out + ")";
    }
    case WpoElem::K::Word: {
      std::string out = "[";
      for (std::size_t i = 0; i < x.subs.size(); ++i) {
        if (i) out += " ";
        out += print_elem(t.parts[0], x.subs[i]);
      }
      return out + "]";
    }
    case WpoElem::K::FinSet: {
      std::string out = "{";
      for (std::size_t i = 0; i < x.subs.size(); ++i) {
        if (i) out += ",";
        out += print_elem(t.parts[0], x.subs[i]);
      }
      return out + "}";
    }
    case WpoElem::K::HPair:
      return "<" + std::to_string(x.layer) + "." + std::to_string(x.pos) + ">";
    case WpoElem::K::HOrd: {
      // clause bookkeeping is not needed to print
      WpoTerm sub = WpoTerm::h_of(omega_pow(x.ord));
      return "[" + to_string(x.ord) + "|" + print_elem(sub, x.subs[0]) + "]";
    }
  }
  return "?";
}

namespace detail {

inline std::optional<std::vector<WpoElem>> materialize_elems(
    const WpoTerm& t, std::size_t cap) {
  using K = WpoTerm::K;
  switch (t.k) {
    case K::Base: {
      if (static_cast<std::size_t>(t.base.size()) > cap) return std::nullopt;
      std::vector<WpoElem> out;
      for (int i = 0; i < t.base.size(); ++i) out.push_back(WpoElem::atom_of(i));
      return out;
    }
    case K::Singleton:
      return std::vector<WpoElem>{WpoElem::unit()};
    case K::DisjointUnion:
    case K::OrderedSum: {
      std::vector<WpoElem> out;
      for (std::size_t i = 0; i < t.parts.size(); ++i) {
        auto sub = materialize_elems(t.parts[i], cap);
        if (!sub) return std::nullopt;
        for (auto& e : *sub) out.push_back(WpoElem::inj(i, std::move(e)));
        if (out.size() > cap) return std::nullopt;
      }
      return out;
    }
    case K::Product:
    case K::LexProduct: {
      std::vector<std::vector<WpoElem>> children;
      for (const auto& p : t.parts) {
        auto sub = materialize_elems(p, cap);
        if (!sub) return std::nullopt;
        children.push_back(std::move(*sub));
      }
      std::vector<WpoElem> out{WpoElem::tuple({})};
      for (const auto& ch : children) {
        std::vector<WpoElem> next;
        for (const auto& partial : out)
          for (const auto& e : ch) {
            auto subs = partial.subs;
            subs.push_back(e);
            next.push_back(WpoElem::tuple(std::move(subs)));
            if (next.size() > cap) return std::nullopt;
          }
        out = std::move(next);
      }
      return out;
    }
    case K::Star: {
      auto sub = materialize_elems(t.parts[0], cap);
      if (!sub || !sub->empty()) return std::nullopt;  // infinite unless empty
      return std::vector<WpoElem>{WpoElem::word({})};
    }
    case K::Pfin:
    case K::PfinNE: {
      auto sub = materialize_elems(t.parts[0], cap);
      if (!sub) return std::nullopt;
      if (sub->size() > 20 || (std::size_t{1} << sub->size()) > cap * 2)
        return std::nullopt;
      std::vector<WpoElem> out;
      std::uint64_t total = std::uint64_t{1} << sub->size();
      for (std::uint64_t mask = t.k == K::PfinNE ? 1 : 0; mask < total; ++mask) {
        std::vector<WpoElem> members;
        for (std::size_t b = 0; b < sub->size(); ++b)
          if (mask & (std::uint64_t{1} << b)) members.push_back((*sub)[b]);
        out.push_back(WpoElem::finset(std::move(members)));
        if (out.size() > cap) return std::nullopt;
      }
      return out;
    }
    case K::H: {
      if (!t.beta.is_finite()) return std::nullopt;
      std::uint64_t n = static_cast<std::uint64_t>(t.beta.finite_value());
      if (n > cap) return std::nullopt;
      std::vector<WpoElem> out;
      if (n == 1) {
        out.push_back(WpoElem::unit());
      } else {
        for (std::uint64_t i = 0; i < n; ++i)
          out.push_back(WpoElem::inj(i, WpoElem::unit()));
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<Materialized> materialize(const WpoTerm& t,
                                               std::size_t cap = 2048) {
  auto elems = detail::materialize_elems(t, cap);
  if (!elems) return std::nullopt;
  Materialized m;
  m.elems = std::move(*elems);
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> rel;
  for (const auto& e : m.elems) names.push_back(print_elem(t, e));
  for (std::size_t i = 0; i < m.elems.size(); ++i)
    for (std::size_t j = 0; j < m.elems.size(); ++j)
      if (i != j && detail::leq_elem_rec(t, m.elems[i], m.elems[j]))
        rel.emplace_back(static_cast<int>(i), static_cast<int>(j));
  m.poset = Poset::from_relations(std::move(names), rel);
  return m;
}

// ---------------------------------------------------------------------------
// Maximal order type evaluation.

struct OValue {
  Ordinal value;
  bool exact = true;
};

inline OValue o_eval(const WpoTerm& t) {
  // Finite carriers are counted exactly.
  if (auto m = materialize(t)) {
    return OValue{Ordinal::finite(static_cast<std::uint64_t>(m->poset.class_count())),
                  true};
  }
  using K = WpoTerm::K;
  switch (t.k) {
    case K::Base:
      return {Ordinal::finite(static_cast<std::uint64_t>(t.base.class_count())), true};
    case K::Singleton:
      return {Ordinal::finite(1), true};
    case K::DisjointUnion: {
      OValue acc{Ordinal(), true};
      for (const auto& p : t.parts) {
        OValue v = o_eval(p);
        acc.value = nat_add(acc.value, v.value);
        acc.exact = acc.exact && v.exact;
      }
      return acc;
    }
    case K::Product: {
      OValue acc{Ordinal::finite(1), true};
      for (const auto& p : t.parts) {
        OValue v = o_eval(p);
        acc.value = nat_mul(acc.value, v.value);
        acc.exact = acc.exact && v.exact;
      }
      return acc;
    }
    case K::LexProduct: {
      Ordinal acc = Ordinal::finite(1);
      for (const auto& p : t.parts) acc = ord_mul(acc, o_eval(p).value);
      return {acc, false};
    }
    case K::OrderedSum: {
      Ordinal acc;
      for (const auto& p : t.parts) acc = ord_add(acc, o_eval(p).value);
      return {acc, false};
    }
    case K::Star: {
      OValue v = o_eval(t.parts[0]);
      return {h_fun(v.value), v.exact};
    }
    case K::Pfin: {
      if (t.parts[0].k == K::H) return {two_pow(t.parts[0].beta), true};
      OValue v = o_eval(t.parts[0]);
      return {two_pow(v.value), false};
    }
    case K::PfinNE: {
      if (t.parts[0].k == K::H)
        return {minus_one_plus(two_pow(t.parts[0].beta)), true};
      OValue v = o_eval(t.parts[0]);
      return {minus_one_plus(two_pow(v.value)), false};
    }
    case K::H:
      return {detail::o_eval_h(t.beta), true};
  }
  return {Ordinal(), false};
}

// ---------------------------------------------------------------------------
// Element enumeration.

struct Enumeration {
  std::vector<WpoElem> elems;
  bool complete = false;  // the whole carrier fit in the budget
};

// Deterministic stream of ordinals below a positive bound: zero plus the
// cofinal family w^e * c, diagonalized.
inline Enumeration enumerate_ordinals_below(const Ordinal& bound, std::size_t n);

namespace detail {

inline Enumeration enumerate_rec(const WpoTerm& t, std::size_t budget);

inline Enumeration merge_round_robin(const WpoTerm& t,
                                     const std::vector<Enumeration>& children,
                                     std::size_t budget) {
  Enumeration out;
  out.complete = true;
  for (const auto& c : children) out.complete = out.complete && c.complete;
  for (std::size_t rank = 0; out.elems.size() < budget; ++rank) {
    bool any = false;
    for (std::size_t i = 0; i < children.size() && out.elems.size() < budget; ++i)
      if (rank < children[i].elems.size()) {
        any = true;
        out.elems.push_back(WpoElem::inj(i, children[i].elems[rank]));
      }
    if (!any) break;
  }
  std::size_t total = 0;
  for (const auto& c : children) total += c.elems.size();
  if (out.elems.size() < total) out.complete = false;
  return out;
}

inline Enumeration tuples_diagonal(const std::vector<Enumeration>& children,
                                   std::size_t budget) {
  Enumeration out;
  out.complete = true;
  for (const auto& c : children) {
    out.complete = out.complete && c.complete;
    if (c.elems.empty()) return out;  // empty product carrier
  }
  // layers by the maximum child rank used
  for (std::size_t m = 0;; ++m) {
    bool layer_possible = false;
    for (const auto& c : children)
      if (m < c.elems.size()) layer_possible = true;
    if (!layer_possible || out.elems.size() >= budget) {
      if (layer_possible) out.complete = false;
      break;
    }
    std::vector<std::size_t> idx(children.size(), 0);
    while (true) {
      std::size_t maxi = 0;
      bool in_range = true;
      for (std::size_t i = 0; i < children.size(); ++i) {
        maxi = std::max(maxi, idx[i]);
        if (idx[i] >= children[i].elems.size()) in_range = false;
      }
      if (in_range && maxi == m && out.elems.size() < budget) {
        std::vector<WpoElem> subs;
        for (std::size_t i = 0; i < children.size(); ++i)
          subs.push_back(children[i].elems[idx[i]]);
        out.elems.push_back(WpoElem::tuple(std::move(subs)));
      }
      // odometer over 0..m per coordinate
      std::size_t i = 0;
      for (; i < children.size(); ++i) {
        if (idx[i] < m) {
          ++idx[i];
          break;
        }
        idx[i] = 0;
      }
      if (i == children.size()) break;
    }
  }
  return out;
}

inline Enumeration enumerate_h(const WpoTerm& t, std::size_t budget);

inline Enumeration enumerate_rec(const WpoTerm& t, std::size_t budget) {
  using K = WpoTerm::K;
  Enumeration out;
  switch (t.k) {
    case K::Base: {
      for (int i = 0; i < t.base.size() && out.elems.size() < budget; ++i)
        out.elems.push_back(WpoElem::atom_of(i));
      out.complete = out.elems.size() == static_cast<std::size_t>(t.base.size());
      return out;
    }
    case K::Singleton: {
      if (budget >= 1) out.elems.push_back(WpoElem::unit());
      out.complete = budget >= 1;
      return out;
    }
    case K::DisjointUnion:
    case K::OrderedSum: {
      std::vector<Enumeration> children;
      for (const auto& p : t.parts) children.push_back(enumerate_rec(p, budget));
      return merge_round_robin(t, children, budget);
    }
    case K::Product:
    case K::LexProduct: {
      std::vector<Enumeration> children;
      for (const auto& p : t.parts) children.push_back(enumerate_rec(p, budget));
      return tuples_diagonal(children, budget);
    }
    case K::Star: {
      Enumeration child = enumerate_rec(t.parts[0], budget);
      if (child.elems.empty()) {
        if (budget >= 1) out.elems.push_back(WpoElem::word({}));
        out.complete = child.complete && budget >= 1;
        return out;
      }
      out.complete = false;
      std::vector<std::vector<WpoElem>> layer{{}};
      out.elems.push_back(WpoElem::word({}));
      while (out.elems.size() < budget && !layer.empty()) {
        std::vector<std::vector<WpoElem>> next;
        for (const auto& w : layer)
          for (const auto& e : child.elems) {
            if (out.elems.size() + next.size() >= budget * 2) break;
            auto v = w;
            v.push_back(e);
            next.push_back(std::move(v));
          }
        for (const auto& w : next) {
          if (out.elems.size() >= budget) break;
          out.elems.push_back(WpoElem::word(w));
        }
        layer = std::move(next);
      }
      return out;
    }
    case K::Pfin:
    case K::PfinNE: {
      Enumeration child = enumerate_rec(t.parts[0], budget);
      std::uint64_t start = t.k == K::PfinNE ? 1 : 0;
      for (std::uint64_t mask = start; out.elems.size() < budget; ++mask) {
        if (child.elems.size() < 63 && mask >= (std::uint64_t{1} << child.elems.size()))
          break;
        std::vector<WpoElem> members;
        bool ok = true;
        for (std::size_t b = 0; b < 63; ++b)
          if (mask & (std::uint64_t{1} << b)) {
            if (b >= child.elems.size()) {
              ok = false;
              break;
            }
            members.push_back(child.elems[b]);
          }
        if (!ok) break;
        out.elems.push_back(WpoElem::finset(std::move(members)));
      }
      std::uint64_t total =
          child.elems.size() < 63 ? (std::uint64_t{1} << child.elems.size()) - start
                                  : ~std::uint64_t{0};
      out.complete = child.complete && out.elems.size() >= total;
      return out;
    }
    case K::H:
      return enumerate_h(t, budget);
  }
  return out;
}

inline Enumeration enumerate_h(const WpoTerm& t, std::size_t budget) {
  HClause c = h_clause(t.beta);
  Enumeration out;
  switch (c.k) {
    case HClause::K::One: {
      if (budget >= 1) out.elems.push_back(WpoElem::unit());
      out.complete = budget >= 1;
      return out;
    }
    case HClause::K::Omega: {
      out.complete = false;
      for (std::uint64_t layer = 1; out.elems.size() < budget; ++layer)
        for (std::uint64_t i = 0; i < layer && out.elems.size() < budget; ++i)
          out.elems.push_back(WpoElem::hpair(layer, i));
      return out;
    }
    case HClause::K::OrdSum: {
      out.complete = false;
      Enumeration idx = enumerate_ordinals_below(c.index_bound, budget);
      std::vector<Enumeration> per;
      for (const auto& d : idx.elems)
        per.push_back(enumerate_rec(WpoTerm::h_of(omega_pow(d.ord)), budget));
      for (std::size_t m = 0; out.elems.size() < budget; ++m) {
        bool any = false;
        for (std::size_t a = 0; a <= m && a < idx.elems.size(); ++a) {
          std::size_t b = m - a;
          if (b < per[a].elems.size()) {
            any = true;
            if (out.elems.size() < budget)
              out.elems.push_back(
                  WpoElem::hord(idx.elems[a].ord, per[a].elems[b]));
          }
        }
        if (!any && m > idx.elems.size() + budget) break;
      }
      return out;
    }
    case HClause::K::Lex: {
      std::vector<Enumeration> children;
      for (const auto& e : c.exps)
        children.push_back(
            enumerate_rec(WpoTerm::h_of(omega_pow(omega_pow(e))), budget));
      return tuples_diagonal(children, budget);
    }
    case HClause::K::Union: {
      std::vector<Enumeration> children;
      std::vector<WpoTerm> parts;
      for (const auto& e : c.exps) {
        parts.push_back(WpoTerm::h_of(omega_pow(e)));
        children.push_back(enumerate_rec(parts.back(), budget));
      }
      WpoTerm dj = WpoTerm::node(WpoTerm::K::DisjointUnion, parts);
      return merge_round_robin(dj, children, budget);
    }
  }
  return out;
}

}  // namespace detail

inline Enumeration enumerate_ordinals_below(const Ordinal& bound,
                                            std::size_t n) {
  Enumeration out;
  if (bound.is_zero()) {
    out.complete = true;
    return out;
  }
  // reuse the element container: each entry carries its ordinal in `ord`
  out.elems.push_back(WpoElem::hord(Ordinal(), WpoElem::unit()));
  const Ordinal& lead = bound.leading_exponent();
  Enumeration exps;
  if (!lead.is_zero()) exps = enumerate_ordinals_below(lead, n);
  // also allow the leading exponent itself (w^lead * c < bound when the
  // coefficient stays under the bound's)
  exps.elems.push_back(WpoElem::hord(lead, WpoElem::unit()));
  bool more = true;
  for (std::size_t m = 0; out.elems.size() < n && more; ++m) {
    more = false;
    for (std::size_t a = 0; a <= m && a < exps.elems.size(); ++a) {
      std::uint64_t ccoef = static_cast<std::uint64_t>(m - a) + 1;
      Ordinal cand = Ordinal::power_term(exps.elems[a].ord, ccoef);
      if (compare(cand, bound) == std::strong_ordering::less) {
        more = true;
        if (out.elems.size() < n)
          out.elems.push_back(WpoElem::hord(std::move(cand), WpoElem::unit()));
      }
    }
    if (m > 4 * n) break;
  }
  out.complete = out.elems.size() < n;
  // completeness here means the family is exhausted, not the set of all
  // ordinals below the bound
  return out;
}

inline Enumeration enumerate_elements(const WpoTerm& t, std::size_t budget) {
  return detail::enumerate_rec(t, budget);
}

// ---------------------------------------------------------------------------
// The constructive embedding H(b) -> H(b2) for b <= b2.

namespace detail {

inline WpoElem some_h_elem(const Ordinal& beta) {
  HClause c = h_clause(beta);
  switch (c.k) {
    case HClause::K::One:
      return WpoElem::unit();
    case HClause::K::Omega:
      return WpoElem::hpair(1, 0);
    case HClause::K::OrdSum:
      return WpoElem::hord(Ordinal(), WpoElem::unit());
    case HClause::K::Lex: {
      std::vector<WpoElem> subs;
      for (const auto& e : c.exps)
        subs.push_back(some_h_elem(omega_pow(omega_pow(e))));
      return WpoElem::tuple(std::move(subs));
    }
    case HClause::K::Union:
      return WpoElem::inj(0, some_h_elem(omega_pow(c.exps[0])));
  }
  return WpoElem::unit();
}

// Coordinates of an element of H(w^gamma) seen as the lex product over the
// CNF exponent list of gamma (a single coordinate when the list is trivial).
inline std::vector<WpoElem> h_flatten(const Ordinal& gamma, const WpoElem& x) {
  std::vector<Ordinal> L = exponent_list(gamma);
  if (L.size() == 1) return {x};
  return x.subs;  // Tuple
}

inline WpoElem h_group(std::vector<WpoElem> coords) {
  if (coords.size() == 1) return std::move(coords[0]);
  return WpoElem::tuple(std::move(coords));
}

// Embeds the j-th summand element of coprod_i H(w^E[i]) into H(w^g).
// Requires w^E[0] + ... <= w^g with E[0] < g, except for the identity case
// of a single summand with E[0] == g.
inline WpoElem embed_coprod(const std::vector<Ordinal>& E, std::size_t j,
                            const WpoElem& xj, const Ordinal& g) {
  if (E.size() == 1 && E[0] == g) return xj;
  if (g.is_zero()) throw invariant_error("coproduct does not fit");
  if (g == Ordinal::finite(1)) {
    // target H(w): a fresh antichain layer of the right width
    return WpoElem::hpair(E.size(), j);
  }
  if (g.is_power_of_omega()) {
    // target is an ordinal-indexed sum over indices below g
    if (E.size() == 1) return WpoElem::hord(E[0], xj);
    Ordinal mid = ord_add(E[0], Ordinal::finite(1));
    return WpoElem::hord(mid, embed_coprod(E, j, xj, mid));
  }
  if (auto pred = successor_split(g)) {
    // H(w^g) = H(w^pred) x H(w), last coordinate most significant
    WpoElem sub = embed_coprod({E[j]}, 0, xj, *pred);
    std::vector<WpoElem> coords = h_flatten(*pred, sub);
    coords.push_back(WpoElem::hpair(E.size(), j));
    return WpoElem::tuple(std::move(coords));
  }
  // g is a limit but not a power of omega: go through a successor exponent
  // and pad the remaining lex coordinates with constants
  Ordinal mid = ord_add(E[0], Ordinal::finite(1));
  WpoElem y = embed_coprod(E, j, xj, mid);
  std::vector<Ordinal> Lg = exponent_list(g);
  std::vector<Ordinal> Lm = exponent_list(mid);
  std::size_t c = 0;
  while (c < Lg.size() && c < Lm.size() && Lg[c] == Lm[c]) ++c;
  std::vector<WpoElem> ycoords = h_flatten(mid, y);
  std::vector<WpoElem> coords;
  if (c == Lm.size()) {
    coords = std::move(ycoords);
  } else {
    // group the source tail into one summand of the target factor at c
    Ordinal tail;
    for (std::size_t i = c; i < Lm.size(); ++i)
      tail = nat_add(tail, omega_pow(Lm[i]));
    std::vector<WpoElem> tail_coords(ycoords.begin() + c, ycoords.end());
    coords.assign(ycoords.begin(), ycoords.begin() + c);
    coords.push_back(WpoElem::hord(tail, h_group(std::move(tail_coords))));
  }
  for (std::size_t i = coords.size(); i < Lg.size(); ++i)
    coords.push_back(some_h_elem(omega_pow(omega_pow(Lg[i]))));
  return WpoElem::tuple(std::move(coords));
}

}  // namespace detail

// Order-preserving and order-reflecting map from H(b) into H(b2).
inline WpoElem h_embed_apply(const Ordinal& b, const Ordinal& b2,
                             const WpoElem& x) {
  if (b.is_zero() || compare(b, b2) == std::strong_ordering::greater)
    throw std::invalid_argument("h_embed needs 1 <= b <= b2");
  if (b == b2) return x;
  std::vector<Ordinal> S = exponent_list(b);
  std::vector<Ordinal> T = exponent_list(b2);
  std::size_t j = 0;
  const WpoElem* xj = &x;
  if (S.size() > 1) {
    j = x.index;
    xj = &x.subs[0];
  }
  auto inject = [&](std::size_t idx, WpoElem e) {
    if (T.size() == 1) return e;
    return WpoElem::inj(idx, std::move(e));
  };
  std::size_t k = 0;
  while (k < S.size() && k < T.size() && S[k] == T[k]) ++k;
  if (k == S.size()) return inject(j, *xj);  // summand-wise identity
  if (k >= T.size() || compare(S[k], T[k]) != std::strong_ordering::less)
    throw invariant_error("exponent lists out of order in h_embed");
  if (j < k) return inject(j, *xj);
  std::vector<Ordinal> E(S.begin() + k, S.end());
  return inject(k, detail::embed_coprod(E, j - k, *xj, T[k]));
}

// ---------------------------------------------------------------------------
// Textual form of order terms, mirroring the constructor names.

inline std::string print_wpo(const WpoTerm& t) {
  using K = WpoTerm::K;
  auto list = [&](const char* name) {
    std::string out = std::string(name) + "(";
    for (std::size_t i = 0; i < t.parts.size(); ++i) {
      if (i) out += ", ";
      out += print_wpo(t.parts[i]);
    }
    return out + ")";
  };
  switch (t.k) {
    case K::Base: {
      std::string out = "base[";
      for (int i = 0; i < t.base.size(); ++i) {
        if (i) out += ",";
        out += t.base.name(i);
      }
      return out + "]";
    }
    case K::Singleton:
      return "Singleton";
    case K::DisjointUnion:
      return list("DisjointUnion");
    case K::Product:
      return list("Product");
    case K::LexProduct:
      return list("LexProduct");
    case K::OrderedSum:
      return list("OrderedSum");
    case K::Star:
      return list("Star");
    case K::PfinNE:
      return list("PfinNE");
    case K::Pfin:
      return list("Pfin");
    case K::H:
      return "H(" + to_string(t.beta) + ")";
  }
  return "?";
}

}  // namespace wqo
