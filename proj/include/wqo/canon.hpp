#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wqo/errors.hpp"
#include "wqo/poset.hpp"
#include "wqo/words.hpp"

namespace wqo {

// Element of the iterated nonempty-finite-powerset alphabets.  Level 0 is a
// base letter; level k > 0 is a nonempty finite set of strictly lower-level
// elements.  The level doubles as the disjoint-union tag, so a mixed-level
// set is a set over the tagged union of the lower levels.
struct PkElem {
  int level = 0;
  int letter = -1;               // level 0
  std::vector<PkElem> items;     // level > 0, canonically sorted, nonempty

  static PkElem base(int letter) {
    PkElem e;
    e.letter = letter;
    return e;
  }
  static PkElem set(std::vector<PkElem> items);
};

// Structural total order used to pick the canonical enumeration order of a
// set (the choice is immaterial up to equivalence of the word images).
inline int pk_cmp(const PkElem& a, const PkElem& b) {
  if (a.level != b.level) return a.level < b.level ? -1 : 1;
  if (a.level == 0) {
    if (a.letter != b.letter) return a.letter < b.letter ? -1 : 1;
    return 0;
  }
  std::size_t n = std::min(a.items.size(), b.items.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = pk_cmp(a.items[i], b.items[i])) return c;
  if (a.items.size() != b.items.size())
    return a.items.size() < b.items.size() ? -1 : 1;
  return 0;
}

inline bool operator==(const PkElem& a, const PkElem& b) {
  return pk_cmp(a, b) == 0;
}

inline PkElem PkElem::set(std::vector<PkElem> in) {
  if (in.empty()) throw std::invalid_argument("powerset layers are nonempty");
  std::sort(in.begin(), in.end(),
            [](const PkElem& x, const PkElem& y) { return pk_cmp(x, y) < 0; });
  in.erase(std::unique(in.begin(), in.end()), in.end());
  int lvl = 0;
  for (const auto& e : in) lvl = std::max(lvl, e.level + 1);
  PkElem out;
  out.level = lvl;
  out.items = std::move(in);
  return out;
}

inline void validate_pk(const Poset& alphabet, const PkElem& e) {
  if (e.level == 0) {
    if (e.letter < 0 || e.letter >= alphabet.size())
      throw std::invalid_argument("letter outside the alphabet");
    if (!e.items.empty())
      throw std::invalid_argument("level-0 element with items");
    return;
  }
  if (e.items.empty())
    throw std::invalid_argument("powerset layers are nonempty");
  for (const auto& sub : e.items) {
    if (sub.level >= e.level)
      throw std::invalid_argument("member tag not below the ambient level");
    validate_pk(alphabet, sub);
  }
}

// Recursive majorization order; unequal tags are incomparable summands.
inline bool leq_pk(const Poset& alphabet, const PkElem& a, const PkElem& b) {
  if (a.level != b.level) return false;
  if (a.level == 0) return alphabet.le(a.letter, b.letter);
  for (const auto& s : a.items) {
    bool hit = false;
    for (const auto& t : b.items)
      if (leq_pk(alphabet, s, t)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

// phi: level-0 elements become letters, a set becomes the omega-power of the
// concatenated images of its members in canonical order.
inline WordTerm phi(const PkElem& e) {
  if (e.level > 2)
    throw unsupported_level("phi produces word terms only up to level 2");
  if (e.level == 0) return WordTerm::lit(e.letter);
  std::vector<WordTerm> imgs;
  for (const auto& sub : e.items) imgs.push_back(phi(sub));
  return WordTerm::pow(WordTerm::cat(std::move(imgs)));
}

inline WordTerm phi_word(const std::vector<PkElem>& word) {
  std::vector<WordTerm> imgs;
  for (const auto& e : word) imgs.push_back(phi(e));
  return WordTerm::cat(std::move(imgs));
}

// The extension with a distinguished empty set mapping to the empty word.
inline WordTerm phi0(const std::optional<PkElem>& e) {
  return e ? phi(*e) : WordTerm::eps();
}

inline std::string print_pk(const Poset& alphabet, const PkElem& e) {
  if (e.level == 0) return alphabet.name(e.letter);
  std::string out = "{";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += ", ";
    out += print_pk(alphabet, e.items[i]);
  }
  return out + "}";
}

namespace detail {

// Letter count of phi(e): how many positions one copy of the image period
// occupies at the letter level.
inline std::size_t phi_letter_count(const PkElem& e) {
  if (e.level == 0) return 1;
  std::size_t n = 0;
  for (const auto& sub : e.items) n += phi_letter_count(sub);
  return n;
}

// Witness that phi(a) embeds in phi(b), with every address prefixed by
// `prefix`.  Follows the period-grouping construction: each copy of phi(a)'s
// period advances the target period by as many copies as a has members.
inline EmbeddingWitness phi_witness_rec(const Poset& alphabet, const PkElem& a,
                                        const PkElem& b,
                                        const TargetAddr& prefix) {
  if (a.level == 0) {
    EmbeddingWitness w;
    w.k = EmbeddingWitness::K::Lit;
    w.addr = prefix;
    return w;
  }
  EmbeddingWitness w;
  w.k = EmbeddingWitness::K::Omega;
  w.anchor = prefix;
  w.stride = a.items.size();
  std::vector<EmbeddingWitness> parts;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const PkElem& s = a.items[i];
    std::optional<std::size_t> j;
    for (std::size_t cand = 0; cand < b.items.size(); ++cand)
      if (leq_pk(alphabet, s, b.items[cand])) {
        j = cand;
        break;
      }
    if (!j) throw std::invalid_argument("phi_witness needs leq_pk inputs");
    TargetAddr sub = prefix;
    sub.steps.push_back(AddrStep{true, 0, i});
    if (b.items.size() > 1) sub.steps.push_back(AddrStep{false, *j, 0});
    parts.push_back(phi_witness_rec(alphabet, s, b.items[*j], sub));
  }
  if (a.items.size() > 1) {
    EmbeddingWitness cat;
    cat.k = EmbeddingWitness::K::Cat;
    cat.parts = std::move(parts);
    w.pattern.push_back(std::move(cat));
  } else {
    w.pattern.push_back(std::move(parts[0]));
  }
  return w;
}

}  // namespace detail

// Constructive witness for the monotonicity of phi: accepted by
// witness_check whenever leq_pk(e1, e2).
inline EmbeddingWitness phi_witness(const Poset& alphabet, const PkElem& e1,
                                    const PkElem& e2) {
  if (!leq_pk(alphabet, e1, e2))
    throw std::invalid_argument("phi_witness needs leq_pk inputs");
  return detail::phi_witness_rec(alphabet, e1, e2, TargetAddr{});
}

namespace detail {

inline PkElem decompose_item(const WordTerm& item) {
  if (item.k == WordTerm::K::Lit) return PkElem::base(item.letter);
  // an omega-power item; its members are the decompositions of the distinct
  // component items of the body
  std::vector<PkElem> members;
  for (const WordTerm* sub : word_items(item.body()))
    members.push_back(decompose_item(*sub));
  return PkElem::set(std::move(members));
}

}  // namespace detail

// Tagged-union word whose phi-image is equivalent to s; defined for
// normalized s of length below w^k, k <= 2.
inline std::vector<PkElem> decompose(const WordTerm& s_in, int k) {
  if (k < 0 || k > 2)
    throw unsupported_level("decompose supports k <= 2");
  WordTerm s = normalize(s_in);
  if (!(compare(length(s), omega_pow(Ordinal::finite(static_cast<std::uint64_t>(k)))) ==
        std::strong_ordering::less))
    throw std::invalid_argument("decompose needs length below w^k");
  std::vector<PkElem> out;
  for (const WordTerm* item : detail::word_items(s))
    out.push_back(detail::decompose_item(*item));
  return out;
}

// Splitting of a word of length exactly w^k into a tagged-union word plus a
// final indecomposable part.
inline std::pair<std::vector<PkElem>, PkElem> decompose_eq(const WordTerm& s_in,
                                                           int k) {
  if (k < 0 || k > 2)
    throw unsupported_level("decompose_eq supports k <= 2");
  WordTerm s = normalize(s_in);
  if (!(length(s) == omega_pow(Ordinal::finite(static_cast<std::uint64_t>(k)))))
    throw std::invalid_argument("decompose_eq needs length exactly w^k");
  auto items = detail::word_items(s);
  if (items.empty()) throw std::invalid_argument("decompose_eq of empty word");
  std::vector<PkElem> prefix;
  for (std::size_t i = 0; i + 1 < items.size(); ++i)
    prefix.push_back(detail::decompose_item(*items[i]));
  return {std::move(prefix), detail::decompose_item(*items.back())};
}

}  // namespace wqo
