#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wqo/errors.hpp"
#include "wqo/ordinal.hpp"
#include "wqo/poset.hpp"

namespace wqo {

// Finite-image transfinite word as a term.  Always normalized: Cat lists are
// flat, contain no Eps and have length >= 2; Pow bodies are nonempty.
// Letters are atom indices into an alphabet Poset, which travels separately.
struct WordTerm {
  enum class K { Eps, Lit, Cat, Pow };
  K k = K::Eps;
  int letter = -1;
  std::vector<WordTerm> parts;  // Cat items, or Pow body at parts[0]

  static WordTerm eps() { return WordTerm{}; }

  static WordTerm lit(int letter) {
    WordTerm w;
    w.k = K::Lit;
    w.letter = letter;
    return w;
  }

  static WordTerm cat(std::vector<WordTerm> items) {
    std::vector<WordTerm> flat;
    for (auto& it : items) {
      if (it.k == K::Eps) continue;
      if (it.k == K::Cat)
        for (auto& sub : it.parts) flat.push_back(std::move(sub));
      else
        flat.push_back(std::move(it));
    }
    if (flat.empty()) return eps();
    if (flat.size() == 1) return std::move(flat[0]);
    WordTerm w;
    w.k = K::Cat;
    w.parts = std::move(flat);
    return w;
  }

  static WordTerm pow(WordTerm body) {
    if (body.k == K::Eps)
      throw std::invalid_argument("empty omega-power body");
    WordTerm w;
    w.k = K::Pow;
    w.parts.push_back(std::move(body));
    return w;
  }

  const WordTerm& body() const { return parts[0]; }

  friend bool operator==(const WordTerm& a, const WordTerm& b) {
    if (a.k != b.k || a.letter != b.letter) return false;
    return a.parts == b.parts;
  }
};

inline WordTerm normalize(const WordTerm& w) {
  switch (w.k) {
    case WordTerm::K::Eps:
    case WordTerm::K::Lit:
      return w;
    case WordTerm::K::Cat: {
      std::vector<WordTerm> items;
      for (const auto& p : w.parts) items.push_back(normalize(p));
      return WordTerm::cat(std::move(items));
    }
    case WordTerm::K::Pow:
      return WordTerm::pow(normalize(w.body()));
  }
  return WordTerm::eps();
}

inline int level(const WordTerm& w) {
  switch (w.k) {
    case WordTerm::K::Eps:
    case WordTerm::K::Lit:
      return 0;
    case WordTerm::K::Cat: {
      int m = 0;
      for (const auto& p : w.parts) m = std::max(m, level(p));
      return m;
    }
    case WordTerm::K::Pow:
      return level(w.body()) + 1;
  }
  return 0;
}

inline Ordinal length(const WordTerm& w) {
  switch (w.k) {
    case WordTerm::K::Eps:
      return Ordinal();
    case WordTerm::K::Lit:
      return Ordinal::finite(1);
    case WordTerm::K::Cat: {
      Ordinal n;
      for (const auto& p : w.parts) n = ord_add(n, length(p));
      return n;
    }
    case WordTerm::K::Pow:
      return ord_mul(length(w.body()), Ordinal::omega());
  }
  return Ordinal();
}

namespace detail {
inline void collect_letters(const WordTerm& w, std::vector<int>& out) {
  if (w.k == WordTerm::K::Lit) out.push_back(w.letter);
  for (const auto& p : w.parts) collect_letters(p, out);
}
}  // namespace detail

inline std::vector<int> image(const WordTerm& w) {
  std::vector<int> out;
  detail::collect_letters(w, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::string print_word(const Poset& alphabet, const WordTerm& w) {
  switch (w.k) {
    case WordTerm::K::Eps:
      return "";
    case WordTerm::K::Lit:
      return alphabet.name(w.letter);
    case WordTerm::K::Cat: {
      std::string out;
      for (const auto& p : w.parts) {
        if (!out.empty()) out += " ";
        out += print_word(alphabet, p);
      }
      return out;
    }
    case WordTerm::K::Pow:
      return "(" + print_word(alphabet, w.body()) + ")^w";
  }
  return "";
}

// S <= T in the majorization order: every element of S below some element
// of T.
inline bool le_m(const Poset& p, const std::vector<int>& s,
                 const std::vector<int>& t) {
  for (int a : s) {
    bool hit = false;
    for (int b : t)
      if (p.le(a, b)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

namespace detail {

inline std::vector<const WordTerm*> word_items(const WordTerm& w) {
  std::vector<const WordTerm*> out;
  if (w.k == WordTerm::K::Cat)
    for (const auto& p : w.parts) out.push_back(&p);
  else if (w.k != WordTerm::K::Eps)
    out.push_back(&w);
  return out;
}

inline bool letter_in_image(const Poset& p, int x, const std::vector<int>& img) {
  for (int y : img)
    if (p.le(x, y)) return true;
  return false;
}

// Per-item matching used inside level-2 blocks: both arguments are items of
// level <= 1 bodies (letters or omega-powers of finite words).
inline bool item_le(const Poset& p, const WordTerm& u, const WordTerm& c) {
  if (u.k == WordTerm::K::Lit) {
    if (c.k == WordTerm::K::Lit) return p.le(u.letter, c.letter);
    return letter_in_image(p, u.letter, image(c.body()));
  }
  if (c.k != WordTerm::K::Pow) return false;
  return le_m(p, image(u.body()), image(c.body()));
}

// Precomputed view of one concatenation item.
struct ItemInfo {
  const WordTerm* item = nullptr;
  bool is_lit = false;
  int letter = -1;
  int body_level = 0;                     // omega-powers only
  std::vector<int> img;                   // image of the body
  std::vector<const WordTerm*> sub;       // body items (level-2 blocks)
  std::vector<char> sub_is_pow;
  std::vector<std::vector<int>> sub_img;  // images of sub-power bodies
};

inline ItemInfo item_info(const WordTerm& w) {
  ItemInfo out;
  out.item = &w;
  if (w.k == WordTerm::K::Lit) {
    out.is_lit = true;
    out.letter = w.letter;
    return out;
  }
  out.body_level = level(w.body());
  out.img = image(w.body());
  if (out.body_level >= 1) {
    out.sub = word_items(w.body());
    for (const WordTerm* d : out.sub) {
      out.sub_is_pow.push_back(d->k == WordTerm::K::Pow ? 1 : 0);
      out.sub_img.push_back(d->k == WordTerm::K::Pow ? image(d->body())
                                                     : std::vector<int>{d->letter});
    }
  }
  return out;
}

// Matching a source item into a tail-equivalent remainder of a target block:
// the block stays available afterwards.
inline bool can_within(const Poset& p, const ItemInfo& s, const ItemInfo& c) {
  if (c.is_lit) return false;
  if (s.is_lit) return letter_in_image(p, s.letter, c.img);
  // s is an omega-power; it fits inside a single copy of c's body only when
  // the body itself contains a sub-power that majorizes it.
  if (c.body_level != 1 || s.body_level != 0) return false;
  for (std::size_t d = 0; d < c.sub.size(); ++d)
    if (c.sub_is_pow[d] && le_m(p, s.img, c.sub_img[d])) return true;
  return false;
}

// Matching a source item cofinally into a target block: the block is spent.
inline bool can_consume(const Poset& p, const ItemInfo& s, const ItemInfo& c) {
  if (c.is_lit) return s.is_lit && p.le(s.letter, c.letter);
  if (s.is_lit) return false;
  if (s.body_level == 0) return le_m(p, s.img, c.img);
  if (s.body_level != 1 || c.body_level != 1) return false;
  // level-2 into level-2: every source component under some target component
  for (std::size_t u = 0; u < s.sub.size(); ++u) {
    bool hit = false;
    for (std::size_t d = 0; d < c.sub.size() && !hit; ++d) {
      if (s.sub_is_pow[u])
        hit = c.sub_is_pow[d] && le_m(p, s.sub_img[u], c.sub_img[d]);
      else
        hit = letter_in_image(p, s.sub[u]->letter, c.sub_img[d]);
    }
    if (!hit) return false;
  }
  return true;
}

enum class Move : char { None, Skip, Within, Consume };

struct EmbedDp {
  const Poset& p;
  std::vector<const WordTerm*> src, tgt;
  std::vector<ItemInfo> src_info, tgt_info;
  std::vector<char> memo;  // 0 unknown, 1 yes, 2 no
  std::vector<Move> move;
  std::size_t width = 0;

  EmbedDp(const Poset& p_, const WordTerm& s, const WordTerm& t)
      : p(p_), src(word_items(s)), tgt(word_items(t)) {
    for (const WordTerm* w : src) src_info.push_back(item_info(*w));
    for (const WordTerm* w : tgt) tgt_info.push_back(item_info(*w));
    width = tgt.size() + 1;
    memo.assign((src.size() + 1) * width, 0);
    move.assign((src.size() + 1) * width, Move::None);
  }

  bool run(std::size_t i, std::size_t j) {
    if (i == src.size()) return true;
    if (j == tgt.size()) return false;
    char& m = memo[i * width + j];
    if (m) return m == 1;
    bool ok = false;
    Move mv = Move::None;
    if (can_within(p, src_info[i], tgt_info[j]) && run(i + 1, j)) {
      ok = true;
      mv = Move::Within;
    } else if (can_consume(p, src_info[i], tgt_info[j]) && run(i + 1, j + 1)) {
      ok = true;
      mv = Move::Consume;
    } else if (run(i, j + 1)) {
      ok = true;
      mv = Move::Skip;
    }
    m = ok ? 1 : 2;
    move[i * width + j] = mv;
    return ok;
  }

  Move move_at(std::size_t i, std::size_t j) const {
    return move[i * width + j];
  }
};

}  // namespace detail

inline bool is_normalized(const WordTerm& w) {
  switch (w.k) {
    case WordTerm::K::Eps:
    case WordTerm::K::Lit:
      return true;
    case WordTerm::K::Cat: {
      if (w.parts.size() < 2) return false;
      for (const auto& p : w.parts)
        if (p.k == WordTerm::K::Eps || p.k == WordTerm::K::Cat ||
            !is_normalized(p))
          return false;
      return true;
    }
    case WordTerm::K::Pow:
      return w.parts.size() == 1 && w.body().k != WordTerm::K::Eps &&
             is_normalized(w.body());
  }
  return false;
}

// Exact decision for the word-embedding order on terms of level <= 2
// (lengths below w^3).
inline bool embeds_exact(const Poset& alphabet, const WordTerm& s_in,
                         const WordTerm& t_in) {
  WordTerm s_store, t_store;
  const WordTerm* s = &s_in;
  const WordTerm* t = &t_in;
  if (!is_normalized(s_in)) {
    s_store = normalize(s_in);
    s = &s_store;
  }
  if (!is_normalized(t_in)) {
    t_store = normalize(t_in);
    t = &t_store;
  }
  if (level(*s) > 2 || level(*t) > 2)
    throw unsupported_level("embedding decision needs level <= 2");
  detail::EmbedDp dp(alphabet, *s, *t);
  return dp.run(0, 0);
}

// Every omega-power in s replaced by n concatenated copies of its body.
inline WordTerm unfold_all(const WordTerm& w, std::uint64_t n) {
  switch (w.k) {
    case WordTerm::K::Eps:
    case WordTerm::K::Lit:
      return w;
    case WordTerm::K::Cat: {
      std::vector<WordTerm> items;
      for (const auto& p : w.parts) items.push_back(unfold_all(p, n));
      return WordTerm::cat(std::move(items));
    }
    case WordTerm::K::Pow: {
      WordTerm body = unfold_all(w.body(), n);
      std::vector<WordTerm> items;
      for (std::uint64_t i = 0; i < n; ++i) items.push_back(body);
      return WordTerm::cat(std::move(items));
    }
  }
  return WordTerm::eps();
}

// Necessary-condition family: truncations of s must embed whenever s does.
inline bool unfold_oracle(const Poset& alphabet, const WordTerm& s,
                          const WordTerm& t, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("unfold_oracle needs n >= 1");
  for (std::uint64_t k = 1; k <= n; ++k)
    if (!embeds_exact(alphabet, unfold_all(s, k), t)) return false;
  return true;
}

// Decomposition of a word of length exactly w: finite prefix plus the set of
// letters that repeat forever.
struct OmegaCanonical {
  WordTerm prefix;
  std::vector<int> tailset;
};

inline OmegaCanonical canonical_omega(const WordTerm& w_in) {
  WordTerm w = normalize(w_in);
  if (!(length(w) == Ordinal::omega()))
    throw std::invalid_argument("canonical_omega needs length exactly w");
  if (w.k == WordTerm::K::Pow)
    return OmegaCanonical{WordTerm::eps(), image(w.body())};
  // Cat of literals followed by one omega-power of a finite word.
  std::vector<WordTerm> prefix(w.parts.begin(), w.parts.end() - 1);
  return OmegaCanonical{WordTerm::cat(std::move(prefix)),
                        image(w.parts.back().body())};
}

// Representative term-expressible nonempty tails of an omega-power, used by
// the indecomposability checks.
inline std::vector<WordTerm> omega_tails(const WordTerm& w_in) {
  WordTerm w = normalize(w_in);
  if (w.k != WordTerm::K::Pow)
    throw std::invalid_argument("omega_tails wants an omega-power");
  std::vector<WordTerm> out;
  out.push_back(w);
  auto items = detail::word_items(w.body());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) {
      std::vector<WordTerm> rest;
      for (std::size_t j = i; j < items.size(); ++j) rest.push_back(*items[j]);
      rest.push_back(w);
      out.push_back(WordTerm::cat(std::move(rest)));
    }
    if (items[i]->k == WordTerm::K::Pow) {
      // tails starting inside the i-th sub-power, mid-copy
      auto sub = detail::word_items(items[i]->body());
      for (std::size_t q = 1; q < sub.size(); ++q) {
        std::vector<WordTerm> rest;
        for (std::size_t r = q; r < sub.size(); ++r) rest.push_back(*sub[r]);
        rest.push_back(*items[i]);
        for (std::size_t j = i + 1; j < items.size(); ++j)
          rest.push_back(*items[j]);
        rest.push_back(w);
        out.push_back(WordTerm::cat(std::move(rest)));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding witnesses: finite certificates for s <= t, checkable at any level.

// Address of a position in the sequence denoted by a term: part indices at
// Cat nodes, copy numbers at Pow nodes.
struct AddrStep {
  bool is_copy = false;
  std::size_t part = 0;
  std::uint64_t copy = 0;

  friend bool operator==(const AddrStep&, const AddrStep&) = default;
};

struct TargetAddr {
  std::vector<AddrStep> steps;

  friend bool operator==(const TargetAddr&, const TargetAddr&) = default;
};

struct EmbeddingWitness {
  enum class K { Lit, Cat, Omega };
  K k = K::Lit;
  TargetAddr addr;                          // Lit
  std::vector<EmbeddingWitness> parts;      // Cat
  std::vector<EmbeddingWitness> prologue;   // Omega: explicit first copies
  std::vector<EmbeddingWitness> pattern;    // Omega: repeating copies
  TargetAddr anchor;                        // Omega: a Pow node of the target
  std::uint64_t stride = 1;                 // target copies advanced per round
};

namespace detail {

inline const WordTerm* resolve_node(const WordTerm& t, const TargetAddr& a) {
  const WordTerm* cur = &t;
  for (const auto& st : a.steps) {
    if (cur->k == WordTerm::K::Cat) {
      if (st.is_copy || st.part >= cur->parts.size())
        throw std::invalid_argument("witness address does not follow the term");
      cur = &cur->parts[st.part];
    } else if (cur->k == WordTerm::K::Pow) {
      if (!st.is_copy)
        throw std::invalid_argument("witness address does not follow the term");
      cur = &cur->body();
    } else {
      throw std::invalid_argument("witness address descends past a letter");
    }
  }
  return cur;
}

// -1, 0, 1 on the position order of two complete addresses.
inline int addr_cmp(const TargetAddr& a, const TargetAddr& b) {
  std::size_t n = std::min(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.steps[i];
    const auto& y = b.steps[i];
    if (x.is_copy != y.is_copy)
      throw std::invalid_argument("addresses disagree on term structure");
    if (x.is_copy) {
      if (x.copy != y.copy) return x.copy < y.copy ? -1 : 1;
    } else {
      if (x.part != y.part) return x.part < y.part ? -1 : 1;
    }
  }
  if (a.steps.size() != b.steps.size())
    return a.steps.size() < b.steps.size() ? -1 : 1;
  return 0;
}

// Is address b strictly after every position inside the subtree at path?
inline bool after_subtree(const TargetAddr& path, const TargetAddr& b) {
  std::size_t n = std::min(path.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = path.steps[i];
    const auto& y = b.steps[i];
    if (x.is_copy != y.is_copy) return false;
    if (x.is_copy) {
      if (x.copy != y.copy) return y.copy > x.copy;
    } else {
      if (x.part != y.part) return y.part > x.part;
    }
  }
  return false;  // b is the subtree itself, an ancestor, or lies inside it
}

struct AddrBound {
  TargetAddr path;
  bool block_sup = false;  // supremum over the omega-power subtree at path
};

inline std::optional<TargetAddr> first_addr(const EmbeddingWitness& w) {
  switch (w.k) {
    case EmbeddingWitness::K::Lit:
      return w.addr;
    case EmbeddingWitness::K::Cat:
      for (const auto& p : w.parts)
        if (auto a = first_addr(p)) return a;
      return std::nullopt;
    case EmbeddingWitness::K::Omega:
      for (const auto& p : w.prologue)
        if (auto a = first_addr(p)) return a;
      for (const auto& p : w.pattern)
        if (auto a = first_addr(p)) return a;
      return std::nullopt;
  }
  return std::nullopt;
}

inline std::optional<AddrBound> last_bound(const EmbeddingWitness& w) {
  switch (w.k) {
    case EmbeddingWitness::K::Lit:
      return AddrBound{w.addr, false};
    case EmbeddingWitness::K::Cat:
      for (auto it = w.parts.rbegin(); it != w.parts.rend(); ++it)
        if (auto b = last_bound(*it)) return b;
      return std::nullopt;
    case EmbeddingWitness::K::Omega:
      return AddrBound{w.anchor, true};
  }
  return std::nullopt;
}

inline bool bound_before(const AddrBound& hi, const TargetAddr& lo) {
  if (hi.block_sup) return after_subtree(hi.path, lo);
  return addr_cmp(hi.path, lo) < 0;
}

inline bool ordered_chain(const std::vector<const EmbeddingWitness*>& seq) {
  std::optional<AddrBound> prev;
  for (const EmbeddingWitness* w : seq) {
    auto lo = first_addr(*w);
    if (lo && prev && !bound_before(*prev, *lo)) return false;
    if (auto b = last_bound(*w)) prev = b;
  }
  return true;
}

inline bool is_proper_prefix(const TargetAddr& pre, const TargetAddr& a) {
  if (a.steps.size() <= pre.steps.size()) return false;
  for (std::size_t i = 0; i < pre.steps.size(); ++i)
    if (!(a.steps[i] == pre.steps[i])) return false;
  return true;
}

inline void collect_addresses(const EmbeddingWitness& w,
                              std::vector<const TargetAddr*>& out) {
  switch (w.k) {
    case EmbeddingWitness::K::Lit:
      out.push_back(&w.addr);
      return;
    case EmbeddingWitness::K::Cat:
      for (const auto& p : w.parts) collect_addresses(p, out);
      return;
    case EmbeddingWitness::K::Omega:
      out.push_back(&w.anchor);
      for (const auto& p : w.prologue) collect_addresses(p, out);
      for (const auto& p : w.pattern) collect_addresses(p, out);
      return;
  }
}

inline TargetAddr shifted(const TargetAddr& a, std::size_t anchor_len,
                          std::uint64_t delta) {
  TargetAddr out = a;
  if (out.steps.size() > anchor_len && out.steps[anchor_len].is_copy)
    out.steps[anchor_len].copy += delta;
  return out;
}

inline bool witness_check_rec(const Poset& p, const WordTerm& s,
                              const WordTerm& t, const EmbeddingWitness& w);

inline bool check_omega(const Poset& p, const WordTerm& s, const WordTerm& t,
                        const EmbeddingWitness& w) {
  const WordTerm* anchor_node = resolve_node(t, w.anchor);
  if (anchor_node->k != WordTerm::K::Pow)
    throw std::invalid_argument("witness anchor is not an omega-power");
  if (w.pattern.empty() || w.stride < 1)
    throw std::invalid_argument("witness schedule is empty");
  const WordTerm& body = s.body();
  for (const auto& sub : w.prologue)
    if (!witness_check_rec(p, body, t, sub)) return false;
  for (const auto& sub : w.pattern) {
    if (!witness_check_rec(p, body, t, sub)) return false;
    std::vector<const TargetAddr*> addrs;
    collect_addresses(sub, addrs);
    for (const TargetAddr* a : addrs)
      if (!is_proper_prefix(w.anchor, *a)) return false;
  }
  // Strictly increasing through one full period plus the first shifted copy.
  std::vector<const EmbeddingWitness*> seq;
  for (const auto& sub : w.prologue) seq.push_back(&sub);
  for (const auto& sub : w.pattern) seq.push_back(&sub);
  if (!ordered_chain(seq)) return false;
  if (auto hi = last_bound(w.pattern.back())) {
    if (auto lo = first_addr(w.pattern.front())) {
      TargetAddr lo1 = shifted(*lo, w.anchor.steps.size(), w.stride);
      if (!bound_before(*hi, lo1)) return false;
    }
  }
  return true;
}

inline bool witness_check_rec(const Poset& p, const WordTerm& s,
                              const WordTerm& t, const EmbeddingWitness& w) {
  switch (s.k) {
    case WordTerm::K::Eps:
      if (w.k != EmbeddingWitness::K::Cat || !w.parts.empty())
        throw std::invalid_argument("witness shape mismatch at empty word");
      return true;
    case WordTerm::K::Lit: {
      if (w.k != EmbeddingWitness::K::Lit)
        throw std::invalid_argument("witness shape mismatch at letter");
      const WordTerm* node = resolve_node(t, w.addr);
      if (node->k != WordTerm::K::Lit)
        throw std::invalid_argument("witness letter address is not a letter");
      return p.le(s.letter, node->letter);
    }
    case WordTerm::K::Cat: {
      if (w.k != EmbeddingWitness::K::Cat || w.parts.size() != s.parts.size())
        throw std::invalid_argument("witness shape mismatch at concatenation");
      for (std::size_t i = 0; i < s.parts.size(); ++i)
        if (!witness_check_rec(p, s.parts[i], t, w.parts[i])) return false;
      std::vector<const EmbeddingWitness*> seq;
      for (const auto& part : w.parts) seq.push_back(&part);
      return ordered_chain(seq);
    }
    case WordTerm::K::Pow:
      if (w.k != EmbeddingWitness::K::Omega)
        throw std::invalid_argument("witness shape mismatch at omega-power");
      return check_omega(p, s, t, w);
  }
  return false;
}

}  // namespace detail

// Validates a certificate for s <= t.  Sound at every level: true only when
// the described position map is strictly increasing with letterwise <=.
inline bool witness_check(const Poset& alphabet, const WordTerm& s_in,
                          const WordTerm& t_in, const EmbeddingWitness& w) {
  WordTerm s = normalize(s_in), t = normalize(t_in);
  return detail::witness_check_rec(alphabet, s, t, w);
}

namespace detail {

inline EmbeddingWitness identity_witness_rec(const WordTerm& w,
                                             const TargetAddr& prefix) {
  EmbeddingWitness out;
  switch (w.k) {
    case WordTerm::K::Eps:
      out.k = EmbeddingWitness::K::Cat;
      return out;
    case WordTerm::K::Lit:
      out.k = EmbeddingWitness::K::Lit;
      out.addr = prefix;
      return out;
    case WordTerm::K::Cat: {
      out.k = EmbeddingWitness::K::Cat;
      for (std::size_t i = 0; i < w.parts.size(); ++i) {
        TargetAddr sub = prefix;
        sub.steps.push_back(AddrStep{false, i, 0});
        out.parts.push_back(identity_witness_rec(w.parts[i], sub));
      }
      return out;
    }
    case WordTerm::K::Pow: {
      out.k = EmbeddingWitness::K::Omega;
      out.anchor = prefix;
      out.stride = 1;
      TargetAddr sub = prefix;
      sub.steps.push_back(AddrStep{true, 0, 0});
      out.pattern.push_back(identity_witness_rec(w.body(), sub));
      return out;
    }
  }
  return out;
}

}  // namespace detail

inline EmbeddingWitness identity_witness(const WordTerm& w_in) {
  WordTerm w = normalize(w_in);
  return detail::identity_witness_rec(w, TargetAddr{});
}

namespace detail {

// Steps from a body node down to some letter >= x, entering sub-powers at
// copy 0.  Used to place single positions inside one copy of a block.
inline std::optional<std::vector<AddrStep>> find_letter_steps(
    const Poset& p, const WordTerm& body, int x) {
  switch (body.k) {
    case WordTerm::K::Eps:
      return std::nullopt;
    case WordTerm::K::Lit:
      if (p.le(x, body.letter)) return std::vector<AddrStep>{};
      return std::nullopt;
    case WordTerm::K::Cat:
      for (std::size_t i = 0; i < body.parts.size(); ++i)
        if (auto sub = find_letter_steps(p, body.parts[i], x)) {
          sub->insert(sub->begin(), AddrStep{false, i, 0});
          return sub;
        }
      return std::nullopt;
    case WordTerm::K::Pow:
      if (auto sub = find_letter_steps(p, body.body(), x)) {
        sub->insert(sub->begin(), AddrStep{true, 0, 0});
        return sub;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

inline std::vector<int> word_letters(const WordTerm& w) {
  std::vector<int> out;
  collect_letters(w, out);
  return out;
}

// One repeating copy of a level-<=1 source power, laid out one letter per
// anchor copy starting at base.  vbody is the power's body (finite word).
inline EmbeddingWitness periodic_letter_pattern(const Poset& p,
                                                const WordTerm& vbody,
                                                const TargetAddr& anchor,
                                                const WordTerm& tgt_body,
                                                std::uint64_t base) {
  std::vector<int> letters = word_letters(vbody);
  std::vector<EmbeddingWitness> lits;
  for (std::size_t r = 0; r < letters.size(); ++r) {
    auto steps = find_letter_steps(p, tgt_body, letters[r]);
    if (!steps) throw invariant_error("periodic pattern letter not placeable");
    EmbeddingWitness lw;
    lw.k = EmbeddingWitness::K::Lit;
    lw.addr = anchor;
    lw.addr.steps.push_back(AddrStep{true, 0, base + r});
    lw.addr.steps.insert(lw.addr.steps.end(), steps->begin(), steps->end());
    lits.push_back(std::move(lw));
  }
  if (vbody.k == WordTerm::K::Cat) {
    EmbeddingWitness cat;
    cat.k = EmbeddingWitness::K::Cat;
    cat.parts = std::move(lits);
    return cat;
  }
  return std::move(lits[0]);
}

inline EmbeddingWitness omega_witness(const Poset& p, const WordTerm& src_pow,
                                      const TargetAddr& anchor,
                                      const WordTerm& tgt_body,
                                      std::uint64_t base = 0) {
  EmbeddingWitness w;
  w.k = EmbeddingWitness::K::Omega;
  w.anchor = anchor;
  w.stride = word_letters(src_pow.body()).size();
  w.pattern.push_back(
      periodic_letter_pattern(p, src_pow.body(), anchor, tgt_body, base));
  return w;
}

// Witness for a level-2 source power consumed by a level-2 target block:
// each component item of the source body gets its own target copy per round.
inline EmbeddingWitness omega2_witness(const Poset& p, const WordTerm& src_pow,
                                       const TargetAddr& anchor,
                                       const WordTerm& tgt_body,
                                       std::uint64_t base_copy) {
  auto srcitems = word_items(src_pow.body());
  auto tgtitems = word_items(tgt_body);
  std::vector<EmbeddingWitness> parts;
  for (std::size_t r = 0; r < srcitems.size(); ++r) {
    const WordTerm& u = *srcitems[r];
    TargetAddr copy_addr = anchor;
    copy_addr.steps.push_back(AddrStep{true, 0, base_copy + r});
    if (u.k == WordTerm::K::Lit) {
      auto steps = find_letter_steps(p, tgt_body, u.letter);
      if (!steps) throw invariant_error("component letter not placeable");
      EmbeddingWitness lw;
      lw.k = EmbeddingWitness::K::Lit;
      lw.addr = copy_addr;
      lw.addr.steps.insert(lw.addr.steps.end(), steps->begin(), steps->end());
      parts.push_back(std::move(lw));
    } else {
      std::optional<std::size_t> q;
      auto uimg = image(u.body());
      for (std::size_t d = 0; d < tgtitems.size(); ++d)
        if (tgtitems[d]->k == WordTerm::K::Pow &&
            le_m(p, uimg, image(tgtitems[d]->body()))) {
          q = d;
          break;
        }
      if (!q) throw invariant_error("component power not placeable");
      TargetAddr sub_anchor = copy_addr;
      if (tgt_body.k == WordTerm::K::Cat)
        sub_anchor.steps.push_back(AddrStep{false, *q, 0});
      parts.push_back(omega_witness(p, u, sub_anchor, tgtitems[*q]->body()));
    }
  }
  EmbeddingWitness w;
  w.k = EmbeddingWitness::K::Omega;
  w.anchor = anchor;
  w.stride = srcitems.size();
  if (src_pow.body().k == WordTerm::K::Cat) {
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

// Builds a checkable certificate from a positive embedding decision.
inline std::optional<EmbeddingWitness> gen_witness(const Poset& alphabet,
                                                   const WordTerm& s_in,
                                                   const WordTerm& t_in) {
  using detail::Move;
  WordTerm s = normalize(s_in), t = normalize(t_in);
  if (level(s) > 2 || level(t) > 2)
    throw unsupported_level("witness generation needs level <= 2");
  detail::EmbedDp dp(alphabet, s, t);
  if (!dp.run(0, 0)) return std::nullopt;

  const bool tgt_is_cat = t.k == WordTerm::K::Cat;
  std::vector<std::uint64_t> next_copy(dp.tgt.size(), 0);
  std::vector<EmbeddingWitness> made;

  std::size_t i = 0, j = 0;
  while (i < dp.src.size()) {
    TargetAddr prefix;
    if (tgt_is_cat) prefix.steps.push_back(AddrStep{false, j, 0});
    Move mv = dp.move_at(i, j);
    if (mv == Move::Skip) {
      ++j;
      continue;
    }
    const WordTerm& si = *dp.src[i];
    const WordTerm& cj = *dp.tgt[j];
    if (mv == Move::Within) {
      if (si.k == WordTerm::K::Lit) {
        TargetAddr a = prefix;
        a.steps.push_back(AddrStep{true, 0, next_copy[j]++});
        auto steps = detail::find_letter_steps(alphabet, cj.body(), si.letter);
        if (!steps) throw invariant_error("within-letter not placeable");
        a.steps.insert(a.steps.end(), steps->begin(), steps->end());
        EmbeddingWitness lw;
        lw.k = EmbeddingWitness::K::Lit;
        lw.addr = a;
        made.push_back(std::move(lw));
      } else {
        // level-1 power inside one copy of a level-2 block
        auto items = detail::word_items(cj.body());
        auto simg = image(si.body());
        std::optional<std::size_t> q;
        for (std::size_t d = 0; d < items.size(); ++d)
          if (items[d]->k == WordTerm::K::Pow &&
              le_m(alphabet, simg, image(items[d]->body()))) {
            q = d;
            break;
          }
        if (!q) throw invariant_error("within-power not placeable");
        TargetAddr anchor = prefix;
        anchor.steps.push_back(AddrStep{true, 0, next_copy[j]++});
        if (cj.body().k == WordTerm::K::Cat)
          anchor.steps.push_back(AddrStep{false, *q, 0});
        made.push_back(
            detail::omega_witness(alphabet, si, anchor, items[*q]->body()));
      }
      ++i;
      continue;
    }
    // Consume
    if (cj.k == WordTerm::K::Lit) {
      EmbeddingWitness lw;
      lw.k = EmbeddingWitness::K::Lit;
      lw.addr = prefix;
      made.push_back(std::move(lw));
    } else if (level(si.body()) == 0) {
      // letters of the source period, one target copy each, starting past
      // any copies already used by within-matches
      made.push_back(detail::omega_witness(alphabet, si, prefix, cj.body(),
                                           next_copy[j]));
    } else {
      made.push_back(detail::omega2_witness(alphabet, si, prefix, cj.body(),
                                            next_copy[j]));
    }
    ++i;
    ++j;
  }

  if (s.k == WordTerm::K::Cat) {
    EmbeddingWitness cat;
    cat.k = EmbeddingWitness::K::Cat;
    cat.parts = std::move(made);
    return cat;
  }
  if (s.k == WordTerm::K::Eps) {
    EmbeddingWitness e;
    e.k = EmbeddingWitness::K::Cat;
    return e;
  }
  return std::move(made[0]);
}

}  // namespace wqo
