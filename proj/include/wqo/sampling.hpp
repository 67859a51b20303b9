#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "wqo/canon.hpp"
#include "wqo/lower.hpp"
#include "wqo/ordinal.hpp"
#include "wqo/poset.hpp"
#include "wqo/words.hpp"

namespace wqo {

using Rng = std::mt19937_64;

// Random CNF ordinal with bounded tower depth and term count.  Small by
// design: property sweeps multiply these together.
inline Ordinal sample_ordinal(Rng& rng, int depth = 2, int max_terms = 3,
                              std::uint64_t max_coeff = 6) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<std::uint64_t> coeff(1, max_coeff);
  int n = nterms(rng);
  if (n == 0) return Ordinal();
  std::vector<Ordinal> exps;
  for (int i = 0; i < n; ++i) {
    if (depth == 0) {
      std::uniform_int_distribution<std::uint64_t> e(0, 4);
      exps.push_back(Ordinal::finite(e(rng)));
    } else {
      exps.push_back(sample_ordinal(rng, depth - 1, 2, 3));
    }
  }
  // strictly decreasing, deduplicated
  std::sort(exps.begin(), exps.end(),
            [](const Ordinal& a, const Ordinal& b) { return compare(a, b) == std::strong_ordering::greater; });
  exps.erase(std::unique(exps.begin(), exps.end(),
                         [](const Ordinal& a, const Ordinal& b) { return a == b; }),
             exps.end());
  std::vector<Ordinal::Term> terms;
  for (auto& e : exps) terms.push_back(Ordinal::Term{std::move(e), BigInt(coeff(rng))});
  return Ordinal::from_sorted_terms(std::move(terms));
}

// Random word term over an alphabet of the given size.  max_level bounds the
// omega-power nesting; items per concatenation stay small.
inline WordTerm sample_word(Rng& rng, int nletters, int max_level,
                            int max_items = 3) {
  std::uniform_int_distribution<int> nitems(0, max_items);
  std::uniform_int_distribution<int> letter(0, nletters - 1);
  std::uniform_int_distribution<int> coin(0, 2);
  int n = nitems(rng);
  std::vector<WordTerm> items;
  for (int i = 0; i < n; ++i) {
    if (max_level == 0 || coin(rng) > 0) {
      items.push_back(WordTerm::lit(letter(rng)));
    } else {
      WordTerm body = sample_word(rng, nletters, max_level - 1, max_items);
      if (body.k == WordTerm::K::Eps) body = WordTerm::lit(letter(rng));
      items.push_back(WordTerm::pow(std::move(body)));
    }
  }
  return WordTerm::cat(std::move(items));
}

// Random powerset element with level <= max_level.
inline PkElem sample_pk(Rng& rng, int nletters, int max_level) {
  std::uniform_int_distribution<int> letter(0, nletters - 1);
  std::uniform_int_distribution<int> coin(0, 2);
  if (max_level == 0 || coin(rng) == 0) return PkElem::base(letter(rng));
  std::uniform_int_distribution<int> nmembers(1, 3);
  int n = nmembers(rng);
  std::vector<PkElem> members;
  for (int i = 0; i < n; ++i)
    members.push_back(sample_pk(rng, nletters, max_level - 1));
  return PkElem::set(std::move(members));
}

// Random element below e in the majorization order, with matching level tags
// at every layer.
inline PkElem sample_pk_lower(Rng& rng, const Poset& alphabet, const PkElem& e) {
  if (e.level == 0) {
    std::vector<int> below;
    for (int x = 0; x < alphabet.size(); ++x)
      if (alphabet.le(x, e.letter)) below.push_back(x);
    std::uniform_int_distribution<std::size_t> pick(0, below.size() - 1);
    return PkElem::base(below[pick(rng)]);
  }
  // keep a member subset that retains the level, lower each member in place
  std::vector<PkElem> members;
  std::uniform_int_distribution<int> coin(0, 1);
  std::size_t top = 0;
  for (std::size_t i = 1; i < e.items.size(); ++i)
    if (e.items[i].level > e.items[top].level) top = i;
  for (std::size_t i = 0; i < e.items.size(); ++i)
    if (i == top || coin(rng))
      members.push_back(sample_pk_lower(rng, alphabet, e.items[i]));
  PkElem out = PkElem::set(std::move(members));
  if (out.level != e.level) return e;  // lowering a member dropped the tag
  return out;
}

// Random quasi-order on n named atoms with a sparse seed relation.
inline Poset sample_poset(Rng& rng, int n) {
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  std::vector<std::pair<int, int>> rel;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && coin(rng) == 0) rel.emplace_back(a, b);
  return Poset::from_relations(names, rel);
}

// Random level-`level` iterated-powerset element over the given atoms.
inline IterSet sample_iterset(Rng& rng, const std::vector<int>& atoms,
                              int level) {
  if (level == 0) {
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
    return IterSet::leaf(atoms[pick(rng)]);
  }
  std::uniform_int_distribution<int> n(1, 3);
  std::vector<IterSet> items;
  for (int i = 0, m = n(rng); i < m; ++i)
    items.push_back(sample_iterset(rng, atoms, level - 1));
  return IterSet::set(std::move(items));
}

// Random ordinal strictly below a positive bound, biased toward the small
// cofinal family {w^e * c}.
inline Ordinal sample_ordinal_below(Rng& rng, const Ordinal& bound) {
  if (bound.is_zero()) throw std::invalid_argument("no ordinal below 0");
  std::uniform_int_distribution<int> coin(0, 3);
  if (coin(rng) == 0) return Ordinal();
  const auto& terms = bound.terms();
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  std::size_t j = pick(rng);
  std::vector<Ordinal::Term> out(terms.begin(), terms.begin() + j);
  // Replace term j by something strictly smaller.
  const auto& t = terms[j];
  std::uniform_int_distribution<std::uint64_t> small(1, 3);
  if (t.count > 1 && coin(rng) < 2) {
    out.push_back(Ordinal::Term{t.exponent, BigInt(small(rng)) % t.count + 1});
    if (out.back().count >= t.count) out.back().count = t.count - 1;
  } else if (!t.exponent.is_zero()) {
    Ordinal e = sample_ordinal_below(rng, t.exponent);
    if (!out.empty() && compare(out.back().exponent, e) != std::strong_ordering::greater) {
      // prefix already ends at or below e; drop the new term
    } else {
      out.push_back(Ordinal::Term{std::move(e), BigInt(small(rng))});
    }
  }
  // else: the strict prefix is already < bound
  return Ordinal::from_sorted_terms(std::move(out));
}

}  // namespace wqo
