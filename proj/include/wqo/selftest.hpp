#pragma once

// Self-check utilities: independent oracles and parametrized property
// sweeps.  Everything here recomputes results by routes separate from the
// main decision paths, so the CLI selftest and the test suites can
// cross-validate against it.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wqo/bounds.hpp"
#include "wqo/canon.hpp"
#include "wqo/lower.hpp"
#include "wqo/parse.hpp"
#include "wqo/poset.hpp"
#include "wqo/sampling.hpp"
#include "wqo/words.hpp"
#include "wqo/wpo.hpp"

namespace wqo::check {

// Exhaustive subsequence matching: searches all strictly increasing index
// maps (no greedy shortcut).
inline bool finite_embed_exhaustive(const Poset& p, const std::vector<int>& s,
                                    const std::vector<int>& t,
                                    std::size_t i = 0, std::size_t j = 0) {
  if (i == s.size()) return true;
  for (std::size_t k = j; k < t.size(); ++k)
    if (p.le(s[i], t[k]) && finite_embed_exhaustive(p, s, t, i + 1, k + 1))
      return true;
  return false;
}

// A level-1 word in prefix-period form: prefix letters then (period)^w.
// An empty period means the word is finite.
struct PrefixPeriod {
  std::vector<int> prefix;
  std::vector<int> period;

  WordTerm term() const {
    std::vector<WordTerm> items;
    for (int a : prefix) items.push_back(WordTerm::lit(a));
    if (!period.empty()) {
      std::vector<WordTerm> body;
      for (int a : period) body.push_back(WordTerm::lit(a));
      items.push_back(WordTerm::pow(WordTerm::cat(std::move(body))));
    }
    return WordTerm::cat(std::move(items));
  }
};

// Independent decision for prefix-period pairs: the letters criterion on the
// periods plus exhaustive finite matching of the prefix into the finitely
// many positions available before the period settles.
inline bool level1_oracle(const Poset& p, const PrefixPeriod& s,
                          const PrefixPeriod& t) {
  auto set_of = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  auto unrolled = [&](std::size_t need) {
    std::vector<int> avail = t.prefix;
    for (std::size_t c = 0; c < need; ++c)
      avail.insert(avail.end(), t.period.begin(), t.period.end());
    return avail;
  };
  if (s.period.empty()) {
    std::vector<int> avail = t.period.empty() ? t.prefix : unrolled(s.prefix.size() + 1);
    return finite_embed_exhaustive(p, s.prefix, avail);
  }
  if (t.period.empty()) return false;
  if (!le_m(p, set_of(s.period), set_of(t.period))) return false;
  return finite_embed_exhaustive(p, s.prefix, unrolled(s.prefix.size() + 1));
}

// All quasi-orders on n named atoms, one representative per isomorphism
// class.  Seeds every subset of off-diagonal pairs and closes it.
inline std::vector<Poset> all_preorders_up_to_iso(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<std::pair<int, int>> offdiag;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) offdiag.emplace_back(i, j);

  std::vector<int> perm(n);
  std::vector<std::vector<int>> perms;
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto matrix_key = [&](const Poset& p, const std::vector<int>& pi) {
    std::string key;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) key += p.le(pi[i], pi[j]) ? '1' : '0';
    return key;
  };

  std::vector<Poset> out;
  std::vector<std::string> seen;
  for (std::uint64_t mask = 0; mask < (1ull << offdiag.size()); ++mask) {
    std::vector<std::pair<int, int>> rel;
    for (std::size_t b = 0; b < offdiag.size(); ++b)
      if (mask & (1ull << b)) rel.push_back(offdiag[b]);
    Poset p = Poset::from_relations(names, rel);
    std::string canon;
    for (const auto& pi : perms) {
      std::string key = matrix_key(p, pi);
      if (canon.empty() || key < canon) canon = key;
    }
    if (std::find(seen.begin(), seen.end(), canon) == seen.end()) {
      seen.push_back(canon);
      out.push_back(std::move(p));
    }
  }
  return out;
}

// All words over nletters with lengths 0..max_len.
inline std::vector<std::vector<int>> all_words(int nletters, int max_len) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> layer{{}};
  for (int l = 1; l <= max_len; ++l) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int a = 0; a < nletters; ++a) {
        auto v = w;
        v.push_back(a);
        next.push_back(std::move(v));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

struct SweepResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::string detail;

  bool ok() const { return failed == 0; }

  void expect(bool cond, const std::string& what) {
    ++checked;
    if (!cond) {
      ++failed;
      if (detail.empty()) detail = what;
    }
  }
};

// --------------------------------------------------------------------------
// Property sweeps.  Each recomputes through an independent route and counts
// failures; the CLI selftest and the acceptance suite drive them with their
// own sizes.

inline SweepResult sweep_ordinal_laws(std::uint64_t seed, int n) {
  SweepResult r{"ordinal algebra laws"};
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    Ordinal a = sample_ordinal(rng), b = sample_ordinal(rng),
            c = sample_ordinal(rng);
    r.expect(nat_add(a, b) == nat_add(b, a), "nat_add commutativity");
    r.expect(nat_mul(a, b) == nat_mul(b, a), "nat_mul commutativity");
    r.expect(nat_add(nat_add(a, b), c) == nat_add(a, nat_add(b, c)),
             "nat_add associativity");
    r.expect(nat_mul(nat_mul(a, b), c) == nat_mul(a, nat_mul(b, c)),
             "nat_mul associativity");
    r.expect(nat_mul(a, nat_add(b, c)) == nat_add(nat_mul(a, b), nat_mul(a, c)),
             "distributivity");
    r.expect(two_pow(ord_add(a, b)) == ord_mul(two_pow(a), two_pow(b)),
             "2^(a+b) = 2^a * 2^b");
  }
  return r;
}

inline SweepResult sweep_parser_roundtrip(std::uint64_t seed, int n_ordinals,
                                          int n_words) {
  SweepResult r{"parser round trips"};
  Rng rng(seed);
  for (int i = 0; i < n_ordinals; ++i) {
    Ordinal a = sample_ordinal(rng, 3);
    r.expect(parse_ordinal(to_string(a)) == a, "ordinal round trip");
  }
  Poset p = Poset::antichain(3);
  for (int i = 0; i < n_words; ++i) {
    WordTerm w = sample_word(rng, 3, 2);
    r.expect(parse_word(print_word(p, w), p) == w, "word round trip");
  }
  return r;
}

// Exhaustive level-1 agreement on prefix/period pairs over every quasi-order
// (up to iso) on at most max_letters letters.
inline SweepResult sweep_level1_exact(int max_letters) {
  SweepResult r{"level-1 embedding exactness"};
  for (int n = 1; n <= max_letters; ++n) {
    auto posets = all_preorders_up_to_iso(n);
    auto words = all_words(n, 3);
    std::vector<PrefixPeriod> terms;
    for (const auto& u : words) terms.push_back(PrefixPeriod{u, {}});
    for (const auto& u : words)
      for (const auto& v : words)
        if (!v.empty()) terms.push_back(PrefixPeriod{u, v});
    for (const auto& p : posets) {
      std::vector<WordTerm> built;
      built.reserve(terms.size());
      for (const auto& t : terms) built.push_back(t.term());
      for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = 0; j < terms.size(); ++j) {
          bool got = embeds_exact(p, built[i], built[j]);
          bool want = level1_oracle(p, terms[i], terms[j]);
          r.expect(got == want, "level-1 mismatch on " + print_word(p, built[i]) +
                                    " vs " + print_word(p, built[j]));
        }
    }
  }
  return r;
}

// Random level-2 pairs: positive verdicts must be witnessed and must survive
// every unfolding truncation.
inline SweepResult sweep_level2_consistency(std::uint64_t seed, int n_pairs,
                                            std::uint64_t max_unfold) {
  SweepResult r{"level-2 witness/unfold consistency"};
  Rng rng(seed);
  Poset chains = Poset::chain(3);
  Poset anti = Poset::antichain(3);
  for (int i = 0; i < n_pairs; ++i) {
    const Poset& p = (i % 2 == 0) ? chains : anti;
    WordTerm s = sample_word(rng, 3, 2);
    WordTerm t = sample_word(rng, 3, 2);
    if (!embeds_exact(p, s, t)) {
      r.expect(!gen_witness(p, s, t).has_value(), "witness for a negative");
      continue;
    }
    auto w = gen_witness(p, s, t);
    r.expect(w.has_value() && witness_check(p, s, t, *w),
             "unwitnessed positive verdict");
    r.expect(unfold_oracle(p, s, t, max_unfold), "unfolding contradicts");
  }
  return r;
}

// Monotonicity of phi under majorization, with checked witnesses, plus the
// decomposition round trips.
inline SweepResult sweep_phi(std::uint64_t seed, int n_mono, int n_roundtrip) {
  SweepResult r{"phi monotonicity and surjectivity"};
  Rng rng(seed);
  Poset chain2 = Poset::chain(2);
  Poset anti3 = Poset::antichain(3);
  for (int i = 0; i < n_mono; ++i) {
    const Poset& p = (i % 2 == 0) ? chain2 : anti3;
    PkElem e2 = sample_pk(rng, p.size(), 2);
    PkElem e1 = sample_pk_lower(rng, p, e2);
    if (!leq_pk(p, e1, e2)) {
      r.expect(false, "sampled pair is not below");
      continue;
    }
    EmbeddingWitness w = phi_witness(p, e1, e2);
    r.expect(witness_check(p, phi(e1), phi(e2), w), "phi witness rejected");
    r.expect(embeds_exact(p, phi(e1), phi(e2)), "phi image not embedded");
  }
  for (int i = 0; i < n_roundtrip; ++i) {
    const Poset& p = anti3;
    WordTerm s = sample_word(rng, 3, 1);
    WordTerm img = phi_word(decompose(s, 2));
    r.expect(embeds_exact(p, img, s) && embeds_exact(p, s, img),
             "decompose round trip");
    // exact-length split
    std::vector<WordTerm> items;
    std::uniform_int_distribution<int> len(0, 2), letter(0, 2), plen(1, 3);
    for (int q = 0, m = len(rng); q < m; ++q)
      items.push_back(WordTerm::lit(letter(rng)));
    std::vector<WordTerm> body;
    for (int q = 0, m = plen(rng); q < m; ++q)
      body.push_back(WordTerm::lit(letter(rng)));
    items.push_back(WordTerm::pow(WordTerm::cat(std::move(body))));
    WordTerm ex = WordTerm::cat(std::move(items));
    auto [pref, last] = decompose_eq(ex, 1);
    WordTerm img2 = WordTerm::cat({phi_word(pref), phi(last)});
    r.expect(embeds_exact(p, img2, ex) && embeds_exact(p, ex, img2),
             "decompose_eq round trip");
  }
  return r;
}

// The level-1 separator construction is an order embedding.
inline SweepResult sweep_psi1(std::uint64_t seed, int n_posets, int pairs_per) {
  SweepResult r{"psi'_1 order embedding"};
  Rng rng(seed);
  std::uniform_int_distribution<int> wlen(0, 3);
  std::function<bool(const Poset&, const std::vector<IterSet>&,
                     const std::vector<IterSet>&, std::size_t, std::size_t)>
      word_le = [&](const Poset& p, const std::vector<IterSet>& s,
                    const std::vector<IterSet>& t, std::size_t i,
                    std::size_t j) -> bool {
    if (i == s.size()) return true;
    for (std::size_t k = j; k < t.size(); ++k)
      if (iterset_leq(p, s[i], t[k]) && word_le(p, s, t, i + 1, k + 1))
        return true;
    return false;
  };
  int made = 0;
  while (made < n_posets) {
    Poset p = sample_poset(rng, 4);
    auto d = extract_maximals(WpoTerm::base_of(p), 1);
    auto ys = d.y_atoms();
    if (ys.empty()) continue;
    ++made;
    const Poset& alpha = d.finite->poset;
    for (int i = 0; i < pairs_per; ++i) {
      std::vector<IterSet> w, w2;
      for (int n = wlen(rng); n-- > 0;) w.push_back(sample_iterset(rng, ys, 1));
      for (int n = wlen(rng); n-- > 0;) w2.push_back(sample_iterset(rng, ys, 1));
      bool img = embeds_exact(alpha, psi_star(1, d, w), psi_star(1, d, w2));
      bool src = word_le(alpha, w, w2, 0, 0);
      r.expect(img == src, "psi'_1 equivalence failure");
    }
  }
  return r;
}

// Searches for an order-reflection failure of psi'_1 under a deliberately
// non-maximal separator.  Returns the number of counterexamples found in
// `failed`... inverted: here `checked` counts pairs and `failed` stays 0;
// the count of reflection failures found is reported in `detail` and the
// return value.
inline std::uint64_t psi1_negative_control(std::uint64_t seed, int n_posets,
                                           int pairs_per,
                                           std::uint64_t* pairs_out = nullptr) {
  Rng rng(seed);
  std::uniform_int_distribution<int> wlen(0, 3);
  std::function<bool(const Poset&, const std::vector<IterSet>&,
                     const std::vector<IterSet>&, std::size_t, std::size_t)>
      word_le = [&](const Poset& p, const std::vector<IterSet>& s,
                    const std::vector<IterSet>& t, std::size_t i,
                    std::size_t j) -> bool {
    if (i == s.size()) return true;
    for (std::size_t k = j; k < t.size(); ++k)
      if (iterset_leq(p, s[i], t[k]) && word_le(p, s, t, i + 1, k + 1))
        return true;
    return false;
  };
  std::uint64_t found = 0, pairs = 0;
  int made = 0;
  while (made < n_posets) {
    Poset p = sample_poset(rng, 4);
    int bad = -1;
    for (int a = 0; a < p.size() && bad < 0; ++a)
      if (!p.maximal(a)) bad = a;
    if (bad < 0) continue;
    MaximalDecomposition d;
    d.ambient = WpoTerm::base_of(p);
    d.finite = materialize(d.ambient);
    d.v = {WpoElem::atom_of(bad)};
    auto ys = d.y_atoms();
    if (ys.empty()) continue;
    ++made;
    const Poset& alpha = d.finite->poset;
    for (int i = 0; i < pairs_per; ++i) {
      std::vector<IterSet> w, w2;
      for (int n = wlen(rng); n-- > 0;) w.push_back(sample_iterset(rng, ys, 1));
      for (int n = wlen(rng); n-- > 0;) w2.push_back(sample_iterset(rng, ys, 1));
      ++pairs;
      if (embeds_exact(alpha, psi_star(1, d, w), psi_star(1, d, w2)) &&
          !word_le(alpha, w, w2, 0, 0))
        ++found;
    }
  }
  if (pairs_out) *pairs_out = pairs;
  return found;
}

// H family: clause evaluation recovers beta; the embedding preserves and
// reflects on sampled pairs.
inline SweepResult sweep_h_family(std::uint64_t seed, int n_betas,
                                  int n_embed_pairs, int samples_per_pair) {
  SweepResult r{"H family types and embeddings"};
  Rng rng(seed);
  Ordinal cap = omega_pow(omega_pow(Ordinal::finite(3)));
  std::vector<Ordinal> betas = {
      parse_ordinal("1"), parse_ordinal("2"), parse_ordinal("w"),
      parse_ordinal("w + 1"), parse_ordinal("w*2"), parse_ordinal("w^2"),
      parse_ordinal("w^2 + w + 1"), parse_ordinal("w^w"),
      parse_ordinal("w^(w + 1)"), parse_ordinal("w^(w^2)"),
      parse_ordinal("w^(w^3)"), parse_ordinal("w^(w^2 + w)*3 + w^w + 5")};
  while (static_cast<int>(betas.size()) < n_betas) {
    Ordinal b = sample_ordinal(rng, 2, 3, 4);
    if (!b.is_zero() && compare(b, cap) != std::strong_ordering::greater)
      betas.push_back(b);
  }
  for (const auto& b : betas) {
    OValue v = o_eval(WpoTerm::h_of(b));
    r.expect(v.exact && v.value == b, "o_eval(H(beta)) != beta at " + to_string(b));
  }

  Ordinal ecap = nat_mul(omega_pow(Ordinal::omega()), Ordinal::finite(3));
  int made = 0;
  while (made < n_embed_pairs) {
    Ordinal b = sample_ordinal(rng, 1, 3, 3);
    Ordinal b2 = sample_ordinal(rng, 1, 3, 3);
    if (b.is_zero() || b2.is_zero()) continue;
    if (compare(b, ecap) == std::strong_ordering::greater ||
        compare(b2, ecap) == std::strong_ordering::greater)
      continue;
    if (compare(b, b2) == std::strong_ordering::greater) std::swap(b, b2);
    ++made;
    WpoTerm hb = WpoTerm::h_of(b), hb2 = WpoTerm::h_of(b2);
    auto pool = enumerate_elements(hb, 12).elems;
    std::vector<WpoElem> mapped;
    bool allvalid = true;
    for (const auto& e : pool) {
      WpoElem img = h_embed_apply(b, b2, e);
      allvalid = allvalid && valid_elem(hb2, img);
      mapped.push_back(std::move(img));
    }
    r.expect(allvalid, "h_embed image invalid at " + to_string(b) + " -> " +
                           to_string(b2));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int rep = 0; rep < samples_per_pair; ++rep) {
      std::size_t i = pick(rng), j = pick(rng);
      bool src = leq_elem(hb, pool[i], pool[j]);
      bool dst = leq_elem(hb2, mapped[i], mapped[j]);
      r.expect(src == dst, "h_embed order mismatch at " + to_string(b) +
                               " -> " + to_string(b2));
    }
  }
  return r;
}

// Continuity sandwich for u; the truncated left subtraction makes the
// display total.  Points where the printed lower bound exceeds u itself are
// counted as failures (the b=0, k=1 corner in the stated range).
inline SweepResult sweep_u_sandwich() {
  SweepResult r{"u continuity sandwich"};
  auto monus2 = [](const Ordinal& x) {
    if (!x.is_finite()) return x;
    BigInt v = x.finite_value();
    return Ordinal::finite(v <= 2 ? BigInt(0) : BigInt(v - 2));
  };
  std::vector<Ordinal> bases = {Ordinal(), parse_ordinal("w"),
                                parse_ordinal("w^2"), parse_ordinal("w^w")};
  for (const auto& beta : bases)
    for (std::uint64_t k = 1; k <= 6; ++k) {
      Ordinal prev = ord_add(beta, Ordinal::finite(k - 1));
      Ordinal val = u_fun(ord_add(beta, Ordinal::finite(k)));
      Ordinal lower = omega_pow(omega_pow(monus2(two_pow(prev))));
      Ordinal upper =
          omega_pow(omega_pow(ord_add(two_pow(prev), Ordinal::finite(1))));
      bool ok = compare(lower, val) != std::strong_ordering::greater &&
                compare(val, upper) != std::strong_ordering::greater;
      r.expect(ok, "sandwich failure at beta=" + to_string(beta) +
                       ", k=" + std::to_string(k));
    }
  return r;
}

inline SweepResult sweep_gap(std::uint64_t seed, int n) {
  SweepResult r{"lower/upper gap sanity"};
  Rng rng(seed);
  Ordinal w2 = omega_pow(Ordinal::finite(2));
  for (int i = 0; i < n; ++i) {
    Ordinal beta = sample_ordinal(rng, 2);
    r.expect(compare(lower_report(w2, beta), upper_omega_k(2, beta).finseq) !=
                 std::strong_ordering::greater,
             "lower exceeds upper at " + to_string(beta));
    if (!beta.is_zero() && beta.is_limit())
      r.expect(lower_report(Ordinal::omega(), beta) ==
                   upper_omega_k(1, beta).indec,
               "limit-case indecomposable bound not exact at " + to_string(beta));
  }
  return r;
}

}  // namespace wqo::check
