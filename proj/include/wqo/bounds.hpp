#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wqo/errors.hpp"
#include "wqo/ordinal.hpp"

namespace wqo {

// The Higman type function: the order type of the finite-word extension as a
// function of the base type.
inline Ordinal h_fun(const Ordinal& beta) {
  if (beta.is_zero()) return Ordinal::finite(1);
  if (beta.is_finite())
    return omega_pow(omega_pow(Ordinal::finite(beta.finite_value() - 1)));
  if (is_epsilon_plus_finite(beta))  // no fixed points below epsilon_0
    return omega_pow(omega_pow(ord_add(beta, Ordinal::finite(1))));
  return omega_pow(omega_pow(beta));
}

// The doubly-indexed pair p_k/q_k: q collects the natural sum of all earlier
// p's, p re-exponentiates.
struct PqPair {
  Ordinal p;
  Ordinal q;
};

inline PqPair pq(int k, const Ordinal& beta) {
  if (k < 0) throw std::invalid_argument("pq needs k >= 0");
  Ordinal p = beta;  // p_0
  Ordinal q;         // q_0 = 0
  for (int i = 1; i <= k; ++i) {
    q = nat_add(q, p);
    p = minus_one_plus(two_pow(q));
  }
  return PqPair{std::move(p), std::move(q)};
}

struct FgValues {
  Ordinal f;        // h(q_k)
  Ordinal g;        // f (x) p_k
  Ordinal p_plus;   // 1 + p_k
  Ordinal g_plus;   // f (x) p_plus
};

inline FgValues fg(int k, const Ordinal& beta) {
  PqPair v = pq(k, beta);
  FgValues out;
  out.f = h_fun(v.q);
  out.g = nat_mul(out.f, v.p);
  out.p_plus = ord_add(Ordinal::finite(1), v.p);
  out.g_plus = nat_mul(out.f, out.p_plus);
  return out;
}

struct OmegaKBounds {
  Ordinal finseq;    // words of length < w^k
  Ordinal finseqeq;  // words of length exactly w^k
  Ordinal indec;     // indecomposable words of length w^k
};

inline OmegaKBounds upper_omega_k(int k, const Ordinal& beta) {
  PqPair v = pq(k, beta);
  Ordinal f = h_fun(v.q);
  return OmegaKBounds{f, nat_mul(f, v.p), v.p};
}

enum class SeqMode { finseq, finseqeq };

namespace detail {

// alpha < w^w as finite exponents with multiplicity plus the finite part.
struct AlphaShape {
  std::vector<std::uint64_t> exps;  // weakly decreasing, all >= 1
  std::uint64_t finite_part = 0;
};

inline AlphaShape alpha_shape(const Ordinal& alpha) {
  AlphaShape s;
  for (const auto& t : alpha.terms()) {
    if (!t.exponent.is_finite())
      throw std::invalid_argument("bound calculators need alpha < w^w");
    std::uint64_t e = static_cast<std::uint64_t>(t.exponent.finite_value());
    std::uint64_t c = static_cast<std::uint64_t>(t.count);
    if (e == 0)
      s.finite_part = c;
    else
      for (std::uint64_t i = 0; i < c; ++i) s.exps.push_back(e);
  }
  return s;
}

struct UpperAlphaResult {
  Ordinal value;
  bool used_refined = false;
};

inline Ordinal finseq_sum(const std::vector<std::uint64_t>& exps,
                          const Ordinal& beta) {
  // (+)_i  f_{k_i} (x) prod_{j<i} g_{k_j}
  Ordinal acc;
  Ordinal gprod = Ordinal::finite(1);
  for (std::uint64_t e : exps) {
    FgValues v = fg(static_cast<int>(e), beta);
    acc = nat_add(acc, nat_mul(v.f, gprod));
    gprod = nat_mul(gprod, v.g);
  }
  return acc;
}

inline UpperAlphaResult upper_alpha_detail(const Ordinal& alpha,
                                           const Ordinal& beta, SeqMode mode) {
  if (alpha.is_zero())
    throw std::invalid_argument("bound calculators need alpha >= 1");
  AlphaShape s = alpha_shape(alpha);

  if (mode == SeqMode::finseqeq) {
    Ordinal prod = Ordinal::finite(1);
    for (std::uint64_t e : s.exps) prod = nat_mul(prod, fg(static_cast<int>(e), beta).g);
    for (std::uint64_t i = 0; i < s.finite_part; ++i)
      prod = nat_mul(prod, fg(0, beta).g);
    return {prod, false};
  }

  // plain concatenation bound over the full exponent list (zeros included)
  std::vector<std::uint64_t> full = s.exps;
  for (std::uint64_t i = 0; i < s.finite_part; ++i) full.push_back(0);
  Ordinal plain = finseq_sum(full, beta);

  // refined bound for a nonzero finite part after an infinite tail term
  if (s.finite_part >= 1 && !s.exps.empty()) {
    std::uint64_t kr = s.exps.back();
    std::vector<std::uint64_t> head(s.exps.begin(), s.exps.end() - 1);
    Ordinal acc = finseq_sum(head, beta);
    Ordinal ghead = Ordinal::finite(1);
    for (std::uint64_t e : head) ghead = nat_mul(ghead, fg(static_cast<int>(e), beta).g);
    FgValues last = fg(static_cast<int>(kr), beta);
    acc = nat_add(acc, nat_mul(last.g_plus, ghead));
    Ordinal gall = nat_mul(ghead, last.g);
    Ordinal beta_pow = Ordinal::finite(1);
    for (std::uint64_t t = 1; t + 1 <= s.finite_part; ++t) {
      beta_pow = nat_mul(beta_pow, beta);
      acc = nat_add(acc, nat_mul(beta_pow, gall));
    }
    if (compare(acc, plain) != std::strong_ordering::greater)
      return {acc, true};
  }
  return {plain, false};
}

}  // namespace detail

// Upper bound on the type of the words of length < alpha (finseq) or exactly
// alpha (finseqeq), for alpha < w^w; the smaller of the applicable closed
// forms.
inline Ordinal upper_alpha(const Ordinal& alpha, const Ordinal& beta,
                           SeqMode mode) {
  return detail::upper_alpha_detail(alpha, beta, mode).value;
}

// The triply exponential lower-bound function; continuous by construction.
inline Ordinal u_fun(const Ordinal& beta) {
  if (beta.is_zero()) return Ordinal::finite(1);
  if (auto pred = successor_split(beta))
    return h_fun(minus_one_plus(two_pow(*pred)));
  return omega_pow(omega_pow(two_pow(beta)));
}

// Lower bounds realized by the H family: alpha = w^2 gives u(beta); alpha = w
// gives the indecomposable bound, exact at limits.
inline Ordinal lower_report(const Ordinal& alpha, const Ordinal& beta) {
  if (alpha == omega_pow(Ordinal::finite(2))) return u_fun(beta);
  if (alpha == Ordinal::omega()) {
    if (beta.is_zero())
      throw std::invalid_argument("indecomposable lower bound needs beta >= 1");
    if (auto pred = successor_split(beta))
      return minus_one_plus(two_pow(*pred));
    return minus_one_plus(two_pow(beta));
  }
  throw std::invalid_argument("lower bounds cover alpha in {w, w^2} only");
}

struct BoundReport {
  Ordinal alpha;
  Ordinal beta;
  std::optional<Ordinal> upper_finseq;
  std::optional<Ordinal> upper_finseqeq;
  std::optional<Ordinal> upper_indec;
  std::optional<Ordinal> lower_finseq;
  std::optional<Ordinal> lower_indec;
  std::map<std::string, std::string> provenance;
};

inline BoundReport report(const Ordinal& alpha, const Ordinal& beta) {
  BoundReport r;
  r.alpha = alpha;
  r.beta = beta;
  if (alpha.is_zero())
    throw std::invalid_argument("bound reports need alpha >= 1");

  if (alpha.is_power_of_omega() && alpha.leading_exponent().is_finite()) {
    int k = static_cast<int>(alpha.leading_exponent().finite_value());
    OmegaKBounds b = upper_omega_k(k, beta);
    r.upper_finseq = b.finseq;
    r.upper_finseqeq = b.finseqeq;
    r.upper_indec = b.indec;
    std::string kk = std::to_string(k);
    r.provenance["upper_finseq"] = "h(q_k(beta)), k=" + kk;
    r.provenance["upper_finseqeq"] = "h(q_k(beta)) (x) p_k(beta), k=" + kk;
    r.provenance["upper_indec"] = "p_k(beta), k=" + kk;
  } else {
    auto u = detail::upper_alpha_detail(alpha, beta, SeqMode::finseq);
    r.upper_finseq = u.value;
    r.provenance["upper_finseq"] =
        u.used_refined ? "refined finite-part theorem" : "cnf concatenation bound";
  }

  if (alpha == omega_pow(Ordinal::finite(2))) {
    r.lower_finseq = lower_report(alpha, beta);
    r.provenance["lower_finseq"] = "u(beta), realized by the H family";
  }
  if (alpha == Ordinal::omega() && !beta.is_zero()) {
    r.lower_indec = lower_report(alpha, beta);
    r.provenance["lower_indec"] =
        beta.is_limit() ? "-1+2^beta via the H family (exact at limits)"
                        : "-1+2^(beta-1) via the H family";
  }

  auto check_gap = [](const std::optional<Ordinal>& lo,
                      const std::optional<Ordinal>& hi) {
    if (lo && hi && compare(*lo, *hi) == std::strong_ordering::greater)
      throw invariant_error("lower bound exceeds upper bound");
  };
  check_gap(r.lower_finseq, r.upper_finseq);
  check_gap(r.lower_indec, r.upper_indec);
  return r;
}

inline nlohmann::ordered_json report_to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["alpha"] = to_string(r.alpha);
  j["beta"] = to_string(r.beta);
  auto put = [&](const char* key, const std::optional<Ordinal>& v) {
    if (v) j[key] = to_string(*v);
  };
  put("upper_finseq", r.upper_finseq);
  put("upper_finseqeq", r.upper_finseqeq);
  put("upper_indec", r.upper_indec);
  put("lower_finseq", r.lower_finseq);
  put("lower_indec", r.lower_indec);
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.provenance) prov[k] = v;
  j["provenance"] = std::move(prov);
  return j;
}

}  // namespace wqo
