#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wqo/errors.hpp"

namespace wqo {

using BigInt = boost::multiprecision::cpp_int;

// Ordinal below epsilon_0 in Cantor normal form: sum of w^e * c with the
// exponents strictly decreasing and every coefficient >= 1.  The empty term
// list is 0.  All constructors normalize, so equality is structural.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;

  static Ordinal finite(BigInt n);
  static Ordinal finite(std::uint64_t n) { return finite(BigInt(n)); }
  static Ordinal omega();
  // w^e * c as a single-term ordinal (c >= 1).
  static Ordinal power_term(Ordinal exponent, BigInt coeff);
  // Terms must already be in strictly decreasing exponent order.
  static Ordinal from_sorted_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // Value of a finite ordinal.
  BigInt finite_value() const;
  bool is_successor() const;
  bool is_limit() const { return !is_zero() && !is_successor(); }
  // w^g for some g (includes 1 = w^0); single term with coefficient 1.
  bool is_power_of_omega() const;
  const Ordinal& leading_exponent() const;

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  BigInt count;
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

inline bool operator==(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) == std::strong_ordering::equal;
}
inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  return compare(a, b);
}

inline std::strong_ordering compare(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto c = compare(x[i].exponent, y[i].exponent);
    if (c != std::strong_ordering::equal) return c;
    if (x[i].count != y[i].count)
      return x[i].count < y[i].count ? std::strong_ordering::less
                                     : std::strong_ordering::greater;
  }
  return x.size() <=> y.size();
}

inline Ordinal Ordinal::finite(BigInt n) {
  Ordinal r;
  if (n < 0) throw invariant_error("negative ordinal coefficient");
  if (n > 0) r.terms_.push_back(Term{Ordinal(), std::move(n)});
  return r;
}

inline Ordinal Ordinal::omega() { return power_term(finite(1), 1); }

inline Ordinal Ordinal::power_term(Ordinal exponent, BigInt coeff) {
  if (coeff <= 0) throw invariant_error("power_term needs coeff >= 1");
  Ordinal r;
  r.terms_.push_back(Term{std::move(exponent), std::move(coeff)});
  return r;
}

inline Ordinal Ordinal::from_sorted_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].count <= 0) throw invariant_error("coefficient < 1");
    if (i + 1 < terms.size() &&
        compare(terms[i].exponent, terms[i + 1].exponent) !=
            std::strong_ordering::greater)
      throw invariant_error("exponents not strictly decreasing");
  }
  Ordinal r;
  r.terms_ = std::move(terms);
  return r;
}

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline BigInt Ordinal::finite_value() const {
  if (terms_.empty()) return 0;
  if (!is_finite()) throw invariant_error("finite_value of infinite ordinal");
  return terms_[0].count;
}

inline bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

inline bool Ordinal::is_power_of_omega() const {
  return terms_.size() == 1 && terms_[0].count == 1;
}

inline const Ordinal& Ordinal::leading_exponent() const {
  if (terms_.empty()) throw invariant_error("leading_exponent of 0");
  return terms_[0].exponent;
}

// Natural (Hessenberg) sum: merge the CNF term lists, adding coefficients of
// equal exponents.
inline Ordinal nat_add(const Ordinal& a, const Ordinal& b) {
  std::vector<Ordinal::Term> out;
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (i == x.size()) {
      out.push_back(y[j++]);
    } else if (j == y.size()) {
      out.push_back(x[i++]);
    } else {
      auto c = compare(x[i].exponent, y[j].exponent);
      if (c == std::strong_ordering::greater) {
        out.push_back(x[i++]);
      } else if (c == std::strong_ordering::less) {
        out.push_back(y[j++]);
      } else {
        out.push_back(Ordinal::Term{x[i].exponent, x[i].count + y[j].count});
        ++i, ++j;
      }
    }
  }
  return Ordinal::from_sorted_terms(std::move(out));
}

// Natural (Hessenberg) product: full distribution, w^e (x) w^f = w^(e (+) f).
inline Ordinal nat_mul(const Ordinal& a, const Ordinal& b) {
  Ordinal acc;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      acc = nat_add(acc, Ordinal::power_term(nat_add(ta.exponent, tb.exponent),
                                             ta.count * tb.count));
  return acc;
}

// Ordinary ordinal sum: the head of b absorbs every smaller term of a.
inline Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms()[0].exponent;
  std::vector<Ordinal::Term> out;
  for (const auto& t : a.terms()) {
    auto c = compare(t.exponent, lead);
    if (c == std::strong_ordering::greater) {
      out.push_back(t);
    } else if (c == std::strong_ordering::equal) {
      out.push_back(Ordinal::Term{t.exponent, t.count + b.terms()[0].count});
    }
  }
  bool merged = !out.empty() && out.back().exponent == lead;
  if (!merged) out.push_back(b.terms()[0]);
  out.insert(out.end(), b.terms().begin() + 1, b.terms().end());
  return Ordinal::from_sorted_terms(std::move(out));
}

// Ordinary ordinal product via left distributivity over the CNF of b.
inline Ordinal ord_mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  Ordinal acc;
  for (const auto& tb : b.terms()) {
    Ordinal part;
    if (tb.exponent.is_zero()) {
      // a * n = w^a0*(c0*n) + rest(a)
      std::vector<Ordinal::Term> terms = a.terms();
      terms[0].count *= tb.count;
      part = Ordinal::from_sorted_terms(std::move(terms));
    } else {
      part = Ordinal::power_term(ord_add(a.leading_exponent(), tb.exponent),
                                 tb.count);
    }
    acc = ord_add(acc, part);
  }
  return acc;
}

inline Ordinal omega_pow(const Ordinal& e) {
  return Ordinal::power_term(e, 1);
}

// 2^b.  Split b = (infinite part w*g) + n; then 2^b = w^g * 2^n, where g is
// read off by replacing each exponent a >= 1 of the infinite part with -1+a.
inline Ordinal two_pow(const Ordinal& b) {
  std::vector<Ordinal::Term> gterms;
  BigInt n = 0;
  for (const auto& t : b.terms()) {
    if (t.exponent.is_zero()) {
      n = t.count;
    } else if (t.exponent.is_finite()) {
      gterms.push_back(
          Ordinal::Term{Ordinal::finite(t.exponent.finite_value() - 1),
                        t.count});
    } else {
      gterms.push_back(t);
    }
  }
  BigInt pow2 = BigInt(1) << static_cast<unsigned>(n);
  Ordinal g = Ordinal::from_sorted_terms(std::move(gterms));
  if (g.is_zero()) return Ordinal::finite(pow2);
  return Ordinal::power_term(std::move(g), std::move(pow2));
}

// -1 + b: strips one from a finite b, absorbed by an infinite b.
inline Ordinal minus_one_plus(const Ordinal& b) {
  if (b.is_zero()) throw std::invalid_argument("minus_one_plus(0)");
  if (!b.is_finite()) return b;
  return Ordinal::finite(b.finite_value() - 1);
}

// Predecessor when b is a successor, nullopt otherwise (0 included).
inline std::optional<Ordinal> successor_split(const Ordinal& b) {
  if (!b.is_successor()) return std::nullopt;
  std::vector<Ordinal::Term> terms = b.terms();
  if (terms.back().count == 1)
    terms.pop_back();
  else
    terms.back().count -= 1;
  return Ordinal::from_sorted_terms(std::move(terms));
}

// Epsilon numbers are fixed points w^e = e; nothing below epsilon_0 is one,
// so under this notation the guard is constantly false.
inline bool is_epsilon_plus_finite(const Ordinal& b) {
  if (b.is_zero()) return false;
  const Ordinal& e = b.terms()[0].exponent;
  return b.terms()[0].count >= 1 && !e.is_zero() && e == omega_pow(e);
}

namespace detail {
inline std::string exponent_atom(const Ordinal& e);
}

inline std::string to_string(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += " + ";
    first = false;
    if (t.exponent.is_zero()) {
      out += t.count.str();
      continue;
    }
    if (t.exponent == Ordinal::finite(1))
      out += "w";
    else
      out += "w^" + detail::exponent_atom(t.exponent);
    if (t.count != 1) out += "*" + t.count.str();
  }
  return out;
}

namespace detail {
// An exponent prints without parentheses only when it is itself an atom of
// the grammar: a plain natural or a bare w.
inline std::string exponent_atom(const Ordinal& e) {
  if (e.is_finite()) return e.finite_value().str();
  if (e == Ordinal::omega()) return "w";
  return "(" + to_string(e) + ")";
}
}  // namespace detail

// CNF exponents repeated by coefficient, e.g. w^2*2 + 1 -> [2, 2, 0].
// Coefficients must stay materializable.
inline std::vector<Ordinal> exponent_list(const Ordinal& b,
                                          std::uint64_t cap = 1'000'000) {
  std::vector<Ordinal> out;
  for (const auto& t : b.terms()) {
    if (t.count > cap)
      throw std::invalid_argument("coefficient too large to expand");
    for (BigInt i = 0; i < t.count; ++i) out.push_back(t.exponent);
  }
  return out;
}

}  // namespace wqo
