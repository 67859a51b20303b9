#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <functional>

#include <json.hpp>

#include "wqo/errors.hpp"
#include "wqo/lower.hpp"
#include "wqo/ordinal.hpp"
#include "wqo/poset.hpp"
#include "wqo/words.hpp"
#include "wqo/wpo.hpp"

namespace wqo {

namespace detail {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos == text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg + " at position " + std::to_string(pos), pos);
  }
  BigInt nat() {
    skip_ws();
    if (pos == text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected a number");
    BigInt n = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      n = n * 10 + (text[pos] - '0');
      ++pos;
    }
    return n;
  }
};

// sum := prod ('+' prod)* ; prod := atom ('*' NAT)? ; atom := 'w' ('^' atom)? | NAT | '(' sum ')'
inline Ordinal ord_sum(Cursor& c);

inline Ordinal ord_atom(Cursor& c) {
  c.skip_ws();
  if (c.eat('(')) {
    Ordinal r = ord_sum(c);
    c.expect(')', "to close ordinal group");
    return r;
  }
  if (c.peek() == 'w') {
    ++c.pos;
    if (c.eat('^')) return omega_pow(ord_atom(c));
    return Ordinal::omega();
  }
  return Ordinal::finite(c.nat());
}

inline Ordinal ord_prod(Cursor& c) {
  Ordinal r = ord_atom(c);
  if (c.eat('*')) r = ord_mul(r, Ordinal::finite(c.nat()));
  return r;
}

inline Ordinal ord_sum(Cursor& c) {
  Ordinal r = ord_prod(c);
  while (c.eat('+')) r = ord_add(r, ord_prod(c));
  return r;
}

}  // namespace detail

inline Ordinal parse_ordinal(std::string_view text) {
  detail::Cursor c{text};
  Ordinal r = detail::ord_sum(c);
  if (!c.eof()) c.fail("trailing input after ordinal");
  return r;
}

namespace detail {

inline bool name_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
}

inline std::string identifier(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.pos;
  while (c.pos < c.text.size() && name_char(c.text[c.pos])) ++c.pos;
  if (c.pos == start) c.fail("expected a letter name");
  return std::string(c.text.substr(start, c.pos - start));
}

// seq := item+ ; item := LETTER | '(' seq ')^w'
inline WordTerm word_seq(Cursor& c, const Poset& alphabet);

inline WordTerm word_item(Cursor& c, const Poset& alphabet) {
  if (c.eat('(')) {
    WordTerm inner = word_seq(c, alphabet);
    c.expect(')', "to close omega-power group");
    c.expect('^', "after omega-power group");
    c.skip_ws();
    if (c.pos >= c.text.size() || c.text[c.pos] != 'w')
      c.fail("expected 'w' after '^'");
    ++c.pos;
    return WordTerm::pow(std::move(inner));
  }
  std::string name = identifier(c);
  int idx = alphabet.index_of(name);
  if (idx < 0) c.fail("unknown letter '" + name + "'");
  return WordTerm::lit(idx);
}

inline WordTerm word_seq(Cursor& c, const Poset& alphabet) {
  std::vector<WordTerm> items;
  items.push_back(word_item(c, alphabet));
  while (true) {
    c.skip_ws();
    if (c.pos >= c.text.size()) break;
    char ch = c.text[c.pos];
    if (ch == ')') break;
    items.push_back(word_item(c, alphabet));
  }
  return WordTerm::cat(std::move(items));
}

}  // namespace detail

inline WordTerm parse_word(std::string_view text, const Poset& alphabet) {
  detail::Cursor c{text};
  if (c.eof()) return WordTerm::eps();
  WordTerm w = detail::word_seq(c, alphabet);
  if (!c.eof()) c.fail("trailing input after word");
  return w;
}

// Names appearing in a word expression; used to infer a discrete alphabet
// when none is supplied.
inline std::vector<std::string> word_letter_names(std::string_view text) {
  std::vector<std::string> names;
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (detail::name_char(ch) && ch != 'w') {
      std::size_t start = i;
      while (i < text.size() && detail::name_char(text[i])) ++i;
      names.emplace_back(text.substr(start, i - start));
    } else if (detail::name_char(ch)) {
      // 'w' begins either a name or the power marker; a name continues
      std::size_t start = i;
      while (i < text.size() && detail::name_char(text[i])) ++i;
      std::string tok(text.substr(start, i - start));
      bool power_marker = tok == "w" && start >= 1 && text[start - 1] == '^';
      if (!power_marker) names.push_back(std::move(tok));
    } else {
      ++i;
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

using PosetLoader = std::function<Poset(const std::string&)>;

namespace detail {

inline WpoTerm wpo_term(Cursor& c, const PosetLoader& load);

inline std::vector<WpoTerm> wpo_args(Cursor& c, const PosetLoader& load) {
  c.expect('(', "after constructor name");
  std::vector<WpoTerm> out;
  out.push_back(wpo_term(c, load));
  while (c.eat(',')) out.push_back(wpo_term(c, load));
  c.expect(')', "to close constructor arguments");
  return out;
}

inline WpoTerm wpo_term(Cursor& c, const PosetLoader& load) {
  std::string name = identifier(c);
  std::string low;
  for (char ch : name) low += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  using K = WpoTerm::K;
  if (low == "singleton") return WpoTerm::singleton();
  if (low == "disjointunion") return WpoTerm::node(K::DisjointUnion, wpo_args(c, load));
  if (low == "product") return WpoTerm::node(K::Product, wpo_args(c, load));
  if (low == "lexproduct") return WpoTerm::node(K::LexProduct, wpo_args(c, load));
  if (low == "orderedsum") return WpoTerm::node(K::OrderedSum, wpo_args(c, load));
  if (low == "star") return WpoTerm::node(K::Star, wpo_args(c, load));
  if (low == "pfinne") return WpoTerm::node(K::PfinNE, wpo_args(c, load));
  if (low == "pfin") return WpoTerm::node(K::Pfin, wpo_args(c, load));
  if (low == "h") {
    c.expect('(', "after H");
    Ordinal beta = ord_sum(c);
    c.expect(')', "to close H");
    if (beta.is_zero()) c.fail("H needs beta >= 1");
    return WpoTerm::h_of(std::move(beta));
  }
  if (low == "chain" || low == "antichain") {
    c.expect('(', "after size constructor");
    BigInt n = c.nat();
    c.expect(')', "to close size constructor");
    if (n > 64) c.fail("base posets stay small");
    int m = static_cast<int>(n);
    return WpoTerm::base_of(low == "chain" ? Poset::chain(m)
                                           : Poset::antichain(m));
  }
  if (low == "poset") {
    c.expect('(', "after poset");
    c.skip_ws();
    std::string path;
    while (c.pos < c.text.size() && c.text[c.pos] != ')')
      path += c.text[c.pos++];
    c.expect(')', "to close poset");
    while (!path.empty() && std::isspace(static_cast<unsigned char>(path.back())))
      path.pop_back();
    if (!load) c.fail("poset(FILE) is not available here");
    return WpoTerm::base_of(load(path));
  }
  c.fail("unknown order constructor '" + name + "'");
}

}  // namespace detail

// Order terms in the constructor-name form, e.g. Pfin(H(w^w)),
// DisjointUnion(chain(2), Star(antichain(2))).
inline WpoTerm parse_wpo_term(std::string_view text,
                              const PosetLoader& load_poset = {}) {
  detail::Cursor c{text};
  WpoTerm t = detail::wpo_term(c, load_poset);
  if (!c.eof()) c.fail("trailing input after order term");
  return t;
}

namespace detail {

inline IterSet iterset(Cursor& c, const Poset& alphabet) {
  if (c.eat('{')) {
    std::vector<IterSet> items;
    items.push_back(iterset(c, alphabet));
    while (c.eat(',')) items.push_back(iterset(c, alphabet));
    c.expect('}', "to close a set");
    return IterSet::set(std::move(items));
  }
  std::string name = identifier(c);
  int idx = alphabet.index_of(name);
  if (idx < 0) c.fail("unknown atom '" + name + "'");
  return IterSet::leaf(idx);
}

}  // namespace detail

// Nested-brace sets over named atoms, e.g. {a, b} or {{a},{a,b}}.
inline IterSet parse_iterset(std::string_view text, const Poset& alphabet) {
  detail::Cursor c{text};
  IterSet s = detail::iterset(c, alphabet);
  if (!c.eof()) c.fail("trailing input after set");
  return s;
}

// {"elements":["a","b"],"le":[["a","b"]]}; reflexive/transitive closure is
// taken by the loader, so arbitrary quasi-orders are accepted.
inline Poset parse_poset_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("poset JSON: ") + e.what(), 0);
  }
  if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
    throw parse_error("poset JSON: missing \"elements\" array", 0);
  std::vector<std::string> names;
  for (const auto& e : j["elements"]) {
    if (!e.is_string()) throw parse_error("poset JSON: element is not a string", 0);
    names.push_back(e.get<std::string>());
    if (std::count(names.begin(), names.end(), names.back()) > 1)
      throw parse_error("poset JSON: duplicate element '" + names.back() + "'", 0);
  }
  auto index_of = [&](const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    throw parse_error("poset JSON: unknown element '" + n + "'", 0);
  };
  std::vector<std::pair<int, int>> rel;
  if (j.contains("le")) {
    if (!j["le"].is_array()) throw parse_error("poset JSON: \"le\" must be an array", 0);
    for (const auto& pr : j["le"]) {
      if (!pr.is_array() || pr.size() != 2)
        throw parse_error("poset JSON: le entry must be a pair", 0);
      rel.emplace_back(index_of(pr[0].get<std::string>()),
                       index_of(pr[1].get<std::string>()));
    }
  }
  return Poset::from_relations(std::move(names), rel);
}

}  // namespace wqo
