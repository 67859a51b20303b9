#pragma once

#include <string>
#include <vector>

#include "wqo/errors.hpp"

namespace wqo {

// Finite quasi-order over named atoms.  The relation is closed under
// reflexivity and transitivity at construction; equivalence classes are
// computed eagerly.  Atoms keep their identity (no quotienting of the
// carrier), the classes are bookkeeping for order-type counting.
class Poset {
 public:
  Poset() = default;

  static Poset from_relations(std::vector<std::string> names,
                              const std::vector<std::pair<int, int>>& le_pairs) {
    Poset p;
    p.names_ = std::move(names);
    int n = static_cast<int>(p.names_.size());
    p.le_.assign(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) p.le_[i][i] = 1;
    for (auto [a, b] : le_pairs) {
      if (a < 0 || a >= n || b < 0 || b >= n)
        throw std::invalid_argument("relation index out of range");
      p.le_[a][b] = 1;
    }
    // Floyd-Warshall closure
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (p.le_[i][k])
          for (int j = 0; j < n; ++j)
            if (p.le_[k][j]) p.le_[i][j] = 1;
    p.compute_classes();
    return p;
  }

  static Poset chain(int n) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> rel;
    for (int i = 0; i < n; ++i) {
      names.push_back(std::string(1, static_cast<char>('a' + i % 26)) +
                      (i >= 26 ? std::to_string(i / 26) : ""));
      if (i > 0) rel.emplace_back(i - 1, i);
    }
    return from_relations(std::move(names), rel);
  }

  static Poset antichain(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
      names.push_back(std::string(1, static_cast<char>('a' + i % 26)) +
                      (i >= 26 ? std::to_string(i / 26) : ""));
    return from_relations(std::move(names), {});
  }

  int size() const { return static_cast<int>(names_.size()); }
  bool le(int a, int b) const { return le_[a][b]; }
  bool equiv(int a, int b) const { return le_[a][b] && le_[b][a]; }
  bool strictly_less(int a, int b) const { return le_[a][b] && !le_[b][a]; }
  const std::string& name(int a) const { return names_[a]; }
  int class_count() const { return class_count_; }
  int class_of(int a) const { return class_of_[a]; }

  int index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (names_[i] == name) return i;
    return -1;
  }

  bool maximal(int a) const {
    for (int b = 0; b < size(); ++b)
      if (strictly_less(a, b)) return false;
    return true;
  }

 private:
  void compute_classes() {
    int n = size();
    class_of_.assign(n, -1);
    class_count_ = 0;
    for (int i = 0; i < n; ++i) {
      if (class_of_[i] >= 0) continue;
      for (int j = i; j < n; ++j)
        if (equiv(i, j)) class_of_[j] = class_count_;
      ++class_count_;
    }
  }

  std::vector<std::string> names_;
  std::vector<std::vector<char>> le_;
  std::vector<int> class_of_;
  int class_count_ = 0;
};

}  // namespace wqo
