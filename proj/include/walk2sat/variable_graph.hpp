#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "walk2sat/formula.hpp"

namespace walk2sat {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];  // path halving
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::uint32_t size_of(std::uint32_t x) noexcept { return size_[find(x)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

/// Connected components of the sign-free variable graph (one edge per clause).
struct VariableComponents {
  std::vector<std::uint32_t> component_of;  // index v-1; ids dense, numbered by first variable
  std::vector<std::uint32_t> sizes;         // index component id

  std::uint32_t size_of_variable(Variable v) const { return sizes[component_of[v - 1]]; }
  std::uint32_t largest() const {
    std::uint32_t best = 0;
    for (auto s : sizes) best = std::max(best, s);
    return best;
  }
};

inline VariableComponents variable_graph_components(const Formula& formula) {
  const std::size_t n = formula.num_variables();
  DisjointSet dsu(n);
  for (const Clause& c : formula.clauses()) dsu.unite(c.first.var_index(), c.second.var_index());
  VariableComponents out;
  out.component_of.assign(n, 0);
  std::vector<std::uint32_t> id_of_root(n, static_cast<std::uint32_t>(-1));
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::uint32_t root = dsu.find(v);
    if (id_of_root[root] == static_cast<std::uint32_t>(-1)) {
      id_of_root[root] = static_cast<std::uint32_t>(out.sizes.size());
      out.sizes.push_back(0);
    }
    out.component_of[v] = id_of_root[root];
    ++out.sizes[id_of_root[root]];
  }
  return out;
}

}  // namespace walk2sat
