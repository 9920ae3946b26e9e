#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "walk2sat/formula.hpp"

namespace walk2sat {

enum class Verdict { Sat, Unsat };

inline const char* to_string(Verdict v) noexcept { return v == Verdict::Sat ? "SAT" : "UNSAT"; }

struct SatCertificate {
  Verdict verdict = Verdict::Unsat;
  std::optional<Assignment> assignment;       // when Sat
  std::optional<Variable> witness_variable;   // when Unsat: x and ~x share a component

  bool sat() const noexcept { return verdict == Verdict::Sat; }
};

/// Strongly connected components of the implication digraph on the 2n
/// literals (clause a v b gives ~a -> b and ~b -> a). Component ids are in
/// Tarjan completion order, i.e. reverse topological: sinks get small ids.
inline std::vector<std::uint32_t> implication_components(const Formula& formula) {
  const std::size_t num_vertices = formula.num_literals();
  constexpr std::uint32_t unvisited = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> index(num_vertices, unvisited), low(num_vertices, 0),
      component(num_vertices, unvisited);
  std::vector<std::uint32_t> stack;
  std::vector<bool> on_stack(num_vertices, false);
  struct Frame {
    std::uint32_t vertex;
    std::uint32_t next_edge;
  };
  std::vector<Frame> call_stack;
  std::uint32_t next_index = 0, next_component = 0;

  auto successor_count = [&](std::uint32_t u) {
    return static_cast<std::uint32_t>(formula.occurrences(~Literal::from_code(u)).size());
  };
  auto successor = [&](std::uint32_t u, std::uint32_t k) {
    const Occurrence& occ = formula.occurrences(~Literal::from_code(u))[k];
    const Clause& c = formula.clause(occ.clause);
    return (occ.position == 1 ? c.second : c.first).code();
  };
  auto open = [&](std::uint32_t v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    call_stack.push_back({v, 0});
  };

  for (std::uint32_t root = 0; root < num_vertices; ++root) {
    if (index[root] != unvisited) continue;
    open(root);
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const std::uint32_t u = frame.vertex;
      if (frame.next_edge < successor_count(u)) {
        const std::uint32_t w = successor(u, frame.next_edge++);
        if (index[w] == unvisited)
          open(w);
        else if (on_stack[w])
          low[u] = std::min(low[u], index[w]);
        continue;
      }
      if (low[u] == index[u]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = next_component;
        } while (w != u);
        ++next_component;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const std::uint32_t parent = call_stack.back().vertex;
        low[parent] = std::min(low[parent], low[u]);
      }
    }
  }
  return component;
}

/// Exact 2-SAT by implication-graph SCCs. A literal is set true iff its
/// component precedes its complement's in completion order (it lies
/// topologically later). SAT certificates are checked before returning.
inline SatCertificate solve_2sat(const Formula& formula) {
  const auto component = implication_components(formula);
  const std::size_t n = formula.num_variables();
  SatCertificate cert;
  Assignment sigma(n, +1);
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t pos = component[2 * v], neg = component[2 * v + 1];
    if (pos == neg) {
      cert.verdict = Verdict::Unsat;
      cert.witness_variable = static_cast<Variable>(v + 1);
      return cert;
    }
    sigma.set(static_cast<Variable>(v + 1), pos < neg ? +1 : -1);
  }
  if (!satisfies(formula, sigma)) throw std::logic_error("2-SAT certificate failed verification");
  cert.verdict = Verdict::Sat;
  cert.assignment = std::move(sigma);
  return cert;
}

inline constexpr std::size_t brute_force_max_variables = 24;

/// Exhaustive search. Returns the lexicographically first satisfying
/// assignment over (x1, ..., xn) with +1 ordered before -1.
inline SatCertificate brute_force_sat(const Formula& formula) {
  const std::size_t n = formula.num_variables();
  if (n > brute_force_max_variables) throw std::invalid_argument("brute force limited to 24 variables");
  // Bit (n-1-i) of mask set means x_{i+1} = -1, so increasing masks walk lex order.
  struct Packed {
    std::uint32_t bit_a, bit_b;
    bool neg_a, neg_b;
  };
  std::vector<Packed> packed;
  packed.reserve(formula.num_clauses());
  for (const Clause& c : formula.clauses())
    packed.push_back({1u << (n - c.first.variable()), 1u << (n - c.second.variable()),
                      c.first.is_negative(), c.second.is_negative()});
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool ok = true;
    for (const Packed& p : packed) {
      // literal true iff (variable is -1) == (literal is negative)
      const bool a = ((mask & p.bit_a) != 0) == p.neg_a;
      const bool b = ((mask & p.bit_b) != 0) == p.neg_b;
      if (!a && !b) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Assignment sigma(n, +1);
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << (n - 1 - i))) sigma.set(static_cast<Variable>(i + 1), -1);
    SatCertificate cert;
    cert.verdict = Verdict::Sat;
    cert.assignment = std::move(sigma);
    return cert;
  }
  return {};
}

}  // namespace walk2sat
