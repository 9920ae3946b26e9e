#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "walk2sat/formula.hpp"

namespace walk2sat {

class DimacsError : public std::runtime_error {
 public:
  DimacsError(std::size_t line, const std::string& what)
      : std::runtime_error("dimacs line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_int(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  const char* begin = token.data();
  if (!token.empty() && token.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw DimacsError(line, "not an integer: '" + std::string(token) + "'");
  return value;
}

}  // namespace detail

/// Parses DIMACS CNF restricted to two-literal clauses over distinct
/// variables. Clause order and literal order are preserved.
inline Formula parse_dimacs(std::string_view text) {
  std::size_t line_no = 0;
  bool have_header = false;
  std::int64_t n = 0, m = 0;
  std::vector<Clause> clauses;
  std::vector<std::int64_t> pending;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto tokens = detail::split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "c" || tokens[0].front() == 'c') continue;
    if (tokens[0] == "%") break;  // SATLIB trailer
    if (tokens[0] == "p") {
      if (have_header) throw DimacsError(line_no, "duplicate header");
      if (tokens.size() != 4 || tokens[1] != "cnf") throw DimacsError(line_no, "malformed header");
      n = detail::parse_int(tokens[2], line_no);
      m = detail::parse_int(tokens[3], line_no);
      if (n < 0 || m < 0) throw DimacsError(line_no, "negative header count");
      have_header = true;
      continue;
    }
    if (!have_header) throw DimacsError(line_no, "clause before header");
    for (std::string_view tok : tokens) {
      const std::int64_t value = detail::parse_int(tok, line_no);
      if (value != 0) {
        if (value > n || -value > n)
          throw DimacsError(line_no, "literal " + std::to_string(value) + " out of range");
        pending.push_back(value);
        continue;
      }
      if (pending.size() != 2)
        throw DimacsError(line_no, "clause width " + std::to_string(pending.size()) + " != 2");
      if (pending[0] == pending[1] || pending[0] == -pending[1])
        throw DimacsError(line_no, "clause repeats variable " +
                                       std::to_string(pending[0] < 0 ? -pending[0] : pending[0]));
      clauses.push_back({Literal::from_dimacs(pending[0]), Literal::from_dimacs(pending[1])});
      pending.clear();
    }
  }
  if (!have_header) throw DimacsError(line_no, "missing header");
  if (!pending.empty()) throw DimacsError(line_no, "unterminated clause");
  if (static_cast<std::int64_t>(clauses.size()) != m)
    throw DimacsError(line_no, "header declares " + std::to_string(m) + " clauses, found " +
                                   std::to_string(clauses.size()));
  return Formula(static_cast<std::size_t>(n), std::move(clauses));
}

/// Canonical form: header line, then one "a b 0" line per clause.
inline std::string write_dimacs(const Formula& formula) {
  std::string out = "p cnf " + std::to_string(formula.num_variables()) + " " +
                    std::to_string(formula.num_clauses()) + "\n";
  out.reserve(out.size() + formula.num_clauses() * 16);
  for (const Clause& c : formula.clauses()) {
    out += std::to_string(c.first.to_dimacs());
    out += ' ';
    out += std::to_string(c.second.to_dimacs());
    out += " 0\n";
  }
  return out;
}

}  // namespace walk2sat
