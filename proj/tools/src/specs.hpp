#pragma once

// Text specs for polynomials, pairs and group elements on the command line.
//
//   poly  := disc:<d> | res:<d> | det:<n> | const:<cols> | monomial:<r0;r1;...>
//          | <file.json>[#key]
//   term  := [I^<q>*]<poly>[^<k>]
//   pair  := v=<term>,w=<term>
//   sigma := identity | diag:<t0,...> | ray:<e0,...>@<t> | matrix:<row;row;...> | <file.json>

#include <optional>
#include <stdexcept>
#include <string>

#include "stabpair/pairstab.hpp"

namespace stabpair::cli {

/// Malformed spec; `column` is the 1-based offset of the offending text.
class SpecError : public std::invalid_argument {
 public:
  SpecError(const std::string& spec, std::size_t column, const std::string& what);
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

SparsePolynomial determinant_polynomial(int n);
Polynomial determinant(int n);

Polynomial parse_poly(const std::string& spec);
PairVector parse_term(const std::string& spec);
/// "v=<term>,w=<term>", or "rnc:<d>" for the normalized rational-normal-curve pair.
PairSpec parse_pair(const std::string& spec);
/// d when spec names a normalized variety pair "rnc:<d>".
std::optional<int> variety_pair_degree(const std::string& spec);
GroupElement parse_sigma(const std::string& spec, int ambient);

/// "a:b" or "a" as an inclusive integer range.
std::pair<int, int> parse_range(const std::string& spec);

}  // namespace stabpair::cli
