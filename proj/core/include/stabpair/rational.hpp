#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace stabpair {

using Rational = mpq_class;
using BigInt = mpz_class;

using RationalVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

Rational dot(const RationalVector& a, const RationalVector& b);

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to itself.
std::vector<BigInt> primitive_integer_direction(const RationalVector& v);

/// Row-reduces `rows` in place to reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RationalVector>& rows);

/// Basis of {x : row . x = 0 for all rows}.
std::vector<RationalVector> null_space(std::vector<RationalVector> rows, std::size_t cols);

std::size_t rank(std::vector<RationalVector> rows);

}  // namespace stabpair
