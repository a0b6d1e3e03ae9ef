#pragma once

// Polynomials on matrix variable spaces M_{k x (N+1)}, torus characters,
// the SL(N+1) action by column substitution and Gaussian sampling.
//
// Group action convention, used everywhere in the library:
//
//     (sigma . P)(A) := P(A sigma)
//
// so act(s1, act(s2, P)) == act(s1 * s2, P), and a diagonal sigma = diag(t)
// scales a monomial of column-degree vector a by prod_j t_j^{a_j}.

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "stabpair/rational.hpp"

namespace stabpair {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

/// splitmix64 derivation of an independent stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

struct MatrixShape {
  int rows = 1;
  int cols = 1;

  int size() const { return rows * cols; }
  friend bool operator==(const MatrixShape&, const MatrixShape&) = default;
};

/// Row-major exponent matrix of a monomial.
using Exponent = std::vector<std::uint16_t>;

/// Degree of each matrix column in a monomial, and its projection to the
/// sum-zero hyperplane.
struct TorusCharacter {
  std::vector<int> raw;

  int total() const;
  RationalVector projected() const;
  friend auto operator<=>(const TorusCharacter&, const TorusCharacter&) = default;
};

TorusCharacter column_degrees(const Exponent& e, const MatrixShape& shape);

class SparsePolynomial {
 public:
  using TermMap = std::map<Exponent, Complex>;

  SparsePolynomial(MatrixShape shape, int degree);
  /// Builds from terms; drops exact zeros and checks homogeneity.
  SparsePolynomial(MatrixShape shape, int degree, TermMap terms);

  static SparsePolynomial constant(MatrixShape shape, Complex c);
  /// The single matrix entry x_{row,col}.
  static SparsePolynomial variable(MatrixShape shape, int row, int col);
  static SparsePolynomial monomial(MatrixShape shape, const Exponent& e, Complex c = 1.0);

  const MatrixShape& shape() const { return shape_; }
  int degree() const { return degree_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  SparsePolynomial& operator+=(const SparsePolynomial& o);
  SparsePolynomial& operator-=(const SparsePolynomial& o);
  SparsePolynomial& operator*=(Complex c);
  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
  friend SparsePolynomial operator*(SparsePolynomial a, Complex c) { return a *= c; }
  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b);

  /// Coefficient of e, zero if absent.
  Complex coefficient(const Exponent& e) const;

  nlohmann::json to_json() const;
  static SparsePolynomial from_json(const nlohmann::json& j);

 private:
  MatrixShape shape_;
  int degree_ = 0;
  TermMap terms_;
};

/// Max |coefficient difference| / max |coefficient|.
double relative_distance(const SparsePolynomial& a, const SparsePolynomial& b);

/// Invertible (N+1)x(N+1) complex matrix with cached determinant.
class GroupElement {
 public:
  explicit GroupElement(ComplexMatrix m);

  static GroupElement identity(int n);
  static GroupElement diagonal(const std::vector<Complex>& entries);
  static GroupElement permutation(const std::vector<int>& image);
  /// Exact unimodular integer matrix: a product of random elementary
  /// transvections with coefficients in {-1, 1}.
  static GroupElement random_integer_sl(int n, Rng& rng, int steps = 0);
  /// Haar-distributed unitary matrix.
  static GroupElement random_unitary(int n, Rng& rng);
  /// Gaussian matrix rescaled to unit determinant.
  static GroupElement random_sl(int n, Rng& rng);

  const ComplexMatrix& matrix() const { return m_; }
  Complex determinant() const { return det_; }
  int size() const { return static_cast<int>(m_.rows()); }
  bool is_diagonal() const;
  /// ||sigma||^2 = Trace(sigma sigma^*).
  double frobenius_sq() const { return m_.squaredNorm(); }

  GroupElement operator*(const GroupElement& o) const { return GroupElement(m_ * o.m_); }
  GroupElement inverse() const { return GroupElement(m_.inverse()); }

  nlohmann::json to_json() const;
  static GroupElement from_json(const nlohmann::json& j);

 private:
  ComplexMatrix m_;
  Complex det_;
};

/// Algebraic one-parameter subgroup t -> diag(t^{e_0}, ..., t^{e_N}).
class OnePSG {
 public:
  explicit OnePSG(std::vector<long> exponents);

  const std::vector<long>& exponents() const { return exponents_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  GroupElement at(double t) const;

 private:
  std::vector<long> exponents_;
};

/// Evaluation-only homogeneous polynomial.
class BlackBoxPolynomial {
 public:
  using Evaluator = std::function<Complex(const ComplexMatrix&)>;

  /// Runs a 20-sample randomized homogeneity check and throws on failure.
  BlackBoxPolynomial(MatrixShape shape, int degree, Evaluator evaluator, std::uint64_t check_seed = 0);

  const MatrixShape& shape() const { return shape_; }
  int degree() const { return degree_; }
  Complex operator()(const ComplexMatrix& a) const { return evaluator_(a); }

 private:
  MatrixShape shape_;
  int degree_;
  Evaluator evaluator_;
};

using Polynomial = std::variant<SparsePolynomial, BlackBoxPolynomial>;

const MatrixShape& shape_of(const Polynomial& p);
int degree_of(const Polynomial& p);

/// P^{tensor k}, never materialized.
struct FormalPower {
  Polynomial base;
  int exponent = 1;

  FormalPower(Polynomial b, int k);
};

std::set<TorusCharacter> support(const SparsePolynomial& p);

/// (sigma . P)(A) = P(A sigma).
SparsePolynomial act(const GroupElement& sigma, const SparsePolynomial& p);
/// Black-box composition A -> P(A sigma).
BlackBoxPolynomial act(const GroupElement& sigma, const BlackBoxPolynomial& p);
Polynomial act(const GroupElement& sigma, const Polynomial& p);

Complex evaluate(const SparsePolynomial& p, const ComplexMatrix& a);
Complex evaluate(const BlackBoxPolynomial& p, const ComplexMatrix& a);
Complex evaluate(const Polynomial& p, const ComplexMatrix& a);

std::set<TorusCharacter> tensor_support(const SparsePolynomial& v, const SparsePolynomial& w);

/// Standard complex Gaussian matrix, density exp(-|Z|^2)/pi^{rows*cols}.
ComplexMatrix gaussian_sample(const MatrixShape& shape, Rng& rng);

}  // namespace stabpair
