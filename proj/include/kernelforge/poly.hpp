#pragma once

#include <kernelforge/series.hpp>

#include <map>
#include <stdexcept>
#include <utility>

namespace kernelforge {

struct Point2 {
  cplx z1;
  cplx z2;
};

enum class Variable { z1 = 1, z2 = 2 };

/// Sparse polynomial Σ c_m z^m in one complex variable. Exact zeros are never
/// stored.
class UniPoly {
public:
  using Map = std::map<unsigned, cplx>;

  UniPoly() = default;
  explicit UniPoly(Map coefficients);

  static UniPoly constant(cplx c);
  static UniPoly monomial(unsigned m, cplx c = 1.0);

  const Map& coefficients() const { return coeffs_; }
  cplx coefficient(unsigned m) const;
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const;

  UniPoly derivative(unsigned order = 1) const;
  cplx evaluate(cplx z) const;

  UniPoly& operator+=(const UniPoly& other);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(cplx s, const UniPoly& p);
  friend bool operator==(const UniPoly&, const UniPoly&) = default;

private:
  void add_term(unsigned m, cplx c);
  Map coeffs_;
};

/// Sparse polynomial Σ c_{m,n} z1^m z2^n. Exact zeros are never stored.
class BiPoly {
public:
  using Key = std::pair<unsigned, unsigned>;
  using Map = std::map<Key, cplx>;

  BiPoly() = default;
  explicit BiPoly(Map coefficients);

  static BiPoly constant(cplx c);
  static BiPoly monomial(unsigned m, unsigned n, cplx c = 1.0);
  static BiPoly z1() { return monomial(1, 0); }
  static BiPoly z2() { return monomial(0, 1); }
  /// z1 - z2, whose zero set is the diagonal.
  static BiPoly diagonal_factor();

  const Map& coefficients() const { return coeffs_; }
  cplx coefficient(unsigned m, unsigned n) const;
  bool is_zero() const { return coeffs_.empty(); }
  /// Largest m + n over stored terms; -1 for the zero polynomial.
  int total_degree() const;
  /// Largest exponent of the given variable; -1 for the zero polynomial.
  int degree_in(Variable v) const;
  /// Terms with m + n == d.
  BiPoly homogeneous_part(unsigned d) const;

  BiPoly& operator+=(const BiPoly& other);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(cplx s, const BiPoly& p);
  friend bool operator==(const BiPoly&, const BiPoly&) = default;

  void add_term(unsigned m, unsigned n, cplx c);

private:
  Map coeffs_;
};

/// Raised when a polynomial is not divisible by (z1 - z2)^N.
class divisibility_error : public std::runtime_error {
public:
  divisibility_error(const std::string& what, BiPoly remainder)
      : std::runtime_error(what), remainder_(std::move(remainder)) {}
  const BiPoly& remainder() const { return remainder_; }

private:
  BiPoly remainder_;
};

BiPoly add(const BiPoly& p, const BiPoly& q);
BiPoly scale(cplx s, const BiPoly& p);
BiPoly multiply(const BiPoly& p, const BiPoly& q);
BiPoly power(const BiPoly& p, unsigned exponent);

/// ∂^order p / ∂(variable)^order.
BiPoly differentiate(const BiPoly& p, Variable variable, unsigned order);

/// (⊘p)(z) = p(z, z).
UniPoly restrict_diagonal(const BiPoly& p);

/// q with (z1 - z2)^N q = p. Throws divisibility_error carrying the
/// remainder of the first failing division step.
BiPoly divide_diag_power(const BiPoly& p, unsigned N);

cplx evaluate(const BiPoly& p, const Point2& z);

/// p(z1, 0) as a polynomial in z1.
UniPoly restrict_z2_zero(const BiPoly& p);

}  // namespace kernelforge
