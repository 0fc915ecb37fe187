#include <kernelforge/poly.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace kernelforge {

// ---- UniPoly ---------------------------------------------------------------

UniPoly::UniPoly(Map coefficients) {
  for (const auto& [m, c] : coefficients) add_term(m, c);
}

UniPoly UniPoly::constant(cplx c) { return monomial(0, c); }

UniPoly UniPoly::monomial(unsigned m, cplx c) {
  UniPoly p;
  p.add_term(m, c);
  return p;
}

cplx UniPoly::coefficient(unsigned m) const {
  const auto it = coeffs_.find(m);
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

int UniPoly::degree() const {
  return coeffs_.empty() ? -1 : static_cast<int>(coeffs_.rbegin()->first);
}

void UniPoly::add_term(unsigned m, cplx c) {
  if (c == 0.0) return;
  auto [it, inserted] = coeffs_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

UniPoly UniPoly::derivative(unsigned order) const {
  UniPoly out;
  for (const auto& [m, c] : coeffs_) {
    if (m < order) continue;
    double falling = 1.0;
    for (unsigned i = 0; i < order; ++i) falling *= static_cast<double>(m - i);
    out.add_term(m - order, c * falling);
  }
  return out;
}

cplx UniPoly::evaluate(cplx z) const {
  if (coeffs_.empty()) return 0.0;
  cplx acc = 0.0;
  unsigned current = coeffs_.rbegin()->first;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    for (; current > it->first; --current) acc *= z;
    acc += it->second;
  }
  for (; current > 0; --current) acc *= z;
  return acc;
}

UniPoly& UniPoly::operator+=(const UniPoly& other) {
  for (const auto& [m, c] : other.coeffs_) add_term(m, c);
  return *this;
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  return a + cplx(-1.0) * b;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  UniPoly out;
  for (const auto& [m1, c1] : a.coeffs_) {
    for (const auto& [m2, c2] : b.coeffs_) out.add_term(m1 + m2, c1 * c2);
  }
  return out;
}

UniPoly operator*(cplx s, const UniPoly& p) {
  UniPoly out;
  for (const auto& [m, c] : p.coeffs_) out.add_term(m, s * c);
  return out;
}

// ---- BiPoly ----------------------------------------------------------------

BiPoly::BiPoly(Map coefficients) {
  for (const auto& [k, c] : coefficients) add_term(k.first, k.second, c);
}

BiPoly BiPoly::constant(cplx c) { return monomial(0, 0, c); }

BiPoly BiPoly::monomial(unsigned m, unsigned n, cplx c) {
  BiPoly p;
  p.add_term(m, n, c);
  return p;
}

BiPoly BiPoly::diagonal_factor() { return z1() - z2(); }

cplx BiPoly::coefficient(unsigned m, unsigned n) const {
  const auto it = coeffs_.find({m, n});
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

int BiPoly::total_degree() const {
  int d = -1;
  for (const auto& [k, c] : coeffs_) d = std::max(d, static_cast<int>(k.first + k.second));
  return d;
}

int BiPoly::degree_in(Variable v) const {
  int d = -1;
  for (const auto& [k, c] : coeffs_) {
    d = std::max(d, static_cast<int>(v == Variable::z1 ? k.first : k.second));
  }
  return d;
}

BiPoly BiPoly::homogeneous_part(unsigned d) const {
  BiPoly out;
  for (const auto& [k, c] : coeffs_) {
    if (k.first + k.second == d) out.add_term(k.first, k.second, c);
  }
  return out;
}

void BiPoly::add_term(unsigned m, unsigned n, cplx c) {
  if (c == 0.0) return;
  auto [it, inserted] = coeffs_.try_emplace({m, n}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

BiPoly& BiPoly::operator+=(const BiPoly& other) {
  for (const auto& [k, c] : other.coeffs_) add_term(k.first, k.second, c);
  return *this;
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + cplx(-1.0) * b; }

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly out;
  for (const auto& [k1, c1] : a.coeffs_) {
    for (const auto& [k2, c2] : b.coeffs_) {
      out.add_term(k1.first + k2.first, k1.second + k2.second, c1 * c2);
    }
  }
  return out;
}

BiPoly operator*(cplx s, const BiPoly& p) {
  BiPoly out;
  for (const auto& [k, c] : p.coeffs_) out.add_term(k.first, k.second, s * c);
  return out;
}

// ---- free functions --------------------------------------------------------

BiPoly add(const BiPoly& p, const BiPoly& q) { return p + q; }
BiPoly scale(cplx s, const BiPoly& p) { return s * p; }
BiPoly multiply(const BiPoly& p, const BiPoly& q) { return p * q; }

BiPoly power(const BiPoly& p, unsigned exponent) {
  BiPoly out = BiPoly::constant(1.0);
  for (unsigned i = 0; i < exponent; ++i) out = out * p;
  return out;
}

BiPoly differentiate(const BiPoly& p, Variable variable, unsigned order) {
  BiPoly out;
  for (const auto& [k, c] : p.coefficients()) {
    const unsigned e = variable == Variable::z1 ? k.first : k.second;
    if (e < order) continue;
    double falling = 1.0;
    for (unsigned i = 0; i < order; ++i) falling *= static_cast<double>(e - i);
    if (variable == Variable::z1) {
      out.add_term(k.first - order, k.second, c * falling);
    } else {
      out.add_term(k.first, k.second - order, c * falling);
    }
  }
  return out;
}

UniPoly restrict_diagonal(const BiPoly& p) {
  UniPoly::Map acc;
  for (const auto& [k, c] : p.coefficients()) acc[k.first + k.second] += c;
  return UniPoly(std::move(acc));
}

UniPoly restrict_z2_zero(const BiPoly& p) {
  UniPoly::Map acc;
  for (const auto& [k, c] : p.coefficients()) {
    if (k.second == 0) acc[k.first] += c;
  }
  return UniPoly(std::move(acc));
}

namespace {

// One exact division by (z1 - z2), degree by degree. Writing the degree-d
// part as Σ_m c_m z1^m z2^(d-m) and the quotient as Σ_m e_m z1^m z2^(d-1-m),
// matching coefficients gives e_{m-1} = c_m + e_m; the remainder is c_0 + e_0.
BiPoly divide_once(const BiPoly& p) {
  const int top = p.total_degree();
  BiPoly quotient;
  BiPoly remainder;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int d = 0; d <= top; ++d) {
    std::vector<cplx> c(static_cast<std::size_t>(d) + 1, 0.0);
    double magnitude = 0.0;
    for (const auto& [k, v] : p.coefficients()) {
      if (static_cast<int>(k.first + k.second) == d) {
        c[k.first] = v;
        magnitude += std::abs(v);
      }
    }
    if (magnitude == 0.0) continue;
    cplx e = 0.0;  // e_m, starting from e_d = 0
    std::vector<cplx> q(static_cast<std::size_t>(d), 0.0);
    for (int m = d; m >= 1; --m) {
      e = c[static_cast<std::size_t>(m)] + e;
      q[static_cast<std::size_t>(m - 1)] = e;
    }
    const cplx r = c[0] + e;
    if (std::abs(r) > 64.0 * eps * magnitude) {
      remainder.add_term(0, static_cast<unsigned>(d), r);
    }
    for (int m = 0; m < d; ++m) {
      quotient.add_term(static_cast<unsigned>(m), static_cast<unsigned>(d - 1 - m),
                        q[static_cast<std::size_t>(m)]);
    }
  }
  if (!remainder.is_zero()) {
    throw divisibility_error("polynomial is not divisible by (z1 - z2)",
                             std::move(remainder));
  }
  return quotient;
}

}  // namespace

BiPoly divide_diag_power(const BiPoly& p, unsigned N) {
  BiPoly q = p;
  for (unsigned i = 0; i < N; ++i) q = divide_once(q);
  return q;
}

cplx evaluate(const BiPoly& p, const Point2& z) {
  // Horner in z1 over inner Horner polynomials in z2.
  std::map<unsigned, UniPoly::Map> rows;
  for (const auto& [k, c] : p.coefficients()) rows[k.first][k.second] = c;
  if (rows.empty()) return 0.0;
  cplx acc = 0.0;
  unsigned current = rows.rbegin()->first;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    for (; current > it->first; --current) acc *= z.z1;
    acc += UniPoly(it->second).evaluate(z.z2);
  }
  for (; current > 0; --current) acc *= z.z1;
  return acc;
}

}  // namespace kernelforge
