#include <kernelforge/onedim.hpp>

#include <kernelforge/specfun.hpp>

#include <cmath>
#include <string>

namespace kernelforge::onedim {

double bergman_monomial_norm2(unsigned m, double s) {
  if (!(s > -1.0)) {
    throw domain_error("A²_s(𝔻) requires s > -1, got " + std::to_string(s));
  }
  // m!/(s+2)_m = Π_{j=1}^{m} j/(s+1+j), stable for every m.
  double r = 1.0;
  for (unsigned j = 1; j <= m; ++j) r *= static_cast<double>(j) / (s + 1.0 + j);
  return r;
}

double bergman_norm2(const UniPoly& g, double s) {
  double total = 0.0;
  for (const auto& [m, c] : g.coefficients()) {
    total += std::norm(c) * bergman_monomial_norm2(m, s);
  }
  if (g.is_zero()) bergman_monomial_norm2(0, s);  // still validate s
  return total;
}

double fock_monomial_norm2(unsigned m, double gamma) {
  if (!(gamma > 0.0)) {
    throw domain_error("Fock space requires gamma > 0, got " + std::to_string(gamma));
  }
  return std::exp(specfun::log_gamma(m + 1.0) - (m + 1.0) * std::log(gamma));
}

double fock_norm2(const UniPoly& g, double gamma) {
  double total = 0.0;
  for (const auto& [m, c] : g.coefficients()) {
    total += std::norm(c) * fock_monomial_norm2(m, gamma);
  }
  if (g.is_zero()) fock_monomial_norm2(0, gamma);
  return total;
}

}  // namespace kernelforge::onedim
