#pragma once

#include <kernelforge/poly.hpp>

namespace kernelforge::onedim {

/// ‖z^m‖² in A²_s(𝔻) with the probability measure (s+1)(1-|z|²)^s dA:
/// m! / (s+2)_m. Requires s > -1.
double bergman_monomial_norm2(unsigned m, double s);

/// ‖g‖²_s = Σ |c_m|² m!/(s+2)_m; monomials are orthogonal.
double bergman_norm2(const UniPoly& g, double s);

/// ‖z^m‖² in the one-variable Fock space with weight e^{-γ|z|²} dA:
/// m! / γ^(m+1). Requires γ > 0.
double fock_monomial_norm2(unsigned m, double gamma);

double fock_norm2(const UniPoly& g, double gamma);

}  // namespace kernelforge::onedim
