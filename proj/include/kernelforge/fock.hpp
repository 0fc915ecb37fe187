#pragma once

#include <kernelforge/expansion.hpp>
#include <kernelforge/poly.hpp>
#include <kernelforge/series.hpp>

namespace kernelforge::fock {

/// Exponents of the space with norm
///   ∫∫ |f|² |z1 - z2|^(2θ) e^(-α|z1|² - β|z2|²) dA(z1) dA(z2),
/// dA = dx dy / π.
struct FockParams {
  double alpha = 1.0;
  double beta = 1.0;
  double theta = 0.0;

  /// Throws domain_error unless α > 0, β > 0, θ > -1.
  void validate() const;
  double gamma() const { return alpha + beta; }
};

/// (αβ)^(θ+1) / ((α+β)^θ Γ(θ+1)).
double sigma(const FockParams& params);

/// σ e^(α conj(w1) z1 + β conj(w1) z2).
cplx diag_kernel(const FockParams& params, const Point2& z, cplx w1);

/// Kernel of the functions vanishing to order exactly zero on the diagonal:
///   σ e^((α conj(w1) + β conj(w2))(α z1 + β z2)/(α+β)).
cplx q0_kernel(const FockParams& params, const Point2& z, const Point2& w);

/// (αβ)^(θ+1)/(α+β)^θ e^((α conj(w1) + β conj(w2))(α z1 + β z2)/(α+β))
///   × E_θ(αβ (z1 - z2) conj(w1 - w2) / (α+β)).
SeriesResult full_kernel(const FockParams& params, const Point2& z, const Point2& w,
                         const TruncationConfig& cfg = {});

/// The same kernel assembled in the coordinates
///   u1 = (α z1 + β z2)/(α+β),  u2 = (z1 - z2)/(α+β),
/// where the space splits into a Gaussian factor in u1 and a radially
/// weighted factor in u2 whose kernel is Σ_n δ^(θ+n+1)/Γ(θ+n+1) (u2 conj(v2))^n,
/// δ = αβ(α+β). The second factor is summed directly when that is well
/// conditioned and otherwise through its Beta-integral representation.
SeriesResult cov_kernel(const FockParams& params, const Point2& z, const Point2& w,
                        const TruncationConfig& cfg = {});

/// c_{k,N} = (-1)^(N-k) C(N,k) (α/(α+β))^(N-k).
double coeff_c(const FockParams& params, unsigned k, unsigned N);

/// (1/N!) Σ_k c_{k,N} ∂^(N-k) ⊘[∂_{z1}^k f].
UniPoly restriction_transform(const FockParams& params, const BiPoly& f, unsigned N);

/// Σ_N (α+β)^(θ+N+1) Γ(θ+N+1)/(αβ)^(θ+N+1) ‖restriction_transform(f, N)‖²_{α+β}.
NormExpansion norm_expansion(const FockParams& params, const BiPoly& f);

}  // namespace kernelforge::fock
