#pragma once

#include <kernelforge/expansion.hpp>
#include <kernelforge/poly.hpp>
#include <kernelforge/series.hpp>

namespace kernelforge::ball {

/// Exponents of the space with norm
///   ∫ |f|² (1 - |z1|² - |z2|²)^α (1 - |z1|²)^β |z2|^(2θ) dA(z1, z2)
/// on the unit ball, dA the volume element normalized so that the ball has
/// mass 1/2.
struct BallParams {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;

  void validate() const;
  /// α + β + θ + N + 1: index of the one-variable space of order N.
  double index(unsigned N) const { return alpha + beta + theta + N + 1.0; }
};

/// Throws domain_error unless |z1|² + |z2|² < 1.
void check_point(const Point2& z);

/// ‖z2^N g(z1)‖² = embed_const(N) ‖g‖²_{α+β+θ+N+1}, the right-hand norm taken
/// in the normalized one-variable space.
double embed_const(const BallParams& params, unsigned N);

/// Σ_N embed_const(N)/(N!)² ‖∂_{z2}^N f(z1, 0)‖²_{α+β+θ+N+1}.
NormExpansion norm_expansion(const BallParams& params, const BiPoly& f);

/// (z2 conj(w2))^N / (embed_const(N) (1 - z1 conj(w1))^(α+β+θ+N+3)).
cplx q_kernel(const BallParams& params, unsigned N, const Point2& z, const Point2& w);

/// Closed form through two Gauss functions of x = z2 conj(w2) / (1 - z1 conj(w1)).
SeriesResult full_kernel(const BallParams& params, const Point2& z, const Point2& w,
                         const TruncationConfig& cfg = {});

/// The same kernel as the plain sum Σ_N q_kernel(N).
SeriesResult full_kernel_series(const BallParams& params, const Point2& z, const Point2& w,
                                const TruncationConfig& cfg = {});

/// Expansion of the sphere norm ∫_S |f|² (1 - |z1|²)^β |z2|^(2θ) dσ (σ normalized):
///   Σ_N ‖∂_{z2}^N f(z1, 0)‖²_{β+θ+N} / ((β+θ+N+1)(N!)²).
/// Requires β + θ > -1.
NormExpansion hardy_norm_expansion(double beta, double theta, const BiPoly& f);

}  // namespace kernelforge::ball
