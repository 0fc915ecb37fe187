#pragma once

#include <kernelforge/expansion.hpp>
#include <kernelforge/poly.hpp>
#include <kernelforge/series.hpp>

#include <Eigen/Core>

#include <vector>

namespace kernelforge::bidisk {

/// Weight exponents of the space with norm
///   ∫∫ |f|² |1 - conj(z2) z1|^(2ϑ) |z1 - z2|^(2θ) dA_α(z1) dA_β(z2).
struct BidiskParams {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double vartheta = 0.0;

  /// Throws domain_error unless α, β, θ, ϑ > -1 and α+β+2θ+2ϑ+3 > 0.
  void validate() const;

  double a() const { return alpha + theta + vartheta + 2.0; }
  double b() const { return beta + theta + vartheta + 2.0; }
  /// Index of the diagonal restriction space A²_s(𝔻).
  double s() const { return alpha + beta + 2.0 * theta + 2.0 * vartheta + 2.0; }

  /// Same space with θ replaced by θ + N.
  BidiskParams shifted(unsigned N) const {
    return {alpha, beta, theta + static_cast<double>(N), vartheta};
  }
};

/// Throws domain_error unless |z1| < 1 and |z2| < 1.
void check_point(const Point2& z);

/// 1/σ as a 3F2 value at unit argument times a Gamma prefactor. Uses the
/// Thomae-transformed series when it converges faster.
SeriesResult inverse_sigma(const BidiskParams& params, const TruncationConfig& cfg = {});

/// 1/σ from the untransformed 3F2, whose terms decay like n^-(β+2).
SeriesResult inverse_sigma_direct(const BidiskParams& params, const TruncationConfig& cfg = {});

/// σ(α, β, θ, ϑ), the kernel value at the origin.
double sigma(const BidiskParams& params, const TruncationConfig& cfg = {});

/// Closed Gamma form of 1/σ, valid only for ϑ = 0.
double inverse_sigma_gamma_form(const BidiskParams& params);

/// Kernel at (z, (w1, w1)):
///   σ / ((1 - conj(w1) z1)^a (1 - conj(w1) z2)^b).
cplx diag_kernel(const BidiskParams& params, const Point2& z, cplx w1,
                 const TruncationConfig& cfg = {});

/// Kernel of the order-N difference space,
///   (z1-z2)^N conj(w1-w2)^N σ(θ+N) Σ_n n!/(s+2N+2)_n c_n(z) conj(c_n(w)),
/// with c_n(z) = Σ_j (a+N)_j/j! (b+N)_{n-j}/(n-j)! z1^j z2^(n-j).
SeriesResult q_kernel(const BidiskParams& params, unsigned N, const Point2& z,
                      const Point2& w, const TruncationConfig& cfg = {});

/// Full reproducing kernel Σ_N q_kernel(N).
SeriesResult full_kernel(const BidiskParams& params, const Point2& z, const Point2& w,
                         const TruncationConfig& cfg = {});

/// Per-degree Taylor coefficient matrices of the full kernel. Block d is
/// (d+1)×(d+1), indexed by the z1 exponent m of z1^m z2^(d-m), so that
///   P(z, w) = Σ_d Σ_{i,j} K_d(i,j) z1^i z2^(d-i) conj(w1^j w2^(d-j)).
std::vector<Eigen::MatrixXd> taylor_blocks(const BidiskParams& params, unsigned max_degree,
                                           const TruncationConfig& cfg = {});

/// a_{k,N} = (-1)^(N-k)/(k!(N-k)!) (a+k)_{N-k} / (s+N+k+1)_{N-k}.
/// The formula is evaluated without validating the parameters.
double coeff_a(const BidiskParams& params, unsigned k, unsigned N);

/// Hardy-space coefficients b_{k,N} = (-1)^(N-k)/(k!(N-k)!) (θ+k+1)_{N-k}/(2θ+N+k+1)_{N-k}.
double coeff_b(double theta, unsigned k, unsigned N);

/// ⊘[P_N f / (z1 - z2)^N] = Σ_k a_{k,N} ∂^(N-k) ⊘[∂_{z1}^k f].
UniPoly restriction_transform(const BidiskParams& params, const BiPoly& f, unsigned N);

/// ‖f‖² = Σ_N σ(θ+N)^-1 ‖restriction_transform(f, N)‖²_{s+2N}, N = 0..deg f.
NormExpansion norm_expansion(const BidiskParams& params, const BiPoly& f,
                             const TruncationConfig& cfg = {});

/// Expansion of the torus norm ∫∫ |f|² |z1-z2|^(2θ) dm dm; requires θ > -1/2.
NormExpansion hardy_norm_expansion(double theta, const BiPoly& f);

}  // namespace kernelforge::bidisk
