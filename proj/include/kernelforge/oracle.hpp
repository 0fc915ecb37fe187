#pragma once

#include <kernelforge/ball.hpp>
#include <kernelforge/bidisk.hpp>
#include <kernelforge/fock.hpp>
#include <kernelforge/poly.hpp>

#include <Eigen/Core>
#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kernelforge::oracle {

/// Gram matrices of the monomials z1^m z2^(d-m), one block per total degree
/// d, indexed by m. Every weight here is invariant under conjugation, so the
/// blocks are real symmetric.
struct GramBlocks {
  std::string space;
  std::map<std::string, double> params;
  bool exact = true;
  /// Largest estimated absolute quadrature error over all entries; 0 if exact.
  double error_estimate = 0.0;
  std::vector<Eigen::MatrixXd> blocks;

  unsigned max_degree() const { return static_cast<unsigned>(blocks.size()) - 1; }
  nlohmann::json to_json() const;
  static GramBlocks from_json(const nlohmann::json& j);
};

/// Gram blocks for ∫∫ |z1 - z2|^(2θ) dA_α dA_β, integer θ ≥ 0, ϑ = 0, built
/// from the binomial expansion of |z1 - z2|^(2θ) and the moments m!/(α+2)_m.
GramBlocks gram_bidisk_exact(const bidisk::BidiskParams& params, unsigned max_degree);

/// Same reduction with the Gaussian moments m!/α^(m+1).
GramBlocks gram_fock_exact(const fock::FockParams& params, unsigned max_degree);

/// Same reduction on the torus with normalized arc length (all moments 1).
GramBlocks gram_torus_exact(unsigned theta, unsigned max_degree);

/// ∫∫ |f|² |z1 - z2|^(2θ) dm dm via Parseval applied to f·(z1 - z2)^θ.
double torus_norm2(unsigned theta, const BiPoly& f);

/// ‖z1^m z2^n‖² in the ball space, from two Beta integrals.
double ball_monomial_norm2(const ball::BallParams& params, unsigned m, unsigned n);

/// Diagonal blocks ‖z1^m z2^n‖² for the ball space.
GramBlocks ball_monomial_norms(const ball::BallParams& params, unsigned max_degree);

/// ‖z1^m z2^n‖² in the weighted sphere space: m! Γ(n+θ+β+1)/Γ(m+n+θ+β+2).
double sphere_monomial_norm2(double beta, double theta, unsigned m, unsigned n);

struct QuadratureConfig {
  /// Target for the estimated absolute error of every entry.
  double tolerance = 1e-10;
  int min_level = 3;
  int max_level = 6;
};

/// Gram blocks by quadrature. Rotation invariance reduces each entry to a
/// triple integral over |z1|², |z2|² and the relative angle ψ:
///   ∫∫ w1(t1) w2(t2) t1^((m1+m2)/2) t2^((n1+n2)/2) A_{m1-m2}(t1, t2) dt1 dt2,
///   A_k = (1/π) ∫_0^π cos(kψ) |z1 - z2|^(2θ) |1 - conj(z2) z1|^(2ϑ) dψ,
/// with double-exponential rules on each axis. The t2 axis is split at t1 when
/// θ is not an integer. The error estimate is the change between the last two
/// levels. Throws convergence_error naming the worst entry if max_level is
/// reached first.
GramBlocks gram_numeric_bidisk(const bidisk::BidiskParams& params, unsigned max_degree,
                               const QuadratureConfig& qcfg = {});
GramBlocks gram_numeric_fock(const fock::FockParams& params, unsigned max_degree,
                             const QuadratureConfig& qcfg = {});

/// K_d = G_d^-1 through a Cholesky factorization. Throws conditioning_error if
/// a block is not positive definite or, after scaling to unit diagonal, its
/// condition number exceeds 1e12.
std::vector<Eigen::MatrixXd> gram_kernel_blocks(const GramBlocks& gram);

/// Σ_d Σ_{i,j} K_d(i,j) z1^i z2^(d-i) conj(w1^j w2^(d-j)).
cplx kernel_from_blocks(const std::vector<Eigen::MatrixXd>& blocks, const Point2& z,
                        const Point2& w);

/// Coefficients of the degree-d part of f in the block basis.
Eigen::VectorXcd block_vector(const BiPoly& f, unsigned d);

/// ⟨f, g⟩ from the Gram blocks. Throws std::out_of_range if a degree exceeds
/// the blocks.
cplx gram_inner(const GramBlocks& gram, const BiPoly& f, const BiPoly& g);
double gram_norm2(const GramBlocks& gram, const BiPoly& f);

/// Pairing of f with the kernel blocks: Σ_d conj(k_d(w))ᵀ G_d f_d where
/// k_d(w) is the coefficient vector of K(·, w). Equals f(w) when the blocks
/// are exact inverses.
cplx reproduce(const GramBlocks& gram, const std::vector<Eigen::MatrixXd>& kernel,
               const BiPoly& f, const Point2& w);

struct Projection {
  /// P_N[f], the orthogonal projection onto (z1 - z2)^N · polynomials.
  BiPoly p;
  /// Q_N[f] = P_N[f] - P_{N+1}[f].
  BiPoly q;
  /// Largest |⟨f - P_N f, (z1 - z2)^N e⟩| relative to ‖f‖‖(z1 - z2)^N e‖.
  double residual = 0.0;
};

/// Per-degree least squares in the Gram inner product. Throws
/// conditioning_error if the normal equations are ill conditioned or the
/// residual is not orthogonal to within 1e-10.
Projection project(const GramBlocks& gram, const BiPoly& f, unsigned N);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Seeded antithetic Monte Carlo estimate of ⟨z1^m1 z2^n1, z1^m2 z2^n2⟩.
MonteCarloEstimate monte_carlo_bidisk(const bidisk::BidiskParams& params, unsigned m1,
                                      unsigned n1, unsigned m2, unsigned n2,
                                      std::size_t pairs, std::uint64_t seed);
MonteCarloEstimate monte_carlo_fock(const fock::FockParams& params, unsigned m1,
                                    unsigned n1, unsigned m2, unsigned n2,
                                    std::size_t pairs, std::uint64_t seed);

}  // namespace kernelforge::oracle
