#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace kernelforge {

using cplx = std::complex<double>;

/// Controls the truncation of every infinite series in the library.
///
/// `tolerance` is relative to max(1, |partial sum|): a series is accepted
/// once its estimated remainder falls below tolerance * max(1, |S|).
struct TruncationConfig {
  double tolerance = 1e-12;
  std::size_t max_terms = 100000;
  /// Consecutive small terms required before a series is declared converged.
  int small_run = 3;
  /// Cap on the outer vanishing-order series of the bidisk kernel.
  std::size_t max_outer_terms = 2000;

  /// Defaults, with `max_terms` overridden by KERNELFORGE_MAX_TERMS if set.
  static TruncationConfig from_env();
};

struct SeriesResult {
  cplx value{0.0, 0.0};
  std::size_t terms_used = 0;
  /// Estimated absolute truncation error of `value`.
  double tail_bound = 0.0;
};

/// Argument outside the domain of an operation (exit code 2 in the CLI).
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A series hit its term cap before the tail estimate met the tolerance
/// (exit code 3 in the CLI).
class convergence_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A Gram block or normal-equation system is too ill-conditioned to be
/// trusted (exit code 4 in the CLI).
class conditioning_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace kernelforge
