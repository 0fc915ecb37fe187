#pragma once

#include <kernelforge/series.hpp>

namespace kernelforge::specfun {

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Rising factorial (x)_n = x(x+1)...(x+n-1); (x)_0 = 1.
double pochhammer(double x, unsigned n);

/// n! as a double.
double factorial(unsigned n);

/// Binomial coefficient C(n, k), zero for k > n.
double binomial(unsigned n, unsigned k);

/// Gauss hypergeometric series 2F1(a, b; c; x) for |x| < 1.
SeriesResult hyp2f1(double a, double b, double c, cplx x,
                    const TruncationConfig& cfg = {});

/// 3F2(a1, a2, a3; b1, b2; 1). Requires b1 + b2 - a1 - a2 - a3 > 0.
///
/// The terms decay only algebraically, like n^-(s+1) with
/// s = b1 + b2 - a1 - a2 - a3, so partial sums S_M are taken at
/// M = 16, 32, 64, ... and Richardson-extrapolated with the exponent sequence
/// s, s+1, s+2, ... of the remainder's asymptotic expansion. The reported
/// tail bound is the change between the last two extrapolated values plus a
/// rounding floor.
SeriesResult hyp3f2_unit(double a1, double a2, double a3, double b1, double b2,
                         const TruncationConfig& cfg = {});

/// E_θ(x) = Σ_N x^N / Γ(θ + N + 1), θ > -1.
///
/// Summed directly when that is well conditioned, through Kummer's
/// transformation when Re x < 0, and through the continued fraction for the
/// upper incomplete gamma function when |Im x| is large.
SeriesResult mittag_e(double theta, cplx x, const TruncationConfig& cfg = {});

}  // namespace kernelforge::specfun
