#include <kernelforge/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

namespace kernelforge {

TruncationConfig TruncationConfig::from_env() {
  TruncationConfig cfg;
  if (const char* env = std::getenv("KERNELFORGE_MAX_TERMS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      cfg.max_terms = static_cast<std::size_t>(v);
    }
  }
  return cfg;
}

namespace specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::floor(x) == x;
}

double scale_of(cplx s) { return std::max(1.0, std::abs(s)); }

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw domain_error("log_gamma: argument must be positive and finite, got " +
                       std::to_string(x));
  }
  return std::lgamma(x);
}

double pochhammer(double x, unsigned n) {
  if (n == 0) return 1.0;
  if (n <= 30) {
    double p = 1.0;
    for (unsigned k = 0; k < n; ++k) p *= x + k;
    return p;
  }
  if (is_nonpositive_integer(x) && static_cast<double>(n) > -x) return 0.0;
  // Γ(x+n)/Γ(x) in magnitude; the sign is the parity of the negative factors.
  unsigned negatives = 0;
  if (x < 0.0) {
    negatives = std::min<unsigned>(n, static_cast<unsigned>(std::floor(-x)) + 1);
  }
  const double magnitude = std::exp(std::lgamma(x + n) - std::lgamma(x));
  return (negatives % 2 == 1) ? -magnitude : magnitude;
}

double factorial(unsigned n) { return pochhammer(1.0, n); }

double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r < 1e15 ? std::round(r) : r;
}

SeriesResult hyp2f1(double a, double b, double c, cplx x,
                    const TruncationConfig& cfg) {
  if (is_nonpositive_integer(c)) {
    throw domain_error("hyp2f1: c must not be a non-positive integer");
  }
  const double ax = std::abs(x);
  if (!(ax < 1.0)) {
    throw domain_error("hyp2f1: requires |x| < 1, got |x| = " +
                       std::to_string(ax));
  }
  cplx sum = 0.0;
  cplx term = 1.0;
  double abs_sum = 0.0;
  int small = 0;
  for (std::size_t n = 0; n < cfg.max_terms; ++n) {
    sum += term;
    abs_sum += std::abs(term);
    const double dn = static_cast<double>(n);
    const double ratio_coef = (dn + a) * (dn + b) / ((dn + c) * (dn + 1.0));
    cplx next = term * ratio_coef * x;
    const double r = std::max(std::abs(ratio_coef) * ax, ax);
    if (std::abs(term) <= cfg.tolerance * scale_of(sum)) {
      ++small;
    } else {
      small = 0;
    }
    if (next == 0.0) {
      return {sum, n + 1, 4.0 * kEps * abs_sum};
    }
    if (small >= cfg.small_run && r < 1.0) {
      const double tail = std::abs(next) / (1.0 - r);
      if (tail <= cfg.tolerance * scale_of(sum)) {
        return {sum, n + 1, tail + 4.0 * kEps * abs_sum};
      }
    }
    term = next;
  }
  throw convergence_error("hyp2f1: term cap of " + std::to_string(cfg.max_terms) +
                          " reached (|x| = " + std::to_string(ax) + ")");
}

SeriesResult hyp3f2_unit(double a1, double a2, double a3, double b1, double b2,
                         const TruncationConfig& cfg) {
  if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2)) {
    throw domain_error("hyp3f2_unit: b1, b2 must not be non-positive integers");
  }
  const double excess = b1 + b2 - a1 - a2 - a3;
  if (!(excess > 0.0)) {
    throw domain_error(
        "hyp3f2_unit: divergent at x = 1 (b1 + b2 - a1 - a2 - a3 = " +
        std::to_string(excess) + ")");
  }

  constexpr std::size_t first_checkpoint = 16;
  std::vector<std::vector<double>> table;  // Richardson rows
  double sum = 0.0;
  double abs_sum = 0.0;
  double term = 1.0;
  std::size_t n = 0;
  std::size_t checkpoint = first_checkpoint;
  double prev_diff = std::numeric_limits<double>::infinity();

  while (checkpoint <= cfg.max_terms) {
    for (; n < checkpoint; ++n) {
      sum += term;
      abs_sum += std::abs(term);
      const double dn = static_cast<double>(n);
      term *= (dn + a1) * (dn + a2) * (dn + a3) /
              ((dn + b1) * (dn + b2) * (dn + 1.0));
      if (term == 0.0) {
        // Terminating series: the sum is exact up to rounding.
        return {sum, n + 1, 4.0 * kEps * abs_sum};
      }
    }
    const double floor = 16.0 * kEps * abs_sum * (1.0 + table.size());

    // Remainder ~ |t_M| M / s to first order; accept the plain sum if that is
    // already far below the tolerance.
    const double plain_tail =
        std::abs(term) * static_cast<double>(checkpoint) / excess;
    if (plain_tail <= 1e-3 * cfg.tolerance * scale_of(sum)) {
      return {sum, n, plain_tail + floor};
    }

    std::vector<double> row{sum};
    if (!table.empty()) {
      const auto& prev = table.back();
      for (std::size_t j = 0; j < prev.size(); ++j) {
        const double f = std::pow(2.0, excess + static_cast<double>(j));
        row.push_back((f * row[j] - prev[j]) / (f - 1.0));
      }
    }
    table.push_back(std::move(row));
    if (table.size() >= 3) {
      const double cur = table.back().back();
      const double diff = std::abs(cur - table[table.size() - 2].back());
      if (diff <= cfg.tolerance * scale_of(cur) &&
          prev_diff <= 1e3 * cfg.tolerance * scale_of(cur)) {
        return {cur, n, diff + floor};
      }
      prev_diff = diff;
    }
    checkpoint *= 2;
  }
  throw convergence_error("hyp3f2_unit: term cap of " +
                          std::to_string(cfg.max_terms) +
                          " reached before the extrapolation settled");
}

namespace {

// Direct Maclaurin series of E_θ.
SeriesResult mittag_direct(double theta, cplx x, const TruncationConfig& cfg) {
  cplx term = std::exp(-std::lgamma(theta + 1.0));
  cplx sum = 0.0;
  double abs_sum = 0.0;
  const double ax = std::abs(x);
  int small = 0;
  for (std::size_t n = 0; n < cfg.max_terms; ++n) {
    sum += term;
    abs_sum += std::abs(term);
    const double denom = theta + static_cast<double>(n) + 1.0;
    const cplx next = term * x / denom;
    small = std::abs(term) <= cfg.tolerance * scale_of(sum) ? small + 1 : 0;
    if (next == 0.0) return {sum, n + 1, 4.0 * kEps * abs_sum};
    const double r = ax / (denom + 1.0);
    if (small >= cfg.small_run && r < 0.5) {
      const double tail = std::abs(next) / (1.0 - r);
      if (tail <= cfg.tolerance * scale_of(sum)) {
        return {sum, n + 1, tail + 4.0 * kEps * abs_sum};
      }
    }
    term = next;
  }
  throw convergence_error("mittag_e: term cap reached in direct summation");
}

// E_θ(x) = e^x / Γ(θ+1) · 1F1(θ; θ+1; -x); all terms share a sign on x < 0.
SeriesResult mittag_kummer(double theta, cplx x, const TruncationConfig& cfg) {
  const cplx y = -x;
  const double ay = std::abs(y);
  cplx power = 1.0;  // y^n / n!
  cplx sum = 1.0;
  double abs_sum = 1.0;
  int small = 0;
  for (std::size_t n = 1; n < cfg.max_terms; ++n) {
    power *= y / static_cast<double>(n);
    const cplx term = (theta == 0.0) ? cplx(0.0)
                                     : power * (theta / (theta + static_cast<double>(n)));
    sum += term;
    abs_sum += std::abs(term);
    small = std::abs(power) <= cfg.tolerance * scale_of(sum) ? small + 1 : 0;
    const double r = ay / (static_cast<double>(n) + 1.0);
    if (small >= cfg.small_run && r < 0.5) {
      const double tail = std::abs(power) * r / (1.0 - r);
      const cplx pre = std::exp(x - std::lgamma(theta + 1.0));
      return {pre * sum, n + 1,
              std::abs(pre) * (tail + 4.0 * kEps * abs_sum)};
    }
  }
  throw convergence_error("mittag_e: term cap reached in Kummer summation");
}

// For θ > 0: E_θ(x) = x^-θ e^x - h(θ, x)/Γ(θ), where
// Γ(θ, x) = e^-x x^θ h(θ, x) and h is the Legendre continued fraction.
SeriesResult mittag_continued_fraction(double theta, cplx x,
                                       const TruncationConfig& cfg) {
  constexpr double tiny = 1e-300;
  cplx b = x + 1.0 - theta;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (std::size_t i = 1; i < cfg.max_terms; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - theta);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) <= 0.1 * kEps) {
      const cplx lead = std::exp(x - theta * std::log(x));
      const cplx upper = h * std::exp(-std::lgamma(theta));
      const cplx value = lead - upper;
      const double err =
          8.0 * kEps * (std::abs(lead) + std::abs(upper)) * (1.0 + std::sqrt(static_cast<double>(i)));
      return {value, i, err};
    }
  }
  throw convergence_error("mittag_e: continued fraction did not converge");
}

}  // namespace

SeriesResult mittag_e(double theta, cplx x, const TruncationConfig& cfg) {
  if (!(theta > -1.0)) {
    throw domain_error("mittag_e: theta must exceed -1, got " +
                       std::to_string(theta));
  }
  const double ax = std::abs(x);
  if (ax <= 1.0) return mittag_direct(theta, x, cfg);

  // Cancellation in the Maclaurin (Re x >= 0) or Kummer (Re x < 0) series
  // costs a factor of roughly exp(|x| - |Re x|).
  const double loss = ax - std::abs(x.real());
  if (loss <= 6.0) {
    return x.real() >= 0.0 ? mittag_direct(theta, x, cfg)
                           : mittag_kummer(theta, x, cfg);
  }
  if (theta > 0.0) return mittag_continued_fraction(theta, x, cfg);
  // E_θ(x) = 1/Γ(θ+1) + x E_{θ+1}(x).
  SeriesResult up = mittag_continued_fraction(theta + 1.0, x, cfg);
  const cplx value = std::exp(-std::lgamma(theta + 1.0)) + x * up.value;
  return {value, up.terms_used, ax * up.tail_bound + 4.0 * kEps * std::abs(value)};
}

}  // namespace specfun
}  // namespace kernelforge
