#include <kernelforge/fock.hpp>

#include <kernelforge/onedim.hpp>
#include <kernelforge/quadrature.hpp>
#include <kernelforge/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace kernelforge::fock {

using specfun::log_gamma;

void FockParams::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(theta > -1.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta) || !std::isfinite(theta)) {
    std::ostringstream os;
    os << "Fock parameters need alpha > 0, beta > 0, theta > -1 (alpha=" << alpha
       << ", beta=" << beta << ", theta=" << theta << ")";
    throw domain_error(os.str());
  }
}

double sigma(const FockParams& p) {
  p.validate();
  return std::exp((p.theta + 1.0) * std::log(p.alpha * p.beta) -
                  p.theta * std::log(p.gamma()) - log_gamma(p.theta + 1.0));
}

cplx diag_kernel(const FockParams& p, const Point2& z, cplx w1) {
  const double sig = sigma(p);
  return sig * std::exp(std::conj(w1) * (p.alpha * z.z1 + p.beta * z.z2));
}

namespace {

cplx gaussian_exponent(const FockParams& p, const Point2& z, const Point2& w) {
  return (p.alpha * std::conj(w.z1) + p.beta * std::conj(w.z2)) *
         (p.alpha * z.z1 + p.beta * z.z2) / p.gamma();
}

}  // namespace

cplx q0_kernel(const FockParams& p, const Point2& z, const Point2& w) {
  const double sig = sigma(p);
  return sig * std::exp(gaussian_exponent(p, z, w));
}

SeriesResult full_kernel(const FockParams& p, const Point2& z, const Point2& w,
                         const TruncationConfig& cfg) {
  p.validate();
  const double ab = p.alpha * p.beta;
  const cplx x = ab * (z.z1 - z.z2) * std::conj(w.z1 - w.z2) / p.gamma();
  const SeriesResult e = specfun::mittag_e(p.theta, x, cfg);
  const cplx pre = std::exp((p.theta + 1.0) * std::log(ab) - p.theta * std::log(p.gamma()) +
                            gaussian_exponent(p, z, w));
  return {pre * e.value, e.terms_used, std::abs(pre) * e.tail_bound};
}

namespace {

// Σ_n y^n / Γ(θ+n+1) summed term by term.
SeriesResult weighted_series(double theta, cplx y, const TruncationConfig& cfg) {
  cplx term = std::exp(-log_gamma(theta + 1.0));
  cplx sum = 0.0;
  double abs_sum = 0.0;
  const double ay = std::abs(y);
  int small = 0;
  for (std::size_t n = 0; n < cfg.max_terms; ++n) {
    sum += term;
    abs_sum += std::abs(term);
    const double next_den = theta + static_cast<double>(n) + 1.0;
    small = std::abs(term) <= cfg.tolerance * std::max(1.0, std::abs(sum)) ? small + 1 : 0;
    const double r = ay / (next_den + 1.0);
    if (small >= cfg.small_run && r < 0.5) {
      const double tail = std::abs(term) * ay / next_den / (1.0 - r);
      return {sum, n + 1, tail + 4.0 * std::numeric_limits<double>::epsilon() * abs_sum};
    }
    term *= y / next_den;
    if (term == 0.0) return {sum + 0.0, n + 1, 0.0};
  }
  throw convergence_error("Fock weighted-factor series: term cap reached");
}

// (1/Γ(θ)) ∫_0^1 (1-t)^(θ-1) e^(y t) dt for θ > 0, refined until two
// successive levels agree.
SeriesResult beta_integral(double theta, cplx y, const TruncationConfig& cfg) {
  const double norm = std::exp(-log_gamma(theta));
  cplx prev = 0.0;
  for (int level = 3; level <= 9; ++level) {
    cplx acc = 0.0;
    for (const auto& nd : quad::tanh_sinh(0.0, 1.0, level)) {
      acc += nd.weight * std::pow(nd.to_hi, theta - 1.0) * std::exp(y * nd.x);
    }
    acc *= norm;
    if (level > 3) {
      const double diff = std::abs(acc - prev);
      if (diff <= cfg.tolerance * std::max(1e-3, std::abs(acc))) {
        return {acc, static_cast<std::size_t>(level), diff};
      }
    }
    prev = acc;
  }
  throw convergence_error("Fock weighted-factor integral did not settle");
}

SeriesResult weighted_factor(double theta, cplx y, const TruncationConfig& cfg) {
  if (std::abs(y) - y.real() <= 3.0) return weighted_series(theta, y, cfg);
  if (theta == 0.0) return {std::exp(y), 1, 0.0};
  if (theta > 0.0) return beta_integral(theta, y, cfg);
  const SeriesResult up = beta_integral(theta + 1.0, y, cfg);
  return {std::exp(-log_gamma(theta + 1.0)) + y * up.value, up.terms_used,
          std::abs(y) * up.tail_bound};
}

}  // namespace

SeriesResult cov_kernel(const FockParams& p, const Point2& z, const Point2& w,
                        const TruncationConfig& cfg) {
  p.validate();
  const double g = p.gamma();
  const double delta = p.alpha * p.beta * g;
  const cplx u1 = (p.alpha * z.z1 + p.beta * z.z2) / g;
  const cplx u2 = (z.z1 - z.z2) / g;
  const cplx v1 = (p.alpha * w.z1 + p.beta * w.z2) / g;
  const cplx v2 = (w.z1 - w.z2) / g;

  // Gaussian factor: kernel g e^(g u1 conj(v1)) of e^(-g|u1|²).
  const cplx first = g * std::exp(g * u1 * std::conj(v1));
  // Weighted factor: kernel of |u2|^(2θ) e^(-δ|u2|²).
  const SeriesResult second = weighted_factor(p.theta, delta * u2 * std::conj(v2), cfg);
  const double scale = std::pow(delta, p.theta + 1.0);
  // dA(z1) dA(z2) = (α+β)² dA(u1) dA(u2), and |z1 - z2|^(2θ) = (α+β)^(2θ) |u2|^(2θ).
  const double jac = std::pow(g, 2.0 * p.theta + 2.0);
  const cplx value = first * scale * second.value / jac;
  return {value, second.terms_used, std::abs(first) * scale * second.tail_bound / jac};
}

double coeff_c(const FockParams& p, unsigned k, unsigned N) {
  if (k > N) {
    throw std::out_of_range("coeff_c: requires k <= N (k=" + std::to_string(k) +
                            ", N=" + std::to_string(N) + ")");
  }
  const unsigned m = N - k;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * specfun::binomial(N, k) * std::pow(p.alpha / p.gamma(), static_cast<int>(m));
}

UniPoly restriction_transform(const FockParams& p, const BiPoly& f, unsigned N) {
  p.validate();
  UniPoly out;
  const double inv = 1.0 / specfun::factorial(N);
  for (unsigned k = 0; k <= N; ++k) {
    const UniPoly r = restrict_diagonal(differentiate(f, Variable::z1, k));
    out += cplx(inv * coeff_c(p, k, N)) * r.derivative(N - k);
  }
  return out;
}

NormExpansion norm_expansion(const FockParams& p, const BiPoly& f) {
  p.validate();
  NormExpansion out;
  const int deg = std::max(f.total_degree(), 0);
  const double ab = p.alpha * p.beta;
  for (unsigned N = 0; N <= static_cast<unsigned>(deg); ++N) {
    const UniPoly g = restriction_transform(p, f, N);
    const double t = p.theta + N;
    const double weight =
        std::exp((t + 1.0) * (std::log(p.gamma()) - std::log(ab)) + log_gamma(t + 1.0));
    const double value = g.is_zero() ? 0.0 : weight * onedim::fock_norm2(g, p.gamma());
    out.terms.push_back({N, value});
    out.total += value;
  }
  return out;
}

}  // namespace kernelforge::fock
