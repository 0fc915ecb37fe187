#include <kernelforge/ball.hpp>

#include <kernelforge/onedim.hpp>
#include <kernelforge/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace kernelforge::ball {

using specfun::log_gamma;

void BallParams::validate() const {
  for (double v : {alpha, beta, theta}) {
    if (!(v > -1.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "ball parameters must all exceed -1 (alpha=" << alpha << ", beta=" << beta
         << ", theta=" << theta << ")";
      throw domain_error(os.str());
    }
  }
}

void check_point(const Point2& z) {
  const double r2 = std::norm(z.z1) + std::norm(z.z2);
  if (!(r2 < 1.0)) {
    std::ostringstream os;
    os << "point outside the open unit ball: |z|^2 = " << r2;
    throw domain_error(os.str());
  }
}

double embed_const(const BallParams& p, unsigned N) {
  p.validate();
  const double n = static_cast<double>(N);
  return std::exp(log_gamma(p.alpha + 1.0) + log_gamma(p.theta + n + 1.0) -
                  log_gamma(p.alpha + p.theta + n + 2.0)) /
         (p.alpha + p.beta + p.theta + n + 2.0);
}

NormExpansion norm_expansion(const BallParams& p, const BiPoly& f) {
  p.validate();
  NormExpansion out;
  const int deg = std::max(f.degree_in(Variable::z2), 0);
  for (unsigned N = 0; N <= static_cast<unsigned>(deg); ++N) {
    const UniPoly g = restrict_z2_zero(differentiate(f, Variable::z2, N));
    const double nf = specfun::factorial(N);
    const double value =
        g.is_zero() ? 0.0 : embed_const(p, N) / (nf * nf) * onedim::bergman_norm2(g, p.index(N));
    out.terms.push_back({N, value});
    out.total += value;
  }
  return out;
}

cplx q_kernel(const BallParams& p, unsigned N, const Point2& z, const Point2& w) {
  p.validate();
  check_point(z);
  check_point(w);
  const cplx base = 1.0 - z.z1 * std::conj(w.z1);
  return std::pow(z.z2 * std::conj(w.z2), static_cast<int>(N)) /
         (embed_const(p, N) * std::pow(base, p.index(N) + 2.0));
}

namespace {

cplx ratio_argument(const Point2& z, const Point2& w, cplx& base) {
  base = 1.0 - z.z1 * std::conj(w.z1);
  const cplx x = z.z2 * std::conj(w.z2) / base;
  if (!(std::abs(x) < 1.0)) {
    std::ostringstream os;
    os << "ball kernel: |z2 conj(w2) / (1 - z1 conj(w1))| = " << std::abs(x)
       << " is not below 1; the points are too close to the boundary sphere";
    throw domain_error(os.str());
  }
  return x;
}

}  // namespace

SeriesResult full_kernel(const BallParams& p, const Point2& z, const Point2& w,
                         const TruncationConfig& cfg) {
  p.validate();
  check_point(z);
  check_point(w);
  cplx base;
  const cplx x = ratio_argument(z, w, base);
  const double at = p.alpha + p.theta;
  const cplx pre = std::exp(log_gamma(at + 2.0) - log_gamma(p.alpha + 1.0) -
                            log_gamma(p.theta + 1.0)) /
                   std::pow(base, p.index(0) + 2.0);
  const SeriesResult f1 = specfun::hyp2f1(at + 3.0, 1.0, p.theta + 1.0, x, cfg);
  const SeriesResult f2 = specfun::hyp2f1(at + 2.0, 1.0, p.theta + 1.0, x, cfg);
  const cplx value = pre * ((at + 2.0) * f1.value + p.beta * f2.value);
  const double tail =
      std::abs(pre) * ((at + 2.0) * f1.tail_bound + std::abs(p.beta) * f2.tail_bound);
  return {value, f1.terms_used + f2.terms_used, tail};
}

SeriesResult full_kernel_series(const BallParams& p, const Point2& z, const Point2& w,
                                const TruncationConfig& cfg) {
  p.validate();
  check_point(z);
  check_point(w);
  cplx base;
  const cplx x = ratio_argument(z, w, base);
  const double ax = std::abs(x);
  const cplx lead = 1.0 / std::pow(base, p.index(0) + 2.0);

  SeriesResult out;
  cplx xn = 1.0;
  double prev = 0.0;
  int small = 0;
  for (unsigned N = 0; N < cfg.max_terms; ++N) {
    const cplx term = lead * xn / embed_const(p, N);
    out.value += term;
    out.terms_used = N + 1;
    const double at = std::abs(term);
    const double scale = std::max(1.0, std::abs(out.value));
    small = at <= cfg.tolerance * scale ? small + 1 : 0;
    if (at == 0.0) return out;
    if (small >= cfg.small_run && prev > 0.0) {
      const double r = std::max(at / prev, ax);
      if (r < 1.0) {
        const double tail = at * r / (1.0 - r);
        if (tail <= cfg.tolerance * scale) {
          out.tail_bound = tail;
          return out;
        }
      }
    }
    prev = at;
    xn *= x;
  }
  throw convergence_error("ball kernel series: term cap of " +
                          std::to_string(cfg.max_terms) + " reached");
}

NormExpansion hardy_norm_expansion(double beta, double theta, const BiPoly& f) {
  if (!(beta + theta > -1.0)) {
    throw domain_error("sphere norm expansion requires beta + theta > -1");
  }
  NormExpansion out;
  const int deg = std::max(f.degree_in(Variable::z2), 0);
  for (unsigned N = 0; N <= static_cast<unsigned>(deg); ++N) {
    const UniPoly g = restrict_z2_zero(differentiate(f, Variable::z2, N));
    const double nf = specfun::factorial(N);
    const double idx = beta + theta + N;
    const double value =
        g.is_zero() ? 0.0 : onedim::bergman_norm2(g, idx) / ((idx + 1.0) * nf * nf);
    out.terms.push_back({N, value});
    out.total += value;
  }
  return out;
}

}  // namespace kernelforge::ball
