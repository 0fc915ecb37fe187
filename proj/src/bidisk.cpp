#include <kernelforge/bidisk.hpp>

#include <kernelforge/onedim.hpp>
#include <kernelforge/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace kernelforge::bidisk {

using specfun::log_gamma;
using specfun::pochhammer;

void BidiskParams::validate() const {
  for (double v : {alpha, beta, theta, vartheta}) {
    if (!(v > -1.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "bidisk parameters must all exceed -1 (alpha=" << alpha << ", beta=" << beta
         << ", theta=" << theta << ", vartheta=" << vartheta << ")";
      throw domain_error(os.str());
    }
  }
  if (!(alpha + beta + 2.0 * theta + 2.0 * vartheta + 3.0 > 0.0)) {
    throw domain_error("bidisk parameters need alpha+beta+2theta+2vartheta+3 > 0");
  }
}

void check_point(const Point2& z) {
  if (!(std::abs(z.z1) < 1.0) || !(std::abs(z.z2) < 1.0)) {
    std::ostringstream os;
    os << "point outside the open bidisk: |z1|=" << std::abs(z.z1)
       << ", |z2|=" << std::abs(z.z2);
    throw domain_error(os.str());
  }
}

SeriesResult inverse_sigma_direct(const BidiskParams& p, const TruncationConfig& cfg) {
  p.validate();
  const double a = p.a();
  const double s = p.s();
  const SeriesResult f =
      specfun::hyp3f2_unit(p.theta + 1.0, a, a, p.alpha + p.theta + 2.0, s + 2.0, cfg);
  const double pre = std::exp(std::log(p.beta + 1.0) + log_gamma(p.alpha + 2.0) +
                              log_gamma(p.theta + 1.0) - std::log(s + 1.0) -
                              log_gamma(p.alpha + p.theta + 2.0));
  return {pre * f.value, f.terms_used, pre * f.tail_bound};
}

SeriesResult inverse_sigma(const BidiskParams& p, const TruncationConfig& cfg) {
  p.validate();
  const double a = p.a();
  if (!(a > p.beta + 1.0)) return inverse_sigma_direct(p, cfg);
  // Thomae transform: terms decay like n^-(a+1) and terminate for ϑ = 0.
  const double s = p.s();
  const SeriesResult f = specfun::hyp3f2_unit(-p.vartheta, p.b(), p.beta + 1.0,
                                              p.beta + p.theta + 2.0, a + p.beta + 1.0, cfg);
  const double pre = std::exp(std::log(p.beta + 1.0) + log_gamma(p.alpha + 2.0) +
                              log_gamma(p.theta + 1.0) - std::log(s + 1.0) +
                              log_gamma(s + 2.0) + log_gamma(p.beta + 1.0) - log_gamma(a) -
                              log_gamma(p.beta + p.theta + 2.0) - log_gamma(a + p.beta + 1.0));
  return {pre * f.value, f.terms_used, pre * f.tail_bound};
}

double sigma(const BidiskParams& params, const TruncationConfig& cfg) {
  return 1.0 / inverse_sigma(params, cfg).value.real();
}

double inverse_sigma_gamma_form(const BidiskParams& p) {
  p.validate();
  if (p.vartheta != 0.0) {
    throw domain_error("the closed Gamma form of 1/sigma needs vartheta = 0");
  }
  const double al = p.alpha, be = p.beta, th = p.theta;
  return std::exp(log_gamma(al + 2.0) + log_gamma(be + 2.0) + log_gamma(th + 1.0) +
                  log_gamma(al + be + 2.0 * th + 3.0) - log_gamma(al + th + 2.0) -
                  log_gamma(be + th + 2.0) - log_gamma(al + be + th + 3.0));
}

cplx diag_kernel(const BidiskParams& p, const Point2& z, cplx w1,
                 const TruncationConfig& cfg) {
  check_point(z);
  check_point({w1, w1});
  const double sig = sigma(p, cfg);
  const cplx cw = std::conj(w1);
  return sig * std::pow(1.0 - cw * z.z1, -p.a()) * std::pow(1.0 - cw * z.z2, -p.b());
}

namespace {

struct InnerSum {
  cplx value{0.0};
  double modulus = 0.0;   // Σ λ_n |c_n(z)| |c_n(w)|
  double tail = 0.0;
  std::size_t terms = 0;
};

// Taylor coefficients c_n of (1 - t z1)^-a (1 - t z2)^-b in t, from
//   (n+1) c_{n+1} = ((z1 + z2) n + a z1 + b z2) c_n - z1 z2 (n - 1 + a + b) c_{n-1}.
template <class T>
class ProductCoefficients {
public:
  ProductCoefficients(double a, double b, T z1, T z2)
      : a_(a), b_(b), sum_(z1 + z2), prod_(z1 * z2), lin_(a * z1 + b * z2) {}
  T current() const { return cur_; }
  void advance() {
    const double n = static_cast<double>(n_);
    const T next = ((sum_ * n + lin_) * cur_ - prod_ * (n - 1.0 + a_ + b_) * prev_) / (n + 1.0);
    prev_ = cur_;
    cur_ = next;
    ++n_;
  }

private:
  double a_, b_;
  T sum_, prod_, lin_;
  T prev_{0.0}, cur_{1.0};
  std::size_t n_ = 0;
};

// Σ_n n!/(sN+2)_n c_n(z) conj(c_n(w)) with exponents aN, bN; see q_kernel.
// Termwise majorants use |aN|, |bN| and |z_i|, which bound every coefficient.
InnerSum inner_series(double aN, double bN, double sN, const Point2& z, const Point2& w,
                      const TruncationConfig& cfg) {
  const double rho = std::max(std::abs(z.z1), std::abs(z.z2)) *
                     std::max(std::abs(w.z1), std::abs(w.z2));
  ProductCoefficients<cplx> cz(aN, bN, z.z1, z.z2);
  ProductCoefficients<cplx> cw(aN, bN, std::conj(w.z1), std::conj(w.z2));
  ProductCoefficients<double> mz(std::abs(aN), std::abs(bN), std::abs(z.z1), std::abs(z.z2));
  ProductCoefficients<double> mw(std::abs(aN), std::abs(bN), std::abs(w.z1), std::abs(w.z2));

  InnerSum out;
  double lambda = 1.0;  // n!/(sN+2)_n
  double prev_major = 0.0;
  int small = 0;
  for (std::size_t n = 0; n < cfg.max_terms; ++n) {
    if (n > 0) {
      const double dn = static_cast<double>(n);
      cz.advance();
      cw.advance();
      mz.advance();
      mw.advance();
      lambda *= dn / (sN + 1.0 + dn);
    }
    out.value += lambda * cz.current() * cw.current();
    out.modulus += lambda * std::abs(cz.current()) * std::abs(cw.current());
    const double major = lambda * mz.current() * mw.current();
    out.terms = n + 1;

    const double scale = std::max(1.0, std::abs(out.value));
    small = major <= cfg.tolerance * scale ? small + 1 : 0;
    if (major == 0.0 && rho == 0.0) {
      if (small >= cfg.small_run) return out;
      continue;
    }
    if (small >= cfg.small_run) {
      const double ratio = prev_major > 0.0 ? major / prev_major : 0.0;
      const double r = std::max(rho, ratio);
      if (r < 1.0) {
        const double tail = major * r / (1.0 - r);
        if (tail <= cfg.tolerance * scale) {
          out.tail = tail;
          return out;
        }
      }
    }
    prev_major = major;
  }
  throw convergence_error("bidisk inner kernel series: term cap of " +
                          std::to_string(cfg.max_terms) +
                          " reached; points too close to the distinguished boundary");
}

}  // namespace

SeriesResult q_kernel(const BidiskParams& p, unsigned N, const Point2& z, const Point2& w,
                      const TruncationConfig& cfg) {
  p.validate();
  check_point(z);
  check_point(w);
  const double sig = sigma(p.shifted(N), cfg);
  const cplx pre = sig * std::pow((z.z1 - z.z2) * std::conj(w.z1 - w.z2), static_cast<int>(N));
  if (pre == 0.0) return {0.0, 0, 0.0};
  const double n = static_cast<double>(N);
  const InnerSum inner = inner_series(p.a() + n, p.b() + n, p.s() + 2.0 * n, z, w, cfg);
  return {pre * inner.value, inner.terms, std::abs(pre) * inner.tail};
}

SeriesResult full_kernel(const BidiskParams& p, const Point2& z, const Point2& w,
                         const TruncationConfig& cfg) {
  p.validate();
  check_point(z);
  check_point(w);
  const cplx q = (z.z1 - z.z2) * std::conj(w.z1 - w.z2);
  const double aq = std::abs(q);

  SeriesResult out;
  double prev_bound = 0.0;
  int small = 0;
  for (unsigned N = 0; N < cfg.max_outer_terms; ++N) {
    const double n = static_cast<double>(N);
    const double sig = sigma(p.shifted(N), cfg);
    const InnerSum inner = inner_series(p.a() + n, p.b() + n, p.s() + 2.0 * n, z, w, cfg);
    const cplx pre = sig * std::pow(q, static_cast<int>(N));
    out.value += pre * inner.value;
    out.terms_used += inner.terms;
    out.tail_bound += std::abs(pre) * inner.tail;
    if (aq == 0.0) return out;

    const double bound = sig * std::pow(aq, n) * inner.modulus;
    const double scale = std::max(1.0, std::abs(out.value));
    small = bound <= cfg.tolerance * scale ? small + 1 : 0;
    if (small >= cfg.small_run && prev_bound > 0.0) {
      const double r = bound / prev_bound;
      if (r < 1.0) {
        const double tail = bound * r / (1.0 - r);
        if (tail <= cfg.tolerance * scale) {
          out.tail_bound += tail;
          return out;
        }
      }
    }
    prev_bound = bound;
  }
  throw convergence_error("bidisk kernel: outer series did not settle within " +
                          std::to_string(cfg.max_outer_terms) + " vanishing orders");
}

std::vector<Eigen::MatrixXd> taylor_blocks(const BidiskParams& p, unsigned max_degree,
                                           const TruncationConfig& cfg) {
  p.validate();
  std::vector<double> sig(max_degree + 1);
  for (unsigned N = 0; N <= max_degree; ++N) sig[N] = sigma(p.shifted(N), cfg);

  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(max_degree + 1);
  for (unsigned d = 0; d <= max_degree; ++d) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(d + 1, d + 1);
    for (unsigned N = 0; N <= d; ++N) {
      const unsigned n = d - N;
      const double aN = p.a() + N, bN = p.b() + N, sN = p.s() + 2.0 * N;
      // c_n as a vector over the z1 exponent j.
      Eigen::VectorXd c(n + 1);
      for (unsigned j = 0; j <= n; ++j) {
        c(j) = pochhammer(aN, j) / specfun::factorial(j) * pochhammer(bN, n - j) /
               specfun::factorial(n - j);
      }
      // Multiply by (z1 - z2)^N: coefficient of z1^i z2^(N-i) is C(N,i)(-1)^(N-i).
      Eigen::VectorXd u = Eigen::VectorXd::Zero(d + 1);
      for (unsigned i = 0; i <= N; ++i) {
        const double bin = specfun::binomial(N, i) * (((N - i) % 2 == 0) ? 1.0 : -1.0);
        for (unsigned j = 0; j <= n; ++j) u(i + j) += bin * c(j);
      }
      const double lambda = specfun::factorial(n) / pochhammer(sN + 2.0, n);
      K += sig[N] * lambda * u * u.transpose();
    }
    blocks.push_back(std::move(K));
  }
  return blocks;
}

double coeff_a(const BidiskParams& p, unsigned k, unsigned N) {
  if (k > N) {
    throw std::out_of_range("coeff_a: requires k <= N (k=" + std::to_string(k) +
                            ", N=" + std::to_string(N) + ")");
  }
  const unsigned m = N - k;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign / (specfun::factorial(k) * specfun::factorial(m)) * pochhammer(p.a() + k, m) /
         pochhammer(p.s() + 1.0 + N + k, m);
}

double coeff_b(double theta, unsigned k, unsigned N) {
  if (k > N) {
    throw std::out_of_range("coeff_b: requires k <= N (k=" + std::to_string(k) +
                            ", N=" + std::to_string(N) + ")");
  }
  const unsigned m = N - k;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign / (specfun::factorial(k) * specfun::factorial(m)) *
         pochhammer(theta + k + 1.0, m) / pochhammer(2.0 * theta + N + k + 1.0, m);
}

namespace {

template <class Coeff>
UniPoly transform_with(const BiPoly& f, unsigned N, Coeff coeff) {
  UniPoly out;
  for (unsigned k = 0; k <= N; ++k) {
    const UniPoly restricted = restrict_diagonal(differentiate(f, Variable::z1, k));
    out += cplx(coeff(k)) * restricted.derivative(N - k);
  }
  return out;
}

}  // namespace

UniPoly restriction_transform(const BidiskParams& params, const BiPoly& f, unsigned N) {
  return transform_with(f, N, [&](unsigned k) { return coeff_a(params, k, N); });
}

NormExpansion norm_expansion(const BidiskParams& p, const BiPoly& f,
                             const TruncationConfig& cfg) {
  p.validate();
  NormExpansion out;
  const int deg = std::max(f.total_degree(), 0);
  for (unsigned N = 0; N <= static_cast<unsigned>(deg); ++N) {
    const UniPoly g = restriction_transform(p, f, N);
    double value = 0.0;
    if (!g.is_zero()) {
      value = onedim::bergman_norm2(g, p.s() + 2.0 * N) / sigma(p.shifted(N), cfg);
    }
    out.terms.push_back({N, value});
    out.total += value;
  }
  return out;
}

NormExpansion hardy_norm_expansion(double theta, const BiPoly& f) {
  if (!(theta > -0.5)) {
    throw domain_error("weighted Hardy expansion requires theta > -1/2, got " +
                       std::to_string(theta));
  }
  NormExpansion out;
  const int deg = std::max(f.total_degree(), 0);
  for (unsigned N = 0; N <= static_cast<unsigned>(deg); ++N) {
    const UniPoly g = transform_with(f, N, [&](unsigned k) { return coeff_b(theta, k, N); });
    const double t = theta + N;
    const double weight = std::exp(log_gamma(2.0 * t + 2.0) - 2.0 * log_gamma(t + 1.0)) /
                          (2.0 * t + 1.0);
    const double value = g.is_zero() ? 0.0 : weight * onedim::bergman_norm2(g, 2.0 * t);
    out.terms.push_back({N, value});
    out.total += value;
  }
  return out;
}

}  // namespace kernelforge::bidisk
