#include <kernelforge/oracle.hpp>

#include <kernelforge/onedim.hpp>
#include <kernelforge/quadrature.hpp>
#include <kernelforge/random.hpp>
#include <kernelforge/specfun.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kernelforge::oracle {

using specfun::binomial;
using specfun::log_gamma;

namespace {

constexpr unsigned kDegreeCap = 200;
constexpr double kMaxCondition = 1e12;

void check_degree(unsigned max_degree) {
  if (max_degree > kDegreeCap) {
    throw domain_error("Gram oracle degree " + std::to_string(max_degree) +
                       " exceeds the cap of " + std::to_string(kDegreeCap));
  }
}

unsigned integer_theta(double theta) {
  if (!(theta >= 0.0) || std::floor(theta) != theta || theta > 64.0) {
    throw domain_error("exact Gram oracle needs a nonnegative integer theta, got " +
                       std::to_string(theta));
  }
  return static_cast<unsigned>(theta);
}

bool is_integer(double x) { return std::floor(x) == x; }

// Entry ⟨z1^m1 z2^(d-m1), z1^m2 z2^(d-m2)⟩ of ∫∫ |f|²|z1-z2|^(2θ) dμ1 dμ2 for
// rotation-invariant product measures with moments mu1, mu2, after expanding
// (z1-z2)^θ binomially on both sides.
std::vector<Eigen::MatrixXd> binomial_blocks(unsigned theta, unsigned max_degree,
                                             const std::function<double(unsigned)>& mu1,
                                             const std::function<double(unsigned)>& mu2) {
  std::vector<double> bin(theta + 1);
  for (unsigned i = 0; i <= theta; ++i) bin[i] = binomial(theta, i);
  std::vector<Eigen::MatrixXd> blocks;
  for (unsigned d = 0; d <= max_degree; ++d) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d + 1, d + 1);
    for (unsigned m1 = 0; m1 <= d; ++m1) {
      for (unsigned m2 = m1; m2 <= d; ++m2) {
        double acc = 0.0;
        for (unsigned i = 0; i + (m2 - m1) <= theta; ++i) {
          const unsigned j = m2 - m1 + i;
          const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
          acc += sign * bin[i] * bin[j] * mu1(m1 + theta - i) * mu2(d - m1 + i);
        }
        G(m1, m2) = acc;
        G(m2, m1) = acc;
      }
    }
    blocks.push_back(std::move(G));
  }
  return blocks;
}

// Inverse of a symmetric positive definite matrix. The condition number is
// judged after scaling to unit diagonal, which removes the spread of monomial
// norms within a degree and leaves only genuine near-dependence.
Eigen::MatrixXd inverse_checked(const Eigen::MatrixXd& M, const std::string& what) {
  const Eigen::VectorXd diag = M.diagonal();
  if (!(diag.minCoeff() > 0.0)) {
    throw conditioning_error(what + ": block is not positive definite");
  }
  const Eigen::VectorXd s = diag.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd S = s.asDiagonal() * M * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    std::ostringstream os;
    os << what << ": condition number " << (lo > 0.0 ? hi / lo : INFINITY)
       << " exceeds " << kMaxCondition;
    throw conditioning_error(os.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw conditioning_error(what + ": Cholesky failed");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()));
  return s.asDiagonal() * inv * s.asDiagonal();
}

}  // namespace

nlohmann::json GramBlocks::to_json() const {
  nlohmann::json j;
  j["space"] = space;
  j["params"] = params;
  j["exact"] = exact;
  j["error_estimate"] = error_estimate;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& G : blocks) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < G.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < G.cols(); ++c) row.push_back(G(r, c));
      rows.push_back(std::move(row));
    }
    arr.push_back(std::move(rows));
  }
  j["blocks"] = std::move(arr);
  return j;
}

GramBlocks GramBlocks::from_json(const nlohmann::json& j) {
  GramBlocks g;
  g.space = j.at("space").get<std::string>();
  g.params = j.at("params").get<std::map<std::string, double>>();
  g.exact = j.at("exact").get<bool>();
  g.error_estimate = j.at("error_estimate").get<double>();
  for (const auto& rows : j.at("blocks")) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n != static_cast<Eigen::Index>(g.blocks.size()) + 1) {
      throw std::invalid_argument("Gram block JSON: block d must be (d+1)x(d+1)");
    }
    Eigen::MatrixXd G(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw std::invalid_argument("Gram block JSON: block rows must be square");
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        G(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      }
    }
    g.blocks.push_back(std::move(G));
  }
  if (g.blocks.empty()) throw std::invalid_argument("Gram block JSON: no blocks");
  return g;
}

GramBlocks gram_bidisk_exact(const bidisk::BidiskParams& p, unsigned max_degree) {
  p.validate();
  check_degree(max_degree);
  if (p.vartheta != 0.0) throw domain_error("exact bidisk Gram oracle needs vartheta = 0");
  const unsigned theta = integer_theta(p.theta);
  GramBlocks g;
  g.space = "bidisk";
  g.params = {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta}, {"vartheta", 0.0}};
  g.blocks = binomial_blocks(
      theta, max_degree, [&](unsigned m) { return onedim::bergman_monomial_norm2(m, p.alpha); },
      [&](unsigned m) { return onedim::bergman_monomial_norm2(m, p.beta); });
  return g;
}

GramBlocks gram_fock_exact(const fock::FockParams& p, unsigned max_degree) {
  p.validate();
  check_degree(max_degree);
  const unsigned theta = integer_theta(p.theta);
  GramBlocks g;
  g.space = "fock";
  g.params = {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta}};
  g.blocks = binomial_blocks(
      theta, max_degree, [&](unsigned m) { return onedim::fock_monomial_norm2(m, p.alpha); },
      [&](unsigned m) { return onedim::fock_monomial_norm2(m, p.beta); });
  return g;
}

GramBlocks gram_torus_exact(unsigned theta, unsigned max_degree) {
  check_degree(max_degree);
  GramBlocks g;
  g.space = "torus";
  g.params = {{"theta", static_cast<double>(theta)}};
  auto one = [](unsigned) { return 1.0; };
  g.blocks = binomial_blocks(theta, max_degree, one, one);
  return g;
}

double torus_norm2(unsigned theta, const BiPoly& f) {
  const BiPoly h = f * power(BiPoly::diagonal_factor(), theta);
  double total = 0.0;
  for (const auto& [k, c] : h.coefficients()) total += std::norm(c);
  return total;
}

double ball_monomial_norm2(const ball::BallParams& p, unsigned m, unsigned n) {
  const double a = p.alpha, b = p.beta, t = p.theta;
  return std::exp(log_gamma(m + 1.0) + log_gamma(n + t + a + b + 2.0) -
                  log_gamma(m + n + t + a + b + 3.0) + log_gamma(n + t + 1.0) +
                  log_gamma(a + 1.0) - log_gamma(n + t + a + 2.0));
}

GramBlocks ball_monomial_norms(const ball::BallParams& p, unsigned max_degree) {
  p.validate();
  check_degree(max_degree);
  GramBlocks g;
  g.space = "ball";
  g.params = {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta}};
  for (unsigned d = 0; d <= max_degree; ++d) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d + 1, d + 1);
    for (unsigned m = 0; m <= d; ++m) G(m, m) = ball_monomial_norm2(p, m, d - m);
    g.blocks.push_back(std::move(G));
  }
  return g;
}

double sphere_monomial_norm2(double beta, double theta, unsigned m, unsigned n) {
  if (!(beta + theta > -1.0)) throw domain_error("sphere norm requires beta + theta > -1");
  return std::exp(log_gamma(m + 1.0) + log_gamma(n + theta + beta + 1.0) -
                  log_gamma(m + n + theta + beta + 2.0));
}

// ---- quadrature ------------------------------------------------------------

namespace {

// A point of the (t1, t2) plane with its quadrature weight and the exactly
// computed quantities the angular integrand needs.
struct RadialPair {
  double r1, r2;
  double weight;
  double gap2;     // (r1 - r2)²
  double corner;   // 1 - r1 r2, bidisk only
};

class AngularRule {
public:
  AngularRule(int level, unsigned max_k) : max_k_(max_k) {
    for (const auto& nd : quad::tanh_sinh(0.0, std::numbers::pi, level)) {
      const double half = std::sin(0.5 * nd.to_lo);
      one_minus_cos_.push_back(2.0 * half * half);
      weight_.push_back(nd.weight / std::numbers::pi);
      for (unsigned k = 0; k <= max_k; ++k) cos_.push_back(std::cos(k * nd.x));
    }
  }

  // A_k for k = 0..max_k, W = (gap2 + 2 r1 r2 (1-cos))^θ ((1 - r1 r2)² + 2 r1 r2 (1-cos))^ϑ.
  void moments(const RadialPair& rp, double theta, double vartheta,
               std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    const double rr = 2.0 * rp.r1 * rp.r2;
    const double c2 = rp.corner * rp.corner;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
      const double q = rr * one_minus_cos_[i];
      double W = weight_[i];
      if (theta != 0.0) W *= std::pow(rp.gap2 + q, theta);
      if (vartheta != 0.0) W *= std::pow(c2 + q, vartheta);
      const double* ck = &cos_[i * (max_k_ + 1)];
      for (unsigned k = 0; k <= max_k_; ++k) out[k] += W * ck[k];
    }
  }

private:
  unsigned max_k_;
  std::vector<double> one_minus_cos_, weight_, cos_;
};

void accumulate(std::vector<Eigen::MatrixXd>& blocks, const RadialPair& rp,
                const std::vector<double>& A, std::vector<double>& p1,
                std::vector<double>& p2) {
  const unsigned D = static_cast<unsigned>(blocks.size()) - 1;
  p1[0] = p2[0] = 1.0;
  for (unsigned e = 1; e <= 2 * D; ++e) {
    p1[e] = p1[e - 1] * rp.r1;
    p2[e] = p2[e - 1] * rp.r2;
  }
  for (unsigned d = 0; d <= D; ++d) {
    Eigen::MatrixXd& G = blocks[d];
    for (unsigned m1 = 0; m1 <= d; ++m1) {
      for (unsigned m2 = m1; m2 <= d; ++m2) {
        G(m1, m2) += rp.weight * p1[m1 + m2] * p2[2 * d - m1 - m2] * A[m2 - m1];
      }
    }
  }
}

void symmetrize(std::vector<Eigen::MatrixXd>& blocks) {
  for (auto& G : blocks) {
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index j = 0; j < i; ++j) G(i, j) = G(j, i);
    }
  }
}

// Runs `level_blocks` at increasing levels until two successive results agree.
GramBlocks refine(const std::function<std::vector<Eigen::MatrixXd>(int)>& level_blocks,
                  const QuadratureConfig& qcfg, GramBlocks meta) {
  std::vector<Eigen::MatrixXd> prev;
  double worst = 0.0;
  std::string worst_entry;
  for (int level = qcfg.min_level; level <= qcfg.max_level; ++level) {
    std::vector<Eigen::MatrixXd> cur = level_blocks(level);
    if (!prev.empty()) {
      bool ok = true;
      worst = 0.0;
      for (std::size_t d = 0; d < cur.size(); ++d) {
        for (Eigen::Index i = 0; i < cur[d].rows(); ++i) {
          for (Eigen::Index j = 0; j < cur[d].cols(); ++j) {
            const double diff = std::abs(cur[d](i, j) - prev[d](i, j));
            if (diff > qcfg.tolerance * std::max(1.0, std::abs(cur[d](i, j)))) ok = false;
            if (diff > worst) {
              worst = diff;
              std::ostringstream os;
              os << "degree " << d << " entry (" << i << "," << j << ")";
              worst_entry = os.str();
            }
          }
        }
      }
      if (ok) {
        meta.exact = false;
        meta.error_estimate = worst;
        meta.blocks = std::move(cur);
        return meta;
      }
    }
    prev = std::move(cur);
  }
  std::ostringstream os;
  os << "Gram quadrature did not reach tolerance " << qcfg.tolerance << " by level "
     << qcfg.max_level << "; worst change " << worst << " at " << worst_entry;
  throw convergence_error(os.str());
}

}  // namespace

GramBlocks gram_numeric_bidisk(const bidisk::BidiskParams& p, unsigned max_degree,
                               const QuadratureConfig& qcfg) {
  p.validate();
  check_degree(max_degree);
  const bool split = !is_integer(p.theta);

  auto level_blocks = [&](int level) {
    std::vector<Eigen::MatrixXd> blocks;
    for (unsigned d = 0; d <= max_degree; ++d) {
      blocks.push_back(Eigen::MatrixXd::Zero(d + 1, d + 1));
    }
    const AngularRule angular(level, max_degree);
    std::vector<double> A(max_degree + 1), p1(2 * max_degree + 1), p2(2 * max_degree + 1);
    const auto outer = quad::tanh_sinh(0.0, 1.0, level);
    const std::vector<quad::Node> whole = split ? std::vector<quad::Node>{} : outer;

    for (const auto& n1 : outer) {
      const double t1 = n1.x, s1 = n1.to_hi;
      const double w1 = (p.alpha + 1.0) * std::pow(s1, p.alpha) * n1.weight;
      const double r1 = std::sqrt(t1);
      auto visit = [&](double t2, double s2, double dt, double w) {
        const double r2 = std::sqrt(t2);
        const double sum = r1 + r2;
        const double gap = sum > 0.0 ? dt / sum : 0.0;
        const double tt = t1 * t2;
        const double corner = (s1 + s2 - s1 * s2) / (1.0 + std::sqrt(tt));
        const RadialPair rp{r1, r2, w1 * (p.beta + 1.0) * std::pow(s2, p.beta) * w,
                            gap * gap, corner};
        angular.moments(rp, p.theta, p.vartheta, A);
        accumulate(blocks, rp, A, p1, p2);
      };
      if (!split) {
        for (const auto& n2 : whole) visit(n2.x, n2.to_hi, t1 - n2.x, n2.weight);
      } else {
        for (const auto& n2 : quad::tanh_sinh(0.0, t1, level)) {
          visit(n2.to_lo, s1 + n2.to_hi, n2.to_hi, n2.weight);
        }
        for (const auto& n2 : quad::tanh_sinh(t1, 1.0, level)) {
          visit(t1 + n2.to_lo, n2.to_hi, -n2.to_lo, n2.weight);
        }
      }
    }
    symmetrize(blocks);
    return blocks;
  };

  GramBlocks meta;
  meta.space = "bidisk";
  meta.params = {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta},
                 {"vartheta", p.vartheta}};
  return refine(level_blocks, qcfg, std::move(meta));
}

GramBlocks gram_numeric_fock(const fock::FockParams& p, unsigned max_degree,
                             const QuadratureConfig& qcfg) {
  p.validate();
  check_degree(max_degree);
  const bool split = !is_integer(p.theta);

  // t1 = u1/α, t2 = u2/β with weights e^(-u1) du1/α and e^(-u2) du2/β.
  auto level_blocks = [&](int level) {
    std::vector<Eigen::MatrixXd> blocks;
    for (unsigned d = 0; d <= max_degree; ++d) {
      blocks.push_back(Eigen::MatrixXd::Zero(d + 1, d + 1));
    }
    const AngularRule angular(level, max_degree);
    std::vector<double> A(max_degree + 1), p1(2 * max_degree + 1), p2(2 * max_degree + 1);
    const auto outer = quad::exp_sinh(0.0, level);
    const double norm = 1.0 / (p.alpha * p.beta);

    for (const auto& n1 : outer) {
      const double w1 = std::exp(-n1.x) * n1.weight * norm;
      if (w1 == 0.0) continue;
      const double t1 = n1.x / p.alpha;
      const double r1 = std::sqrt(t1);
      auto visit = [&](double u2, double dt, double w) {
        const double t2 = u2 / p.beta;
        const double r2 = std::sqrt(t2);
        const double sum = r1 + r2;
        const double gap = sum > 0.0 ? dt / sum : 0.0;
        const RadialPair rp{r1, r2, w1 * std::exp(-u2) * w, gap * gap, 0.0};
        if (rp.weight == 0.0) return;
        angular.moments(rp, p.theta, 0.0, A);
        accumulate(blocks, rp, A, p1, p2);
      };
      if (!split) {
        for (const auto& n2 : outer) visit(n2.x, t1 - n2.x / p.beta, n2.weight);
      } else {
        const double knot = p.beta * t1;
        for (const auto& n2 : quad::tanh_sinh(0.0, knot, level)) {
          visit(n2.to_lo, n2.to_hi / p.beta, n2.weight);
        }
        for (const auto& n2 : quad::exp_sinh(knot, level)) {
          visit(knot + n2.to_lo, -n2.to_lo / p.beta, n2.weight);
        }
      }
    }
    symmetrize(blocks);
    return blocks;
  };

  GramBlocks meta;
  meta.space = "fock";
  meta.params = {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta}};
  return refine(level_blocks, qcfg, std::move(meta));
}

// ---- kernels, pairings, projections -----------------------------------------

std::vector<Eigen::MatrixXd> gram_kernel_blocks(const GramBlocks& gram) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(gram.blocks.size());
  for (std::size_t d = 0; d < gram.blocks.size(); ++d) {
    out.push_back(inverse_checked(gram.blocks[d], "Gram block of degree " + std::to_string(d)));
  }
  return out;
}

namespace {

Eigen::VectorXcd monomial_vector(const Point2& z, unsigned d) {
  Eigen::VectorXcd e(d + 1);
  for (unsigned i = 0; i <= d; ++i) {
    e(i) = std::pow(z.z1, static_cast<int>(i)) * std::pow(z.z2, static_cast<int>(d - i));
  }
  return e;
}

}  // namespace

cplx kernel_from_blocks(const std::vector<Eigen::MatrixXd>& blocks, const Point2& z,
                        const Point2& w) {
  cplx total = 0.0;
  for (std::size_t d = 0; d < blocks.size(); ++d) {
    const unsigned deg = static_cast<unsigned>(d);
    const Eigen::VectorXcd ez = monomial_vector(z, deg);
    const Eigen::VectorXcd ew = monomial_vector(w, deg).conjugate();
    total += ez.cwiseProduct(blocks[d].cast<cplx>() * ew).sum();
  }
  return total;
}

Eigen::VectorXcd block_vector(const BiPoly& f, unsigned d) {
  Eigen::VectorXcd v(d + 1);
  for (unsigned m = 0; m <= d; ++m) v(m) = f.coefficient(m, d - m);
  return v;
}

namespace {

void check_fits(const GramBlocks& gram, const BiPoly& f) {
  if (f.total_degree() > static_cast<int>(gram.max_degree())) {
    throw std::out_of_range("polynomial degree " + std::to_string(f.total_degree()) +
                            " exceeds the Gram blocks (max degree " +
                            std::to_string(gram.max_degree()) + ")");
  }
}

}  // namespace

cplx gram_inner(const GramBlocks& gram, const BiPoly& f, const BiPoly& g) {
  check_fits(gram, f);
  check_fits(gram, g);
  const int deg = std::max(f.total_degree(), g.total_degree());
  cplx total = 0.0;
  for (int d = 0; d <= deg; ++d) {
    const auto ud = static_cast<unsigned>(d);
    const Eigen::VectorXcd fv = block_vector(f, ud);
    const Eigen::VectorXcd gv = block_vector(g, ud);
    total += gv.dot(gram.blocks[ud].cast<cplx>() * fv);
  }
  return total;
}

double gram_norm2(const GramBlocks& gram, const BiPoly& f) {
  return gram_inner(gram, f, f).real();
}

cplx reproduce(const GramBlocks& gram, const std::vector<Eigen::MatrixXd>& kernel,
               const BiPoly& f, const Point2& w) {
  check_fits(gram, f);
  cplx total = 0.0;
  for (int d = 0; d <= f.total_degree(); ++d) {
    const auto ud = static_cast<unsigned>(d);
    const Eigen::VectorXcd k = kernel[ud].cast<cplx>() * monomial_vector(w, ud).conjugate();
    total += k.dot(gram.blocks[ud].cast<cplx>() * block_vector(f, ud));
  }
  return total;
}

namespace {

// Projection of the degree-d part of f onto (z1 - z2)^N times degree d-N
// monomials. Returns the projected coefficient vector.
Eigen::VectorXcd project_block(const Eigen::MatrixXd& G, const Eigen::VectorXcd& f,
                               unsigned d, unsigned N, double& residual) {
  if (N > d) return Eigen::VectorXcd::Zero(d + 1);
  const unsigned cols = d - N + 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d + 1, cols);
  for (unsigned j = 0; j < cols; ++j) {
    for (unsigned l = 0; l <= N; ++l) {
      B(j + l, j) = binomial(N, l) * (((N - l) % 2 == 0) ? 1.0 : -1.0);
    }
  }
  const Eigen::MatrixXd M = B.transpose() * G * B;
  const Eigen::MatrixXd Minv =
      inverse_checked(M, "projection normal equations at degree " + std::to_string(d));
  const Eigen::MatrixXcd BtG = (B.transpose() * G).cast<cplx>();
  const Eigen::VectorXcd c = Minv.cast<cplx>() * (BtG * f);
  const Eigen::VectorXcd p = B.cast<cplx>() * c;
  const Eigen::VectorXcd r = BtG * (f - p);
  const double fnorm = std::sqrt(std::max(0.0, f.dot(G.cast<cplx>() * f).real()));
  for (unsigned j = 0; j < cols; ++j) {
    const double scale = fnorm * std::sqrt(M(j, j));
    if (scale > 0.0) residual = std::max(residual, std::abs(r(j)) / scale);
  }
  return p;
}

BiPoly from_blocks(const std::vector<Eigen::VectorXcd>& parts) {
  BiPoly out;
  for (std::size_t d = 0; d < parts.size(); ++d) {
    const auto ud = static_cast<unsigned>(d);
    for (unsigned m = 0; m <= ud; ++m) out.add_term(m, ud - m, parts[d](m));
  }
  return out;
}

}  // namespace

Projection project(const GramBlocks& gram, const BiPoly& f, unsigned N) {
  check_fits(gram, f);
  const int deg = std::max(f.total_degree(), 0);
  std::vector<Eigen::VectorXcd> pn, pn1;
  Projection out;
  for (int d = 0; d <= deg; ++d) {
    const auto ud = static_cast<unsigned>(d);
    const Eigen::VectorXcd fv = block_vector(f, ud);
    pn.push_back(project_block(gram.blocks[ud], fv, ud, N, out.residual));
    pn1.push_back(project_block(gram.blocks[ud], fv, ud, N + 1, out.residual));
  }
  if (out.residual > 1e-10) {
    std::ostringstream os;
    os << "projection residual is not orthogonal (relative defect " << out.residual << ")";
    throw conditioning_error(os.str());
  }
  out.p = from_blocks(pn);
  std::vector<Eigen::VectorXcd> diff;
  for (std::size_t d = 0; d < pn.size(); ++d) diff.push_back(pn[d] - pn1[d]);
  out.q = from_blocks(diff);
  return out;
}

// ---- Monte Carlo -------------------------------------------------------------

namespace {

template <class Sample>
MonteCarloEstimate run_pairs(std::size_t pairs, std::uint64_t seed, Sample sample) {
  std::mt19937_64 rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double u1 = uniform01(rng), u2 = uniform01(rng);
    const double f1 = uniform01(rng), f2 = uniform01(rng);
    const double v = 0.5 * (sample(u1, u2, f1, f2) + sample(1.0 - u1, 1.0 - u2, 1.0 - f1, 1.0 - f2));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.samples = 2 * pairs;
  if (pairs > 1) {
    est.std_error = std::sqrt(m2 / static_cast<double>(pairs - 1) / static_cast<double>(pairs));
  }
  return est;
}

double monomial_integrand(double r1, double r2, double phi1, double phi2, unsigned m1,
                          unsigned n1, unsigned m2, unsigned n2, double theta,
                          double vartheta) {
  const cplx z1 = std::polar(r1, phi1), z2 = std::polar(r2, phi2);
  cplx v = std::pow(z1, static_cast<int>(m1)) * std::pow(std::conj(z1), static_cast<int>(m2)) *
           std::pow(z2, static_cast<int>(n1)) * std::pow(std::conj(z2), static_cast<int>(n2));
  double w = 1.0;
  if (theta != 0.0) w *= std::pow(std::norm(z1 - z2), theta);
  if (vartheta != 0.0) w *= std::pow(std::norm(1.0 - std::conj(z2) * z1), vartheta);
  return (v * w).real();
}

}  // namespace

MonteCarloEstimate monte_carlo_bidisk(const bidisk::BidiskParams& p, unsigned m1, unsigned n1,
                                      unsigned m2, unsigned n2, std::size_t pairs,
                                      std::uint64_t seed) {
  p.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return run_pairs(pairs, seed, [&](double u1, double u2, double f1, double f2) {
    // 1 - |z|² ~ Beta(α+1, 1) has density (α+1)(1-t)^α in t = |z|².
    const double t1 = 1.0 - std::pow(u1, 1.0 / (p.alpha + 1.0));
    const double t2 = 1.0 - std::pow(u2, 1.0 / (p.beta + 1.0));
    return monomial_integrand(std::sqrt(t1), std::sqrt(t2), two_pi * f1, two_pi * f2, m1, n1,
                              m2, n2, p.theta, p.vartheta);
  });
}

MonteCarloEstimate monte_carlo_fock(const fock::FockParams& p, unsigned m1, unsigned n1,
                                    unsigned m2, unsigned n2, std::size_t pairs,
                                    std::uint64_t seed) {
  p.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  MonteCarloEstimate est = run_pairs(pairs, seed, [&](double u1, double u2, double f1, double f2) {
    const double t1 = -std::log(u1) / p.alpha;
    const double t2 = -std::log(u2) / p.beta;
    return monomial_integrand(std::sqrt(t1), std::sqrt(t2), two_pi * f1, two_pi * f2, m1, n1,
                              m2, n2, p.theta, 0.0);
  });
  const double scale = 1.0 / (p.alpha * p.beta);
  est.mean *= scale;
  est.std_error *= scale;
  return est;
}

}  // namespace kernelforge::oracle
