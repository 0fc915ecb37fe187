#include <kernelforge/verify.hpp>

#include <kernelforge/ball.hpp>
#include <kernelforge/bidisk.hpp>
#include <kernelforge/fock.hpp>
#include <kernelforge/oracle.hpp>
#include <kernelforge/poly_io.hpp>
#include <kernelforge/random.hpp>
#include <kernelforge/specfun.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace kernelforge::verify {

bool CriterionResult::items_pass() const {
  return std::all_of(items.begin(), items.end(), [](const ReportItem& i) { return i.pass; });
}

double CriterionResult::worst_ratio() const {
  double worst = 0.0;
  for (const auto& it : items) {
    if (it.tolerance <= 0.0) continue;
    const double err = it.measure == ErrorMeasure::relative ? it.rel_err : it.abs_err;
    worst = std::max(worst, err / it.tolerance);
  }
  return worst;
}

namespace {

using bidisk::BidiskParams;
using ball::BallParams;
using fock::FockParams;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string label(const BidiskParams& p) {
  return "(" + fmt(p.alpha) + "," + fmt(p.beta) + "," + fmt(p.theta) + "," + fmt(p.vartheta) +
         ")";
}
std::string label(const BallParams& p) {
  return "(" + fmt(p.alpha) + "," + fmt(p.beta) + "," + fmt(p.theta) + ")";
}
std::string label(const FockParams& p) {
  return "(" + fmt(p.alpha) + "," + fmt(p.beta) + "," + fmt(p.theta) + ")";
}

BiPoly random_poly(std::mt19937_64& rng, unsigned max_degree) {
  const unsigned deg = 1 + static_cast<unsigned>(uniform01(rng) * max_degree);
  BiPoly f;
  auto coeff = [&] { return cplx(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)); };
  const unsigned top_m = static_cast<unsigned>(uniform01(rng) * (deg + 1));
  f.add_term(top_m, deg - top_m, coeff());
  const unsigned extra = static_cast<unsigned>(uniform01(rng) * 6);
  for (unsigned i = 0; i < extra; ++i) {
    const unsigned d = static_cast<unsigned>(uniform01(rng) * (deg + 1));
    const unsigned m = static_cast<unsigned>(uniform01(rng) * (d + 1));
    f.add_term(m, d - m, coeff());
  }
  return f;
}

Point2 bidisk_point(std::mt19937_64& rng, double radius) {
  return {uniform_disk(rng, radius), uniform_disk(rng, radius)};
}

// Uniform direction on the sphere scaled to a radius uniform in [0, radius].
Point2 ball_point(std::mt19937_64& rng, double radius) {
  const cplx a = uniform_disk(rng, 1.0), b = uniform_disk(rng, 1.0);
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  const double r = radius * uniform01(rng);
  return {a * (r / n), b * (r / n)};
}

BidiskParams random_bidisk(std::mt19937_64& rng, bool with_vartheta) {
  for (;;) {
    BidiskParams p{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0), uniform(rng, -0.5, 2.0),
                   with_vartheta ? uniform(rng, -0.5, 2.0) : 0.0};
    if (p.alpha + p.beta + 2.0 * p.theta + 2.0 * p.vartheta + 3.0 > 0.2) return p;
  }
}

// ---- 1 ----------------------------------------------------------------------

void sigma_gamma(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 20; ++i) {
    const BidiskParams p{uniform(rng, -0.9, 3.0), uniform(rng, -0.9, 3.0),
                         uniform(rng, -0.9, 4.0), 0.0};
    const double closed = 1.0 / bidisk::inverse_sigma_gamma_form(p);
    r.items.push_back(ReportItem::check("sigma " + label(p), bidisk::sigma(p), closed, 1e-10));
    const SeriesResult direct = bidisk::inverse_sigma_direct(p);
    auto it = ReportItem::check("sigma untransformed " + label(p), 1.0 / direct.value.real(),
                                closed, 1e-10);
    it.terms_used = direct.terms_used;
    r.items.push_back(std::move(it));
  }
}

// ---- 2 ----------------------------------------------------------------------

void sigma_integral(CriterionResult& r, std::uint64_t) {
  for (double theta : {0.0, 1.0, 2.0}) {
    for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.25}, std::pair{1.5, -0.5}}) {
      const BidiskParams p{a, b, theta, 0.0};
      const SeriesResult inv = bidisk::inverse_sigma(p);
      const double g = oracle::gram_bidisk_exact(p, 0).blocks[0](0, 0);
      auto it = ReportItem::check("1/sigma vs exact mass " + label(p), inv.value, g, 1e-12,
                                  ErrorMeasure::relative, std::max(1.0, std::abs(g)));
      it.terms_used = inv.terms_used;
      it.tail_bound = inv.tail_bound;
      r.items.push_back(std::move(it));
    }
  }
  for (const BidiskParams& p :
       {BidiskParams{0.0, 0.0, 0.0, 0.5}, BidiskParams{0.5, 0.25, 1.0, 0.5},
        BidiskParams{0.0, 0.0, 0.0, 1.3}, BidiskParams{0.3, -0.5, 1.0, 1.3},
        BidiskParams{0.2, 0.4, 0.5, 0.5}}) {
    const SeriesResult inv = bidisk::inverse_sigma(p);
    const oracle::GramBlocks g = oracle::gram_numeric_bidisk(p, 0);
    const double q = g.blocks[0](0, 0);
    // Both sides carry an error estimate; the quadrature one must itself be small.
    const double tol = g.error_estimate + inv.tail_bound + 1e-14 * std::abs(q);
    auto it = ReportItem::check("1/sigma vs quadrature mass " + label(p), inv.value, q, tol,
                                ErrorMeasure::absolute);
    if (g.error_estimate > 1e-8) it.pass = false;
    it.tail_bound = g.error_estimate;
    r.items.push_back(std::move(it));
  }
}

// ---- 3 ----------------------------------------------------------------------

void taylor_blocks(CriterionResult& r, std::uint64_t) {
  constexpr unsigned D = 8;
  for (double theta : {0.0, 1.0, 2.0}) {
    for (double a : {0.0, 0.5, 1.0}) {
      for (double b : {0.0, 0.5, 1.0}) {
        const BidiskParams p{a, b, theta, 0.0};
        const auto tb = bidisk::taylor_blocks(p, D);
        const auto gk = oracle::gram_kernel_blocks(oracle::gram_bidisk_exact(p, D));
        for (unsigned d = 0; d <= D; ++d) {
          Eigen::Index i = 0, j = 0;
          (tb[d] - gk[d]).cwiseAbs().maxCoeff(&i, &j);
          const double scale = gk[d].cwiseAbs().maxCoeff();
          r.items.push_back(ReportItem::check(
              "taylor block d=" + std::to_string(d) + " " + label(p), tb[d](i, j), gk[d](i, j),
              1e-9, ErrorMeasure::relative, scale));
        }
      }
    }
  }
}

// ---- 4 ----------------------------------------------------------------------

void product_kernel(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 100; ++i) {
    const BidiskParams p{uniform(rng, -0.9, 3.0), uniform(rng, -0.9, 3.0), 0.0, 0.0};
    const Point2 z = bidisk_point(rng, 0.7), w = bidisk_point(rng, 0.7);
    const SeriesResult k = bidisk::full_kernel(p, z, w);
    const cplx closed = std::pow(1.0 - std::conj(w.z1) * z.z1, -p.alpha - 2.0) *
                        std::pow(1.0 - std::conj(w.z2) * z.z2, -p.beta - 2.0);
    auto it = ReportItem::check("product kernel #" + std::to_string(i) + " " + label(p),
                                k.value, closed, 1e-10);
    it.terms_used = k.terms_used;
    it.tail_bound = k.tail_bound;
    r.items.push_back(std::move(it));
  }
}

// ---- 5 ----------------------------------------------------------------------

void bidisk_norms(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 50; ++i) {
    const BidiskParams p{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0),
                         static_cast<double>(i % 3), 0.0};
    const BiPoly f = random_poly(rng, 6);
    const oracle::GramBlocks g = oracle::gram_bidisk_exact(p, 6);
    const double exact = oracle::gram_norm2(g, f);
    const NormExpansion ne = bidisk::norm_expansion(p, f);
    const std::string tag = "#" + std::to_string(i) + " " + label(p);
    r.items.push_back(ReportItem::check("norm total " + tag, ne.total, exact, 1e-9));
    for (const NormTerm& t : ne.terms) {
      const oracle::Projection pr = oracle::project(g, f, t.N);
      const double q = oracle::gram_norm2(g, pr.q);
      r.items.push_back(ReportItem::check("norm term N=" + std::to_string(t.N) + " " + tag,
                                          t.value, q, 1e-9, ErrorMeasure::relative, exact));
    }
  }
}

// ---- 6 ----------------------------------------------------------------------

void hardy(CriterionResult& r, std::uint64_t) {
  for (unsigned theta : {0u, 1u}) {
    for (unsigned d = 0; d <= 6; ++d) {
      for (unsigned m = 0; m <= d; ++m) {
        const BiPoly f = BiPoly::monomial(m, d - m);
        const double total = bidisk::hardy_norm_expansion(theta, f).total;
        r.items.push_back(ReportItem::check(
            "torus z1^" + std::to_string(m) + " z2^" + std::to_string(d - m) +
                " theta=" + std::to_string(theta),
            total, oracle::torus_norm2(theta, f), 1e-10));
      }
    }
  }
  const BiPoly diff = BiPoly::diagonal_factor();
  r.items.push_back(ReportItem::check("torus z1 - z2 theta=0",
                                      bidisk::hardy_norm_expansion(0.0, diff).total, 2.0, 1e-10));
  r.items.push_back(ReportItem::check("torus z1 - z2 theta=0 (Parseval)",
                                      oracle::torus_norm2(0, diff), 2.0, 1e-10));
}

// ---- 7 ----------------------------------------------------------------------

void ball_suite(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 30; ++i) {
    const BallParams p{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0)};
    const BiPoly f = random_poly(rng, 8);
    const double exact = oracle::gram_norm2(oracle::ball_monomial_norms(p, 8), f);
    r.items.push_back(ReportItem::check("ball norm #" + std::to_string(i) + " " + label(p),
                                        ball::norm_expansion(p, f).total, exact, 1e-10));
  }
  for (int i = 0; i < 30; ++i) {
    const BallParams p{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0)};
    const Point2 z = ball_point(rng, 0.6), w = ball_point(rng, 0.6);
    const SeriesResult closed = ball::full_kernel(p, z, w);
    const SeriesResult sum = ball::full_kernel_series(p, z, w);
    auto it = ReportItem::check("ball kernel vs sum of Q_N #" + std::to_string(i) + " " + label(p),
                                closed.value, sum.value, 1e-8);
    it.terms_used = sum.terms_used;
    it.tail_bound = sum.tail_bound;
    r.items.push_back(std::move(it));
  }
  for (int i = 0; i < 30; ++i) {
    const BallParams p{uniform(rng, -0.9, 3.0), 0.0, 0.0};
    const Point2 z = ball_point(rng, 0.9), w = ball_point(rng, 0.9);
    const cplx inner = z.z1 * std::conj(w.z1) + z.z2 * std::conj(w.z2);
    const cplx expected =
        (p.alpha + 1.0) * (p.alpha + 2.0) * std::pow(1.0 - inner, -p.alpha - 3.0);
    r.items.push_back(ReportItem::check("ball kernel theta=beta=0 #" + std::to_string(i) + " " +
                                            label(p),
                                        ball::full_kernel(p, z, w).value, expected, 1e-10));
  }
}

// ---- 8 ----------------------------------------------------------------------

void fock_suite(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (double theta : {0.0, 0.5, 1.0, 2.5}) {
    for (int i = 0; i < 50; ++i) {
      const FockParams p{uniform(rng, 0.3, 3.0), uniform(rng, 0.3, 3.0), theta};
      const Point2 z = bidisk_point(rng, 2.0), w = bidisk_point(rng, 2.0);
      const SeriesResult a = fock::full_kernel(p, z, w);
      const SeriesResult b = fock::cov_kernel(p, z, w);
      auto it = ReportItem::check("fock kernel vs change of variables #" + std::to_string(i) +
                                      " " + label(p),
                                  a.value, b.value, 1e-9);
      it.terms_used = a.terms_used;
      it.tail_bound = a.tail_bound;
      r.items.push_back(std::move(it));
    }
  }
  for (int i = 0; i < 30; ++i) {
    const FockParams p{uniform(rng, 0.3, 3.0), uniform(rng, 0.3, 3.0), static_cast<double>(i % 3)};
    const BiPoly f = random_poly(rng, 6);
    const double exact = oracle::gram_norm2(oracle::gram_fock_exact(p, 6), f);
    r.items.push_back(ReportItem::check("fock norm #" + std::to_string(i) + " " + label(p),
                                        fock::norm_expansion(p, f).total, exact, 1e-10));
  }
}

// ---- 9 ----------------------------------------------------------------------

void kernel_matrix_checks(CriterionResult& r, const std::string& tag,
                          const std::vector<Point2>& pts,
                          const std::function<cplx(const Point2&, const Point2&)>& k) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = k(pts[i], pts[j]);
  }
  double worst = 0.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double e = std::abs(K(i, j) - std::conj(K(j, i))) / std::max(1.0, std::abs(K(i, j)));
      if (e > worst) {
        worst = e;
        wi = i;
        wj = j;
      }
    }
  }
  r.items.push_back(ReportItem::check(tag + " hermitian", K(wi, wj), std::conj(K(wj, wi)),
                                      1e-10, ErrorMeasure::relative,
                                      std::max(1.0, std::abs(K(wi, wj)))));
  const Eigen::MatrixXcd H = 0.5 * (K + K.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  // Passes when lo ≥ -1e-8·hi, i.e. the negative part of lo is within 1e-8 of hi.
  r.items.push_back(ReportItem::check(tag + " min eigenvalue", lo, std::max(lo, 0.0), 1e-8,
                                      ErrorMeasure::relative, std::max(hi, 1e-300)));
}

void structure(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int draw = 0; draw < 10; ++draw) {
    const BidiskParams bp = random_bidisk(rng, true);
    std::vector<Point2> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(bidisk_point(rng, 0.7));
    kernel_matrix_checks(r, "bidisk " + label(bp), pts, [&](const Point2& z, const Point2& w) {
      return bidisk::full_kernel(bp, z, w).value;
    });

    const BallParams lp{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0)};
    pts.clear();
    for (int i = 0; i < 10; ++i) pts.push_back(ball_point(rng, 0.7));
    kernel_matrix_checks(r, "ball " + label(lp), pts, [&](const Point2& z, const Point2& w) {
      return ball::full_kernel(lp, z, w).value;
    });

    const FockParams fp{uniform(rng, 0.3, 3.0), uniform(rng, 0.3, 3.0), uniform(rng, -0.9, 3.0)};
    pts.clear();
    for (int i = 0; i < 10; ++i) pts.push_back(bidisk_point(rng, 2.0));
    kernel_matrix_checks(r, "fock " + label(fp), pts, [&](const Point2& z, const Point2& w) {
      return fock::full_kernel(fp, z, w).value;
    });
  }
}

// ---- 10 ---------------------------------------------------------------------

void delta_identities(CriterionResult& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int draw = 0; draw < 10; ++draw) {
    const BidiskParams p = random_bidisk(rng, true);
    const FockParams fp{uniform(rng, 0.3, 3.0), uniform(rng, 0.3, 3.0), 0.0};
    const double a = p.a();
    const double s = p.s();
    double worst_b = 0.0, worst_f = 0.0, diag_b = 0.0, diag_f = 0.0;
    for (unsigned N = 0; N <= 10; ++N) {
      for (unsigned n = 0; n <= N; ++n) {
        double sb = 0.0, sf = 0.0;
        for (unsigned k = n; k <= N; ++k) {
          const double fwd = specfun::factorial(n) * specfun::binomial(k, n);
          sb += bidisk::coeff_a(p, k, N) * fwd * specfun::pochhammer(a + n, k - n) /
                specfun::pochhammer(s + 2.0 + 2.0 * n, k - n);
          const double sign = ((N - k) % 2 == 0) ? 1.0 : -1.0;
          sf += sign / (specfun::factorial(k) * specfun::factorial(N - k)) * fwd *
                std::pow(fp.alpha / fp.gamma(), static_cast<int>(N - n));
        }
        if (n < N) {
          worst_b = std::max(worst_b, std::abs(sb));
          worst_f = std::max(worst_f, std::abs(sf));
        } else {
          diag_b = std::max(diag_b, std::abs(sb - 1.0));
          diag_f = std::max(diag_f, std::abs(sf - 1.0));
        }
      }
    }
    r.items.push_back(ReportItem::check("bidisk delta sums n<N " + label(p), worst_b, 0.0, 1e-10,
                                        ErrorMeasure::absolute));
    r.items.push_back(ReportItem::check("bidisk delta sums n=N " + label(p), 1.0 + diag_b, 1.0,
                                        1e-10, ErrorMeasure::absolute));
    r.items.push_back(ReportItem::check("fock delta sums n<N " + label(fp), worst_f, 0.0, 1e-10,
                                        ErrorMeasure::absolute));
    r.items.push_back(ReportItem::check("fock delta sums n=N " + label(fp), 1.0 + diag_f, 1.0,
                                        1e-10, ErrorMeasure::absolute));
  }
}

struct CriterionDef {
  const char* name;
  double time_limit;
  void (*run)(CriterionResult&, std::uint64_t);
};

const CriterionDef kCriteria[] = {
    {"sigma: hypergeometric form vs Gamma form", 1.0, sigma_gamma},
    {"sigma: reciprocal vs weight mass", 10.0, sigma_integral},
    {"bidisk: Taylor blocks vs inverse Gram blocks", 30.0, taylor_blocks},
    {"bidisk: product kernel at theta = vartheta = 0", 1.0, product_kernel},
    {"bidisk: norm expansion vs Gram norms and projections", 60.0, bidisk_norms},
    {"torus: norm expansion vs Parseval", 1.0, hardy},
    {"ball: norms, kernel series, collapsed kernel", 10.0, ball_suite},
    {"fock: kernel paths and norm expansion", 10.0, fock_suite},
    {"kernels: hermitian symmetry and positivity", 10.0, structure},
    {"coefficients: Kronecker delta sums", 1.0, delta_identities},
};

}  // namespace

int criterion_count() { return static_cast<int>(std::size(kCriteria)); }

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > criterion_count()) {
    throw std::invalid_argument("unknown criterion " + std::to_string(id));
  }
  const CriterionDef& def = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = def.name;
  r.time_limit = def.time_limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    def.run(r, seed);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"sigma-hardy", {1}},   {"sigma-integral", {2}}, {"bidisk-taylor", {3}},
      {"bidisk-closed", {4}}, {"bidisk-norm", {5}},    {"hardy", {6}},
      {"ball", {7}},          {"fock-cov", {8}},       {"structure", {9}},
      {"delta", {10}},        {"bidisk-core", {1, 3, 4, 5}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
  };
  return all;
}

const Suite& find_suite(const std::string& name) {
  for (const auto& s : suites()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown verification suite '" + name + "'");
}

EvalReport run_suite(const std::string& name, std::uint64_t seed) {
  const Suite& suite = find_suite(name);
  EvalReport rep;
  rep.command = "verify " + name;
  rep.params["suite"] = name;
  rep.params["seed"] = seed;
  for (int id : suite.criteria) {
    CriterionResult c = run_criterion(id, seed);
    rep.wall_time += c.seconds;
    ReportItem verdict = ReportItem::plain("criterion " + std::to_string(id) + ": " + c.name,
                                           c.worst_ratio());
    verdict.pass = c.pass();
    for (auto& it : c.items) {
      it.item = "[" + std::to_string(id) + "] " + it.item;
      rep.items.push_back(std::move(it));
    }
    if (!c.error.empty()) verdict.item += " (error: " + c.error + ")";
    if (!c.within_time()) verdict.item += " (over the time limit of " + fmt(c.time_limit) + " s)";
    rep.items.push_back(std::move(verdict));
  }
  return rep;
}

}  // namespace kernelforge::verify
