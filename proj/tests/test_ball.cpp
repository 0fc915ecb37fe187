#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <kernelforge/ball.hpp>
#include <kernelforge/oracle.hpp>
#include <kernelforge/random.hpp>
#include <kernelforge/specfun.hpp>

#include <random>

using namespace kernelforge;
using ball::BallParams;

namespace {

Point2 ball_point(std::mt19937_64& rng, double radius) {
  const cplx a = uniform_disk(rng, 1.0), b = uniform_disk(rng, 1.0);
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  const double r = radius * uniform01(rng);
  return {a * (r / n), b * (r / n)};
}

double monomial_norm(const BallParams& p, unsigned m, unsigned n) {
  return ball::embed_const(p, n) * specfun::factorial(m) / specfun::pochhammer(p.index(n) + 2.0, m);
}

}  // namespace

TEST_CASE("monomial norms against frozen values") {
  CHECK(monomial_norm({0.5, 0.3, 1.2}, 2, 3) ==
        doctest::Approx(2.771352253415312374e-4).epsilon(1e-12));
  CHECK(monomial_norm({-0.5, 1.5, -0.4}, 0, 4) ==
        doctest::Approx(0.1286561778840151925).epsilon(1e-12));
  CHECK(monomial_norm({0.0, 0.0, 0.0}, 1, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(monomial_norm({0.0, 0.0, 0.0}, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  const BallParams p{0.5, 0.3, 1.2};
  const auto g = oracle::ball_monomial_norms(p, 5);
  CHECK(g.blocks[5](2, 2) == doctest::Approx(2.771352253415312374e-4).epsilon(1e-12));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(BallParams({-1.0, 0.0, 0.0}).validate(), domain_error);
  CHECK_THROWS_AS(ball::check_point({0.8, 0.7}), domain_error);
  CHECK_THROWS_AS(ball::hardy_norm_expansion(-0.6, -0.5, BiPoly::z1()), domain_error);
  CHECK_NOTHROW(ball::check_point({0.6, 0.7}));
}

TEST_CASE("closed kernel agrees with the series") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const BallParams p{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0)};
    const Point2 z = ball_point(rng, 0.7), w = ball_point(rng, 0.7);
    const cplx k = ball::full_kernel(p, z, w).value;
    const cplx ks = ball::full_kernel_series(p, z, w).value;
    CHECK(std::abs(k - ks) <= 1e-9 * std::abs(ks));
    CHECK(std::abs(k - std::conj(ball::full_kernel(p, w, z).value)) <= 1e-10 * std::abs(k));
  }
}

TEST_CASE("kernel reproduces the monomial norms") {
  const BallParams p{0.4, 0.6, 0.8};
  const cplx k0 = ball::full_kernel(p, {0.3, 0.2}, {0.0, 0.0}).value;
  CHECK(k0.real() == doctest::Approx(1.0 / monomial_norm(p, 0, 0)).epsilon(1e-13));
  const double t = 1e-3;
  const cplx k = ball::q_kernel(p, 2, {0.0, t}, {0.0, 0.5});
  CHECK(k.real() / (0.25 * t * t) == doctest::Approx(1.0 / monomial_norm(p, 0, 2)).epsilon(1e-12));
}

TEST_CASE("norm expansion is diagonal in monomials") {
  const BallParams p{0.2, 0.5, 0.9};
  BiPoly f;
  f.add_term(2, 1, {1.0, 2.0});
  f.add_term(0, 3, -0.5);
  f.add_term(1, 0, 3.0);
  const auto ne = ball::norm_expansion(p, f);
  const double exact = 5.0 * monomial_norm(p, 2, 1) + 0.25 * monomial_norm(p, 0, 3) +
                       9.0 * monomial_norm(p, 1, 0);
  CHECK(ne.total == doctest::Approx(exact).epsilon(1e-12));
  REQUIRE(ne.terms.size() == 4);
  CHECK(ne.terms[1].value == doctest::Approx(5.0 * monomial_norm(p, 2, 1)).epsilon(1e-12));
}

TEST_CASE("sphere norm expansion") {
  const double beta = 0.3, theta = 0.6;
  BiPoly f;
  f.add_term(1, 2, 2.0);
  f.add_term(3, 0, {0.0, 1.0});
  const double exact = 4.0 * oracle::sphere_monomial_norm2(beta, theta, 1, 2) +
                       oracle::sphere_monomial_norm2(beta, theta, 3, 0);
  CHECK(ball::hardy_norm_expansion(beta, theta, f).total ==
        doctest::Approx(exact).epsilon(1e-12));
  CHECK(oracle::sphere_monomial_norm2(0.0, 0.0, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("sphere norms are the limit of scaled ball norms") {
  const double beta = 0.4, theta = 0.7;
  // (α+1)(α+2)‖f‖² at α = -1 + ε, extrapolated linearly in ε.
  const auto scaled = [&](double eps, auto norm) {
    const double alpha = -1.0 + eps;
    return (alpha + 1.0) * (alpha + 2.0) * norm(BallParams{alpha, beta, theta});
  };
  const double eps = 1e-6;
  for (unsigned m = 0; m <= 3; ++m) {
    for (unsigned n = 0; n <= 3; ++n) {
      auto norm = [&](const BallParams& p) { return oracle::ball_monomial_norm2(p, m, n); };
      const double limit = 2.0 * scaled(eps, norm) - scaled(2.0 * eps, norm);
      CHECK(limit == doctest::Approx(oracle::sphere_monomial_norm2(beta, theta, m, n)).epsilon(1e-8));
    }
  }
  BiPoly f;
  f.add_term(2, 1, {1.0, -1.0});
  f.add_term(0, 2, 0.5);
  auto norm = [&](const BallParams& p) { return ball::norm_expansion(p, f).total; };
  CHECK(2.0 * scaled(eps, norm) - scaled(2.0 * eps, norm) ==
        doctest::Approx(ball::hardy_norm_expansion(beta, theta, f).total).epsilon(1e-8));
}

TEST_CASE("reference values: embedding constants") {
  CHECK(ball::embed_const({0.0, 0.0, 0.0}, 0) == doctest::Approx(0.5).epsilon(1e-15));
  const BallParams p{0.5, 1.0, 0.25};
  const double e3 = std::tgamma(1.5) * std::tgamma(4.25) / (6.75 * std::tgamma(5.75));
  CHECK(ball::embed_const(p, 3) == doctest::Approx(e3).epsilon(1e-14));
  for (unsigned N = 0; N < 6; ++N) {
    const double n = N;
    const double ratio = (p.theta + n + 1.0) * (p.alpha + p.beta + p.theta + n + 2.0) /
                         ((p.alpha + p.beta + p.theta + n + 3.0) * (p.alpha + p.theta + n + 2.0));
    CHECK(ball::embed_const(p, N + 1) / ball::embed_const(p, N) == doctest::Approx(ratio).epsilon(1e-13));
  }
}

TEST_CASE("reference values: norms and kernels") {
  const BallParams zero{0.0, 0.0, 0.0};
  CHECK(ball::norm_expansion(zero, BiPoly::constant(1.0)).total == doctest::Approx(0.5));
  const auto z2 = ball::norm_expansion(zero, BiPoly::z2());
  CHECK(z2.total == doctest::Approx(1.0 / 6.0));
  for (const auto& t : z2.terms) {
    if (t.N != 1) CHECK(t.value == 0.0);
  }
  CHECK(ball::norm_expansion(zero, BiPoly::z1() + BiPoly::z2()).total ==
        doctest::Approx(oracle::ball_monomial_norm2(zero, 1, 0) + oracle::ball_monomial_norm2(zero, 0, 1)));

  CHECK(std::abs(ball::q_kernel(zero, 0, {0.0, 0.0}, {0.0, 0.0}) - 2.0) < 1e-14);
  const BallParams p{0.5, 0.0, 0.0};
  const Point2 z{0.2, 0.3}, w{0.1, 0.4};
  const cplx q1 = z.z2 * std::conj(w.z2) /
                  (ball::embed_const(p, 1) * std::pow(1.0 - z.z1 * std::conj(w.z1), 4.5));
  CHECK(std::abs(ball::q_kernel(p, 1, z, w) - q1) < 1e-13 * std::abs(q1));

  const double a = 0.7;
  const Point2 u{{0.1, 0.3}, -0.2}, v{0.4, {0.0, 0.5}};
  const cplx inner = u.z1 * std::conj(v.z1) + u.z2 * std::conj(v.z2);
  const cplx collapse = (a + 1.0) * (a + 2.0) / std::pow(1.0 - inner, a + 3.0);
  CHECK(std::abs(ball::full_kernel({a, 0.0, 0.0}, u, v).value - collapse) < 1e-12 * std::abs(collapse));

  const BallParams q{0.5, 0.3, 1.2};
  const double k0 = std::tgamma(q.alpha + q.theta + 2.0) * (q.alpha + q.beta + q.theta + 2.0) /
                    (std::tgamma(q.alpha + 1.0) * std::tgamma(q.theta + 1.0));
  CHECK(ball::full_kernel(q, {0.0, 0.0}, {0.0, 0.0}).value.real() == doctest::Approx(k0).epsilon(1e-13));
}

TEST_CASE("reference values: sphere norms") {
  CHECK(ball::hardy_norm_expansion(0.0, 0.0, BiPoly::constant(1.0)).total == doctest::Approx(1.0));
  CHECK(ball::hardy_norm_expansion(0.0, 0.0, BiPoly::z2()).total == doctest::Approx(0.5));
  CHECK(ball::hardy_norm_expansion(0.0, 0.0, BiPoly::z1()).total == doctest::Approx(0.5));
}
