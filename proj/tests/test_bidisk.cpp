#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>

#include <kernelforge/bidisk.hpp>
#include <kernelforge/oracle.hpp>
#include <kernelforge/poly_io.hpp>
#include <kernelforge/random.hpp>
#include <kernelforge/specfun.hpp>

#include <random>

using namespace kernelforge;
using bidisk::BidiskParams;

namespace {

Point2 random_point(std::mt19937_64& rng, double radius) {
  return {uniform_disk(rng, radius), uniform_disk(rng, radius)};
}

BiPoly random_poly(std::mt19937_64& rng, unsigned degree) {
  BiPoly p;
  for (unsigned d = 0; d <= degree; ++d) {
    for (unsigned m = 0; m <= d; ++m) {
      p.add_term(m, d - m, {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)});
    }
  }
  return p;
}

}  // namespace

TEST_CASE("inverse sigma against frozen values") {
  struct Case {
    BidiskParams p;
    double inv;
  };
  const Case cases[] = {
      {{0.5, 0.3, 1.0, 0.7}, 1.170448139161187703},
      {{-0.5, -0.7, 0.4, 1.3}, 2.570726947890794787},
      {{1.2, 0.1, -0.3, -0.6}, 1.632437879785615789},
      {{2.0, -0.5, 0.5, 0.25}, 0.9389615249896708971},
  };
  for (const auto& c : cases) {
    CHECK(bidisk::inverse_sigma(c.p).value.real() == doctest::Approx(c.inv).epsilon(1e-11));
    CHECK(bidisk::inverse_sigma_direct(c.p).value.real() ==
          doctest::Approx(c.inv).epsilon(1e-10));
  }
}

TEST_CASE("sigma agrees with the Gamma form when vartheta = 0") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const BidiskParams p{uniform(rng, -0.95, 4.0), uniform(rng, -0.95, 4.0),
                         uniform(rng, -0.95, 5.0), 0.0};
    const double g = bidisk::inverse_sigma_gamma_form(p);
    CHECK(bidisk::inverse_sigma(p).value.real() == doctest::Approx(g).epsilon(1e-12));
    CHECK(bidisk::inverse_sigma_direct(p).value.real() == doctest::Approx(g).epsilon(1e-10));
  }
}

TEST_CASE("parameter and point validation") {
  CHECK_THROWS_AS(BidiskParams({-1.0, 0.0, 0.0, 0.0}).validate(), domain_error);
  CHECK_THROWS_AS(BidiskParams({0.0, 0.0, -1.2, 0.0}).validate(), domain_error);
  CHECK_NOTHROW(BidiskParams({0.5, 0.5, 0.5, 0.5}).validate());
  CHECK_THROWS_AS(bidisk::check_point({1.0, 0.0}), domain_error);
  CHECK_THROWS_AS(bidisk::full_kernel({}, {0.0, 0.0}, {0.0, {0.0, 1.0}}), domain_error);
  CHECK_THROWS_AS(bidisk::hardy_norm_expansion(-0.5, BiPoly::z1()), domain_error);
}

TEST_CASE("product kernel at theta = vartheta = 0") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const BidiskParams p{uniform(rng, -0.9, 3.0), uniform(rng, -0.9, 3.0), 0.0, 0.0};
    const Point2 z = random_point(rng, 0.8), w = random_point(rng, 0.8);
    const cplx closed = std::pow(1.0 - std::conj(w.z1) * z.z1, -p.alpha - 2.0) *
                        std::pow(1.0 - std::conj(w.z2) * z.z2, -p.beta - 2.0);
    const auto k = bidisk::full_kernel(p, z, w);
    CHECK(std::abs(k.value - closed) <= 1e-10 * std::abs(closed));
  }
}

TEST_CASE("kernel structure") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const BidiskParams p{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0),
                         uniform(rng, -0.5, 2.0), uniform(rng, -0.5, 2.0)};
    const Point2 z = random_point(rng, 0.6), w = random_point(rng, 0.6);
    const cplx k = bidisk::full_kernel(p, z, w).value;
    const cplx kt = bidisk::full_kernel(p, w, z).value;
    CHECK(std::abs(k - std::conj(kt)) <= 1e-10 * std::abs(k));
    CHECK(bidisk::full_kernel(p, z, z).value.real() > 0.0);

    cplx sum = 0.0;
    for (unsigned N = 0; N < 60; ++N) sum += bidisk::q_kernel(p, N, z, w).value;
    CHECK(std::abs(sum - k) <= 1e-9 * std::max(1.0, std::abs(k)));

    const cplx w1 = uniform_disk(rng, 0.6);
    const cplx diag = bidisk::diag_kernel(p, z, w1);
    CHECK(std::abs(diag - bidisk::full_kernel(p, z, {w1, w1}).value) <= 1e-10 * std::abs(diag));
  }
  const BidiskParams p{0.3, 0.4, 0.5, 0.6};
  CHECK(bidisk::full_kernel(p, {0.0, 0.0}, {0.0, 0.0}).value.real() ==
        doctest::Approx(bidisk::sigma(p)).epsilon(1e-13));
}

TEST_CASE("Taylor blocks invert the exact Gram blocks") {
  for (double theta : {0.0, 1.0, 2.0}) {
    const BidiskParams p{0.4, -0.3, theta, 0.0};
    const auto gram = oracle::gram_bidisk_exact(p, 8);
    const auto blocks = bidisk::taylor_blocks(p, 8);
    for (unsigned d = 0; d <= 8; ++d) {
      const Eigen::MatrixXd prod = blocks[d] * gram.blocks[d];
      const double err = (prod - Eigen::MatrixXd::Identity(d + 1, d + 1)).cwiseAbs().maxCoeff();
      CHECK(err < 1e-9);
    }
  }
}

TEST_CASE("norm expansion sums to the Gram norm") {
  std::mt19937_64 rng(9);
  for (double theta : {0.0, 1.0, 2.0}) {
    const BidiskParams p{uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0), theta, 0.0};
    const auto gram = oracle::gram_bidisk_exact(p, 6);
    for (int i = 0; i < 5; ++i) {
      const BiPoly f = random_poly(rng, 6);
      const auto ne = bidisk::norm_expansion(p, f);
      const double exact = oracle::gram_norm2(gram, f);
      CHECK(ne.total == doctest::Approx(exact).epsilon(1e-10));
      for (const auto& t : ne.terms) {
        const double q = oracle::gram_norm2(gram, oracle::project(gram, f, t.N).q);
        CHECK(std::abs(t.value - q) <= 1e-9 * exact);
      }
    }
  }
}

TEST_CASE("a polynomial vanishing to order N has no lower terms") {
  const BidiskParams p{0.2, 0.7, 0.5, 0.3};
  const BiPoly f = multiply(power(BiPoly::diagonal_factor(), 3), parse_bipoly("1 + z1 - 2*z2^2"));
  const auto ne = bidisk::norm_expansion(p, f);
  for (const auto& t : ne.terms) {
    if (t.N < 3) CHECK(std::abs(t.value) <= 1e-13 * ne.total);
  }
}

TEST_CASE("torus norm expansion matches Parseval") {
  std::mt19937_64 rng(10);
  for (unsigned theta : {0u, 1u, 2u}) {
    for (int i = 0; i < 5; ++i) {
      const BiPoly f = random_poly(rng, 5);
      CHECK(bidisk::hardy_norm_expansion(theta, f).total ==
            doctest::Approx(oracle::torus_norm2(theta, f)).epsilon(1e-10));
    }
  }
  CHECK(bidisk::hardy_norm_expansion(0.0, BiPoly::diagonal_factor()).total ==
        doctest::Approx(2.0));
}

TEST_CASE("coefficient identities") {
  const BidiskParams p{0.3, 0.9, 1.4, 0.2};
  CHECK(bidisk::coeff_a(p, 3, 3) == doctest::Approx(1.0 / 6.0));
  CHECK(bidisk::coeff_b(0.5, 2, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(bidisk::coeff_a(p, 4, 3), std::out_of_range);
  CHECK_THROWS_AS(bidisk::coeff_b(0.5, 4, 3), std::out_of_range);
}

namespace {

// Kernel of the polynomials divisible by (z1 - z2)^N, truncated at degree D,
// from the Gram blocks restricted to that subspace.
cplx divisible_kernel(const oracle::GramBlocks& g, unsigned N, const Point2& z,
                      const Point2& w) {
  cplx total = 0.0;
  for (unsigned d = N; d <= g.max_degree(); ++d) {
    Eigen::MatrixXcd B(d + 1, d - N + 1);
    for (unsigned j = 0; j + N <= d; ++j) {
      const BiPoly e = multiply(power(BiPoly::diagonal_factor(), N), BiPoly::monomial(j, d - N - j));
      B.col(j) = oracle::block_vector(e, d);
    }
    const Eigen::MatrixXcd G = g.blocks[d].cast<cplx>();
    const Eigen::MatrixXcd K = B * (B.adjoint() * G * B).ldlt().solve(B.adjoint());
    Eigen::VectorXcd ez(d + 1), ew(d + 1);
    for (unsigned i = 0; i <= d; ++i) {
      ez(i) = std::pow(z.z1, static_cast<int>(i)) * std::pow(z.z2, static_cast<int>(d - i));
      ew(i) = std::conj(std::pow(w.z1, static_cast<int>(i)) * std::pow(w.z2, static_cast<int>(d - i)));
    }
    total += (ez.transpose() * K * ew).value();
  }
  return total;
}

cplx oracle_kernel(const BidiskParams& p, unsigned degree, const Point2& z, const Point2& w) {
  return oracle::kernel_from_blocks(
      oracle::gram_kernel_blocks(oracle::gram_bidisk_exact(p, degree)), z, w);
}

}  // namespace

TEST_CASE("reference values: sigma") {
  CHECK(bidisk::inverse_sigma({0.0, 0.0, 0.0, 0.0}).value.real() == doctest::Approx(1.0));
  CHECK(bidisk::inverse_sigma({0.0, 0.0, 1.0, 0.0}).value.real() == doctest::Approx(1.0));
  const BidiskParams p{0.5, 0.25, 1.5, 0.0};
  const double a = p.alpha, b = p.beta, t = p.theta;
  const double inv = std::exp(
      std::lgamma(a + 2) + std::lgamma(b + 2) + std::lgamma(t + 1) + std::lgamma(a + b + 2 * t + 3) -
      std::lgamma(a + t + 2) - std::lgamma(b + t + 2) - std::lgamma(a + b + t + 3));
  CHECK(bidisk::sigma(p) == doctest::Approx(1.0 / inv).epsilon(1e-12));
  CHECK(inv == doctest::Approx(0.9706419609860998623).epsilon(1e-13));
  CHECK(bidisk::inverse_sigma({0.5, 0.25, 0.5, 0.0}).value.real() ==
        doctest::Approx(0.8307095959011472506).epsilon(1e-12));
}

TEST_CASE("reference values: diagonal and order-N kernels") {
  const BidiskParams prod{0.7, 1.3, 0.0, 0.0};
  const Point2 z{{0.2, 0.1}, -0.4};
  const cplx w1{0.0, 0.3};
  const cplx expect = std::pow(1.0 - std::conj(w1) * z.z1, -prod.alpha - 2.0) *
                      std::pow(1.0 - std::conj(w1) * z.z2, -prod.beta - 2.0);
  CHECK(std::abs(bidisk::diag_kernel(prod, z, w1) - expect) < 1e-13 * std::abs(expect));

  const BidiskParams p{0.3, 0.4, 0.5, 0.6};
  CHECK(bidisk::diag_kernel(p, {0.0, 0.0}, w1).real() == doctest::Approx(bidisk::sigma(p)));
  CHECK(std::abs(bidisk::q_kernel(p, 0, z, {w1, w1}).value - bidisk::diag_kernel(p, z, w1)) <
        1e-12);
  CHECK(std::abs(bidisk::q_kernel({}, 0, {0.0, 0.0}, {0.0, 0.0}).value - 1.0) < 1e-14);

  const BidiskParams hp{0.0, 0.0, 1.0, 0.0};
  const cplx dk = bidisk::diag_kernel(hp, {0.3, 0.2}, 0.5);
  CHECK(std::abs(dk - oracle_kernel(hp, 24, {0.3, 0.2}, {0.5, 0.5})) < 1e-12 * std::abs(dk));

  const BidiskParams zero{};
  const auto g = oracle::gram_bidisk_exact(zero, 24);
  const Point2 a{0.2, 0.1}, b{0.4, -0.1};
  const cplx m1 = divisible_kernel(g, 1, a, b) - divisible_kernel(g, 2, a, b);
  const cplx q1 = bidisk::q_kernel(zero, 1, a, b).value;
  CHECK(std::abs(q1 - m1) < 1e-12 * std::abs(q1));
}

TEST_CASE("reference values: full kernel and Taylor blocks") {
  const BidiskParams prod{1.0, 0.5, 0.0, 0.0};
  const Point2 z{{0.0, 0.3}, 0.2}, w{0.1, 0.4};
  const cplx expect = std::pow(1.0 - std::conj(w.z1) * z.z1, -3.0) *
                      std::pow(1.0 - std::conj(w.z2) * z.z2, -2.5);
  CHECK(std::abs(bidisk::full_kernel(prod, z, w).value - expect) < 1e-12 * std::abs(expect));

  const BidiskParams p{0.3, 0.4, 0.5, 0.6};
  CHECK(std::abs(bidisk::full_kernel(p, z, {0.4, 0.4}).value -
                 bidisk::diag_kernel(p, z, 0.4)) < 1e-12);

  const BidiskParams hp{0.0, 0.0, 1.0, 0.0};
  const Point2 z2{0.25, -0.1}, w2{0.3, {0.0, 0.15}};
  const cplx k = bidisk::full_kernel(hp, z2, w2).value;
  CHECK(std::abs(k - oracle_kernel(hp, 14, z2, w2)) <= 1e-6 * std::abs(k));

  const auto tb = bidisk::taylor_blocks(p, 0);
  CHECK(tb[0](0, 0) == doctest::Approx(bidisk::sigma(p)).epsilon(1e-13));
  const auto diag = bidisk::taylor_blocks(prod, 5);
  for (unsigned d = 0; d <= 5; ++d) {
    for (unsigned m = 0; m <= d; ++m) {
      const double e = specfun::pochhammer(3.0, m) / specfun::factorial(m) *
                       specfun::pochhammer(2.5, d - m) / specfun::factorial(d - m);
      CHECK(diag[d](m, m) == doctest::Approx(e).epsilon(1e-12));
      for (unsigned j = 0; j <= d; ++j) {
        if (j != m) CHECK(std::abs(diag[d](m, j)) < 1e-12 * e);
      }
    }
  }
}

TEST_CASE("reference values: coefficients and restriction transforms") {
  const BidiskParams p{0.3, 0.9, 1.4, 0.2};
  for (unsigned N = 0; N <= 6; ++N) {
    CHECK(bidisk::coeff_a(p, N, N) == doctest::Approx(1.0 / specfun::factorial(N)));
  }
  CHECK(bidisk::coeff_a(p, 0, 1) == doctest::Approx(-p.a() / (p.s() + 2.0)));

  CHECK(bidisk::restriction_transform(p, BiPoly::constant(1.0), 0) == UniPoly::constant(1.0));
  const UniPoly one = bidisk::restriction_transform(p, BiPoly::diagonal_factor(), 1);
  CHECK(std::abs(one.coefficient(0) - 1.0) < 1e-14);
  CHECK(one.degree() == 0);

  const BidiskParams hp{0.0, 0.0, 1.0, 0.0};
  const auto g = oracle::gram_bidisk_exact(hp, 1);
  const BiPoly p1 = oracle::project(g, BiPoly::z1(), 1).p;
  const UniPoly expect = restrict_diagonal(divide_diag_power(p1, 1));
  const UniPoly got = bidisk::restriction_transform(hp, BiPoly::z1(), 1);
  CHECK(std::abs(got.coefficient(0) - expect.coefficient(0)) < 1e-13);
  CHECK(got.degree() == 0);
}

TEST_CASE("reference values: norm expansions") {
  const BidiskParams p{0.3, 0.4, 0.5, 0.6};
  const auto one = bidisk::norm_expansion(p, BiPoly::constant(1.0));
  REQUIRE(one.terms.size() == 1);
  CHECK(one.terms[0].value == doctest::Approx(bidisk::inverse_sigma(p).value.real()));
  CHECK(one.total == doctest::Approx(one.terms[0].value));

  const BidiskParams ip{0.5, 0.2, 1.0, 0.0};
  const auto g = oracle::gram_bidisk_exact(ip, 1);
  const auto diff = bidisk::norm_expansion(ip, BiPoly::diagonal_factor());
  for (const auto& t : diff.terms) {
    if (t.N != 1) CHECK(std::abs(t.value) < 1e-14);
  }
  CHECK(diff.total == doctest::Approx(oracle::gram_norm2(g, BiPoly::diagonal_factor())));

  const BidiskParams hp{0.0, 0.0, 1.0, 0.0};
  CHECK(bidisk::norm_expansion(hp, BiPoly::z1()).total ==
        doctest::Approx(oracle::gram_norm2(oracle::gram_bidisk_exact(hp, 1), BiPoly::z1())));

  CHECK(bidisk::hardy_norm_expansion(0.0, BiPoly::constant(1.0)).total == doctest::Approx(1.0));
  CHECK(bidisk::hardy_norm_expansion(1.0, BiPoly::monomial(1, 1)).total == doctest::Approx(2.0));
}
