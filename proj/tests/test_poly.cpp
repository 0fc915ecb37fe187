#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <kernelforge/poly.hpp>
#include <kernelforge/poly_io.hpp>
#include <kernelforge/random.hpp>

#include <random>

using namespace kernelforge;

namespace {

BiPoly random_poly(std::mt19937_64& rng, unsigned degree) {
  BiPoly p;
  for (unsigned d = 0; d <= degree; ++d) {
    for (unsigned m = 0; m <= d; ++m) {
      if (uniform01(rng) < 0.6) {
        p.add_term(m, d - m, {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)});
      }
    }
  }
  return p;
}

}  // namespace

TEST_CASE("parse and print") {
  const BiPoly p = parse_bipoly("3 + z1^2 - 2.5*z1*z2 + (1,-2)*z2^3");
  CHECK(p.coefficient(0, 0) == cplx(3.0));
  CHECK(p.coefficient(2, 0) == cplx(1.0));
  CHECK(p.coefficient(1, 1) == cplx(-2.5));
  CHECK(p.coefficient(0, 3) == cplx(1.0, -2.0));
  CHECK(p.total_degree() == 3);
  CHECK(parse_bipoly(to_string(p)) == p);

  CHECK(parse_bipoly("2i*z1").coefficient(1, 0) == cplx(0.0, 2.0));
  CHECK(parse_bipoly("z1 - z1").is_zero());
  CHECK(parse_bipoly("z1 - z2") == BiPoly::diagonal_factor());

  CHECK_THROWS_AS(parse_bipoly("z3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_bipoly("2 +"), std::invalid_argument);
  CHECK_THROWS_AS(parse_bipoly("z1^"), std::invalid_argument);

  CHECK(parse_complex("1.5,-2") == cplx(1.5, -2.0));
  CHECK(parse_complex("4") == cplx(4.0));
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const BiPoly p = random_poly(rng, 5);
    CHECK(bipoly_from_json(to_json(p)) == p);
  }
  CHECK_THROWS(bipoly_from_json(nlohmann::json::parse("[[1, 2, 3]]")));
}

TEST_CASE("arithmetic") {
  const BiPoly d = BiPoly::diagonal_factor();
  const BiPoly sq = power(d, 2);
  CHECK(sq == parse_bipoly("z1^2 - 2*z1*z2 + z2^2"));
  CHECK(restrict_diagonal(sq).is_zero());
  CHECK(differentiate(parse_bipoly("z1^3*z2^2"), Variable::z1, 2) ==
        parse_bipoly("6*z1*z2^2"));
  CHECK(differentiate(parse_bipoly("z1^3*z2^2"), Variable::z2, 3).is_zero());
  CHECK(restrict_z2_zero(parse_bipoly("1 + z1^2 + z1*z2")) == UniPoly({{0, 1.0}, {2, 1.0}}));
  CHECK(evaluate(parse_bipoly("z1*z2 + 1"), {{0.0, 1.0}, {0.0, 1.0}}) == cplx(0.0));
  CHECK(scale(0.0, sq).is_zero());
}

TEST_CASE("division by powers of the diagonal factor") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const BiPoly q = random_poly(rng, 4);
    const unsigned N = static_cast<unsigned>(i % 4);
    const BiPoly p = multiply(power(BiPoly::diagonal_factor(), N), q);
    const BiPoly back = divide_diag_power(p, N);
    const BiPoly diff = back - q;
    double worst = 0.0;
    for (const auto& [k, c] : diff.coefficients()) worst = std::max(worst, std::abs(c));
    CHECK(worst < 1e-12);
  }
  try {
    divide_diag_power(parse_bipoly("z1^2 + z2"), 1);
    FAIL("expected divisibility_error");
  } catch (const divisibility_error& e) {
    CHECK_FALSE(e.remainder().is_zero());
  }
}

TEST_CASE("restriction and evaluation agree") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 30; ++i) {
    const BiPoly p = random_poly(rng, 6);
    const cplx z = uniform_disk(rng, 1.0);
    CHECK(std::abs(restrict_diagonal(p).evaluate(z) - evaluate(p, {z, z})) < 1e-12);
  }
}
