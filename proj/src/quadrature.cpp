#include <kernelforge/quadrature.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace kernelforge::quad {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTiny = 1e-300;
}  // namespace

std::vector<Node> tanh_sinh(double a, double b, int level) {
  const double h = std::ldexp(1.0, -level);
  const double len = b - a;
  std::vector<Node> nodes;
  auto push = [&](double t) {
    const double u = kHalfPi * std::sinh(t);
    const double lo = len / (1.0 + std::exp(-2.0 * u));
    const double hi = len / (1.0 + std::exp(2.0 * u));
    const double ch = std::cosh(u);
    const double w = 0.5 * len * h * kHalfPi * std::cosh(t) / (ch * ch);
    if (lo < kTiny * len || hi < kTiny * len || !(w > 0.0)) return false;
    nodes.push_back({a + lo, lo, hi, w});
    return true;
  };
  push(0.0);
  for (int k = 1;; ++k) {
    const bool right = push(k * h);
    const bool left = push(-k * h);
    if (!right && !left) break;
  }
  return nodes;
}

std::vector<Node> exp_sinh(double a, int level) {
  const double h = std::ldexp(1.0, -level);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<Node> nodes;
  auto push = [&](double t) {
    const double u = kHalfPi * std::sinh(t);
    if (u > 7.0) return false;  // e^u beyond ~1100: far past any decaying weight
    const double d = std::exp(u);
    const double w = h * kHalfPi * std::cosh(t) * d;
    if (d < kTiny || !(w > 0.0)) return false;
    nodes.push_back({a + d, d, inf, w});
    return true;
  };
  push(0.0);
  for (int k = 1;; ++k) {
    const bool right = push(k * h);
    const bool left = push(-k * h);
    if (!right && !left) break;
  }
  return nodes;
}

}  // namespace kernelforge::quad
