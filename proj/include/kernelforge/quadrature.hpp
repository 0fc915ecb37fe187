#pragma once

#include <vector>

namespace kernelforge::quad {

/// One node of a double-exponential rule. The distances to the interval ends
/// are carried separately because 1 - x loses all precision for nodes that
/// crowd an endpoint, and weights such as (1 - t)^α need them exactly.
struct Node {
  double x = 0.0;
  double to_lo = 0.0;
  double to_hi = 0.0;
  double weight = 0.0;
};

/// tanh-sinh rule on [a, b] with step 2^-level.
std::vector<Node> tanh_sinh(double a, double b, int level);

/// exp-sinh rule on [a, ∞) with step 2^-level; to_hi is +inf.
std::vector<Node> exp_sinh(double a, int level);

}  // namespace kernelforge::quad
