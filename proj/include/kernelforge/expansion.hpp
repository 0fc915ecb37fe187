#pragma once

#include <vector>

namespace kernelforge {

struct NormTerm {
  unsigned N = 0;
  /// Squared norm of the vanishing-order-N component.
  double value = 0.0;
};

/// ‖f‖² split by vanishing order along the distinguished variety.
struct NormExpansion {
  std::vector<NormTerm> terms;
  double total = 0.0;
};

}  // namespace kernelforge
