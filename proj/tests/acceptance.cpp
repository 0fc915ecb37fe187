#include <kernelforge/verify.hpp>

#include <cstdio>
#include <cstdlib>

using namespace kernelforge;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  int failed = 0;
  for (int id = 1; id <= verify::criterion_count(); ++id) {
    const verify::CriterionResult r = verify::run_criterion(id, seed);
    std::printf("criterion %2d %s  %-55s worst %.3g of tolerance, %.2fs of %.0fs%s%s\n", id,
                r.pass() ? "PASS" : "FAIL", r.name.c_str(), r.worst_ratio(), r.seconds,
                r.time_limit, r.error.empty() ? "" : "  error: ", r.error.c_str());
    if (!r.pass()) ++failed;
  }
  std::printf("%d of %d criteria passed\n", verify::criterion_count() - failed,
              verify::criterion_count());
  return failed == 0 ? 0 : 1;
}
