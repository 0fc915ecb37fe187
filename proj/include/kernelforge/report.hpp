#pragma once

#include <kernelforge/series.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kernelforge {

enum class ErrorMeasure { absolute, relative };

struct ReportItem {
  std::string item;
  cplx value{0.0};
  std::optional<cplx> oracle;
  double abs_err = 0.0;
  /// abs_err / max(|oracle|, tiny); 0 without an oracle.
  double rel_err = 0.0;
  /// Verdict threshold applied to the chosen measure; 0 means no verdict.
  double tolerance = 0.0;
  ErrorMeasure measure = ErrorMeasure::relative;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
  bool pass = true;

  /// A value with no oracle and no verdict.
  static ReportItem plain(std::string name, cplx value, std::size_t terms = 0,
                          double tail = 0.0);
  /// A value checked against an oracle. With `scale` > 0 the relative error
  /// is abs_err / scale instead of abs_err / |oracle|.
  static ReportItem check(std::string name, cplx value, cplx oracle, double tolerance,
                          ErrorMeasure measure = ErrorMeasure::relative, double scale = 0.0);
};

struct EvalReport {
  std::string command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<ReportItem> items;
  double wall_time = 0.0;

  bool pass() const;
  nlohmann::ordered_json to_json(bool with_wall_time = true) const;
  /// Columns item,value_re,value_im,oracle_re,oracle_im,abs_err,rel_err.
  std::string to_csv() const;
};

}  // namespace kernelforge
