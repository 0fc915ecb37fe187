#include <kernelforge/report.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace kernelforge {

ReportItem ReportItem::plain(std::string name, cplx value, std::size_t terms, double tail) {
  ReportItem it;
  it.item = std::move(name);
  it.value = value;
  it.terms_used = terms;
  it.tail_bound = tail;
  return it;
}

ReportItem ReportItem::check(std::string name, cplx value, cplx oracle, double tolerance,
                             ErrorMeasure measure, double scale) {
  ReportItem it;
  it.item = std::move(name);
  it.value = value;
  it.oracle = oracle;
  it.tolerance = tolerance;
  it.measure = measure;
  it.abs_err = std::abs(value - oracle);
  const double denom = scale > 0.0 ? scale : std::max(std::abs(oracle), 1e-300);
  it.rel_err = it.abs_err / denom;
  const double err = measure == ErrorMeasure::relative ? it.rel_err : it.abs_err;
  it.pass = std::isfinite(err) && err <= tolerance;
  return it;
}

bool EvalReport::pass() const {
  return std::all_of(items.begin(), items.end(), [](const ReportItem& i) { return i.pass; });
}

namespace {

nlohmann::ordered_json complex_json(cplx c) { return {c.real(), c.imag()}; }

// 17 significant digits round-trip every double.
std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::ordered_json EvalReport::to_json(bool with_wall_time) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["params"] = params;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& it : items) {
    nlohmann::ordered_json e;
    e["item"] = it.item;
    e["value"] = complex_json(it.value);
    if (it.oracle) {
      e["oracle"] = complex_json(*it.oracle);
      e["abs_err"] = it.abs_err;
      e["rel_err"] = it.rel_err;
    }
    if (it.tolerance > 0.0) {
      e["tolerance"] = it.tolerance;
      e["measure"] = it.measure == ErrorMeasure::relative ? "relative" : "absolute";
    }
    e["terms_used"] = it.terms_used;
    e["tail_bound"] = it.tail_bound;
    e["pass"] = it.pass;
    arr.push_back(std::move(e));
  }
  j["items"] = std::move(arr);
  j["verdict"] = pass() ? "pass" : "fail";
  if (with_wall_time) j["wall_time"] = wall_time;
  return j;
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "item,value_re,value_im,oracle_re,oracle_im,abs_err,rel_err\n";
  for (const auto& it : items) {
    os << csv_field(it.item) << ',' << num(it.value.real()) << ',' << num(it.value.imag())
       << ',';
    if (it.oracle) {
      os << num(it.oracle->real()) << ',' << num(it.oracle->imag()) << ',' << num(it.abs_err)
         << ',' << num(it.rel_err);
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace kernelforge
