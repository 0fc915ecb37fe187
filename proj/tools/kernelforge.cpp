#include <kernelforge/ball.hpp>
#include <kernelforge/bidisk.hpp>
#include <kernelforge/fock.hpp>
#include <kernelforge/oracle.hpp>
#include <kernelforge/poly_io.hpp>
#include <kernelforge/report.hpp>
#include <kernelforge/specfun.hpp>
#include <kernelforge/verify.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace kernelforge;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitConditioning = 4;
constexpr int kExitUsage = 64;

struct Options {
  std::string space;
  std::optional<double> alpha, beta, theta, vartheta;
  std::string format = "json";
  bool no_wall_time = false;
  double tolerance = 1e-12;

  std::vector<std::string> pairs;
  std::string points_file;
  bool oracle = false;
  unsigned oracle_degree = 0;
  std::string gram_cache;

  std::string poly;
  std::string poly_file;

  std::string suite;
  std::uint64_t seed = 7;
};

class usage_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

TruncationConfig make_cfg(const Options& o) {
  TruncationConfig cfg = TruncationConfig::from_env();
  cfg.tolerance = o.tolerance;
  return cfg;
}

bidisk::BidiskParams bidisk_params(const Options& o) {
  bidisk::BidiskParams p{o.alpha.value_or(0.0), o.beta.value_or(0.0), o.theta.value_or(0.0),
                         o.vartheta.value_or(0.0)};
  p.validate();
  return p;
}

ball::BallParams ball_params(const Options& o) {
  if (o.vartheta) throw usage_error("--vartheta does not apply to the ball");
  ball::BallParams p{o.alpha.value_or(0.0), o.beta.value_or(0.0), o.theta.value_or(0.0)};
  p.validate();
  return p;
}

fock::FockParams fock_params(const Options& o) {
  if (o.vartheta) throw usage_error("--vartheta does not apply to the Fock space");
  fock::FockParams p{o.alpha.value_or(1.0), o.beta.value_or(1.0), o.theta.value_or(0.0)};
  p.validate();
  return p;
}

void echo_params(EvalReport& rep, const Options& o) {
  rep.params["space"] = o.space;
  if (o.space == "bidisk") {
    const auto p = bidisk_params(o);
    rep.params["alpha"] = p.alpha;
    rep.params["beta"] = p.beta;
    rep.params["theta"] = p.theta;
    rep.params["vartheta"] = p.vartheta;
  } else if (o.space == "ball") {
    const auto p = ball_params(o);
    rep.params["alpha"] = p.alpha;
    rep.params["beta"] = p.beta;
    rep.params["theta"] = p.theta;
  } else if (o.space == "fock") {
    const auto p = fock_params(o);
    rep.params["alpha"] = p.alpha;
    rep.params["beta"] = p.beta;
    rep.params["theta"] = p.theta;
  } else if (o.space == "torus") {
    rep.params["theta"] = o.theta.value_or(0.0);
  } else if (o.space == "sphere") {
    rep.params["beta"] = o.beta.value_or(0.0);
    rep.params["theta"] = o.theta.value_or(0.0);
  }
  rep.params["tolerance"] = o.tolerance;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    try {
      v.push_back(std::stod(tok, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used == 0 || used != tok.size()) throw usage_error("bad number '" + tok + "' in pair");
  }
  return v;
}

std::pair<Point2, Point2> parse_zw(const std::string& text) {
  const auto v = parse_numbers(text);
  if (v.size() == 4) return {{{v[0], 0.0}, {v[1], 0.0}}, {{v[2], 0.0}, {v[3], 0.0}}};
  if (v.size() == 8) return {{{v[0], v[1]}, {v[2], v[3]}}, {{v[4], v[5]}, {v[6], v[7]}}};
  throw usage_error("a pair needs 4 real or 8 real/imaginary numbers: '" + text + "'");
}

std::vector<std::pair<Point2, Point2>> collect_pairs(const Options& o) {
  std::vector<std::pair<Point2, Point2>> out;
  for (const auto& p : o.pairs) out.push_back(parse_zw(p));
  if (!o.points_file.empty()) {
    std::ifstream in(o.points_file);
    if (!in) throw usage_error("cannot read points file " + o.points_file);
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      out.push_back(parse_zw(line.substr(first, line.find_last_not_of(" \t\r") - first + 1)));
    }
  }
  if (out.empty()) throw usage_error("no point pairs given (use --pair or --points)");
  return out;
}

BiPoly collect_poly(const Options& o) {
  if (!o.poly.empty() && !o.poly_file.empty()) {
    throw usage_error("give either --poly or --poly-file, not both");
  }
  if (!o.poly_file.empty()) {
    std::ifstream in(o.poly_file);
    if (!in) throw usage_error("cannot read polynomial file " + o.poly_file);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
      return bipoly_from_json(nlohmann::json::parse(text));
    }
    return parse_bipoly(text);
  }
  if (o.poly.empty()) throw usage_error("no polynomial given (use --poly or --poly-file)");
  return parse_bipoly(o.poly);
}

// ---- Gram oracle with optional cache -----------------------------------------

std::map<std::string, double> oracle_params(const Options& o) {
  if (o.space == "bidisk") {
    const auto p = bidisk_params(o);
    return {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta}, {"vartheta", p.vartheta}};
  }
  if (o.space == "fock") {
    const auto p = fock_params(o);
    return {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta}};
  }
  const auto p = ball_params(o);
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"theta", p.theta}};
}

bool integral(double x) { return x >= 0.0 && std::floor(x) == x; }

bool oracle_is_numeric(const Options& o) {
  if (o.space == "bidisk") {
    const auto p = bidisk_params(o);
    return !(p.vartheta == 0.0 && integral(p.theta));
  }
  return o.space == "fock" && !integral(fock_params(o).theta);
}

oracle::GramBlocks build_gram(const Options& o, unsigned degree) {
  if (o.space == "bidisk") {
    const auto p = bidisk_params(o);
    if (p.vartheta == 0.0 && integral(p.theta)) return oracle::gram_bidisk_exact(p, degree);
    return oracle::gram_numeric_bidisk(p, degree);
  }
  if (o.space == "fock") {
    const auto p = fock_params(o);
    if (integral(p.theta)) return oracle::gram_fock_exact(p, degree);
    return oracle::gram_numeric_fock(p, degree);
  }
  return oracle::ball_monomial_norms(ball_params(o), degree);
}

// Gram blocks up to `degree`, read from --gram-cache when it holds enough
// degrees for the same space and parameters, and written back otherwise.
oracle::GramBlocks gram_cached(const Options& o, unsigned degree) {
  if (!o.gram_cache.empty() && std::filesystem::exists(o.gram_cache)) {
    std::ifstream in(o.gram_cache);
    auto cached = oracle::GramBlocks::from_json(nlohmann::json::parse(in));
    if (cached.space == o.space && cached.params == oracle_params(o) &&
        cached.max_degree() >= degree) {
      cached.blocks.resize(degree + 1);
      return cached;
    }
  }
  oracle::GramBlocks g = build_gram(o, degree);
  if (!o.gram_cache.empty()) std::ofstream(o.gram_cache) << g.to_json().dump() << '\n';
  return g;
}

// ---- commands -----------------------------------------------------------------

SeriesResult kernel_value(const Options& o, const Point2& z, const Point2& w,
                          const TruncationConfig& cfg) {
  if (o.space == "bidisk") return bidisk::full_kernel(bidisk_params(o), z, w, cfg);
  if (o.space == "ball") return ball::full_kernel(ball_params(o), z, w, cfg);
  return fock::full_kernel(fock_params(o), z, w, cfg);
}

std::string pair_label(std::size_t i) { return "K(z,w) #" + std::to_string(i); }

EvalReport cmd_kernel(const Options& o) {
  if (o.space != "bidisk" && o.space != "ball" && o.space != "fock") {
    throw usage_error("kernel: --space must be bidisk, ball or fock");
  }
  const TruncationConfig cfg = make_cfg(o);
  EvalReport rep;
  rep.command = "kernel";
  echo_params(rep, o);
  const auto pairs = collect_pairs(o);
  std::vector<SeriesResult> values;
  for (const auto& [z, w] : pairs) values.push_back(kernel_value(o, z, w, cfg));

  if (!o.oracle) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      rep.items.push_back(ReportItem::plain(pair_label(i), values[i].value, values[i].terms_used,
                                            values[i].tail_bound));
    }
    return rep;
  }

  // Truncated Taylor sums of the Gram kernel. Without --oracle-degree the
  // degree grows until the top two degrees contribute below 1e-12 relative.
  // Quadrature-based blocks are costly, so they stop at degree 8.
  const bool numeric = oracle_is_numeric(o);
  const unsigned step = numeric ? 2 : 8;
  const unsigned cap = numeric ? 8 : 96;
  unsigned degree = o.oracle_degree > 0 ? o.oracle_degree : (numeric ? 4 : 8);
  std::vector<cplx> ov;
  bool settled = false;
  for (;;) {
    auto blocks = oracle::gram_kernel_blocks(gram_cached(o, degree));
    ov.clear();
    for (const auto& [z, w] : pairs) ov.push_back(oracle::kernel_from_blocks(blocks, z, w));
    blocks.resize(degree - 1);
    settled = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const cplx lower = oracle::kernel_from_blocks(blocks, pairs[i].first, pairs[i].second);
      if (std::abs(ov[i] - lower) > 1e-12 * std::max(1.0, std::abs(ov[i]))) settled = false;
    }
    if (o.oracle_degree > 0 || settled || degree + step > cap) break;
    degree += step;
  }
  rep.params["oracle_settled"] = settled;
  rep.params["oracle_degree"] = degree;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto it = ReportItem::check(pair_label(i), values[i].value, ov[i], 1e-6);
    it.terms_used = values[i].terms_used;
    it.tail_bound = values[i].tail_bound;
    rep.items.push_back(std::move(it));
  }
  return rep;
}

EvalReport cmd_norm_expand(const Options& o) {
  const TruncationConfig cfg = make_cfg(o);
  EvalReport rep;
  rep.command = "norm-expand";
  echo_params(rep, o);
  const BiPoly f = collect_poly(o);
  rep.params["poly"] = to_string(f);

  NormExpansion ne;
  std::vector<std::optional<double>> term_oracle;
  std::optional<double> total_oracle;
  const unsigned deg = static_cast<unsigned>(std::max(f.total_degree(), 0));

  if (o.space == "bidisk" || o.space == "fock") {
    ne = o.space == "bidisk" ? bidisk::norm_expansion(bidisk_params(o), f, cfg)
                             : fock::norm_expansion(fock_params(o), f);
    if (o.oracle) {
      const auto g = gram_cached(o, deg);
      total_oracle = oracle::gram_norm2(g, f);
      for (const auto& t : ne.terms) {
        term_oracle.push_back(oracle::gram_norm2(g, oracle::project(g, f, t.N).q));
      }
    }
  } else if (o.space == "ball") {
    const auto p = ball_params(o);
    ne = ball::norm_expansion(p, f);
    if (o.oracle) {
      const auto g = gram_cached(o, deg);
      total_oracle = oracle::gram_norm2(g, f);
      for (const auto& t : ne.terms) {
        double s = 0.0;
        for (const auto& [k, c] : f.coefficients()) {
          if (k.second == t.N) s += std::norm(c) * g.blocks[k.first + k.second](k.first, k.first);
        }
        term_oracle.push_back(s);
      }
    }
  } else if (o.space == "torus") {
    const double th = o.theta.value_or(0.0);
    ne = bidisk::hardy_norm_expansion(th, f);
    if (o.oracle) {
      if (th < 0.0 || std::floor(th) != th) {
        throw domain_error("torus oracle needs a nonnegative integer theta");
      }
      total_oracle = oracle::torus_norm2(static_cast<unsigned>(th), f);
    }
  } else if (o.space == "sphere") {
    const double be = o.beta.value_or(0.0), th = o.theta.value_or(0.0);
    ne = ball::hardy_norm_expansion(be, th, f);
    if (o.oracle) {
      double s = 0.0;
      for (const auto& [k, c] : f.coefficients()) {
        s += std::norm(c) * oracle::sphere_monomial_norm2(be, th, k.first, k.second);
      }
      total_oracle = s;
    }
  } else {
    throw usage_error("norm-expand: --space must be bidisk, ball, fock, torus or sphere");
  }

  const double scale = std::max(std::abs(total_oracle.value_or(ne.total)), 1e-300);
  for (std::size_t i = 0; i < ne.terms.size(); ++i) {
    const std::string name = "term N=" + std::to_string(ne.terms[i].N);
    if (i < term_oracle.size() && term_oracle[i]) {
      rep.items.push_back(ReportItem::check(name, ne.terms[i].value, *term_oracle[i], 1e-9,
                                            ErrorMeasure::relative, scale));
    } else {
      rep.items.push_back(ReportItem::plain(name, ne.terms[i].value));
    }
  }
  if (total_oracle) {
    rep.items.push_back(ReportItem::check("total", ne.total, *total_oracle, 1e-9));
  } else {
    rep.items.push_back(ReportItem::plain("total", ne.total));
  }
  return rep;
}

EvalReport cmd_sigma(const Options& o) {
  const TruncationConfig cfg = make_cfg(o);
  EvalReport rep;
  rep.command = "sigma";
  echo_params(rep, o);
  if (o.space == "bidisk") {
    const auto p = bidisk_params(o);
    const SeriesResult inv = bidisk::inverse_sigma(p, cfg);
    const double s = 1.0 / inv.value.real();
    rep.items.push_back(ReportItem::plain("sigma", s, inv.terms_used, inv.tail_bound * s * s));
    rep.items.push_back(ReportItem::plain("inverse_sigma", inv.value, inv.terms_used,
                                          inv.tail_bound));
    if (p.vartheta == 0.0) {
      rep.items.push_back(ReportItem::check("inverse_sigma vs Gamma form", inv.value,
                                            bidisk::inverse_sigma_gamma_form(p), 1e-10));
      if (p.theta >= 0.0 && std::floor(p.theta) == p.theta) {
        rep.items.push_back(ReportItem::check("inverse_sigma vs exact mass", inv.value,
                                              oracle::gram_bidisk_exact(p, 0).blocks[0](0, 0),
                                              1e-10));
      }
    }
  } else if (o.space == "fock") {
    const auto p = fock_params(o);
    const double s = fock::sigma(p);
    rep.items.push_back(ReportItem::plain("sigma", s));
    rep.items.push_back(ReportItem::plain("inverse_sigma", 1.0 / s));
    if (p.theta >= 0.0 && std::floor(p.theta) == p.theta) {
      rep.items.push_back(ReportItem::check("inverse_sigma vs exact mass", 1.0 / s,
                                            oracle::gram_fock_exact(p, 0).blocks[0](0, 0),
                                            1e-10));
    }
  } else if (o.space == "ball") {
    const auto p = ball_params(o);
    const Point2 zero{0.0, 0.0};
    const double s = ball::full_kernel(p, zero, zero, cfg).value.real();
    rep.items.push_back(ReportItem::plain("sigma", s));
    rep.items.push_back(ReportItem::check("inverse_sigma vs exact mass", 1.0 / s,
                                          oracle::ball_monomial_norms(p, 0).blocks[0](0, 0),
                                          1e-10));
  } else {
    throw usage_error("sigma: --space must be bidisk, ball or fock");
  }
  return rep;
}

void emit(const EvalReport& rep, const Options& o) {
  if (o.format == "csv") {
    std::cout << rep.to_csv();
  } else {
    std::cout << rep.to_json(!o.no_wall_time).dump(2) << '\n';
  }
}

void add_space_options(CLI::App* cmd, Options& o, const std::vector<std::string>& spaces) {
  cmd->add_option("--space", o.space, "Function space")
      ->required()
      ->check(CLI::IsMember(spaces));
  cmd->add_option("--alpha", o.alpha, "Weight exponent alpha");
  cmd->add_option("--beta", o.beta, "Weight exponent beta");
  cmd->add_option("--theta", o.theta, "Exponent of |z1 - z2| (|z2| for the ball)");
  cmd->add_option("--vartheta", o.vartheta, "Exponent of |1 - conj(z2) z1| (bidisk only)");
  cmd->add_option("--tolerance", o.tolerance, "Series truncation tolerance")
      ->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--no-wall-time", o.no_wall_time, "Omit the wall_time field");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reproducing kernels and norm expansions for weighted spaces on the bidisk, "
               "the ball and C^2"};
  app.require_subcommand(1);
  Options o;

  auto* kernel = app.add_subcommand("kernel", "Evaluate the reproducing kernel at point pairs");
  add_space_options(kernel, o, {"bidisk", "ball", "fock"});
  add_output_options(kernel, o);
  kernel->add_option("--pair", o.pairs,
                     "z1,z2,w1,w2 (real) or z1re,z1im,z2re,z2im,w1re,w1im,w2re,w2im");
  kernel->add_option("--points", o.points_file, "File with one pair per line");
  kernel->add_flag("--oracle", o.oracle, "Compare with the Gram-matrix kernel");
  kernel->add_option("--oracle-degree", o.oracle_degree,
                     "Truncation degree of the oracle kernel (default: until settled)");
  kernel->add_option("--gram-cache", o.gram_cache, "JSON file caching Gram blocks");

  auto* norm = app.add_subcommand("norm-expand", "Split the norm of a polynomial by order");
  add_space_options(norm, o, {"bidisk", "ball", "fock", "torus", "sphere"});
  add_output_options(norm, o);
  norm->add_option("--poly", o.poly, "Polynomial, e.g. \"z1 - z2\" or \"(1,2)*z1^2*z2\"");
  norm->add_option("--poly-file", o.poly_file, "File with a polynomial (text or JSON)");
  norm->add_flag("--oracle", o.oracle, "Compare with Gram-matrix norms and projections");
  norm->add_option("--gram-cache", o.gram_cache, "JSON file caching Gram blocks");

  auto* sig = app.add_subcommand("sigma", "Kernel value at the origin");
  add_space_options(sig, o, {"bidisk", "ball", "fock"});
  add_output_options(sig, o);

  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  std::vector<std::string> names;
  for (const auto& s : verify::suites()) names.push_back(s.name);
  ver->add_option("suite", o.suite, "Suite name")->required()->check(CLI::IsMember(names));
  ver->add_option("--seed", o.seed, "Random seed");
  add_output_options(ver, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    EvalReport rep;
    if (*kernel) {
      rep = cmd_kernel(o);
    } else if (*norm) {
      rep = cmd_norm_expand(o);
    } else if (*sig) {
      rep = cmd_sigma(o);
    } else {
      rep = verify::run_suite(o.suite, o.seed);
    }
    if (!*ver) {
      rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    emit(rep, o);
    return rep.pass() ? 0 : kExitVerify;
  } catch (const usage_error& e) {
    std::cerr << "kernelforge: " << e.what() << '\n';
    return kExitUsage;
  } catch (const domain_error& e) {
    std::cerr << "kernelforge: domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const convergence_error& e) {
    std::cerr << "kernelforge: no convergence: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const conditioning_error& e) {
    std::cerr << "kernelforge: ill conditioned: " << e.what() << '\n';
    return kExitConditioning;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kernelforge: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kernelforge: " << e.what() << '\n';
    return kExitDomain;
  }
}
