#include <kernelforge/poly_io.hpp>

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kernelforge {
namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  BiPoly parse() {
    BiPoly out;
    skip_ws();
    if (at_end()) throw std::invalid_argument("empty polynomial");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      out += term(sign);
      first = false;
      skip_ws();
    }
    return out;
  }

private:
  BiPoly term(double sign) {
    cplx coeff = sign;
    unsigned m = 0;
    unsigned n = 0;
    factor(coeff, m, n);
    skip_ws();
    while (!at_end() && peek() == '*') {
      ++pos_;
      skip_ws();
      factor(coeff, m, n);
      skip_ws();
    }
    return BiPoly::monomial(m, n, coeff);
  }

  void factor(cplx& coeff, unsigned& m, unsigned& n) {
    if (at_end()) fail("unexpected end of input");
    const char c = peek();
    if (c == 'z') {
      ++pos_;
      if (at_end() || (peek() != '1' && peek() != '2')) fail("expected z1 or z2");
      const bool is_z1 = peek() == '1';
      ++pos_;
      unsigned e = 1;
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_ws();
        e = exponent();
      }
      (is_z1 ? m : n) += e;
    } else if (c == '(') {
      ++pos_;
      const double re = number();
      skip_ws();
      if (at_end() || peek() != ',') fail("expected ',' in complex literal");
      ++pos_;
      const double im = number();
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      ++pos_;
      coeff *= cplx(re, im);
    } else if (c == 'i') {
      ++pos_;
      coeff *= cplx(0.0, 1.0);
    } else {
      const double v = number();
      if (!at_end() && peek() == 'i') {
        ++pos_;
        coeff *= cplx(0.0, v);
      } else {
        coeff *= v;
      }
    }
  }

  double number() {
    skip_ws();
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }

  unsigned exponent() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent");
    return static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start))));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial parse error at offset " +
                                std::to_string(pos_) + ": " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_coefficient(cplx c) {
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << 'i';
  } else {
    os << '(' << c.real() << ',' << c.imag() << ')';
  }
  return os.str();
}

std::string monomial_suffix(const char* var, unsigned e) {
  if (e == 0) return {};
  std::string s = std::string("*") + var;
  if (e > 1) s += "^" + std::to_string(e);
  return s;
}

}  // namespace

BiPoly parse_bipoly(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const BiPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : p.coefficients()) {
    if (!out.empty()) out += " + ";
    out += format_coefficient(c) + monomial_suffix("z1", k.first) +
           monomial_suffix("z2", k.second);
  }
  return out;
}

std::string to_string(const UniPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.coefficients()) {
    if (!out.empty()) out += " + ";
    out += format_coefficient(c) + monomial_suffix("z", m);
  }
  return out;
}

nlohmann::json to_json(const BiPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, c] : p.coefficients()) {
    arr.push_back({k.first, k.second, c.real(), c.imag()});
  }
  return arr;
}

BiPoly bipoly_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("polynomial JSON must be an array");
  BiPoly out;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 4) {
      throw std::invalid_argument("polynomial JSON entries must be [m, n, re, im]");
    }
    const auto m = entry[0].get<long long>();
    const auto n = entry[1].get<long long>();
    if (m < 0 || n < 0) throw std::invalid_argument("negative exponent in polynomial JSON");
    out.add_term(static_cast<unsigned>(m), static_cast<unsigned>(n),
                 cplx(entry[2].get<double>(), entry[3].get<double>()));
  }
  return out;
}

cplx parse_complex(std::string_view text) {
  const std::string s(text);
  const auto comma = s.find(',');
  std::size_t used = 0;
  try {
    if (comma == std::string::npos) {
      const double re = std::stod(s, &used);
      if (s.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(s);
      return {re, 0.0};
    }
    const std::string a = s.substr(0, comma);
    const std::string b = s.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (a.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(s);
    const double im = std::stod(b, &used);
    if (b.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse complex number '" + s + "'");
  }
}

}  // namespace kernelforge
