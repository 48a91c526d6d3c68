#include "projhardy/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace projhardy {

Poly::Poly(cd constant) {
  if (constant != 0.0) terms_[{0, 0, 0, 0}] = constant;
}

Poly Poly::z(int index) {
  Poly p;
  p.add_term(index == 1 ? Exponents{1, 0, 0, 0} : Exponents{0, 0, 1, 0}, 1.0);
  return p;
}

Poly Poly::zbar(int index) {
  Poly p;
  p.add_term(index == 1 ? Exponents{0, 1, 0, 0} : Exponents{0, 0, 0, 1}, 1.0);
  return p;
}

void Poly::add_term(const Exponents& e, cd c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Poly::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

int Poly::holomorphic_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[2]);
  return d;
}

int Poly::antiholomorphic_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[1] + e[3]);
  return d;
}

cd Poly::eval(const Vec2& z) const {
  int maxe = 0;
  for (const auto& [e, c] : terms_) maxe = std::max({maxe, e[0], e[1], e[2], e[3]});
  // powers[v * stride + k] = (z1, conj z1, z2, conj z2)[v]^k
  const int stride = maxe + 1;
  std::array<cd, 4 * 17> local;
  std::vector<cd> heap;
  cd* powers = local.data();
  if (stride > 17) {
    heap.resize(4 * stride);
    powers = heap.data();
  }
  const std::array<cd, 4> base{z(0), std::conj(z(0)), z(1), std::conj(z(1))};
  for (int v = 0; v < 4; ++v) {
    cd* row = powers + v * stride;
    row[0] = 1.0;
    for (int k = 1; k <= maxe; ++k) row[k] = row[k - 1] * base[v];
  }
  cd sum = 0.0;
  for (const auto& [e, c] : terms_)
    sum += c * powers[e[0]] * powers[stride + e[1]] * powers[2 * stride + e[2]] * powers[3 * stride + e[3]];
  return sum;
}

Poly Poly::wirtinger(Wirtinger which) const {
  const int var = static_cast<int>(which) < 2 ? (which == Wirtinger::dz1 ? 0 : 2) : (which == Wirtinger::dzbar1 ? 1 : 3);
  Poly out;
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, c * static_cast<double>(e[var]));
  }
  return out;
}

Poly Poly::conjugate() const {
  Poly out;
  for (const auto& [e, c] : terms_) out.add_term({e[1], e[0], e[3], e[2]}, std::conj(c));
  return out;
}

Poly& Poly::operator+=(const Poly& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(cd s) {
  for (auto& [e, c] : terms_) c *= s;
  prune();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]}, ca * cb);
  return out;
}

Poly Poly::pow(int n) const {
  Poly result(1.0);
  for (int i = 0; i < n; ++i) result = result * *this;
  return result;
}

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string monomial_text(const Exponents& e) {
  static const char* names[4] = {"z1", "conj(z1)", "z2", "conj(z2)"};
  std::string out;
  for (int v = 0; v < 4; ++v) {
    if (e[v] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[v];
    if (e[v] > 1) out += '^' + std::to_string(e[v]);
  }
  return out;
}

}  // namespace

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const std::string mono = monomial_text(e);
    std::string coeff;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      coeff = format_double(std::abs(c.real()));
    } else {
      coeff = "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    if (mono.empty())
      out += coeff;
    else if (coeff == "1")
      out += mono;
    else
      out += coeff + "*" + mono;
  }
  return out;
}

HermitianPoly::HermitianPoly(const Poly& p) {
  double scale = 0.0;
  for (const auto& [e, c] : p.terms()) scale = std::max(scale, std::abs(c));
  const double tol = 1e-12 * std::max(1.0, scale);
  Poly sym;
  for (const auto& [e, c] : p.terms()) {
    const Exponents partner{e[1], e[0], e[3], e[2]};
    const auto it = p.terms().find(partner);
    const cd other = it == p.terms().end() ? cd(0.0) : it->second;
    if (std::abs(c - std::conj(other)) > tol) {
      Poly a, b;
      a.add_term(e, 1.0);
      b.add_term(partner, 1.0);
      throw InputError("polynomial is not real-valued: coefficient of " + a.to_string() + " is (" +
                       format_double(c.real()) + "," + format_double(c.imag()) + ") but coefficient of " +
                       b.to_string() + " is (" + format_double(other.real()) + "," + format_double(other.imag()) +
                       "), expected its conjugate");
    }
    sym.add_term(e, 0.5 * (c + std::conj(other)));
  }
  p_ = sym;
  d_[0] = p_.wirtinger(Wirtinger::dz1);
  d_[1] = p_.wirtinger(Wirtinger::dz2);
  for (int k = 0; k < 2; ++k) {
    levi_[k][0] = d_[k].wirtinger(Wirtinger::dzbar1);
    levi_[k][1] = d_[k].wirtinger(Wirtinger::dzbar2);
    holo_[k][0] = d_[k].wirtinger(Wirtinger::dz1);
    holo_[k][1] = d_[k].wirtinger(Wirtinger::dz2);
  }
}

Vec2 HermitianPoly::dz(const Vec2& z) const { return {d_[0].eval(z), d_[1].eval(z)}; }

Mat2 HermitianPoly::levi(const Vec2& z) const {
  Mat2 h;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) h(k, l) = levi_[k][l].eval(z);
  return h;
}

Mat2 HermitianPoly::hess_holo(const Vec2& z) const {
  Mat2 h;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) h(k, l) = holo_[k][l].eval(z);
  return h;
}

Eigen::Vector4d HermitianPoly::real_gradient(const Vec2& z) const {
  const Vec2 g = dz(z);
  return {2.0 * g(0).real(), -2.0 * g(0).imag(), 2.0 * g(1).real(), -2.0 * g(1).imag()};
}

double HermitianPoly::directional(const Vec2& z, const Vec2& v) const {
  const Vec2 g = dz(z);
  return 2.0 * (g(0) * v(0) + g(1) * v(1)).real();
}

Poly wirtinger(const Poly& p, Wirtinger which) { return p.wirtinger(which); }

ParseError::ParseError(const std::string& what, std::size_t position)
    : InputError(what + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  Poly parse() {
    Poly p = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Poly sum() {
    Poly acc = product();
    for (;;) {
      if (accept('+'))
        acc += product();
      else if (accept('-'))
        acc -= product();
      else
        return acc;
    }
  }

  Poly product() {
    Poly acc = signed_power();
    while (accept('*')) acc = acc * signed_power();
    return acc;
  }

  // Unary sign binds looser than '^': -z1^2 is -(z1^2).
  Poly signed_power() {
    if (accept('-')) return signed_power() * cd(-1.0, 0.0);
    if (accept('+')) return signed_power();
    return power();
  }

  Poly power() {
    Poly base = primary();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      int n = 0;
      std::from_chars(s_.data() + start, s_.data() + pos_, n);
      return base.pow(n);
    }
    return base;
  }

  double number() {
    skip();
    const std::size_t start = pos_;
    auto isnum = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; };
    while (pos_ < s_.size() && isnum(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < s_.size() && (s_[look] == '+' || s_[look] == '-')) ++look;
      if (look < s_.size() && std::isdigit(static_cast<unsigned char>(s_[look]))) {
        pos_ = look;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return value;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  static bool constant_value(const Poly& p, cd& out) {
    if (p.is_zero()) {
      out = 0.0;
      return true;
    }
    if (p.terms().size() == 1 && p.terms().begin()->first == Exponents{0, 0, 0, 0}) {
      out = p.terms().begin()->second;
      return true;
    }
    return false;
  }

  Poly primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Poly(number());
    if (c == '(') {
      ++pos_;
      const std::size_t inner = pos_;
      Poly first = sum();
      if (accept(',')) {
        cd re, im;
        if (!constant_value(first, re) || re.imag() != 0.0) {
          pos_ = inner;
          fail("complex literal needs a real part");
        }
        const std::size_t second_pos = pos_;
        Poly second = sum();
        if (!constant_value(second, im) || im.imag() != 0.0) {
          pos_ = second_pos;
          fail("complex literal needs an imaginary part");
        }
        expect(')');
        return Poly(cd(re.real(), im.real()));
      }
      expect(')');
      return first;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      const std::string id = identifier();
      if (id == "z1") return Poly::z(1);
      if (id == "z2") return Poly::z(2);
      if (id == "conj" || id == "abs2" || id == "re" || id == "im") {
        expect('(');
        Poly arg = sum();
        expect(')');
        if (id == "conj") return arg.conjugate();
        if (id == "abs2") return arg * arg.conjugate();
        if (id == "re") return (arg + arg.conjugate()) * cd(0.5, 0.0);
        return (arg - arg.conjugate()) * cd(0.0, -0.5);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_expression(std::string_view text) { return Parser(text).parse(); }

HermitianPoly parse_poly(std::string_view text) { return HermitianPoly(parse_expression(text)); }

Poly parse_holomorphic(std::string_view text) {
  Poly p = parse_expression(text);
  if (!p.is_holomorphic()) throw InputError("expression depends on conj(z): not holomorphic");
  return p;
}

HomVec gradient_hyperplane(const HermitianPoly& rho, const Vec2& z) {
  const Vec2 g = rho.dz(z);
  const double scale = std::max(1.0, std::abs(rho.eval(z)));
  if (g.norm() <= 1e-14 * scale)
    throw PreconditionError("gradient_hyperplane: complex gradient vanishes (degenerate boundary point)");
  return HomVec::hyperplane(-(g(0) * z(0) + g(1) * z(1)), g(0), g(1));
}

HermitianPoly transform_poly(const HermitianPoly& rho, const ProjMap& t) {
  const Mat3 n = t.inverse().matrix();
  // Homogeneous image of (1, zeta) under T^{-1}: (D, N1, N2), affine-linear in zeta.
  auto linear = [&](int row) {
    Poly p(n(row, 0));
    Poly a = Poly::z(1) * n(row, 1);
    Poly b = Poly::z(2) * n(row, 2);
    return p + a + b;
  };
  const Poly den = linear(0);
  const bool affine = std::abs(n(0, 1)) == 0.0 && std::abs(n(0, 2)) == 0.0;
  Poly n1 = linear(1), n2 = linear(2);
  if (affine) {
    n1 *= 1.0 / n(0, 0);
    n2 *= 1.0 / n(0, 0);
  }
  const int d = std::max(rho.poly().holomorphic_degree(), rho.poly().antiholomorphic_degree());
  const Poly n1c = n1.conjugate(), n2c = n2.conjugate(), denc = den.conjugate();
  Poly out;
  for (const auto& [e, c] : rho.poly().terms()) {
    Poly term(c);
    term = term * n1.pow(e[0]) * n1c.pow(e[1]) * n2.pow(e[2]) * n2c.pow(e[3]);
    if (!affine) term = term * den.pow(d - e[0] - e[2]) * denc.pow(d - e[1] - e[3]);
    out += term;
  }
  // Round-off can leave tiny non-Hermitian residue; symmetrise explicitly.
  const Poly sym = (out + out.conjugate()) * cd(0.5, 0.0);
  return HermitianPoly(sym);
}

}  // namespace projhardy
