#pragma once
#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gmdef {

// Exact rationals. mpq_class keeps numerator/denominator coprime with positive
// denominator as long as entry points canonicalize, which rat() guarantees.
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

// Element of Q(i).
struct Scalar {
  Rational re, im;

  Scalar() : re(0), im(0) {}
  Scalar(long n) : re(n), im(0) {}
  Scalar(const Rational& r) : re(r), im(0) {}
  Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  Scalar conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }  // re^2 + im^2

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator-(const Scalar& a) { return {-a.re, -a.im}; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero scalar");
    Rational n = norm();
    return {re / n, -im / n};
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar& operator/=(const Scalar& b) { return *this = *this * b.inverse(); }
};

inline Scalar imag_unit() { return Scalar(rat(0), rat(1)); }

inline std::string rational_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Canonical form: "a/b" for real values, "a/b+c/d*i" / "a/b-c/d*i" otherwise.
// Lowest terms come from mpq_class; the sign of the imaginary part is explicit.
inline std::string scalar_string(const Scalar& s) {
  std::string out = rational_string(s.re);
  if (s.im != 0) {
    Rational a = abs(s.im);
    out += (s.im < 0 ? "-" : "+") + rational_string(a) + "*i";
  }
  return out;
}

namespace detail {

// Grammar: term ('+'|'-') term | term, where term is rational ['*i'] or 'i'.
inline std::size_t parse_rational(const std::string& s, std::size_t pos, Rational& out) {
  std::size_t start = pos;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) pos++;
  std::size_t digits = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) pos++;
  if (pos == digits) throw std::invalid_argument("scalar parse: expected digits in '" + s + "'");
  if (pos < s.size() && s[pos] == '/') {
    pos++;
    std::size_t dstart = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) pos++;
    if (pos == dstart) throw std::invalid_argument("scalar parse: bad denominator in '" + s + "'");
  }
  Rational q(s.substr(start, pos - start));
  if (q.get_den() == 0) throw std::invalid_argument("scalar parse: zero denominator in '" + s + "'");
  q.canonicalize();
  out = q;
  return pos;
}

}  // namespace detail

// Accepts the canonical form plus the conveniences "a", "i", "-i", "c/d*i".
inline Scalar parse_scalar(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("scalar parse: empty string");

  auto term_is_imag = [&](std::size_t pos) {
    // from pos, does the term end in 'i'?
    std::size_t p = pos;
    if (p < s.size() && (s[p] == '+' || s[p] == '-')) p++;
    while (p < s.size() && (std::isdigit(static_cast<unsigned char>(s[p])) || s[p] == '/')) p++;
    if (p < s.size() && s[p] == '*') p++;
    return p < s.size() && s[p] == 'i';
  };

  Scalar out;
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    if (!first && s[pos] != '+' && s[pos] != '-')
      throw std::invalid_argument("scalar parse: expected sign in '" + raw + "'");
    bool neg = s[pos] == '-';
    bool imag = term_is_imag(pos);
    std::size_t p = pos;
    if (s[p] == '+' || s[p] == '-') p++;
    Rational q;
    if (p < s.size() && s[p] == 'i') {
      q = 1;
      p++;
    } else {
      p = detail::parse_rational(s, p, q);
      if (p < s.size() && s[p] == '*') {
        if (p + 1 >= s.size() || s[p + 1] != 'i')
          throw std::invalid_argument("scalar parse: expected i after * in '" + raw + "'");
        p += 2;
      } else if (p < s.size() && s[p] == 'i') {
        p++;
      }
    }
    if (neg) q = -q;
    if (imag)
      out.im += q;
    else
      out.re += q;
    pos = p;
    first = false;
  }
  return out;
}

}  // namespace gmdef
