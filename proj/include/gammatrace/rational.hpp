#pragma once

// Exact scalars: Rational (GMP-backed), Gaussian rationals and Gaussian
// integers.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace gammatrace {

class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(static_cast<long>(v)) {}  // NOLINT
  Rational(const mpz_class& num) : q_(num) {}    // NOLINT
  Rational(mpz_class num, mpz_class den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    q_ = mpq_class(std::move(num), std::move(den));
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "num/den" or "k", with an optional leading minus.
  static Rational parse(std::string_view text) {
    auto fail = [&] {
      throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
    };
    auto is_integer = [](std::string_view s) {
      if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    auto to_mpz = [](std::string_view s) {
      if (!s.empty() && s.front() == '+') s.remove_prefix(1);
      return mpz_class(std::string(s), 10);
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      if (!is_integer(text)) fail();
      return Rational(to_mpz(text));
    }
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den) || den.front() == '-' || den.front() == '+') fail();
    mpz_class d = to_mpz(den);
    if (d == 0) throw std::domain_error("Rational: zero denominator in '" + std::string(text) + "'");
    return Rational(to_mpz(num), std::move(d));
  }

  [[nodiscard]] mpz_class numerator() const { return q_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }
  [[nodiscard]] const mpq_class& raw() const { return q_; }

  [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
  [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }
  [[nodiscard]] int sign() const { return sgn(q_); }

  /// "num/den", or just "num" when the denominator is 1.
  [[nodiscard]] std::string str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  [[nodiscard]] double to_double() const { return q_.get_d(); }

  /// Number of bits in numerator plus denominator; a crude height.
  [[nodiscard]] std::size_t bit_size() const {
    return mpz_sizeinbase(q_.get_num_mpz_t(), 2) + mpz_sizeinbase(q_.get_den_mpz_t(), 2);
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

inline Rational pow(Rational base, unsigned exp) {
  Rational acc(1);
  while (exp) {
    if (exp & 1u) acc *= base;
    exp >>= 1u;
    if (exp) base *= base;
  }
  return acc;
}

inline mpz_class factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

/// re + i·im with exact rational parts.
struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(long r) : re(r) {}                 // NOLINT
  ComplexRational(int r) : re(r) {}                  // NOLINT
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static ComplexRational i() { return {Rational(0), Rational(1)}; }

  [[nodiscard]] bool is_zero() const { return re.is_zero() && im.is_zero(); }
  [[nodiscard]] bool is_real() const { return im.is_zero(); }
  [[nodiscard]] ComplexRational conj() const { return {re, -im}; }
  [[nodiscard]] Rational norm2() const { return re * re + im * im; }

  ComplexRational& operator+=(const ComplexRational& o) { re += o.re; im += o.im; return *this; }
  ComplexRational& operator-=(const ComplexRational& o) { re -= o.re; im -= o.im; return *this; }
  ComplexRational& operator*=(const ComplexRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o) {
    const Rational n2 = o.norm2();
    if (n2.is_zero()) throw std::domain_error("ComplexRational: division by zero");
    *this *= o.conj();
    re /= n2;
    im /= n2;
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;

  [[nodiscard]] std::string str() const {
    if (im.is_zero()) return re.str();
    if (re.is_zero()) return im.str() + "i";
    return re.str() + (im.sign() > 0 ? "+" : "") + im.str() + "i";
  }
  friend std::ostream& operator<<(std::ostream& os, const ComplexRational& z) { return os << z.str(); }
};

/// Gaussian integer re + i·im. Used for the heavy matrix products, where
/// every entry is integral after scaling out a common denominator.
struct GaussInt {
  mpz_class re{0};
  mpz_class im{0};

  GaussInt() = default;
  GaussInt(long r) : re(r) {}  // NOLINT(google-explicit-constructor)
  GaussInt(mpz_class r, mpz_class i) : re(std::move(r)), im(std::move(i)) {}

  [[nodiscard]] bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  GaussInt& operator+=(const GaussInt& o) { re += o.re; im += o.im; return *this; }
  GaussInt& operator-=(const GaussInt& o) { re -= o.re; im -= o.im; return *this; }
  GaussInt& operator*=(const GaussInt& o) {
    mpz_class r = re * o.re - im * o.im;
    mpz_class i = re * o.im + im * o.re;
    re.swap(r);
    im.swap(i);
    return *this;
  }
  friend GaussInt operator+(GaussInt a, const GaussInt& b) { return a += b; }
  friend GaussInt operator-(GaussInt a, const GaussInt& b) { return a -= b; }
  friend GaussInt operator*(GaussInt a, const GaussInt& b) { return a *= b; }
  friend bool operator==(const GaussInt&, const GaussInt&) = default;
};

/// acc += a·b without temporaries.
inline void fused_add_mul(GaussInt& acc, const GaussInt& a, const GaussInt& b) {
  mpz_addmul(acc.re.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
  mpz_submul(acc.re.get_mpz_t(), a.im.get_mpz_t(), b.im.get_mpz_t());
  mpz_addmul(acc.im.get_mpz_t(), a.re.get_mpz_t(), b.im.get_mpz_t());
  mpz_addmul(acc.im.get_mpz_t(), a.im.get_mpz_t(), b.re.get_mpz_t());
}

inline void fused_add_mul(mpz_class& acc, const mpz_class& a, const mpz_class& b) {
  mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

template <typename T>
inline void fused_add_mul(T& acc, const T& a, const T& b) {
  acc += a * b;
}

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const ComplexRational& x) { return x.is_zero(); }
inline bool is_zero(const GaussInt& x) { return x.is_zero(); }
inline bool is_zero(const mpz_class& x) { return sgn(x) == 0; }

inline ComplexRational to_complex_rational(const GaussInt& z) {
  return {Rational(z.re), Rational(z.im)};
}

}  // namespace gammatrace
