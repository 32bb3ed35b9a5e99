#pragma once

// Explicit Dirac-matrix representations for a diagonal metric in d
// dimensions, the rotation generators Gamma_ab, beta = B^{ab} Gamma_ab,
// and exact traces of beta powers.

#include "gammatrace/matrix.hpp"
#include "gammatrace/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gammatrace {

/// Diagonal metric eta_ab with entries +1 or -1.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<int> eta) : eta_(std::move(eta)) {
    if (eta_.empty()) throw std::invalid_argument("Signature: dimension must be positive");
    for (int e : eta_)
      if (e != 1 && e != -1) throw std::invalid_argument("Signature: entries must be +1 or -1");
  }

  /// (-, +, ..., +)
  static Signature minkowski(std::size_t d) {
    if (d == 0) throw std::invalid_argument("Signature: dimension must be positive");
    std::vector<int> eta(d, 1);
    eta[0] = -1;
    return Signature(std::move(eta));
  }
  static Signature euclidean(std::size_t d) {
    if (d == 0) throw std::invalid_argument("Signature: dimension must be positive");
    return Signature(std::vector<int>(d, 1));
  }

  [[nodiscard]] std::size_t d() const { return eta_.size(); }
  [[nodiscard]] int eta(std::size_t a) const { return eta_.at(a); }
  [[nodiscard]] const std::vector<int>& entries() const { return eta_; }

  /// "-+++" style rendering.
  [[nodiscard]] std::string str() const {
    std::string s;
    for (int e : eta_) s += e > 0 ? '+' : '-';
    return s;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<int> eta_;
};

/// A signature family chosen before the dimension is known.
class SignatureSpec {
 public:
  enum class Kind { kMinkowski, kEuclidean, kExplicit };

  SignatureSpec() = default;
  static SignatureSpec minkowski() { return SignatureSpec(Kind::kMinkowski, {}); }
  static SignatureSpec euclidean() { return SignatureSpec(Kind::kEuclidean, {}); }
  static SignatureSpec exact(Signature sig) { return SignatureSpec(Kind::kExplicit, std::move(sig)); }

  /// Accepts "minkowski", "euclidean", or an explicit "+"/"-" pattern.
  static SignatureSpec parse(std::string_view text) {
    if (text == "minkowski") return minkowski();
    if (text == "euclidean") return euclidean();
    std::vector<int> eta;
    for (char c : text) {
      if (c == '+') eta.push_back(1);
      else if (c == '-') eta.push_back(-1);
      else throw std::invalid_argument("unknown signature '" + std::string(text) + "'");
    }
    return exact(Signature(std::move(eta)));
  }

  [[nodiscard]] Kind kind() const { return kind_; }

  [[nodiscard]] Signature resolve(std::size_t d) const {
    switch (kind_) {
      case Kind::kMinkowski: return Signature::minkowski(d);
      case Kind::kEuclidean: return Signature::euclidean(d);
      case Kind::kExplicit:
        if (explicit_.d() != d)
          throw std::invalid_argument("signature '" + explicit_.str() + "' does not have dimension " +
                                      std::to_string(d));
        return explicit_;
    }
    throw std::logic_error("SignatureSpec: bad kind");
  }

  [[nodiscard]] std::string name() const {
    switch (kind_) {
      case Kind::kMinkowski: return "minkowski";
      case Kind::kEuclidean: return "euclidean";
      case Kind::kExplicit: return explicit_.str();
    }
    return {};
  }

 private:
  SignatureSpec(Kind k, Signature s) : kind_(k), explicit_(std::move(s)) {}

  Kind kind_ = Kind::kMinkowski;
  Signature explicit_;
};

/// Matrix with exactly one nonzero per row, valued i^phase. Every Dirac
/// matrix of the tensor-product construction and every product of them has
/// this form.
struct PhasedPermutation {
  std::vector<std::uint32_t> col;
  std::vector<std::uint8_t> phase;  // power of i, mod 4

  [[nodiscard]] std::size_t size() const { return col.size(); }

  static PhasedPermutation identity(std::size_t m) {
    PhasedPermutation p;
    p.col.resize(m);
    p.phase.assign(m, 0);
    for (std::size_t r = 0; r < m; ++r) p.col[r] = static_cast<std::uint32_t>(r);
    return p;
  }

  [[nodiscard]] PhasedPermutation times(const PhasedPermutation& o) const {
    PhasedPermutation out;
    out.col.resize(size());
    out.phase.resize(size());
    for (std::size_t r = 0; r < size(); ++r) {
      const auto c = col[r];
      out.col[r] = o.col[c];
      out.phase[r] = static_cast<std::uint8_t>((phase[r] + o.phase[c]) & 3u);
    }
    return out;
  }

  [[nodiscard]] PhasedPermutation kron(const PhasedPermutation& o) const {
    const std::size_t mb = o.size();
    PhasedPermutation out;
    out.col.resize(size() * mb);
    out.phase.resize(size() * mb);
    for (std::size_t ra = 0; ra < size(); ++ra)
      for (std::size_t rb = 0; rb < mb; ++rb) {
        out.col[ra * mb + rb] = static_cast<std::uint32_t>(col[ra] * mb + o.col[rb]);
        out.phase[ra * mb + rb] = static_cast<std::uint8_t>((phase[ra] + o.phase[rb]) & 3u);
      }
    return out;
  }

  /// Multiplies by i^k.
  [[nodiscard]] PhasedPermutation rotated(unsigned k) const {
    PhasedPermutation out = *this;
    for (auto& ph : out.phase) ph = static_cast<std::uint8_t>((ph + k) & 3u);
    return out;
  }

  [[nodiscard]] ExactMatrix<ComplexRational> to_matrix() const {
    ExactMatrix<ComplexRational> m(size(), size());
    for (std::size_t r = 0; r < size(); ++r) m(r, col[r]) = unit(phase[r]);
    return m;
  }

  static ComplexRational unit(unsigned ph) {
    switch (ph & 3u) {
      case 0: return {Rational(1), Rational(0)};
      case 1: return {Rational(0), Rational(1)};
      case 2: return {Rational(-1), Rational(0)};
      default: return {Rational(0), Rational(-1)};
    }
  }
};

/// d x d antisymmetric tensor with two upper indices.
class AntisymTensor {
 public:
  AntisymTensor() = default;
  explicit AntisymTensor(std::size_t d) : d_(d), upper_(d * d) {
    if (d == 0) throw std::invalid_argument("AntisymTensor: dimension must be positive");
  }

  /// From a full d x d array; rejects anything not exactly antisymmetric.
  static AntisymTensor from_matrix(const ExactMatrix<Rational>& m) {
    if (!m.is_square()) throw std::invalid_argument("AntisymTensor: matrix must be square");
    AntisymTensor t(m.rows());
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t b = 0; b < m.rows(); ++b) {
        if (m(a, b) != -m(b, a)) throw std::invalid_argument("AntisymTensor: matrix is not antisymmetric");
        t.upper_[a * t.d_ + b] = m(a, b);
      }
    return t;
  }

  [[nodiscard]] std::size_t d() const { return d_; }
  [[nodiscard]] const Rational& operator()(std::size_t a, std::size_t b) const { return upper_.at(a * d_ + b); }

  /// Sets B^{ab} = v and B^{ba} = -v.
  void set(std::size_t a, std::size_t b, const Rational& v) {
    if (a >= d_ || b >= d_) throw std::out_of_range("AntisymTensor: index out of range");
    if (a == b) {
      if (!v.is_zero()) throw std::invalid_argument("AntisymTensor: diagonal must vanish");
      return;
    }
    upper_[a * d_ + b] = v;
    upper_[b * d_ + a] = -v;
  }

  [[nodiscard]] AntisymTensor scaled(const Rational& lambda) const {
    AntisymTensor t = *this;
    for (auto& v : t.upper_) v *= lambda;
    return t;
  }

  /// Least common multiple of all entry denominators.
  [[nodiscard]] mpz_class common_denominator() const {
    mpz_class l = 1;
    for (const auto& v : upper_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.denominator().get_mpz_t());
    return l;
  }

  friend bool operator==(const AntisymTensor&, const AntisymTensor&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<Rational> upper_;
};

class GammaRep {
 public:
  GammaRep(Signature sig, std::vector<PhasedPermutation> gammas)
      : sig_(std::move(sig)), gammas_(std::move(gammas)) {}

  [[nodiscard]] const Signature& signature() const { return sig_; }
  [[nodiscard]] std::size_t d() const { return sig_.d(); }
  [[nodiscard]] std::size_t m() const { return gammas_.front().size(); }
  [[nodiscard]] const PhasedPermutation& gamma_form(std::size_t a) const { return gammas_.at(a); }
  [[nodiscard]] ExactMatrix<ComplexRational> gamma(std::size_t a) const { return gammas_.at(a).to_matrix(); }

  friend bool operator==(const GammaRep& a, const GammaRep& b) {
    if (!(a.sig_ == b.sig_) || a.gammas_.size() != b.gammas_.size()) return false;
    for (std::size_t i = 0; i < a.gammas_.size(); ++i)
      if (a.gammas_[i].col != b.gammas_[i].col || a.gammas_[i].phase != b.gammas_[i].phase) return false;
    return true;
  }

 private:
  Signature sig_;
  std::vector<PhasedPermutation> gammas_;
};

namespace detail {

inline PhasedPermutation pauli(int which) {
  PhasedPermutation p;
  switch (which) {
    case 1: p.col = {1, 0}; p.phase = {0, 0}; break;  // [[0,1],[1,0]]
    case 2: p.col = {1, 0}; p.phase = {3, 1}; break;  // [[0,-i],[i,0]]
    case 3: p.col = {0, 1}; p.phase = {0, 2}; break;  // [[1,0],[0,-1]]
    default: throw std::logic_error("pauli: bad index");
  }
  return p;
}

/// Euclidean generators for even dimension 2k, each squaring to +1.
inline std::vector<PhasedPermutation> euclidean_even(std::size_t k) {
  std::vector<PhasedPermutation> out;
  for (std::size_t j = 0; j < k; ++j) {
    for (int which : {1, 2}) {
      PhasedPermutation g = PhasedPermutation::identity(1);
      for (std::size_t t = 0; t < j; ++t) g = g.kron(pauli(3));
      g = g.kron(pauli(which));
      g = g.kron(PhasedPermutation::identity(std::size_t{1} << (k - j - 1)));
      out.push_back(std::move(g));
    }
  }
  return out;
}

inline bool squares_to_identity(const PhasedPermutation& g) {
  const auto sq = g.times(g);
  for (std::size_t r = 0; r < sq.size(); ++r)
    if (sq.col[r] != r || sq.phase[r] != 0) return false;
  return true;
}

}  // namespace detail

/// Tensor products of Pauli matrices for the Euclidean generators; a
/// timelike direction gets an extra factor i. For odd d the last generator
/// is the phased product of the others.
inline GammaRep build_rep(const Signature& sig) {
  const std::size_t d = sig.d();
  if (d == 0) throw std::invalid_argument("build_rep: dimension must be positive");
  std::vector<PhasedPermutation> g = detail::euclidean_even(d / 2);
  if (d % 2 == 1) {
    PhasedPermutation x = PhasedPermutation::identity(std::size_t{1} << (d / 2));
    for (const auto& e : g) x = x.times(e);
    if (!detail::squares_to_identity(x)) x = x.rotated(1);
    g.push_back(std::move(x));
  }
  for (std::size_t a = 0; a < d; ++a)
    if (sig.eta(a) < 0) g[a] = g[a].rotated(1);
  return GammaRep(sig, std::move(g));
}

/// (Gamma_a Gamma_b - Gamma_b Gamma_a) / 2
inline ExactMatrix<ComplexRational> gamma_ab(const GammaRep& rep, std::size_t a, std::size_t b) {
  if (a >= rep.d() || b >= rep.d()) throw std::out_of_range("gamma_ab: index out of range");
  const auto ga = rep.gamma(a);
  const auto gb = rep.gamma(b);
  auto out = mat_mul(ga, gb) - mat_mul(gb, ga);
  out *= ComplexRational(Rational(mpz_class(1), mpz_class(2)));
  return out;
}

/// beta scaled to Gaussian-integer entries: beta = matrix / denominator.
struct ScaledBeta {
  ExactMatrix<GaussInt> matrix;
  mpz_class denominator;
};

/// Builds D * B^{ab} Gamma_ab with D the common denominator of B. Uses
/// Gamma_ab = Gamma_a Gamma_b for a != b, so each ordered pair contributes a
/// phased permutation and the pair (a,b), (b,a) together give 2 B^{ab}.
inline ScaledBeta build_beta_scaled(const GammaRep& rep, const AntisymTensor& b) {
  if (b.d() != rep.d())
    throw std::invalid_argument("build_beta: tensor dimension " + std::to_string(b.d()) +
                                " does not match representation dimension " + std::to_string(rep.d()));
  const std::size_t m = rep.m();
  const mpz_class den = b.common_denominator();
  ExactMatrix<GaussInt> beta(m, m);
  for (std::size_t a = 0; a < rep.d(); ++a)
    for (std::size_t c = a + 1; c < rep.d(); ++c) {
      const Rational& v = b(a, c);
      if (v.is_zero()) continue;
      const mpz_class coeff = 2 * v.numerator() * (den / v.denominator());
      const auto prod = rep.gamma_form(a).times(rep.gamma_form(c));
      for (std::size_t r = 0; r < m; ++r) {
        GaussInt& e = beta(r, prod.col[r]);
        switch (prod.phase[r]) {
          case 0: e.re += coeff; break;
          case 1: e.im += coeff; break;
          case 2: e.re -= coeff; break;
          default: e.im -= coeff; break;
        }
      }
    }
  return {std::move(beta), den};
}

/// B^{ab} Gamma_ab summed over all ordered pairs.
inline ExactMatrix<ComplexRational> build_beta(const GammaRep& rep, const AntisymTensor& b) {
  auto scaled = build_beta_scaled(rep, b);
  const Rational inv_den(mpz_class(1), scaled.denominator);
  ExactMatrix<ComplexRational> out(rep.m(), rep.m());
  for (std::size_t r = 0; r < rep.m(); ++r)
    for (std::size_t c = 0; c < rep.m(); ++c) {
      const auto& e = scaled.matrix(r, c);
      if (e.is_zero()) continue;
      out(r, c) = ComplexRational(Rational(e.re) * inv_den, Rational(e.im) * inv_den);
    }
  return out;
}

/// Gamma_0 Gamma_1 ... Gamma_{d-1}; even d only.
inline ExactMatrix<ComplexRational> chirality(const GammaRep& rep) {
  if (rep.d() % 2 != 0) throw std::invalid_argument("chirality: defined here for even d only");
  PhasedPermutation x = PhasedPermutation::identity(rep.m());
  for (std::size_t a = 0; a < rep.d(); ++a) x = x.times(rep.gamma_form(a));
  return x.to_matrix();
}

/// Real part of a trace known to be real; a nonzero imaginary part means
/// the representation is broken.
inline Rational require_real(const ComplexRational& z, const char* what) {
  if (!z.is_real())
    throw std::logic_error(std::string(what) + ": trace has nonzero imaginary part " + z.str() +
                           " (inconsistent representation)");
  return z.re;
}

/// Tr(beta^k) for an integer-scaled beta, still scaled by denominator^k.
inline GaussInt scaled_power_trace(const ExactMatrix<GaussInt>& beta, unsigned k) {
  if (k == 0) return GaussInt(static_cast<long>(beta.rows()));
  const auto half = mat_pow(beta, k / 2);
  if (k % 2 == 0) return trace_of_product(half, half);
  if (k == 1) return mat_trace(beta);
  return trace_of_product(mat_mul(half, beta), half);
}

/// Tr(beta^k) with beta = B^{ab} Gamma_ab.
inline Rational beta_power_trace(const GammaRep& rep, const AntisymTensor& b, unsigned k) {
  const auto scaled = build_beta_scaled(rep, b);
  const GaussInt t = scaled_power_trace(scaled.matrix, k);
  mpz_class den_k;
  mpz_pow_ui(den_k.get_mpz_t(), scaled.denominator.get_mpz_t(), k);
  const ComplexRational tr(Rational(t.re, den_k), Rational(t.im, den_k));
  return require_real(tr, "beta_power_trace");
}

}  // namespace gammatrace
