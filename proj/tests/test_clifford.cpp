#include <catch2/catch_amalgamated.hpp>

#include "gammatrace/clifford.hpp"
#include "gammatrace/solver.hpp"

#include <random>

using namespace gammatrace;

namespace {

using CMatrix = ExactMatrix<ComplexRational>;

Rational q(long num, long den = 1) { return Rational(mpz_class(num), mpz_class(den)); }

CMatrix scalar_identity(std::size_t m, long c) { return CMatrix::identity(m) * ComplexRational(c); }

ExactMatrix<GaussInt> to_gauss(const CMatrix& m) {
  ExactMatrix<GaussInt> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      REQUIRE(m(r, c).re.is_integer());
      REQUIRE(m(r, c).im.is_integer());
      out(r, c) = GaussInt(m(r, c).re.numerator(), m(r, c).im.numerator());
    }
  return out;
}

/// Gamma_a Gamma_b + Gamma_b Gamma_a == 2 eta_ab 1 for every pair, checked on
/// dense matrices (entries are units, so Gaussian integers suffice).
bool clifford_relation_holds(const GammaRep& rep) {
  const std::size_t m = rep.m();
  std::vector<ExactMatrix<GaussInt>> g;
  for (std::size_t a = 0; a < rep.d(); ++a) g.push_back(to_gauss(rep.gamma(a)));
  const auto zero = ExactMatrix<GaussInt>(m, m);
  for (std::size_t a = 0; a < rep.d(); ++a)
    for (std::size_t b = a; b < rep.d(); ++b) {
      const auto anti = mat_mul(g[a], g[b]) + mat_mul(g[b], g[a]);
      const auto expected =
          a == b ? ExactMatrix<GaussInt>::identity(m) * GaussInt(2L * rep.signature().eta(a)) : zero;
      if (!(anti == expected)) return false;
    }
  return true;
}

AntisymTensor random_tensor(std::mt19937_64& rng, std::size_t d, long range, long max_den = 1) {
  std::uniform_int_distribution<long> num(-range, range), den(1, max_den);
  AntisymTensor b(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = a + 1; c < d; ++c) b.set(a, c, q(num(rng), den(rng)));
  return b;
}

Signature random_signature(std::mt19937_64& rng, std::size_t d) {
  std::vector<int> eta(d);
  for (auto& e : eta) e = (rng() & 1u) ? 1 : -1;
  return Signature(eta);
}

}  // namespace

TEST_CASE("d = 2 Euclidean generators", "[clifford]") {
  const auto rep = build_rep(Signature::euclidean(2));
  REQUIRE(rep.m() == 2);
  const auto g0 = rep.gamma(0), g1 = rep.gamma(1);
  CHECK(mat_mul(g0, g0) == CMatrix::identity(2));
  CHECK(mat_mul(g1, g1) == CMatrix::identity(2));
  CHECK((mat_mul(g0, g1) + mat_mul(g1, g0)).is_zero());
}

TEST_CASE("matrix size is 2^floor(d/2)", "[clifford]") {
  CHECK(build_rep(Signature::minkowski(6)).m() == 8);
  for (std::size_t d = 1; d <= 14; ++d) CHECK(build_rep(Signature::minkowski(d)).m() == (std::size_t{1} << (d / 2)));
}

TEST_CASE("d = 4 Minkowski anticommutators", "[clifford]") {
  const auto rep = build_rep(Signature::minkowski(4));
  int checks = 0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      const auto anti = mat_mul(rep.gamma(a), rep.gamma(b)) + mat_mul(rep.gamma(b), rep.gamma(a));
      const long eta_ab = a == b ? (a == 0 ? -1 : 1) : 0;
      CHECK(anti == scalar_identity(4, 2 * eta_ab));
      ++checks;
    }
  CHECK(checks == 16);
}

TEST_CASE("Clifford relation holds exactly up to d = 14", "[clifford]") {
  for (std::size_t d = 1; d <= 14; ++d) {
    INFO("d = " << d);
    CHECK(clifford_relation_holds(build_rep(Signature::minkowski(d))));
    CHECK(clifford_relation_holds(build_rep(Signature::euclidean(d))));
  }
  std::mt19937_64 rng(5);
  for (std::size_t d = 1; d <= 9; ++d) CHECK(clifford_relation_holds(build_rep(random_signature(rng, d))));
}

TEST_CASE("build_rep is deterministic", "[clifford]") {
  const auto sig = Signature({-1, 1, -1, 1, 1});
  CHECK(build_rep(sig) == build_rep(sig));
  CHECK(build_rep(sig).gamma(4) == build_rep(sig).gamma(4));
}

TEST_CASE("gamma_ab antisymmetry", "[clifford]") {
  const auto rep = build_rep(Signature::minkowski(5));
  for (std::size_t a = 0; a < 5; ++a) {
    CHECK(gamma_ab(rep, a, a).is_zero());
    for (std::size_t b = 0; b < 5; ++b) CHECK(gamma_ab(rep, a, b) == gamma_ab(rep, b, a) * ComplexRational(-1));
  }
  const auto e2 = build_rep(Signature::euclidean(2));
  CHECK(gamma_ab(e2, 0, 1) == mat_mul(e2.gamma(0), e2.gamma(1)));
  CHECK_THROWS_AS(gamma_ab(rep, 0, 5), std::out_of_range);
}

TEST_CASE("build_beta special cases", "[clifford]") {
  const auto rep = build_rep(Signature::euclidean(2));
  CHECK(build_beta(rep, AntisymTensor(2)).is_zero());
  AntisymTensor b(2);
  b.set(0, 1, q(1));
  CHECK(build_beta(rep, b) == gamma_ab(rep, 0, 1) * ComplexRational(2));
  CHECK_THROWS_AS(build_beta(rep, AntisymTensor(3)), std::invalid_argument);
}

TEST_CASE("build_beta equals the explicit ordered-pair sum", "[clifford][property]") {
  std::mt19937_64 rng(GENERATE(31, 32, 33));
  for (std::size_t d : {3, 4, 6}) {
    const auto rep = build_rep(random_signature(rng, d));
    const auto b = random_tensor(rng, d, 9, 4);
    CMatrix expected(rep.m(), rep.m());
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c) expected += gamma_ab(rep, a, c) * ComplexRational(b(a, c));
    const auto beta = build_beta(rep, b);
    CHECK(beta == expected);
    CHECK(mat_trace(beta).is_zero());
  }
}

TEST_CASE("chirality element", "[clifford]") {
  for (std::size_t d : {2, 4, 6, 8}) {
    for (const auto& sig : {Signature::minkowski(d), Signature::euclidean(d)}) {
      INFO("d = " << d << " signature " << sig.str());
      const auto rep = build_rep(sig);
      const auto chi = chirality(rep);
      for (std::size_t a = 0; a < d; ++a) CHECK((mat_mul(chi, rep.gamma(a)) + mat_mul(rep.gamma(a), chi)).is_zero());
      // Reversing d anticommuting factors costs (-1)^{d(d-1)/2}, then each Gamma_a^2 = eta_aa.
      long c = ((d * (d - 1) / 2) % 2 == 0) ? 1 : -1;
      for (int e : sig.entries()) c *= e;
      CHECK(mat_mul(chi, chi) == scalar_identity(rep.m(), c));
      CHECK(mat_trace(chi).is_zero());
    }
  }
  CHECK_THROWS_AS(chirality(build_rep(Signature::minkowski(5))), std::invalid_argument);
}

TEST_CASE("beta_power_trace closed cases", "[clifford]") {
  const auto rep = build_rep(Signature::euclidean(2));
  AntisymTensor b(2);
  b.set(0, 1, q(1));
  CHECK(beta_power_trace(rep, b, 2) == q(-8));
  CHECK(beta_power_trace(rep, b, 4) == q(32));
  for (unsigned k : {1u, 3u, 5u, 7u}) CHECK(beta_power_trace(rep, b, k) == q(0));
  // beta^2 = -4 for this tensor, so Tr(beta^2n) = 2 (-4)^n
  for (unsigned n = 1; n <= 20; ++n) CHECK(beta_power_trace(rep, b, 2 * n) == pow(q(-4), n) * q(2));
}

TEST_CASE("beta_power_trace agrees with explicit matrix powers", "[clifford][property]") {
  std::mt19937_64 rng(GENERATE(41, 42, 43, 44));
  const std::size_t d = 4 + (rng() % 3);
  const auto rep = build_rep(random_signature(rng, d));
  const auto b = random_tensor(rng, d, 5, 3);
  const auto beta = build_beta(rep, b);
  CMatrix pw = CMatrix::identity(rep.m());
  for (unsigned k = 1; k <= 6; ++k) {
    pw = mat_mul(pw, beta);
    CHECK(ComplexRational(beta_power_trace(rep, b, k)) == mat_trace(pw));
  }
}

TEST_CASE("even beta-power traces are real, odd ones vanish, and scale as lambda^k", "[clifford][property]") {
  std::mt19937_64 rng(GENERATE(51, 52, 53, 54, 55));
  for (std::size_t d = 2; d <= 10; ++d) {
    const auto rep = build_rep(random_signature(rng, d));
    const auto b = random_tensor(rng, d, 9);
    std::uniform_int_distribution<long> ld(-5, 5);
    const Rational lambda = q(ld(rng));
    for (unsigned k = 1; k <= 4; ++k) {
      const Rational t = beta_power_trace(rep, b, k);  // throws if not real
      if (k % 2 == 1) CHECK(t.is_zero());
      CHECK(beta_power_trace(rep, b.scaled(lambda), k) == pow(lambda, k) * t);
    }
    CHECK(build_beta(rep, b.scaled(lambda)) == build_beta(rep, b) * ComplexRational(lambda));
  }
}

TEST_CASE("signature parsing", "[clifford]") {
  CHECK(SignatureSpec::parse("minkowski").resolve(3) == Signature({-1, 1, 1}));
  CHECK(SignatureSpec::parse("euclidean").resolve(2) == Signature({1, 1}));
  CHECK(SignatureSpec::parse("+-").resolve(2) == Signature({1, -1}));
  CHECK_THROWS_AS(SignatureSpec::parse("+-").resolve(4), std::invalid_argument);
  CHECK_THROWS_AS(SignatureSpec::parse("lorentz"), std::invalid_argument);
  CHECK_THROWS_AS(Signature({1, 0}), std::invalid_argument);
}

TEST_CASE("AntisymTensor invariants", "[clifford]") {
  AntisymTensor b(3);
  b.set(0, 2, q(5, 3));
  CHECK(b(2, 0) == q(-5, 3));
  CHECK(b(1, 1) == q(0));
  CHECK_THROWS_AS(b.set(1, 1, q(1)), std::invalid_argument);
  CHECK_THROWS_AS(b.set(0, 3, q(1)), std::out_of_range);
  ExactMatrix<Rational> m{{q(0), q(1)}, {q(1), q(0)}};
  CHECK_THROWS_AS(AntisymTensor::from_matrix(m), std::invalid_argument);
}
