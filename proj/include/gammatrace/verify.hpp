#pragma once

// Brute-force checks of the trace formula: explicit permutation sums of
// beta-matrix products against m * sum_s alpha_s B^(s), the rank-2
// identity, and the pseudoscalar proportionality constant.

#include "gammatrace/clifford.hpp"
#include "gammatrace/contraction.hpp"
#include "gammatrace/matrix.hpp"
#include "gammatrace/partitions.hpp"
#include "gammatrace/rational.hpp"
#include "gammatrace/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gammatrace {

struct VerificationReport {
  unsigned n = 0;
  std::size_t d = 0;
  std::string signature;
  std::uint64_t seed = 0;
  unsigned trial = 0;
  Rational lhs;
  Rational rhs;
  bool match = false;
  std::chrono::nanoseconds elapsed{0};
};

/// Symmetrized products of more factors than this are refused.
inline constexpr std::size_t kMaxBruteForceFactors = 8;

namespace detail {

/// sum over all orderings pi of Tr(lead * M_pi(1) * ... * M_pi(k)). Prefix
/// products are kept per position and only the changed suffix is redone.
inline GaussInt sum_over_orderings(const std::optional<ExactMatrix<GaussInt>>& lead,
                                   const std::vector<ExactMatrix<GaussInt>>& mats) {
  const std::size_t k = mats.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> prev(k, k);
  std::vector<ExactMatrix<GaussInt>> prefix(k);
  GaussInt sum;
  do {
    std::size_t first = 0;
    while (first < k && perm[first] == prev[first]) ++first;
    // the last factor is folded into the trace, so prefixes stop at k-2
    for (std::size_t pos = first; pos + 1 < k; ++pos) {
      const auto& cur = mats[perm[pos]];
      if (pos == 0) prefix[0] = lead ? mat_mul(*lead, cur) : cur;
      else prefix[pos] = mat_mul(prefix[pos - 1], cur);
    }
    const auto& last = mats[perm[k - 1]];
    if (k == 1) sum += lead ? trace_of_product(*lead, last) : mat_trace(last);
    else sum += trace_of_product(prefix[k - 2], last);
    prev = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

inline mpz_class scaled_betas(const GammaRep& rep, std::span<const AntisymTensor> tensors,
                              std::vector<ExactMatrix<GaussInt>>& out) {
  mpz_class den = 1;
  for (const auto& t : tensors) {
    auto sb = build_beta_scaled(rep, t);
    den *= sb.denominator;
    out.push_back(std::move(sb.matrix));
  }
  return den;
}

}  // namespace detail

/// Tr{beta_1 ... beta_k} = (1/k!) sum_pi Tr(beta_pi(1) ... beta_pi(k)), by
/// explicit enumeration of all k! orderings.
inline Rational symmetrized_trace_bruteforce(const GammaRep& rep, std::span<const AntisymTensor> tensors) {
  const std::size_t k = tensors.size();
  if (k == 0) throw std::invalid_argument("symmetrized_trace_bruteforce: need at least one tensor");
  if (k > kMaxBruteForceFactors)
    throw std::invalid_argument("symmetrized_trace_bruteforce: " + std::to_string(k) + " factors exceeds the limit of " +
                                std::to_string(kMaxBruteForceFactors));
  std::vector<ExactMatrix<GaussInt>> betas;
  const mpz_class den = detail::scaled_betas(rep, tensors, betas);
  const GaussInt sum = detail::sum_over_orderings(std::nullopt, betas);
  const mpz_class scale = den * factorial(static_cast<unsigned>(k));
  return require_real({Rational(sum.re, scale), Rational(sum.im, scale)}, "symmetrized_trace_bruteforce");
}

/// m * sum_s alpha_s B^(s) for the given 2n tensors.
inline Rational master_formula_rhs(const GammaRep& rep, const AlphaTable& table, std::span<const AntisymTensor> tensors) {
  Rational acc;
  for (const auto& [s, alpha] : table.entries()) acc += alpha * contraction_sum_Bs(rep.signature(), s, tensors);
  return acc * Rational(static_cast<long>(rep.m()));
}

/// Largest n accepted by verify_master_formula; (2n)! = 40320 orderings.
inline constexpr unsigned kMaxVerifyN = 4;

/// Draws 2n tensors per trial in d = 2n and compares the brute-force
/// symmetrized trace with the closed formula built from `table`.
inline std::vector<VerificationReport> verify_master_formula(unsigned n, unsigned trials, const SamplerConfig& cfg,
                                                             const AlphaTable& table,
                                                             const SignatureSpec& signature = SignatureSpec::minkowski()) {
  if (n == 0 || n > kMaxVerifyN)
    throw std::invalid_argument("verify_master_formula: n must be in 1.." + std::to_string(kMaxVerifyN));
  if (table.n() != n) throw std::invalid_argument("verify_master_formula: table is for a different n");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  const GammaRep rep = build_rep(signature.resolve(d));
  std::vector<VerificationReport> reports;
  for (unsigned trial = 0; trial < trials; ++trial) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<AntisymTensor> tensors;
    for (std::size_t i = 0; i < d; ++i) tensors.push_back(random_antisym(d, cfg, static_cast<std::uint64_t>(trial) * d + i));
    VerificationReport r;
    r.n = n;
    r.d = d;
    r.signature = rep.signature().str();
    r.seed = cfg.seed;
    r.trial = trial;
    r.lhs = symmetrized_trace_bruteforce(rep, tensors);
    r.rhs = master_formula_rhs(rep, table, tensors);
    r.match = r.lhs == r.rhs;
    r.elapsed = std::chrono::steady_clock::now() - start;
    reports.push_back(std::move(r));
  }
  return reports;
}

/// A^{ab} B^{cd} Tr{Gamma_ab Gamma_cd} against 2m A^a_b B^b_a. The left
/// side is summed over all index quadruples with explicit Gamma_ab.
inline VerificationReport verify_rank2_identity(const GammaRep& rep, const AntisymTensor& a, const AntisymTensor& b) {
  if (a.d() != rep.d() || b.d() != rep.d())
    throw std::invalid_argument("verify_rank2_identity: tensor dimension does not match representation");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t d = rep.d();
  std::vector<ExactMatrix<ComplexRational>> gab(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) gab[i * d + j] = gamma_ab(rep, i, j);

  ComplexRational lhs;
  const ComplexRational half(Rational(mpz_class(1), mpz_class(2)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          if (b(k, l).is_zero()) continue;
          const auto& x = gab[i * d + j];
          const auto& y = gab[k * d + l];
          const ComplexRational sym = (trace_of_product(x, y) + trace_of_product(y, x)) * half;
          lhs += ComplexRational(a(i, j) * b(k, l)) * sym;
        }
    }

  VerificationReport r;
  r.n = 1;
  r.d = d;
  r.signature = rep.signature().str();
  r.lhs = require_real(lhs, "verify_rank2_identity");
  const std::vector<AntisymTensor> pair{a, b};
  r.rhs = Rational(2 * static_cast<long>(rep.m())) * cycle_trace(rep.signature(), pair);
  r.match = r.lhs == r.rhs;
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

/// eps_{A1 B1 ... An Bn} B_1^{A1 B1} ... B_n^{An Bn} with eps_{01...} = +1,
/// summed over all (2n)! index orderings with their signs.
inline Rational epsilon_contraction(std::span<const AntisymTensor> tensors) {
  const std::size_t d = 2 * tensors.size();
  for (const auto& t : tensors)
    if (t.d() != d) throw std::invalid_argument("epsilon_contraction: tensors must have dimension 2 * count");
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  Rational sum;
  do {
    int sign = 1;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    Rational term(sign);
    for (std::size_t i = 0; i < tensors.size() && !term.is_zero(); ++i) term *= tensors[i](perm[2 * i], perm[2 * i + 1]);
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

/// Tr(Gamma_* {beta_1 ... beta_k}) by explicit enumeration of orderings.
inline ComplexRational chiral_symmetrized_trace(const GammaRep& rep, std::span<const AntisymTensor> tensors) {
  if (tensors.empty() || tensors.size() > kMaxBruteForceFactors)
    throw std::invalid_argument("chiral_symmetrized_trace: factor count out of range");
  const auto chi = chirality(rep);
  ExactMatrix<GaussInt> lead(rep.m(), rep.m());
  for (std::size_t r = 0; r < rep.m(); ++r)
    for (std::size_t c = 0; c < rep.m(); ++c) {
      const auto& e = chi(r, c);
      lead(r, c) = GaussInt(e.re.numerator(), e.im.numerator());
    }
  std::vector<ExactMatrix<GaussInt>> betas;
  const mpz_class den = detail::scaled_betas(rep, tensors, betas);
  const GaussInt sum = detail::sum_over_orderings(lead, betas);
  const mpz_class scale = den * factorial(static_cast<unsigned>(tensors.size()));
  return {Rational(sum.re, scale), Rational(sum.im, scale)};
}

struct PseudoscalarResult {
  ComplexRational gamma;
  unsigned trials_used = 0;
  unsigned trials_skipped = 0;  // epsilon contraction vanished
};

/// Largest n whose (2n)! epsilon sum runs without the slow flag.
inline constexpr unsigned kMaxPseudoscalarFastN = 3;

/// Ratio Tr(Gamma_* {beta_1 ... beta_n}) / (eps-contraction) in d = 2n,
/// required to be the same for every trial.
inline PseudoscalarResult pseudoscalar_ratio(unsigned n, unsigned trials, const SamplerConfig& cfg,
                                             const SignatureSpec& signature = SignatureSpec::minkowski(),
                                             bool allow_slow = false) {
  if (n < 2) throw std::invalid_argument("pseudoscalar_ratio: n must be at least 2");
  if (n > kMaxPseudoscalarFastN && !allow_slow)
    throw std::invalid_argument("pseudoscalar_ratio: n > " + std::to_string(kMaxPseudoscalarFastN) +
                                " needs the slow flag");
  if (n > kMaxVerifyN) throw std::invalid_argument("pseudoscalar_ratio: n must be at most " + std::to_string(kMaxVerifyN));
  if (trials == 0) throw std::invalid_argument("pseudoscalar_ratio: need at least one trial");
  const std::size_t d = 2 * static_cast<std::size_t>(n);
  const GammaRep rep = build_rep(signature.resolve(d));
  PseudoscalarResult out;
  std::optional<ComplexRational> ratio;
  for (unsigned trial = 0; trial < trials; ++trial) {
    std::vector<AntisymTensor> tensors;
    for (unsigned i = 0; i < n; ++i) tensors.push_back(random_antisym(d, cfg, static_cast<std::uint64_t>(trial) * n + i));
    const Rational eps = epsilon_contraction(tensors);
    if (eps.is_zero()) {
      ++out.trials_skipped;
      continue;
    }
    const ComplexRational r = chiral_symmetrized_trace(rep, tensors) / ComplexRational(eps);
    if (ratio && !(*ratio == r))
      throw std::logic_error("pseudoscalar_ratio: ratio " + r.str() + " in trial " + std::to_string(trial) +
                             " differs from " + ratio->str());
    ratio = r;
    ++out.trials_used;
  }
  if (!ratio) throw std::runtime_error("pseudoscalar_ratio: every trial had a vanishing epsilon contraction");
  out.gamma = *ratio;
  return out;
}

}  // namespace gammatrace
