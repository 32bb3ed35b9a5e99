#pragma once

// Closed index chains of antisymmetric tensors: <B_1 ... B_q>, the
// per-partition products Z^(s), and the full sum over distinct index
// assignments B^(s).

#include "gammatrace/clifford.hpp"
#include "gammatrace/matrix.hpp"
#include "gammatrace/partitions.hpp"
#include "gammatrace/rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gammatrace {

/// (B)^a_b = B^{ac} eta_{cb}: the second slot is lowered.
inline ExactMatrix<Rational> mixed_matrix(const Signature& sig, const AntisymTensor& b) {
  if (b.d() != sig.d())
    throw std::invalid_argument("mixed_matrix: tensor dimension " + std::to_string(b.d()) +
                                " does not match signature dimension " + std::to_string(sig.d()));
  ExactMatrix<Rational> m(sig.d(), sig.d());
  for (std::size_t a = 0; a < sig.d(); ++a)
    for (std::size_t c = 0; c < sig.d(); ++c)
      if (!b(a, c).is_zero()) m(a, c) = sig.eta(c) > 0 ? b(a, c) : -b(a, c);
  return m;
}

/// <B_1 ... B_q> = (B_1)^{c1}_{c2} (B_2)^{c2}_{c3} ... (B_q)^{cq}_{c1}
inline Rational cycle_trace(const Signature& sig, std::span<const AntisymTensor> tensors) {
  if (tensors.empty()) throw std::invalid_argument("cycle_trace: empty chain");
  ExactMatrix<Rational> acc = mixed_matrix(sig, tensors.front());
  if (tensors.size() == 1) return mat_trace(acc);
  for (std::size_t i = 1; i + 1 < tensors.size(); ++i) acc = mat_mul(acc, mixed_matrix(sig, tensors[i]));
  return trace_of_product(acc, mixed_matrix(sig, tensors.back()));
}

/// <B^q> for q = 2, 4, ..., 2*max_half, indexed by q/2 (entry 0 unused).
inline std::vector<Rational> even_power_cycle_traces(const Signature& sig, const AntisymTensor& b,
                                                     unsigned max_half) {
  std::vector<Rational> out(max_half + 1);
  if (max_half == 0) return out;
  const auto m = mixed_matrix(sig, b);
  const auto m2 = mat_mul(m, m);
  ExactMatrix<Rational> pw = m2;
  out[1] = mat_trace(pw);
  for (unsigned j = 2; j <= max_half; ++j) {
    if (j == max_half) {
      out[j] = trace_of_product(pw, m2);
      break;
    }
    pw = mat_mul(pw, m2);
    out[j] = mat_trace(pw);
  }
  return out;
}

/// Z^(s) = prod_j <B^{2 s_j}> from a precomputed table of even cycle traces.
inline Rational z_entry(const Partition& s, const std::vector<Rational>& even_traces) {
  Rational z(1);
  for (unsigned part : s.parts()) z *= even_traces.at(part);
  return z;
}

using ZVector = std::map<Partition, Rational>;

/// Z^(s) for every partition s of n.
inline ZVector z_vector(const Signature& sig, const AntisymTensor& b, unsigned n) {
  const auto traces = even_power_cycle_traces(sig, b, n);
  ZVector out;
  for (auto& s : enumerate_partitions(n)) {
    Rational z = z_entry(s, traces);
    out.emplace(std::move(s), std::move(z));
  }
  return out;
}

/// Largest n for which contraction_sum_Bs will enumerate (2n)! terms.
inline constexpr unsigned kMaxContractionSumN = 4;

/// B^(s): sum over all orderings i_1..i_{2n} of the 2n tensors of the
/// product of r cycle traces, block j taking the next 2 s_j tensors.
/// Enumerates every ordering; the running block products are reused
/// between consecutive permutations.
inline Rational contraction_sum_Bs(const Signature& sig, const Partition& s,
                                   std::span<const AntisymTensor> tensors) {
  const unsigned n = s.total();
  if (n == 0) throw std::invalid_argument("contraction_sum_Bs: empty partition");
  if (n > kMaxContractionSumN)
    throw std::invalid_argument("contraction_sum_Bs: n = " + std::to_string(n) + " exceeds the enumeration limit " +
                                std::to_string(kMaxContractionSumN));
  const std::size_t k = 2 * static_cast<std::size_t>(n);
  if (tensors.size() != k)
    throw std::invalid_argument("contraction_sum_Bs: expected " + std::to_string(k) + " tensors, got " +
                                std::to_string(tensors.size()));

  // Integer images of the mixed matrices: M_i = N_i / D_i.
  std::vector<ExactMatrix<mpz_class>> ints;
  mpz_class total_den = 1;
  for (const auto& t : tensors) {
    const auto m = mixed_matrix(sig, t);
    const mpz_class den = t.common_denominator();
    ExactMatrix<mpz_class> nm(sig.d(), sig.d());
    for (std::size_t a = 0; a < sig.d(); ++a)
      for (std::size_t c = 0; c < sig.d(); ++c) nm(a, c) = m(a, c).numerator() * (den / m(a, c).denominator());
    ints.push_back(std::move(nm));
    total_den *= den;
  }

  // block_end[pos] is true when position pos closes a cycle.
  std::vector<char> block_start(k, 0), block_end(k, 0);
  {
    std::size_t pos = 0;
    for (unsigned part : s.parts()) {
      block_start[pos] = 1;
      pos += 2 * part;
      block_end[pos - 1] = 1;
    }
  }

  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> prev(k, k);  // sentinel forces full evaluation first

  // running[pos]: product within the current block up to pos (not formed at block ends)
  // closed[pos]: product of cycle traces of all blocks closed at or before pos
  std::vector<ExactMatrix<mpz_class>> running(k);
  std::vector<mpz_class> closed(k);
  mpz_class sum = 0;

  do {
    std::size_t first = 0;
    while (first < k && perm[first] == prev[first]) ++first;
    for (std::size_t pos = first; pos < k; ++pos) {
      const auto& cur = ints[perm[pos]];
      const mpz_class before = pos == 0 ? mpz_class(1) : closed[pos - 1];
      if (block_end[pos]) {
        const mpz_class tr = block_start[pos] ? mat_trace(cur) : trace_of_product(running[pos - 1], cur);
        closed[pos] = before * tr;
      } else {
        running[pos] = block_start[pos] ? cur : mat_mul(running[pos - 1], cur);
        closed[pos] = before;
      }
    }
    sum += closed[k - 1];
    prev = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));

  return Rational(sum, total_den);
}

}  // namespace gammatrace
