#pragma once

// Alpha coefficients of the symmetrized Gamma_ab trace formula.
//
// general_algorithm: one p(n) x p(n) exact system per n, rows generated by
// random antisymmetric tensors in d = 2n.
// minimal_algorithm: only the single-part coefficient alpha_n is solved for
// (one equation in d = 2 with B^{01} = 1); every other coefficient follows
// from alpha_s = prod_j alpha_j^{mu_j} / mu_j!.

#include "gammatrace/clifford.hpp"
#include "gammatrace/contraction.hpp"
#include "gammatrace/matrix.hpp"
#include "gammatrace/partitions.hpp"
#include "gammatrace/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gammatrace {

/// Coefficients alpha_s for every partition s of n.
class AlphaTable {
 public:
  AlphaTable() = default;
  AlphaTable(unsigned n, std::map<Partition, Rational> entries) : n_(n), entries_(std::move(entries)) {
    if (entries_.size() != partition_count(n))
      throw std::invalid_argument("AlphaTable: expected " + std::to_string(partition_count(n)) + " entries for n = " +
                                  std::to_string(n) + ", got " + std::to_string(entries_.size()));
    for (const auto& [s, _] : entries_)
      if (s.total() != n) throw std::invalid_argument("AlphaTable: partition " + s.label() + " is not a partition of " + std::to_string(n));
  }

  [[nodiscard]] unsigned n() const { return n_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const Rational& at(const Partition& s) const {
    auto it = entries_.find(s);
    if (it == entries_.end()) throw std::out_of_range("AlphaTable: no entry for " + s.label());
    return it->second;
  }
  [[nodiscard]] const Rational& at(std::string_view label) const { return at(Partition::parse(label)); }

  /// Entries in canonical partition order.
  [[nodiscard]] const std::map<Partition, Rational>& entries() const { return entries_; }

  friend bool operator==(const AlphaTable&, const AlphaTable&) = default;

 private:
  unsigned n_ = 0;
  std::map<Partition, Rational> entries_;
};

/// alpha_1 .. alpha_N, the coefficients of the single-part partitions.
class ElementarySequence {
 public:
  ElementarySequence() = default;
  explicit ElementarySequence(std::vector<Rational> values) : values_(std::move(values)) {
    if (!values_.empty() && values_.front() != Rational(1))
      throw std::invalid_argument("ElementarySequence: alpha_1 must be 1, got " + values_.front().str());
  }

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  /// 1-based.
  [[nodiscard]] const Rational& alpha(unsigned j) const {
    if (j == 0 || j > values_.size())
      throw std::out_of_range("ElementarySequence: missing elementary coefficient alpha_" + std::to_string(j));
    return values_[j - 1];
  }
  [[nodiscard]] const std::vector<Rational>& values() const { return values_; }

  void push_back(Rational v) {
    if (values_.empty() && v != Rational(1))
      throw std::invalid_argument("ElementarySequence: alpha_1 must be 1, got " + v.str());
    values_.push_back(std::move(v));
  }

  /// First n entries.
  [[nodiscard]] ElementarySequence prefix(std::size_t n) const {
    if (n > values_.size()) throw std::out_of_range("ElementarySequence: prefix longer than sequence");
    return ElementarySequence(std::vector<Rational>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  friend bool operator==(const ElementarySequence&, const ElementarySequence&) = default;

 private:
  std::vector<Rational> values_;
};

struct SamplerConfig {
  std::uint64_t seed = 1;
  long entry_range = 9;
  unsigned max_resamples = 16;

  void validate() const {
    if (entry_range < 1) throw std::invalid_argument("SamplerConfig: entry_range must be >= 1");
    if (max_resamples < 1) throw std::invalid_argument("SamplerConfig: max_resamples must be >= 1");
  }
};

/// Antisymmetric tensor with integer entries uniform in [-range, range]
/// above the diagonal. Fully determined by (seed, draw).
inline AntisymTensor random_antisym(std::size_t d, const SamplerConfig& cfg, std::uint64_t draw) {
  cfg.validate();
  if (d < 2) throw std::invalid_argument("random_antisym: d must be at least 2");
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<long> dist(-cfg.entry_range, cfg.entry_range);
  AntisymTensor b(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = a + 1; c < d; ++c) b.set(a, c, Rational(dist(rng)));
  return b;
}

/// prod_j alpha_j^{mu_j} / mu_j!
inline Rational recurrence_alpha(const Partition& s, const ElementarySequence& elem) {
  Rational out(1);
  for (const auto& [j, mu] : to_frequency(s)) {
    if (j > elem.size())
      throw std::out_of_range("recurrence_alpha: missing elementary coefficient alpha_" + std::to_string(j) +
                              " for partition " + s.label());
    out *= pow(elem.alpha(j), mu);
    out /= Rational(factorial(mu));
  }
  return out;
}

/// Full table for n derived from the elementary coefficients.
inline AlphaTable table_from_elementary(unsigned n, const ElementarySequence& elem) {
  std::map<Partition, Rational> entries;
  for (auto& s : enumerate_partitions(n)) {
    Rational a = recurrence_alpha(s, elem);
    entries.emplace(std::move(s), std::move(a));
  }
  return AlphaTable(n, std::move(entries));
}

/// T = Tr(beta^{2n}) / ((2n)! m)
inline Rational normalized_power_trace(const GammaRep& rep, const AntisymTensor& b, unsigned n) {
  Rational t = beta_power_trace(rep, b, 2 * n);
  t /= Rational(mpz_class(factorial(2 * n) * static_cast<unsigned long>(rep.m())));
  return t;
}

/// The system sum_s Z_k^(s) alpha_s = T_k, one row per tensor; columns
/// follow enumerate_partitions(n).
struct LinearSystem {
  ExactMatrix<Rational> z;
  std::vector<Rational> t;
};

inline LinearSystem build_general_system(unsigned n, const GammaRep& rep, std::span<const AntisymTensor> tensors) {
  const auto parts = enumerate_partitions(n);
  if (tensors.size() != parts.size())
    throw std::invalid_argument("build_general_system: need " + std::to_string(parts.size()) + " tensors");
  LinearSystem sys{ExactMatrix<Rational>(parts.size(), parts.size()), std::vector<Rational>(parts.size())};
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    sys.t[k] = normalized_power_trace(rep, tensors[k], n);
    const auto traces = even_power_cycle_traces(rep.signature(), tensors[k], n);
    for (std::size_t c = 0; c < parts.size(); ++c) sys.z(k, c) = z_entry(parts[c], traces);
  }
  return sys;
}

struct GeneralOptions {
  SignatureSpec signature = SignatureSpec::minkowski();
  /// Defaults to 2n, the smallest dimension with a full-rank system.
  std::optional<std::size_t> dimension;
};

/// Persistent rank deficiency after every allowed redraw.
class SolverRankFailure : public RankDeficientError {
 public:
  SolverRankFailure(const RankDeficientError& last, unsigned attempts)
      : RankDeficientError(last), attempts_(attempts) {}
  [[nodiscard]] unsigned attempts() const { return attempts_; }
  [[nodiscard]] const char* what() const noexcept override { return "general algorithm: Z matrix stayed rank-deficient after all redraws"; }

 private:
  unsigned attempts_;
};

inline AlphaTable general_algorithm(unsigned n, const SamplerConfig& cfg, const GeneralOptions& opts = {}) {
  if (n == 0) throw std::invalid_argument("general_algorithm: n must be positive");
  cfg.validate();
  const std::size_t d = opts.dimension.value_or(2 * static_cast<std::size_t>(n));
  const GammaRep rep = build_rep(opts.signature.resolve(d));
  const auto parts = enumerate_partitions(n);
  const std::size_t p = parts.size();

  std::optional<RankDeficientError> last;
  for (unsigned attempt = 0; attempt < cfg.max_resamples; ++attempt) {
    std::vector<AntisymTensor> tensors;
    tensors.reserve(p);
    for (std::size_t k = 0; k < p; ++k) tensors.push_back(random_antisym(d, cfg, attempt * p + k));
    const auto sys = build_general_system(n, rep, tensors);
    try {
      auto x = solve_rational_system(sys.z, sys.t);
      std::map<Partition, Rational> entries;
      for (std::size_t c = 0; c < p; ++c) entries.emplace(parts[c], std::move(x[c]));
      return AlphaTable(n, std::move(entries));
    } catch (const RankDeficientError& e) {
      last = e;
    }
  }
  throw SolverRankFailure(*last, cfg.max_resamples);
}

/// Intermediate values of one minimal-algorithm step.
struct MinimalStep {
  unsigned n = 0;
  Rational t;             // Tr(beta^{2n}) / ((2n)! m)
  ZVector z;              // Z^(s) for all s of n
  Rational known_part;    // sum over non-elementary s of Z^(s) alpha_s
  Rational alpha;         // alpha_n
};

struct MinimalResult {
  ElementarySequence elementary;
  std::vector<MinimalStep> steps;

  /// Table for any n <= N, rebuilt from the elementary sequence.
  [[nodiscard]] AlphaTable table(unsigned n) const { return table_from_elementary(n, elementary); }
};

/// Fixed tensor of the minimal algorithm: d = 2, B^{01} = +1.
inline AntisymTensor minimal_tensor() {
  AntisymTensor b(2);
  b.set(0, 1, Rational(1));
  return b;
}

/// Continues an existing elementary sequence up to N. Passing an empty
/// sequence computes from scratch.
inline MinimalResult minimal_algorithm_from(ElementarySequence start, unsigned max_n,
                                            const SignatureSpec& signature = SignatureSpec::minkowski()) {
  if (max_n == 0) throw std::invalid_argument("minimal_algorithm: N must be positive");
  const Signature sig = signature.resolve(2);
  const GammaRep rep = build_rep(sig);
  const AntisymTensor b = minimal_tensor();
  const auto traces = even_power_cycle_traces(sig, b, max_n);

  MinimalResult out;
  out.elementary = start.size() > max_n ? start.prefix(max_n) : std::move(start);
  for (unsigned n = static_cast<unsigned>(out.elementary.size()) + 1; n <= max_n; ++n) {
    MinimalStep step;
    step.n = n;
    step.t = normalized_power_trace(rep, b, n);
    Rational z_n;
    for (auto& s : enumerate_partitions(n)) {
      Rational z = z_entry(s, traces);
      if (s.is_elementary()) z_n = z;
      else step.known_part += z * recurrence_alpha(s, out.elementary);
      step.z.emplace(std::move(s), std::move(z));
    }
    if (z_n.is_zero())
      throw std::logic_error("minimal_algorithm: Z^(n) vanished for the fixed d = 2 tensor at n = " + std::to_string(n));
    step.alpha = (step.t - step.known_part) / z_n;
    out.elementary.push_back(step.alpha);
    out.steps.push_back(std::move(step));
  }
  return out;
}

inline MinimalResult minimal_algorithm(unsigned max_n, const SignatureSpec& signature = SignatureSpec::minkowski()) {
  return minimal_algorithm_from(ElementarySequence{}, max_n, signature);
}

}  // namespace gammatrace
