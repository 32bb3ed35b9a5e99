#pragma once

// Integer partitions of n: enumeration in table order, frequency
// representation, exact counting, and the Hardy-Ramanujan estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gammatrace {

/// Parts above this are rejected by Partition::parse.
inline constexpr unsigned kMaxPartLabelValue = 1000000;

class Partition {
 public:
  Partition() = default;

  /// Takes parts in any order; stores them non-increasing.
  explicit Partition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
    for (unsigned p : parts_)
      if (p == 0) throw std::invalid_argument("Partition: parts must be positive");
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
  }

  /// Rebuilds the parts list from a j -> multiplicity map.
  static Partition from_frequency(const std::map<unsigned, unsigned>& mult) {
    std::vector<unsigned> parts;
    for (auto it = mult.rbegin(); it != mult.rend(); ++it) parts.insert(parts.end(), it->second, it->first);
    return Partition(std::move(parts));
  }

  /// Parses "3+1+1".
  static Partition parse(std::string_view label) {
    std::vector<unsigned> parts;
    std::size_t pos = 0;
    while (pos <= label.size()) {
      auto next = label.find('+', pos);
      if (next == std::string_view::npos) next = label.size();
      auto tok = label.substr(pos, next - pos);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      if (tok.empty()) throw std::invalid_argument("Partition: malformed label '" + std::string(label) + "'");
      unsigned v = 0;
      for (char c : tok) {
        if (c < '0' || c > '9') throw std::invalid_argument("Partition: malformed label '" + std::string(label) + "'");
        v = v * 10 + static_cast<unsigned>(c - '0');
        if (v > kMaxPartLabelValue) throw std::invalid_argument("Partition: part too large in '" + std::string(label) + "'");
      }
      if (v == 0) throw std::invalid_argument("Partition: zero part in '" + std::string(label) + "'");
      parts.push_back(v);
      pos = next + 1;
    }
    return Partition(std::move(parts));
  }

  [[nodiscard]] const std::vector<unsigned>& parts() const { return parts_; }
  [[nodiscard]] std::size_t length() const { return parts_.size(); }
  [[nodiscard]] unsigned total() const {
    unsigned s = 0;
    for (unsigned p : parts_) s += p;
    return s;
  }
  [[nodiscard]] bool is_elementary() const { return parts_.size() == 1; }

  [[nodiscard]] std::string label() const {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) out += '+';
      out += std::to_string(parts_[i]);
    }
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  /// Canonical order: lexicographic on the non-increasing parts list, so
  /// 1+1+...+1 comes first and (n) last.
  friend bool operator<(const Partition& a, const Partition& b) { return a.parts_ < b.parts_; }

 private:
  std::vector<unsigned> parts_;
};

/// j -> multiplicity of j; zero multiplicities are omitted.
inline std::map<unsigned, unsigned> to_frequency(const Partition& s) {
  std::map<unsigned, unsigned> m;
  for (unsigned p : s.parts()) ++m[p];
  return m;
}

namespace detail {
inline void enumerate_into(unsigned remaining, unsigned max_part, std::vector<unsigned>& prefix,
                           std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  const unsigned top = std::min(remaining, max_part);
  for (unsigned first = 1; first <= top; ++first) {
    prefix.push_back(first);
    enumerate_into(remaining - first, first, prefix, out);
    prefix.pop_back();
  }
}
}  // namespace detail

/// All partitions of n in canonical order. n = 0 yields the single empty
/// partition.
inline std::vector<Partition> enumerate_partitions(unsigned n) {
  std::vector<Partition> out;
  std::vector<unsigned> prefix;
  detail::enumerate_into(n, n, prefix, out);
  return out;
}

/// p(n) is returned as a 64-bit value; p(400) ~ 6.9e18 is the last safe row.
inline constexpr unsigned kMaxPartitionCountN = 400;

/// p(n) via Euler's pentagonal-number recurrence.
inline std::uint64_t partition_count(unsigned n) {
  if (n > kMaxPartitionCountN) throw std::out_of_range("partition_count: n too large for 64-bit result");
  // Partial sums of the recurrence overshoot p(i), hence the wider type.
  std::vector<__int128> p(n + 1, 0);
  p[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    __int128 acc = 0;
    for (std::int64_t k = 1;; ++k) {
      const std::int64_t g1 = k * (3 * k - 1) / 2;
      if (g1 > static_cast<std::int64_t>(i)) break;
      const std::int64_t sign = (k % 2 == 1) ? 1 : -1;
      acc += sign * p[i - g1];
      const std::int64_t g2 = k * (3 * k + 1) / 2;
      if (g2 <= static_cast<std::int64_t>(i)) acc += sign * p[i - g2];
    }
    p[i] = acc;
  }
  return static_cast<std::uint64_t>(p[n]);
}

/// Hardy-Ramanujan leading asymptotic, exp(pi*sqrt(2n/3)) / (4n*sqrt(3)).
inline double partition_count_estimate(unsigned n) {
  if (n == 0) throw std::invalid_argument("partition_count_estimate: n must be positive");
  const double x = static_cast<double>(n);
  return std::exp(std::numbers::pi * std::sqrt(2.0 * x / 3.0)) / (4.0 * x * std::sqrt(3.0));
}

}  // namespace gammatrace
