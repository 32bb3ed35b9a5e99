#pragma once

// On-disk coefficient cache.
//
//   elementary file:  "# gammatrace elementary v1", then "j<TAB>num/den" for j = 1, 2, ...
//   table file:       "# gammatrace alpha v1 n=<n>", then "label<TAB>num/den" per partition
//
// Stores write a sibling temporary and rename it into place.

#include "gammatrace/partitions.hpp"
#include "gammatrace/rational.hpp"
#include "gammatrace/solver.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include <unistd.h>

namespace gammatrace {

inline constexpr std::string_view kElementaryHeader = "# gammatrace elementary v1";
inline constexpr std::string_view kTableHeaderPrefix = "# gammatrace alpha v1 n=";
inline constexpr std::string_view kCacheDirEnv = "GAMMATRACE_CACHE_DIR";
inline constexpr std::string_view kElementaryFileName = "elementary.tsv";

class CacheError : public std::runtime_error {
 public:
  CacheError(const std::filesystem::path& path, std::size_t line, const std::string& what)
      : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

/// Splits "key<TAB>value"; rejects anything else.
inline std::pair<std::string_view, std::string_view> split_tab(const std::filesystem::path& path, std::size_t lineno,
                                                               std::string_view line) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos)
    throw CacheError(path, lineno, "expected exactly two tab-separated fields");
  return {line.substr(0, tab), line.substr(tab + 1)};
}

inline Rational parse_value(const std::filesystem::path& path, std::size_t lineno, std::string_view text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw CacheError(path, lineno, e.what());
  }
}

inline std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace detail

inline void store_elementary(const std::filesystem::path& path, const ElementarySequence& seq) {
  std::ostringstream os;
  os << kElementaryHeader << '\n';
  for (unsigned j = 1; j <= seq.size(); ++j) os << j << '\t' << seq.alpha(j).str() << '\n';
  detail::atomic_write(path, os.str());
}

/// std::nullopt when the file does not exist (cold cache). A file that
/// exists but does not parse is an error, never a silent miss.
inline std::optional<ElementarySequence> load_elementary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    throw CacheError(path, 0, "cannot open cache file");
  }
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || detail::strip_cr(line) != kElementaryHeader)
    throw CacheError(path, 1, "missing or unknown header (expected '" + std::string(kElementaryHeader) + "')");
  ++lineno;
  std::vector<Rational> values;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    auto [key, value] = detail::split_tab(path, lineno, line);
    const std::string expected = std::to_string(values.size() + 1);
    if (key != expected)
      throw CacheError(path, lineno, "expected index " + expected + ", found '" + std::string(key) + "'");
    values.push_back(detail::parse_value(path, lineno, value));
  }
  if (!values.empty() && values.front() != Rational(1)) throw CacheError(path, 2, "alpha_1 must be 1");
  return ElementarySequence(std::move(values));
}

inline void store_table(const std::filesystem::path& path, const AlphaTable& table) {
  std::ostringstream os;
  os << kTableHeaderPrefix << table.n() << '\n';
  for (const auto& [s, a] : table.entries()) os << s.label() << '\t' << a.str() << '\n';
  detail::atomic_write(path, os.str());
}

inline std::optional<AlphaTable> load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    throw CacheError(path, 0, "cannot open cache file");
  }
  std::string line;
  if (!std::getline(in, line)) throw CacheError(path, 1, "empty file");
  line = detail::strip_cr(line);
  if (!line.starts_with(kTableHeaderPrefix))
    throw CacheError(path, 1, "missing or unknown header (expected '" + std::string(kTableHeaderPrefix) + "<n>')");
  unsigned n = 0;
  try {
    std::size_t used = 0;
    const std::string rest = line.substr(kTableHeaderPrefix.size());
    const unsigned long v = std::stoul(rest, &used);
    if (used != rest.size() || v == 0 || v > kMaxPartitionCountN) throw std::invalid_argument("bad n");
    n = static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw CacheError(path, 1, "header has an invalid n");
  }
  std::map<Partition, Rational> entries;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    auto [key, value] = detail::split_tab(path, lineno, line);
    Partition s;
    try {
      s = Partition::parse(key);
    } catch (const std::exception& e) {
      throw CacheError(path, lineno, e.what());
    }
    if (s.total() != n) throw CacheError(path, lineno, s.label() + " is not a partition of " + std::to_string(n));
    if (entries.contains(s)) throw CacheError(path, lineno, "duplicate entry for " + s.label());
    entries.emplace(std::move(s), detail::parse_value(path, lineno, value));
  }
  if (entries.size() != partition_count(n))
    throw CacheError(path, lineno, "expected " + std::to_string(partition_count(n)) + " entries, found " +
                                       std::to_string(entries.size()));
  return AlphaTable(n, std::move(entries));
}

/// Cache directory: explicit argument, else $GAMMATRACE_CACHE_DIR, else
/// $XDG_CACHE_HOME/gammatrace, else ~/.cache/gammatrace.
inline std::filesystem::path resolve_cache_dir(const std::optional<std::filesystem::path>& explicit_dir) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv(std::string(kCacheDirEnv).c_str()); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "gammatrace";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "gammatrace";
  return std::filesystem::path(".gammatrace-cache");
}

/// Elementary coefficients up to N, taken from the cache where possible and
/// extended (and written back) otherwise.
inline ElementarySequence cached_elementary(const std::filesystem::path& cache_dir, unsigned max_n) {
  const auto file = cache_dir / kElementaryFileName;
  ElementarySequence have = load_elementary(file).value_or(ElementarySequence{});
  if (have.size() >= max_n) return have.prefix(max_n);
  auto result = minimal_algorithm_from(std::move(have), max_n);
  store_elementary(file, result.elementary);
  return result.elementary;
}

}  // namespace gammatrace
