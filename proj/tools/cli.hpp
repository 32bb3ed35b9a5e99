#pragma once

// Command-line front end. `run` takes the arguments without the program
// name and writes to the given streams, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 usage, 2 solver or cache failure, 3 mismatch.

#include "gammatrace/gammatrace.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace gammatrace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitMismatch = 3;

inline constexpr unsigned kDefaultGeneralLimit = 7;
inline constexpr unsigned kDefaultMinimalLimit = 60;
inline constexpr std::size_t kMaxGammaDimension = 14;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string seed = "1";
  std::string signature = "minkowski";
  std::optional<std::string> format;
  std::optional<std::string> cache_dir;
  std::optional<std::string> out;
};

struct AlphaOptions {
  unsigned n = 0;
  std::string method = "minimal";
  std::optional<std::size_t> dimension;
  std::optional<unsigned> limit;
  bool no_cache = false;
};

struct VerifyOptions {
  unsigned n = 0;
  unsigned trials = 3;
  bool timing = false;
};

struct PseudoscalarOptions {
  unsigned n = 2;
  unsigned trials = 5;
  bool slow = false;
};

struct BenchOptions {
  unsigned max_n = 7;
  std::vector<std::string> methods{"general", "minimal"};
  unsigned general_limit = kDefaultGeneralLimit;
  unsigned minimal_limit = kDefaultMinimalLimit;
  double time_limit = 600.0;
};

namespace detail {

inline std::uint64_t resolve_seed(const std::string& text, std::ostream& err) {
  if (text == "random") {
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << s << '\n';
    return s;
  }
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError("--seed must be a non-negative integer or 'random', got '" + text + "'");
  }
}

inline SignatureSpec resolve_signature(const std::string& text) {
  try {
    return SignatureSpec::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline std::string format_or(const GlobalOptions& g, const std::string& fallback,
                             std::initializer_list<std::string_view> allowed) {
  const std::string f = g.format.value_or(fallback);
  for (auto a : allowed)
    if (f == a) return f;
  std::string list;
  for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw UsageError("--format '" + f + "' is not supported here (" + list + ")");
}

inline SamplerConfig sampler(const GlobalOptions& g, std::ostream& err) {
  SamplerConfig cfg;
  cfg.seed = resolve_seed(g.seed, err);
  return cfg;
}

inline AlphaTable compute_table(const AlphaOptions& a, const GlobalOptions& g, std::ostream& err) {
  if (a.n == 0) throw UsageError("--n must be at least 1");
  const SignatureSpec sig = resolve_signature(g.signature);
  if (a.method == "general") {
    const unsigned limit = a.limit.value_or(kDefaultGeneralLimit);
    if (a.n > limit)
      throw UsageError("general method is limited to n <= " + std::to_string(limit) + " (raise with --limit)");
    GeneralOptions opts;
    opts.signature = sig;
    opts.dimension = a.dimension;
    if (a.dimension) static_cast<void>(sig.resolve(*a.dimension));
    else static_cast<void>(sig.resolve(2 * static_cast<std::size_t>(a.n)));
    return general_algorithm(a.n, sampler(g, err), opts);
  }
  if (a.method == "minimal") {
    if (a.dimension) throw UsageError("--d applies only to the general method");
    const unsigned limit = a.limit.value_or(kDefaultMinimalLimit);
    if (a.n > limit)
      throw UsageError("minimal method is limited to n <= " + std::to_string(limit) + " (raise with --limit)");
    static_cast<void>(sig.resolve(2));
    if (a.no_cache) return minimal_algorithm(a.n, sig).table(a.n);
    const auto dir = resolve_cache_dir(g.cache_dir ? std::optional<std::filesystem::path>(*g.cache_dir) : std::nullopt);
    return table_from_elementary(a.n, cached_elementary(dir, a.n));
  }
  throw UsageError("--method must be 'general' or 'minimal'");
}

inline std::string fraction_pair(const ComplexRational& z) {
  return z.re.str() + "," + z.im.str();
}

inline std::string cmd_gamma(std::size_t d, const GlobalOptions& g) {
  format_or(g, "json", {"json"});
  if (d == 0 || d > kMaxGammaDimension)
    throw UsageError("--d must be in 1.." + std::to_string(kMaxGammaDimension));
  const GammaRep rep = build_rep(resolve_signature(g.signature).resolve(d));
  nlohmann::ordered_json j;
  j["d"] = d;
  j["eta"] = rep.signature().entries();
  j["m"] = rep.m();
  auto gammas = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < d; ++a) {
    const auto mat = rep.gamma(a);
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t c = 0; c < mat.cols(); ++c) row.push_back({mat(r, c).re.str(), mat(r, c).im.str()});
      rows.push_back(std::move(row));
    }
    gammas.push_back(std::move(rows));
  }
  j["gammas"] = std::move(gammas);
  return j.dump() + "\n";
}

inline int cmd_verify(const VerifyOptions& v, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  format_or(g, "json", {"json"});
  if (v.n == 0 || v.n > kMaxVerifyN)
    throw UsageError("--n must be in 1.." + std::to_string(kMaxVerifyN) + " (brute force grows as (2n)!)");
  if (v.trials == 0) throw UsageError("--trials must be at least 1");
  const SignatureSpec sig = resolve_signature(g.signature);
  static_cast<void>(sig.resolve(2 * static_cast<std::size_t>(v.n)));
  const SamplerConfig cfg = sampler(g, err);
  const AlphaTable table = minimal_algorithm(v.n).table(v.n);
  bool all = true;
  for (const auto& r : verify_master_formula(v.n, v.trials, cfg, table, sig)) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["d"] = r.d;
    j["signature"] = r.signature;
    j["seed"] = r.seed;
    j["trial"] = r.trial;
    j["lhs"] = r.lhs.str();
    j["rhs"] = r.rhs.str();
    j["match"] = r.match;
    if (v.timing) j["elapsed_ms"] = std::chrono::duration<double, std::milli>(r.elapsed).count();
    out << j.dump() << '\n';
    all = all && r.match;
  }
  return all ? kExitOk : kExitMismatch;
}

inline int cmd_pseudoscalar(const PseudoscalarOptions& p, const GlobalOptions& g, std::ostream& out,
                            std::ostream& err) {
  const std::string fmt = format_or(g, "json", {"json", "text"});
  if (p.n < 2 || p.n > kMaxVerifyN) throw UsageError("--n must be in 2.." + std::to_string(kMaxVerifyN));
  if (p.n > kMaxPseudoscalarFastN && !p.slow)
    throw UsageError("--n " + std::to_string(p.n) + " needs --slow");
  if (p.trials == 0) throw UsageError("--trials must be at least 1");
  const SignatureSpec sig = resolve_signature(g.signature);
  const std::size_t d = 2 * static_cast<std::size_t>(p.n);
  const std::string sig_str = sig.resolve(d).str();
  const auto cfg = sampler(g, err);
  const auto res = pseudoscalar_ratio(p.n, p.trials, cfg, sig, p.slow);
  if (fmt == "text") {
    out << "gamma = " << res.gamma.str() << "  (n = " << p.n << ", d = " << d << ", " << res.trials_used
        << " trials used, " << res.trials_skipped << " skipped)\n";
    return kExitOk;
  }
  nlohmann::ordered_json j;
  j["n"] = p.n;
  j["d"] = d;
  j["signature"] = sig_str;
  j["seed"] = cfg.seed;
  j["gamma"] = res.gamma.str();
  j["trials_used"] = res.trials_used;
  j["trials_skipped"] = res.trials_skipped;
  out << j.dump() << '\n';
  return kExitOk;
}

inline int cmd_bench(const BenchOptions& b, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  format_or(g, "csv", {"csv"});
  if (b.max_n == 0 || b.max_n > kDefaultMinimalLimit)
    throw UsageError("--max-n must be in 1.." + std::to_string(kDefaultMinimalLimit));
  for (const auto& m : b.methods)
    if (m != "general" && m != "minimal") throw UsageError("unknown method '" + m + "'");
  const SamplerConfig cfg = sampler(g, err);
  const SignatureSpec sig = resolve_signature(g.signature);
  std::map<std::string, bool> exhausted;
  out << "n,p,method,seconds,status\n";
  for (unsigned n = 1; n <= b.max_n; ++n) {
    for (const auto& m : b.methods) {
      const unsigned limit = m == "general" ? b.general_limit : b.minimal_limit;
      out << n << ',' << partition_count(n) << ',' << m << ',';
      if (n > limit || exhausted[m]) {
        out << ",crashed/limit\n" << std::flush;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      std::string status = "ok";
      try {
        if (m == "general") {
          GeneralOptions opts;
          opts.signature = sig;
          static_cast<void>(general_algorithm(n, cfg, opts));
        } else {
          static_cast<void>(minimal_algorithm(n, sig));
        }
      } catch (const std::exception& e) {
        err << "bench: " << m << " n = " << n << ": " << e.what() << '\n';
        status = "crashed/limit";
        exhausted[m] = true;
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (secs > b.time_limit) {
        status = "crashed/limit";
        exhausted[m] = true;
      }
      std::ostringstream s;
      s.precision(6);
      s << std::fixed << secs;
      out << s.str() << ',' << status << '\n' << std::flush;
    }
  }
  return kExitOk;
}

inline int cmd_cache(const std::string& action, const GlobalOptions& g, std::ostream& out) {
  const auto dir = resolve_cache_dir(g.cache_dir ? std::optional<std::filesystem::path>(*g.cache_dir) : std::nullopt);
  namespace fs = std::filesystem;
  if (action == "inspect") {
    nlohmann::ordered_json j;
    j["dir"] = dir.string();
    const auto seq = load_elementary(dir / kElementaryFileName);
    j["elementary"] = seq ? seq->size() : 0;
    if (seq && !seq->empty()) j["last"] = seq->alpha(static_cast<unsigned>(seq->size())).str();
    out << j.dump() << '\n';
    return kExitOk;
  }
  if (action == "clear") {
    std::size_t removed = 0;
    if (fs::is_directory(dir))
      for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.starts_with(kElementaryFileName) || (name.starts_with("alpha_") && name.find(".tsv") != std::string::npos))
          removed += fs::remove(entry.path()) ? 1 : 0;
      }
    out << "removed " << removed << " file(s) from " << dir.string() << '\n';
    return kExitOk;
  }
  throw UsageError("cache action must be 'inspect' or 'clear'");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact trace coefficients for symmetrized products of Gamma_ab matrices", "gammatrace"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "integer seed or 'random'")->capture_default_str();
  app.add_option("--signature", g.signature, "minkowski, euclidean or an explicit pattern like -+++")
      ->capture_default_str();
  app.add_option("--format", g.format, "output format (depends on subcommand)");
  app.add_option("--cache-dir", g.cache_dir, "coefficient cache directory")->envname(std::string(kCacheDirEnv));
  app.add_option("--out", g.out, "write output to this file instead of stdout");

  AlphaOptions alpha;
  auto add_table_options = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--n", alpha.n, "order n (2n factors)")->required();
    sub->add_option("--method", alpha.method, "general or minimal")->capture_default_str();
    sub->add_option("--d", alpha.dimension, "dimension for the general method (default 2n)");
    sub->add_option("--limit", alpha.limit, "raise the per-method n limit");
    sub->add_flag("--no-cache", alpha.no_cache, "do not read or write the coefficient cache");
  };
  auto* alpha_cmd = app.add_subcommand("alpha", "print the coefficient table for one n (text, csv, json)");
  add_table_options(alpha_cmd);
  auto* formula_cmd = app.add_subcommand("formula", "print the closed trace formula (text, latex, json)");
  add_table_options(formula_cmd);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "compare the formula with brute-force traces (JSON per trial)");
  verify_cmd->fallthrough();
  verify_cmd->add_option("--n", verify.n, "order n, at most 4")->required();
  verify_cmd->add_option("--trials", verify.trials)->capture_default_str();
  verify_cmd->add_flag("--timing", verify.timing, "include elapsed_ms (breaks byte-identical output)");

  std::size_t gamma_d = 4;
  auto* gamma_cmd = app.add_subcommand("gamma", "dump a Gamma-matrix representation as JSON");
  gamma_cmd->fallthrough();
  gamma_cmd->add_option("--d", gamma_d)->capture_default_str();

  PseudoscalarOptions pseudo;
  auto* pseudo_cmd = app.add_subcommand("pseudoscalar", "chiral trace over epsilon contraction");
  pseudo_cmd->fallthrough();
  pseudo_cmd->add_option("--n", pseudo.n)->capture_default_str();
  pseudo_cmd->add_option("--trials", pseudo.trials)->capture_default_str();
  pseudo_cmd->add_flag("--slow", pseudo.slow, "allow n = 4");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "time both algorithms per n (CSV)");
  bench_cmd->fallthrough();
  bench_cmd->add_option("--max-n", bench.max_n)->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--general-limit", bench.general_limit)->capture_default_str();
  bench_cmd->add_option("--minimal-limit", bench.minimal_limit)->capture_default_str();
  bench_cmd->add_option("--time-limit", bench.time_limit, "seconds per cell before a method is marked exhausted")
      ->capture_default_str();

  std::string cache_action;
  auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the coefficient cache");
  cache_cmd->fallthrough();
  cache_cmd->add_option("action", cache_action, "inspect or clear")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::ostringstream buffer;
  std::ostream& sink = g.out ? static_cast<std::ostream&>(buffer) : out;
  int code = kExitOk;
  try {
    if (*alpha_cmd) {
      const auto fmt = parse_table_format(detail::format_or(g, "text", {"text", "csv", "json"}));
      sink << render_alpha_table(detail::compute_table(alpha, g, err), fmt);
    } else if (*formula_cmd) {
      const auto fmt = parse_formula_format(detail::format_or(g, "text", {"text", "latex", "json"}));
      sink << render_formula(alpha.n, detail::compute_table(alpha, g, err), fmt);
    } else if (*verify_cmd) {
      code = detail::cmd_verify(verify, g, sink, err);
    } else if (*gamma_cmd) {
      sink << detail::cmd_gamma(gamma_d, g);
    } else if (*pseudo_cmd) {
      code = detail::cmd_pseudoscalar(pseudo, g, sink, err);
    } else if (*bench_cmd) {
      code = detail::cmd_bench(bench, g, sink, err);
    } else if (*cache_cmd) {
      code = detail::cmd_cache(cache_action, g, sink);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const SolverRankFailure& e) {
    err << "error: " << e.what() << " (rank " << e.rank() << " after " << e.attempts() << " draws)\n";
    return kExitSolver;
  } catch (const CacheError& e) {
    err << "error: cache: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::logic_error& e) {
    // inconsistent pseudoscalar ratios, complex traces
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }

  if (g.out) {
    std::ofstream file(*g.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write " << *g.out << '\n';
      return kExitUsage;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace gammatrace::cli
