#pragma once

// Rendering of alpha tables (text, csv, json) and of the closed trace
// formula (text, latex, json).

#include "gammatrace/partitions.hpp"
#include "gammatrace/rational.hpp"
#include "gammatrace/solver.hpp"

#include <json.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gammatrace {

enum class TableFormat { kText, kCsv, kJson };
enum class FormulaFormat { kText, kLatex, kJson };

inline TableFormat parse_table_format(std::string_view s) {
  if (s == "text") return TableFormat::kText;
  if (s == "csv") return TableFormat::kCsv;
  if (s == "json") return TableFormat::kJson;
  throw std::invalid_argument("unknown table format '" + std::string(s) + "' (text, csv, json)");
}

inline FormulaFormat parse_formula_format(std::string_view s) {
  if (s == "text") return FormulaFormat::kText;
  if (s == "latex") return FormulaFormat::kLatex;
  if (s == "json") return FormulaFormat::kJson;
  throw std::invalid_argument("unknown formula format '" + std::string(s) + "' (text, latex, json)");
}

/// One row per partition in canonical order.
///   text: "<label>  <alpha>"
///   csv:  header "n,partition,numerator,denominator"
///   json: [{"partition": ..., "alpha": ...}, ...]
inline std::string render_alpha_table(const AlphaTable& table, TableFormat format) {
  std::ostringstream os;
  switch (format) {
    case TableFormat::kText:
      for (const auto& [s, a] : table.entries()) os << s.label() << "  " << a.str() << '\n';
      break;
    case TableFormat::kCsv:
      os << "n,partition,numerator,denominator\n";
      for (const auto& [s, a] : table.entries())
        os << table.n() << ',' << s.label() << ',' << a.numerator().get_str() << ',' << a.denominator().get_str()
           << '\n';
      break;
    case TableFormat::kJson: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& [s, a] : table.entries()) arr.push_back({{"partition", s.label()}, {"alpha", a.str()}});
      os << arr.dump() << '\n';
      break;
    }
  }
  return os.str();
}

/// Inverse of the csv rendering. Rows for several n are allowed; the
/// result is keyed by n.
inline std::map<unsigned, AlphaTable> parse_alpha_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::map<unsigned, std::map<Partition, Rational>> rows;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("alpha csv line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line == "n,partition,numerator,denominator") continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 4) fail("expected 4 fields");
    unsigned n = 0;
    try {
      n = static_cast<unsigned>(std::stoul(fields[0]));
      const Partition s = Partition::parse(fields[1]);
      if (s.total() != n) fail(fields[1] + " is not a partition of " + fields[0]);
      Rational a = Rational::parse(fields[2] + "/" + fields[3]);
      if (!rows[n].emplace(s, std::move(a)).second) fail("duplicate partition " + fields[1]);
    } catch (const std::invalid_argument& e) {
      if (std::string_view(e.what()).starts_with("alpha csv")) throw;
      fail(e.what());
    } catch (const std::domain_error& e) {
      fail(e.what());
    }
  }
  std::map<unsigned, AlphaTable> out;
  for (auto& [n, entries] : rows) out.emplace(n, AlphaTable(n, std::move(entries)));
  return out;
}

struct FormulaTerm {
  Partition partition;
  Rational alpha;
  std::vector<unsigned> blocks;  // cycle lengths 2 s_j
};

/// Right-hand side of Tr{beta_1 ... beta_2n} = m sum_s alpha_s B^(s). Terms
/// run from the single cycle (n) down to 1+1+...+1.
struct FormulaDocument {
  unsigned n = 0;
  std::vector<FormulaTerm> terms;
};

inline FormulaDocument make_formula(unsigned n, const AlphaTable& table) {
  if (table.n() != n)
    throw std::invalid_argument("render_formula: table is for n = " + std::to_string(table.n()) + ", not " +
                                std::to_string(n));
  FormulaDocument doc{n, {}};
  for (auto it = table.entries().rbegin(); it != table.entries().rend(); ++it) {
    FormulaTerm t{it->first, it->second, {}};
    for (unsigned part : it->first.parts()) t.blocks.push_back(2 * part);
    doc.terms.push_back(std::move(t));
  }
  return doc;
}

namespace detail {

/// Index names: i j for n = 1, i j k l for n = 2, i1 .. i2n beyond.
inline std::vector<std::string> index_names(unsigned n, bool latex) {
  std::vector<std::string> out;
  if (n <= 2) {
    static constexpr std::string_view letters = "ijkl";
    for (unsigned i = 0; i < 2 * n; ++i) out.emplace_back(1, letters[i]);
    return out;
  }
  for (unsigned i = 1; i <= 2 * n; ++i)
    out.push_back(latex ? "i_{" + std::to_string(i) + "}" : "i" + std::to_string(i));
  return out;
}

inline std::string latex_number(const Rational& a) {
  const std::string sign = a.sign() < 0 ? "-" : "";
  const mpz_class num = abs(a.numerator());
  if (a.is_integer()) return sign + num.get_str();
  return sign + "\\frac{" + num.get_str() + "}{" + a.denominator().get_str() + "}";
}

}  // namespace detail

inline std::string render_formula(unsigned n, const AlphaTable& table, FormulaFormat format) {
  const FormulaDocument doc = make_formula(n, table);
  std::ostringstream os;
  switch (format) {
    case FormulaFormat::kText: {
      const auto idx = detail::index_names(n, false);
      os << "m * Σ_{⟨";
      if (n <= 2) {
        for (const auto& i : idx) os << i;
      } else {
        os << idx.front() << "···" << idx.back();
      }
      os << "⟩} [ ";
      for (std::size_t t = 0; t < doc.terms.size(); ++t) {
        if (t) os << " + ";
        os << '(' << doc.terms[t].alpha.str() << ")·";
        std::size_t pos = 0;
        for (unsigned len : doc.terms[t].blocks) {
          os << '<';
          for (unsigned q = 0; q < len; ++q) os << (q ? " " : "") << "B_" << idx[pos++];
          os << '>';
        }
      }
      os << " ]\n";
      break;
    }
    case FormulaFormat::kLatex: {
      const auto idx = detail::index_names(n, true);
      os << "m \\sum_{\\langle ";
      if (n <= 2) {
        for (const auto& i : idx) os << i;
      } else {
        os << idx.front() << " \\cdots " << idx.back();
      }
      os << " \\rangle} \\left[ ";
      for (std::size_t t = 0; t < doc.terms.size(); ++t) {
        const Rational& a = doc.terms[t].alpha;
        if (t) os << (a.sign() < 0 ? " - " : " + ");
        os << detail::latex_number(t && a.sign() < 0 ? -a : a);
        std::size_t pos = 0;
        for (unsigned len : doc.terms[t].blocks) {
          os << " \\langle";
          for (unsigned q = 0; q < len; ++q) os << " B_{" << idx[pos++] << "}";
          os << " \\rangle";
        }
      }
      os << " \\right]\n";
      break;
    }
    case FormulaFormat::kJson: {
      nlohmann::ordered_json j;
      j["n"] = doc.n;
      j["overall_factor"] = "m";
      j["sum_over"] = "distinct index assignments";
      j["terms"] = nlohmann::ordered_json::array();
      for (const auto& t : doc.terms)
        j["terms"].push_back({{"partition", t.partition.label()}, {"alpha", t.alpha.str()}, {"blocks", t.blocks}});
      os << j.dump() << '\n';
      break;
    }
  }
  return os.str();
}

}  // namespace gammatrace
