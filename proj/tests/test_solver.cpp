#include <catch2/catch_amalgamated.hpp>

#include "gammatrace/solver.hpp"
#include "oracles.hpp"
#include "table_one.hpp"

using namespace gammatrace;

namespace {

Rational q(long num, long den = 1) { return Rational(mpz_class(num), mpz_class(den)); }

void check_against_table_one(const AlphaTable& table) {
  std::size_t rows = 0;
  for (const auto& row : testing::table_one()) {
    if (row.n != table.n()) continue;
    INFO("n = " << row.n << " s = " << row.partition);
    CHECK(table.at(row.partition) == Rational::parse(row.alpha));
    ++rows;
  }
  CHECK(rows == table.size());
}

}  // namespace

TEST_CASE("a 3x3 system from three random tensors", "[solver]") {
  const auto rep = build_rep(Signature::minkowski(6));
  SamplerConfig cfg;
  cfg.seed = 17;
  std::vector<AntisymTensor> ts;
  for (std::uint64_t k = 0; k < 3; ++k) ts.push_back(random_antisym(6, cfg, k));
  const auto sys = build_general_system(3, rep, ts);
  const auto x = solve_rational_system(sys.z, sys.t);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == q(1, 6));
  CHECK(x[1] == q(-2, 3));
  CHECK(x[2] == q(32, 45));
  CHECK(mat_vec(sys.z, x) == sys.t);
}

TEST_CASE("general algorithm reproduces the published coefficients", "[solver]") {
  for (unsigned n = 1; n <= 4; ++n) check_against_table_one(general_algorithm(n, SamplerConfig{}));
}

TEST_CASE("general algorithm does not depend on the seed or signature", "[solver][property]") {
  const auto base = general_algorithm(3, SamplerConfig{});
  for (std::uint64_t seed : {2u, 99u, 123456u}) {
    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.entry_range = 3 + static_cast<long>(seed % 5);
    CHECK(general_algorithm(3, cfg) == base);
  }
  GeneralOptions eu;
  eu.signature = SignatureSpec::euclidean();
  CHECK(general_algorithm(3, SamplerConfig{}, eu) == base);
}

TEST_CASE("general algorithm in a larger dimension", "[solver]") {
  GeneralOptions opts;
  opts.dimension = 8;
  CHECK(general_algorithm(3, SamplerConfig{}, opts) == general_algorithm(3, SamplerConfig{}));
}

TEST_CASE("general algorithm fails below d = 2n", "[solver]") {
  GeneralOptions opts;
  opts.dimension = 4;
  SamplerConfig cfg;
  cfg.max_resamples = 3;
  try {
    general_algorithm(3, cfg, opts);
    FAIL("expected SolverRankFailure");
  } catch (const SolverRankFailure& e) {
    CHECK(e.attempts() == 3);
    CHECK(e.rank() < 3);
  }
  CHECK_THROWS_AS(general_algorithm(0, SamplerConfig{}), std::invalid_argument);
}

TEST_CASE("minimal algorithm intermediates for n = 1", "[solver]") {
  const auto res = minimal_algorithm(1, SignatureSpec::euclidean());
  REQUIRE(res.steps.size() == 1);
  const auto& step = res.steps.front();
  CHECK(step.t == q(-2));
  CHECK(step.z.at(Partition({1})) == q(-2));
  CHECK(step.known_part == q(0));
  CHECK(step.alpha == q(1));
}

TEST_CASE("minimal algorithm normalized traces follow the closed form", "[solver]") {
  const auto res = minimal_algorithm(12, SignatureSpec::euclidean());
  for (const auto& step : res.steps)
    CHECK(step.t == pow(q(-4), step.n) / Rational(factorial(2 * step.n)));
}

TEST_CASE("minimal algorithm reproduces the published elementary coefficients", "[solver]") {
  const auto res = minimal_algorithm(7);
  const std::vector<Rational> expected{q(1),           q(-2, 3),           q(32, 45),
                                       q(-272, 315),   q(15872, 14175),    q(-707584, 467775),
                                       q(89473024, 42567525)};
  CHECK(res.elementary.values() == expected);
  for (unsigned n = 1; n <= 7; ++n) check_against_table_one(res.table(n));
}

TEST_CASE("minimal algorithm matches the log cosh generating function", "[solver]") {
  const unsigned big_n = 30;
  const auto oracle = testing::elementary_from_log_cosh(big_n);
  for (const auto& sig : {SignatureSpec::minkowski(), SignatureSpec::euclidean()}) {
    const auto res = minimal_algorithm(big_n, sig);
    REQUIRE(res.elementary.size() == big_n);
    for (unsigned j = 1; j <= big_n; ++j) {
      INFO("j = " << j);
      CHECK(res.elementary.alpha(j) == Rational(oracle[j]));
    }
  }
}

TEST_CASE("minimal algorithm resumes from a prefix", "[solver]") {
  const auto full = minimal_algorithm(10);
  const auto resumed = minimal_algorithm_from(full.elementary.prefix(6), 10);
  CHECK(resumed.elementary == full.elementary);
  CHECK(resumed.steps.size() == 4);
  CHECK(minimal_algorithm_from(full.elementary, 5).elementary == full.elementary.prefix(5));
  CHECK_THROWS_AS(minimal_algorithm(0), std::invalid_argument);
}

TEST_CASE("recurrence for non-elementary partitions", "[solver]") {
  const ElementarySequence elem({q(1), q(-2, 3), q(32, 45)});
  CHECK(recurrence_alpha(Partition({1, 1}), elem) == q(1, 2));
  CHECK(recurrence_alpha(Partition({2, 1}), elem) == q(-2, 3));
  CHECK(recurrence_alpha(Partition({3, 2, 1, 1}), elem) == q(-32, 135));
  CHECK(recurrence_alpha(Partition({1, 1, 1, 1, 1}), elem) == q(1, 120));
  CHECK_THROWS_AS(recurrence_alpha(Partition({4}), elem), std::out_of_range);
  CHECK_THROWS_AS(ElementarySequence({q(2)}), std::invalid_argument);
}

TEST_CASE("general solutions satisfy the recurrence", "[solver][property]") {
  const auto elem = minimal_algorithm(5).elementary;
  for (unsigned n = 1; n <= 5; ++n) {
    const auto table = general_algorithm(n, SamplerConfig{});
    for (const auto& [s, a] : table.entries()) CHECK(a == recurrence_alpha(s, elem));
  }
}

TEST_CASE("random_antisym is deterministic and bounded", "[solver]") {
  SamplerConfig cfg;
  cfg.seed = 42;
  cfg.entry_range = 4;
  const auto a = random_antisym(5, cfg, 3);
  const auto b = random_antisym(5, cfg, 3);
  const auto c = random_antisym(5, cfg, 4);
  bool differs = false;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(a(i, j) == b(i, j));
      CHECK(a(i, j) == -a(j, i));
      CHECK(a(i, j).is_integer());
      CHECK(a(i, j) <= q(4));
      CHECK(a(i, j) >= q(-4));
      differs = differs || a(i, j) != c(i, j);
    }
  CHECK(differs);
  cfg.entry_range = 0;
  CHECK_THROWS_AS(random_antisym(5, cfg, 0), std::invalid_argument);
}

TEST_CASE("AlphaTable validates its entries", "[solver]") {
  CHECK_THROWS_AS(AlphaTable(2, {{Partition({2}), q(1)}}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaTable(2, {{Partition({2}), q(1)}, {Partition({1}), q(1)}}), std::invalid_argument);
  const AlphaTable t(2, {{Partition({2}), q(-2, 3)}, {Partition({1, 1}), q(1, 2)}});
  CHECK(t.at("2") == q(-2, 3));
  CHECK_THROWS_AS(t.at("3"), std::out_of_range);
}
