#include <catch2/catch_amalgamated.hpp>

#include "gammatrace/cache.hpp"

#include <fstream>
#include <random>

using namespace gammatrace;
namespace fs = std::filesystem;

namespace {

Rational q(long num, long den = 1) { return Rational(mpz_class(num), mpz_class(den)); }

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("gammatrace-test-" + std::to_string(rd()) + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const CacheError& e) {
    return e.line();
  }
  FAIL("expected CacheError");
  return 0;
}

}  // namespace

TEST_CASE("alpha tables round-trip through the cache", "[cache]") {
  TempDir dir;
  const auto elem = minimal_algorithm(7).elementary;
  for (unsigned n = 1; n <= 7; ++n) {
    const auto table = table_from_elementary(n, elem);
    const auto file = dir.path / ("alpha_" + std::to_string(n) + ".tsv");
    store_table(file, table);
    const auto back = load_table(file);
    REQUIRE(back.has_value());
    CHECK(*back == table);
  }
  const std::string text = read_file(dir.path / "alpha_3.tsv");
  CHECK(text.starts_with("# gammatrace alpha v1 n=3\n"));
  CHECK(text.find("2+1\t-2/3\n") != std::string::npos);
}

TEST_CASE("elementary sequence round-trips and extends", "[cache]") {
  TempDir dir;
  const auto file = dir.path / kElementaryFileName;
  CHECK_FALSE(load_elementary(file).has_value());

  const auto five = cached_elementary(dir.path, 5);
  CHECK(five.size() == 5);
  CHECK(load_elementary(file)->size() == 5);
  CHECK(read_file(file) == "# gammatrace elementary v1\n1\t1\n2\t-2/3\n3\t32/45\n4\t-272/315\n5\t15872/14175\n");

  CHECK(cached_elementary(dir.path, 3) == five.prefix(3));
  const auto nine = cached_elementary(dir.path, 9);
  CHECK(nine == minimal_algorithm(9).elementary);
  CHECK(load_elementary(file)->size() == 9);
}

TEST_CASE("a cached prefix is trusted and extended", "[cache]") {
  TempDir dir;
  const auto file = dir.path / kElementaryFileName;
  // A deliberately wrong alpha_2 shows the cache is read, not recomputed.
  store_elementary(file, ElementarySequence({q(1), q(5)}));
  const auto seq = cached_elementary(dir.path, 2);
  CHECK(seq.alpha(2) == q(5));
}

TEST_CASE("corrupt cache files are reported with line numbers", "[cache]") {
  TempDir dir;
  const auto e = dir.path / "e.tsv";
  write_file(e, "# something else\n1\t1\n");
  CHECK(error_line([&] { load_elementary(e); }) == 1);
  write_file(e, "# gammatrace elementary v1\n1\t1\n3\t32/45\n");
  CHECK(error_line([&] { load_elementary(e); }) == 3);
  write_file(e, "# gammatrace elementary v1\n1\t1\n2\t-2/x\n");
  CHECK(error_line([&] { load_elementary(e); }) == 3);
  write_file(e, "# gammatrace elementary v1\n1\t1\n2 -2/3\n");
  CHECK(error_line([&] { load_elementary(e); }) == 3);
  write_file(e, "# gammatrace elementary v1\n1\t2\n");
  CHECK(error_line([&] { load_elementary(e); }) == 2);

  const auto t = dir.path / "t.tsv";
  write_file(t, "# gammatrace alpha v1 n=2\n2\t-2/3\n");
  CHECK(error_line([&] { load_table(t); }) == 2);
  write_file(t, "# gammatrace alpha v1 n=2\n2\t-2/3\n2+1\t1\n");
  CHECK(error_line([&] { load_table(t); }) == 3);
  write_file(t, "# gammatrace alpha v1 n=2\n2\t-2/3\n2\t-2/3\n");
  CHECK(error_line([&] { load_table(t); }) == 3);
  write_file(t, "# gammatrace alpha v1 n=zero\n");
  CHECK(error_line([&] { load_table(t); }) == 1);
  write_file(t, "");
  CHECK(error_line([&] { load_table(t); }) == 1);
  CHECK_FALSE(load_table(dir.path / "absent.tsv").has_value());
}

TEST_CASE("CRLF line endings are accepted", "[cache]") {
  TempDir dir;
  const auto e = dir.path / "e.tsv";
  write_file(e, "# gammatrace elementary v1\r\n1\t1\r\n2\t-2/3\r\n");
  CHECK(load_elementary(e)->alpha(2) == q(-2, 3));
}

TEST_CASE("stores leave no temporary files behind", "[cache]") {
  TempDir dir;
  const auto file = dir.path / "nested" / kElementaryFileName;
  store_elementary(file, minimal_algorithm(4).elementary);
  store_elementary(file, minimal_algorithm(6).elementary);
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(file.parent_path())) {
    CHECK(entry.path().filename() == kElementaryFileName);
    ++count;
  }
  CHECK(count == 1);
  CHECK(load_elementary(file)->size() == 6);
}

TEST_CASE("cache directory resolution", "[cache]") {
  CHECK(resolve_cache_dir(fs::path("/tmp/explicit")) == fs::path("/tmp/explicit"));
  ::setenv("GAMMATRACE_CACHE_DIR", "/tmp/from-env", 1);
  CHECK(resolve_cache_dir(std::nullopt) == fs::path("/tmp/from-env"));
  ::unsetenv("GAMMATRACE_CACHE_DIR");
  ::setenv("XDG_CACHE_HOME", "/tmp/xdg", 1);
  CHECK(resolve_cache_dir(std::nullopt) == fs::path("/tmp/xdg/gammatrace"));
  ::unsetenv("XDG_CACHE_HOME");
}
