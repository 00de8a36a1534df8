#include <unistd.h>

#include <filesystem>

#include "doctest.h"
#include "trilin/cache.hpp"
#include "trilin/report.hpp"

using namespace trilin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("trilin-test-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cache entries are built, loaded and repaired") {
  TempDir tmp;
  const std::string dir = tmp.path.string();

  CacheStats first = cache_tables(dir, 3, 2);
  CHECK(first.built == 4);
  CHECK(first.loaded == 0);
  CHECK(first.warnings.empty());
  CHECK(cache_entries(dir).size() == 4);

  CacheStats second = cache_tables(dir, 3, 2);
  CHECK(second.loaded == 4);
  CHECK(second.built == 0);

  // Flip a payload byte without fixing the checksum.
  const fs::path victim = tmp.path / "trilin-units-3-2.json";
  std::string text = read_text_file(victim.string());
  const auto pos = text.find("table");
  REQUIRE(pos != std::string::npos);
  text[pos] = 'T';
  write_text_file(victim.string(), text);

  CacheStats third = cache_tables(dir, 3, 2);
  CHECK(third.rebuilt == 1);
  CHECK(third.warnings.size() == 1);

  CacheStats fourth = cache_tables(dir, 3, 2);
  CHECK(fourth.loaded == 4);
  CHECK(fourth.warnings.empty());

  write_text_file(victim.string(), "not json");
  CacheStats fifth = cache_tables(dir, 3, 2);
  CHECK(fifth.rebuilt == 1);
  CHECK_FALSE(fifth.warnings.empty());

  CHECK(cache_clear(dir) == 4);
  CHECK(cache_entries(dir).empty());
}
