#include "trilin/cache.hpp"

#include <zlib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <optional>

#include "json.hpp"
#include "trilin/character.hpp"
#include "trilin/report.hpp"

namespace trilin {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string default_cache_dir() {
  if (const char* d = std::getenv("TRILIN_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return (fs::path(x) / "trilin").string();
  if (const char* h = std::getenv("HOME"); h && *h) return (fs::path(h) / ".cache" / "trilin").string();
  return ".trilin-cache";
}

namespace {

std::mutex g_cache_mu;

constexpr const char* kPrefix = "trilin-";

std::uint32_t crc_of(const std::string& payload) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size())));
}

/// Payload stored under a checksum; nullopt when absent or corrupt.
std::optional<json> read_entry(const fs::path& file, std::vector<std::string>& warnings) {
  if (!fs::exists(file)) return std::nullopt;
  try {
    json j = json::parse(read_text_file(file.string()));
    const std::string payload = j.at("payload").get<std::string>();
    if (j.at("crc32").get<std::uint32_t>() != crc_of(payload)) {
      warnings.push_back("checksum mismatch in " + file.filename().string() + ", rebuilding");
      return std::nullopt;
    }
    return json::parse(payload);
  } catch (const std::exception& e) {
    warnings.push_back("unreadable cache entry " + file.filename().string() + " (" + e.what() + "), rebuilding");
    return std::nullopt;
  }
}

void write_entry(const fs::path& file, const json& payload) {
  const std::string text = payload.dump();
  json j{{"crc32", crc_of(text)}, {"payload", text}};
  // Write then rename so that readers never see a partial entry.
  fs::path tmp = file;
  tmp += ".tmp";
  write_text_file(tmp.string(), j.dump() + "\n");
  fs::rename(tmp, file);
}

json coset_payload(int p, int level) {
  const PadicContext ctx = PadicContext::make(p);
  CosetSpace space(ctx, level);
  json params = json::array();
  for (std::size_t i = 0; i < space.size(); ++i)
    params.push_back({space.pivot(i) == IwasawaFactors::Pivot::D ? "D" : "W", space.param(i)});
  return {{"p", p}, {"level", level}, {"weight", space.weight().get_str()}, {"reps", params}};
}

}  // namespace

CacheStats cache_tables(const std::string& dir, int p, int level) {
  std::lock_guard lock(g_cache_mu);
  const auto t0 = std::chrono::steady_clock::now();
  CacheStats st;
  fs::create_directories(dir);
  for (int m = 1; m <= level; ++m) {
    const std::string tag = std::to_string(p) + "-" + std::to_string(m);
    // Discrete logarithms.
    const fs::path units = fs::path(dir) / (std::string(kPrefix) + "units-" + tag + ".json");
    const bool had_units = fs::exists(units);
    bool ok = false;
    if (auto j = read_entry(units, st.warnings)) {
      try {
        install_unit_group(UnitGroup::from_table(p, m, j->at("table").get<std::vector<std::int32_t>>()));
        ++st.loaded;
        ok = true;
      } catch (const std::exception& e) {
        st.warnings.push_back("rejected " + units.filename().string() + ": " + e.what());
      }
    }
    if (!ok) {
      const UnitGroup& g = unit_group(p, m);
      write_entry(units, {{"p", p}, {"level", m}, {"table", g.table()}});
      ++(had_units ? st.rebuilt : st.built);
    }
    // Coset enumeration.
    const fs::path cosets = fs::path(dir) / (std::string(kPrefix) + "cosets-" + tag + ".json");
    const bool had_cosets = fs::exists(cosets);
    const json fresh = coset_payload(p, m);
    auto stored = read_entry(cosets, st.warnings);
    if (stored && *stored == fresh) {
      ++st.loaded;
    } else {
      if (stored) st.warnings.push_back("stale coset enumeration " + cosets.filename().string() + ", rebuilding");
      write_entry(cosets, fresh);
      ++(had_cosets ? st.rebuilt : st.built);
    }
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

std::vector<std::string> cache_entries(const std::string& dir) {
  std::vector<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind(kPrefix, 0) == 0 && e.path().extension() == ".json") out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int cache_clear(const std::string& dir) {
  std::lock_guard lock(g_cache_mu);
  int n = 0;
  for (const auto& name : cache_entries(dir)) n += fs::remove(fs::path(dir) / name) ? 1 : 0;
  return n;
}

}  // namespace trilin
