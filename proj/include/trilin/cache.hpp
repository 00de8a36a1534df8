#pragma once

// On-disk cache of discrete-log tables and coset enumerations. Every entry
// carries a CRC-32 of its payload; a mismatch rebuilds the entry and warns.

#include <string>
#include <vector>

namespace trilin {

/// $TRILIN_CACHE_DIR, else $XDG_CACHE_HOME/trilin, else $HOME/.cache/trilin,
/// else ./.trilin-cache.
std::string default_cache_dir();

struct CacheStats {
  int loaded = 0;
  int built = 0;
  int rebuilt = 0;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

/// Loads (or builds and stores) the unit groups of (Z/p^m)^x and the coset
/// enumerations of (B cap K)\K/K(m) for m = 1..level, installing the unit
/// groups into the process-wide table.
CacheStats cache_tables(const std::string& dir, int p, int level);

/// Removes every cache entry in `dir`; returns the number removed.
int cache_clear(const std::string& dir);

/// Entry file names present in `dir`, sorted.
std::vector<std::string> cache_entries(const std::string& dir);

}  // namespace trilin
