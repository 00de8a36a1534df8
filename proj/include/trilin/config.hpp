#pragma once

// Suite configuration: an INI/TOML-style text file with sections
//   [context]          primes, level, backend, tol, nonzero_tol, rel_tol, seed,
//                      samples, jobs
//   [suite]            select, json, markdown, cache_dir, cache, timings
//   [characters.NAME]  p, images (generator images in Q/Z), conductor
//   [case.NAME]        p, mu1, mu1p, mu2, mu2p, v3, mu3, mu3p, eta, swap, x, y, z
// Characters are referenced by name; "trivial" is predefined for every prime.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trilin/testvec.hpp"

namespace trilin {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuiteConfig {
  std::vector<int> primes{2, 3, 5};
  int level = 4;
  Backend backend = Backend::Exact;
  /// Absolute bound for numeric zeros.
  double tol = 1e-9;
  /// Numeric values must exceed this to count as nonzero.
  double nonzero_tol = 1e-6;
  /// Relative bound for numeric identities (equivariance under diag(pi, 1)).
  double rel_tol = 1e-8;
  std::uint64_t seed = 1;
  int samples = 10;
  int jobs = 1;
  /// Empty means every suite.
  std::vector<std::string> suites;
  std::string json_path;
  std::string markdown_path;
  /// Empty means the default cache location (see cache.hpp).
  std::string cache_dir;
  bool use_cache = true;
  /// Record wall-clock seconds; off keeps reports byte-stable.
  bool timings = false;

  std::map<std::string, FiniteCharacter> characters;  // keyed by "name@p"
  std::vector<CaseSpec> cases;
};

/// All suite names in execution order.
const std::vector<std::string>& suite_names();

/// The built-in corpus of triples and the default context.
SuiteConfig default_config();
SuiteConfig parse_config_text(const std::string& text);
SuiteConfig load_config(const std::string& path);

/// Throws ConfigError on violated invariants (level, tolerance, primes, suite names).
void validate(const SuiteConfig& c);

/// The largest conductor plus gamma exponent used by the selected suites.
int required_level(const SuiteConfig& c);

/// "a, b ,c" -> {"a", "b", "c"}.
std::vector<std::string> split_list(const std::string& s);

}  // namespace trilin
