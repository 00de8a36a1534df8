// trilin: verification driver.
//
//   trilin verify [--config FILE] [--suite a,b] [--p 2,3] [--level N] ...
//   trilin report --input run.json [--format markdown] [--output FILE]
//   trilin cache [--dir DIR] [--clear] [--warm]
//
// verify exits with status 1 when any check fails, 2 on usage or config errors.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "trilin/cache.hpp"
#include "trilin/config.hpp"
#include "trilin/report.hpp"
#include "trilin/suite.hpp"

using namespace trilin;

namespace {

struct VerifyArgs {
  std::string config;
  std::string suites;
  std::string primes;
  std::optional<int> level;
  std::string backend;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string json;
  std::string markdown;
  bool no_cache = false;
  bool timings = false;
  std::string cache_dir;
};

int run_verify(const VerifyArgs& a) {
  SuiteConfig c = a.config.empty() ? default_config() : load_config(a.config);
  if (!a.suites.empty()) c.suites = split_list(a.suites);
  if (!a.primes.empty()) {
    c.primes.clear();
    for (const auto& s : split_list(a.primes)) c.primes.push_back(std::stoi(s));
  }
  if (a.level) c.level = *a.level;
  if (a.backend == "exact") c.backend = Backend::Exact;
  else if (a.backend == "numeric") c.backend = Backend::Numeric;
  if (a.tol) c.tol = *a.tol;
  if (a.seed) c.seed = *a.seed;
  if (a.jobs) c.jobs = *a.jobs;
  if (!a.json.empty()) c.json_path = a.json;
  if (!a.markdown.empty()) c.markdown_path = a.markdown;
  if (!a.cache_dir.empty()) c.cache_dir = a.cache_dir;
  if (a.no_cache) c.use_cache = false;
  if (a.timings) c.timings = true;

  SuiteRun run = run_suite(c);
  for (const auto& w : run.cache.warnings) std::cerr << "cache: " << w << "\n";

  const Report& r = run.report;
  if (!c.json_path.empty()) write_text_file(c.json_path, to_json(r));
  if (!c.markdown_path.empty()) write_text_file(c.markdown_path, to_markdown(r));

  std::map<std::string, Summary> per_suite;
  std::vector<std::string> order;
  for (const auto& rec : r.records) {
    if (!per_suite.count(rec.suite)) order.push_back(rec.suite);
    Summary& s = per_suite[rec.suite];
    switch (rec.status) {
      case Status::Pass: ++s.pass; break;
      case Status::Fail: ++s.fail; break;
      case Status::OutOfScope: ++s.out_of_scope; break;
      case Status::NotEvaluable: ++s.not_evaluable; break;
    }
  }
  for (const auto& name : order) {
    const Summary& s = per_suite[name];
    std::cout << name << ": " << s.pass << " pass, " << s.fail << " fail, " << s.out_of_scope << " out of scope, "
              << s.not_evaluable << " not evaluable\n";
  }
  for (const auto& rec : r.records)
    if (rec.status == Status::Fail)
      std::cout << "FAIL " << rec.suite << "/" << rec.id << ": expected " << rec.expected << "; got " << rec.got
                << "\n";
  const Summary t = r.summary();
  std::cout << "total: " << t.pass << " pass, " << t.fail << " fail, " << t.out_of_scope << " out of scope, "
            << t.not_evaluable << " not evaluable\n";
  return r.any_fail() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test vectors for invariant trilinear forms on GL(2, Q_p)"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the verification suites");
  verify->add_option("--config", va.config, "Suite configuration file")->check(CLI::ExistingFile);
  verify->add_option("--suite", va.suites, "Comma-separated suites (default: all)");
  verify->add_option("--p", va.primes, "Comma-separated primes");
  verify->add_option("--level", va.level, "Maximal conductor level");
  verify->add_option("--backend", va.backend, "exact or numeric")->check(CLI::IsMember({"exact", "numeric"}));
  verify->add_option("--tol", va.tol, "Numeric zero tolerance");
  verify->add_option("--seed", va.seed, "Seed for numeric specializations");
  verify->add_option("--jobs", va.jobs, "Worker threads");
  verify->add_option("--json", va.json, "Write the JSON report here");
  verify->add_option("--markdown", va.markdown, "Write the markdown report here");
  verify->add_option("--cache-dir", va.cache_dir, "Cache directory");
  verify->add_flag("--no-cache", va.no_cache, "Skip the on-disk cache");
  verify->add_flag("--timings", va.timings, "Record wall-clock seconds per check");

  std::string input, format = "markdown", output;
  auto* report = app.add_subcommand("report", "Render a JSON report");
  report->add_option("--input", input, "JSON report")->required()->check(CLI::ExistingFile);
  report->add_option("--format", format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));
  report->add_option("--output", output, "Output file (default: stdout)");

  std::string dir;
  bool clear = false, warm = false;
  std::string warm_primes = "2,3,5";
  int warm_level = 4;
  auto* cache = app.add_subcommand("cache", "Inspect, warm or clear the on-disk cache");
  cache->add_option("--dir", dir, "Cache directory");
  cache->add_flag("--clear", clear, "Remove every entry");
  cache->add_flag("--warm", warm, "Build the tables");
  cache->add_option("--p", warm_primes, "Primes to warm");
  cache->add_option("--level", warm_level, "Level to warm");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return run_verify(va);
    if (*report) {
      Report r = report_from_json(read_text_file(input));
      const std::string text = format == "json" ? to_json(r) : to_markdown(r);
      if (output.empty()) std::cout << text;
      else write_text_file(output, text);
      return r.any_fail() ? 1 : 0;
    }
    if (*cache) {
      if (dir.empty()) dir = default_cache_dir();
      if (clear) std::cout << "removed " << cache_clear(dir) << " entries from " << dir << "\n";
      if (warm) {
        for (const auto& s : split_list(warm_primes)) {
          CacheStats st = cache_tables(dir, std::stoi(s), warm_level);
          for (const auto& w : st.warnings) std::cerr << "cache: " << w << "\n";
          std::cout << "p=" << s << ": " << st.loaded << " loaded, " << st.built << " built, " << st.rebuilt
                    << " rebuilt\n";
        }
      }
      if (!clear && !warm) {
        std::cout << dir << "\n";
        for (const auto& e : cache_entries(dir)) std::cout << "  " << e << "\n";
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
