#pragma once

// Check records, summaries and their JSON / markdown renderings.

#include <string>
#include <vector>

namespace trilin {

enum class Status { Pass, Fail, OutOfScope, NotEvaluable };
const char* status_name(Status s);
Status parse_status(const std::string& s);

struct Record {
  std::string suite;
  std::string id;
  /// The mathematical statement checked, or "plumbing".
  std::string anchor;
  Status status = Status::Pass;
  std::string expected;
  std::string got;
  double seconds = 0.0;
};

struct Summary {
  int pass = 0;
  int fail = 0;
  int out_of_scope = 0;
  int not_evaluable = 0;
  int total() const { return pass + fail + out_of_scope + not_evaluable; }
};

struct Report {
  std::vector<Record> records;
  /// Key/value pairs describing the build and configuration (no host data).
  std::vector<std::pair<std::string, std::string>> environment;

  Summary summary() const;
  bool any_fail() const { return summary().fail > 0; }
};

std::string to_json(const Report& r);
std::string to_markdown(const Report& r);
Report report_from_json(const std::string& text);

/// Writes `text` to `path`; throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace trilin
