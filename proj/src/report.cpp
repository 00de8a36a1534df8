#include "trilin/report.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace trilin {

using json = nlohmann::ordered_json;

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::OutOfScope: return "OUT_OF_SCOPE";
    case Status::NotEvaluable: return "NOT_EVALUABLE";
  }
  return "?";
}

Status parse_status(const std::string& s) {
  if (s == "PASS") return Status::Pass;
  if (s == "FAIL") return Status::Fail;
  if (s == "OUT_OF_SCOPE") return Status::OutOfScope;
  if (s == "NOT_EVALUABLE") return Status::NotEvaluable;
  throw std::invalid_argument("unknown status " + s);
}

Summary Report::summary() const {
  Summary s;
  for (const auto& r : records) {
    switch (r.status) {
      case Status::Pass: ++s.pass; break;
      case Status::Fail: ++s.fail; break;
      case Status::OutOfScope: ++s.out_of_scope; break;
      case Status::NotEvaluable: ++s.not_evaluable; break;
    }
  }
  return s;
}

std::string to_json(const Report& r) {
  json j;
  j["records"] = json::array();
  for (const auto& x : r.records) {
    j["records"].push_back({{"suite", x.suite},
                            {"id", x.id},
                            {"anchor", x.anchor},
                            {"status", status_name(x.status)},
                            {"expected", x.expected},
                            {"got", x.got},
                            {"seconds", x.seconds}});
  }
  Summary s = r.summary();
  j["summary"] = {{"pass", s.pass},
                  {"fail", s.fail},
                  {"out_of_scope", s.out_of_scope},
                  {"not_evaluable", s.not_evaluable},
                  {"total", s.total()}};
  json env = json::object();
  for (const auto& [k, v] : r.environment) env[k] = v;
  j["environment"] = env;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  Report r;
  json j = json::parse(text);
  for (const auto& x : j.at("records")) {
    Record rec;
    rec.suite = x.at("suite").get<std::string>();
    rec.id = x.at("id").get<std::string>();
    rec.anchor = x.at("anchor").get<std::string>();
    rec.status = parse_status(x.at("status").get<std::string>());
    rec.expected = x.at("expected").get<std::string>();
    rec.got = x.at("got").get<std::string>();
    rec.seconds = x.at("seconds").get<double>();
    r.records.push_back(std::move(rec));
  }
  if (j.contains("environment"))
    for (const auto& [k, v] : j["environment"].items()) r.environment.emplace_back(k, v.get<std::string>());
  return r;
}

namespace {

std::string cell(const std::string& s, std::size_t limit = 120) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += "\\|";
    else if (ch == '\n') out += ' ';
    else out += ch;
  }
  if (out.size() > limit) out = out.substr(0, limit) + "...";
  return out;
}

}  // namespace

std::string to_markdown(const Report& r) {
  std::ostringstream os;
  Summary s = r.summary();
  os << "# Verification report\n\n";
  os << "| pass | fail | out of scope | not evaluable | total |\n|---|---|---|---|---|\n";
  os << "| " << s.pass << " | " << s.fail << " | " << s.out_of_scope << " | " << s.not_evaluable << " | "
     << s.total() << " |\n";
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Record*>> by_suite;
  for (const auto& x : r.records) {
    if (!by_suite.count(x.suite)) order.push_back(x.suite);
    by_suite[x.suite].push_back(&x);
  }
  for (const auto& name : order) {
    os << "\n## " << name << "\n\n| id | statement | status | expected | got | seconds |\n|---|---|---|---|---|---|\n";
    for (const Record* x : by_suite[name]) {
      std::ostringstream sec;
      sec << std::fixed << std::setprecision(3) << x->seconds;
      os << "| " << cell(x->id) << " | " << cell(x->anchor) << " | " << status_name(x->status) << " | "
         << cell(x->expected) << " | " << cell(x->got) << " | " << sec.str() << " |\n";
    }
  }
  if (!r.environment.empty()) {
    os << "\n## environment\n\n";
    for (const auto& [k, v] : r.environment) os << "- " << k << ": " << v << "\n";
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace trilin
