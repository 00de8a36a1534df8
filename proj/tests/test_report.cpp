#include "doctest.h"
#include "trilin/report.hpp"

using namespace trilin;

namespace {

Report sample() {
  Report r;
  r.records.push_back({"lemmas", "p3/NR/r1", "closed form", Status::Pass, "0", "0", 0.0});
  r.records.push_back({"theorems", "a|b", "vt", Status::Fail, "NONZERO", "ZERO", 0.0});
  r.records.push_back({"theorems", "c", "vt", Status::OutOfScope, "NONZERO", "OUT_OF_SCOPE", 0.0});
  r.environment = {{"tool", "trilin"}, {"level", "4"}};
  return r;
}

}  // namespace

TEST_CASE("summary") {
  const Summary s = sample().summary();
  CHECK(s.pass == 1);
  CHECK(s.fail == 1);
  CHECK(s.out_of_scope == 1);
  CHECK(s.total() == 3);
  CHECK(sample().any_fail());
}

TEST_CASE("json round trip is byte-stable") {
  const std::string a = to_json(sample());
  CHECK(a == to_json(sample()));
  const Report back = report_from_json(a);
  CHECK(to_json(back) == a);
  CHECK(back.records[1].status == Status::Fail);
  CHECK(back.environment.front().first == "tool");
}

TEST_CASE("markdown") {
  const std::string md = to_markdown(sample());
  CHECK(md.find("## lemmas") != std::string::npos);
  CHECK(md.find("a\\|b") != std::string::npos);
  CHECK(md == to_markdown(sample()));
}

TEST_CASE("status names") {
  for (Status s : {Status::Pass, Status::Fail, Status::OutOfScope, Status::NotEvaluable})
    CHECK(parse_status(status_name(s)) == s);
  CHECK_THROWS(parse_status("MAYBE"));
}
