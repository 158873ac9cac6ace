#include <gtest/gtest.h>

#include <sstream>

#include "pfk/builders.hpp"
#include "pfk/report.hpp"

using namespace pfk;

namespace {

std::string squeeze(const std::string& s) {
  std::istringstream is(s);
  std::string w, out;
  while (is >> w) out += (out.empty() ? "" : " ") + w;
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

Report h1_report() {
  Report r;
  r.check = "filtration";
  r.params = {{"n", 2}};
  r.primes = {32003};
  DegreeTable t{{Multidegree(3), 5}, {Multidegree(4), 40}, {Multidegree(5), 175}, {Multidegree(6), 560}};
  r.predicted["H1"] = degree_table_json(t);
  r.computed["H1"] = degree_table_json(t);
  return r;
}

}  // namespace

TEST(Status, OrderAndExitCodes) {
  EXPECT_EQ(worst(Status::pass, Status::truncated), Status::truncated);
  EXPECT_EQ(worst(Status::shift_falsified, Status::heuristic), Status::shift_falsified);
  EXPECT_EQ(worst(Status::fail, Status::shift_falsified), Status::fail);
  for (auto s : {Status::pass, Status::truncated, Status::heuristic, Status::shift_falsified, Status::fail})
    EXPECT_EQ(parse_status(to_string(s)), s);
  EXPECT_THROW(parse_status("maybe"), std::invalid_argument);
  Report a, b;
  EXPECT_EQ(exit_code({}), 0);
  b.degrade(Status::heuristic);
  EXPECT_EQ(exit_code({a, b}), 0);
  b.degrade(Status::shift_falsified);
  EXPECT_EQ(exit_code({a, b}), 1);
}

TEST(DegreeKeys, RoundTrip) {
  EXPECT_EQ(degree_key(Multidegree(3)), "3");
  EXPECT_EQ(degree_key(Multidegree(1, 2)), "(1,2)");
  EXPECT_EQ(parse_degree_key("(4,1)"), Multidegree(4, 1));
  EXPECT_EQ(parse_degree_key("7"), Multidegree(7));
  EXPECT_FALSE(is_degree_key("H1"));
}

TEST(ReportJson, RoundTrip) {
  auto r = h1_report();
  r.note("something");
  r.degrade(Status::truncated);
  auto text = reports_json({r});
  auto back = parse_reports(text);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(reports_json(back), text);
  auto j = json::parse(text)["reports"][0];
  EXPECT_TRUE(j["timing_ms"].is_null());
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["status"], "truncated");
  for (const char* k : {"check", "params", "seed", "primes", "tables", "status", "timing_ms"}) EXPECT_TRUE(j.contains(k));
}

TEST(ReportJson, Malformed) {
  EXPECT_THROW(parse_reports("[1,2]"), std::invalid_argument);
  EXPECT_ANY_THROW(parse_reports("{\"reports\": [{\"check\": \"x\"}]}"));
  EXPECT_ANY_THROW(parse_reports("not json"));
}

TEST(Render, HilbertFunctionLine) {
  auto text = render_text({h1_report()});
  auto ls = lines(text);
  bool found = false;
  for (std::size_t k = 0; k + 1 < ls.size(); ++k)
    if (squeeze(ls[k]) == "d: 3 4 5 6" && squeeze(ls[k + 1]) == "dim: 5 40 175 560") found = true;
  EXPECT_TRUE(found) << text;
  EXPECT_EQ(ls.back(), "overall: pass");
}

TEST(Render, BettiInline) {
  json t = degree_table_json(DegreeTable{{{1, 2}, 1}, {{3, 1}, 6}, {{2, 2}, 0}});
  EXPECT_EQ(detail::inline_table(t), "(1,2):1 (3,1):6");
  Report r;
  r.check = "hu";
  r.computed["beta0"] = t;
  EXPECT_NE(render_text({r}).find("beta0: (1,2):1 (3,1):6"), std::string::npos);
}

TEST(Render, Empty) { EXPECT_EQ(render_text({}), "no checks run\n"); }

TEST(Render, MacaulayLayout) {
  Report r;
  r.check = "betti";
  r.computed["beta0"] = degree_table_json(DegreeTable{{Multidegree(3), 5}});
  r.computed["beta1"] = degree_table_json(DegreeTable{{Multidegree(4), 10}});
  auto text = render_text({r});
  // both land in row 3 of the Betti diagram
  bool row = false;
  for (const auto& l : lines(text)) row |= squeeze(l) == "3: 5 10";
  EXPECT_TRUE(row) << text;
}

TEST(Csv, HilbertRows) {
  auto r = h1_report();
  r.computed["H1"]["6"] = 561;
  r.computed["notes"] = "x";
  auto csv = lines(render_csv({r}));
  ASSERT_EQ(csv.size(), 5u);
  EXPECT_EQ(csv[0], "check,j,d,predicted,computed,status");
  EXPECT_EQ(csv[1], "filtration,1,3,5,5,pass");
  EXPECT_EQ(csv[4], "filtration,1,6,560,561,fail");
}

TEST(Csv, Bigraded) {
  Report r;
  r.check = "hu";
  r.predicted["H2"] = degree_table_json(DegreeTable{{{4, 2}, 1}});
  r.computed["H2"] = degree_table_json(DegreeTable{{{4, 2}, 1}});
  auto csv = lines(render_csv({r}));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], "check,j,a,b,predicted,computed,status");
  EXPECT_EQ(csv[1], "hu,2,4,2,1,1,pass");
}
