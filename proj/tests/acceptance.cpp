// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pfk/pfk.hpp"

using namespace pfk;

namespace {

CheckOptions options(int threads, CoeffDomain field = CoeffDomain::prime_field(32003)) {
  CheckOptions o;
  o.threads = threads;
  o.field = field;
  return o;
}

bool all_pass(const std::vector<Report>& rs) {
  for (const auto& r : rs)
    if (r.status != Status::pass) return false;
  return !rs.empty();
}

std::string first_problem(const std::vector<Report>& rs) {
  for (const auto& r : rs)
    if (r.status != Status::pass)
      return r.check + " " + r.params.dump() + " " + to_string(r.status) +
             (r.messages.empty() ? "" : ": " + r.messages.front());
  return "";
}

json at(const json& table, long d) { return table.value(degree_key(Multidegree(d)), json()); }

json literal_table(const std::vector<std::pair<Multidegree, std::int64_t>>& es) {
  DegreeTable t;
  for (const auto& [d, v] : es) t[d] = v;
  return degree_table_json(t);
}

/// H_j for j ≥ 1 must vanish in every degree up to max_deg.
Report vanishing_report(const std::string& name, const FreeComplex& c, int max_deg, int threads) {
  Report r;
  r.check = "vanishing";
  r.params = {{"complex", name}, {"max_deg", max_deg}, {"field", "q"}};
  std::vector<Multidegree> degs;
  for (int d = 0; d <= max_deg; ++d) degs.emplace_back(d);
  auto all = detail::all_homology(c, degs, CoeffDomain::rationals(), threads);
  for (int j = std::max(1, c.lo()); j <= c.hi(); ++j) {
    DegreeTable t = detail::to_degree_table(all.dims[j]), zero;
    for (const auto& [d, v] : t) zero[d] = 0;
    r.predicted["H" + std::to_string(j)] = degree_table_json(zero);
    r.computed["H" + std::to_string(j)] = degree_table_json(t);
    if (t != zero) {
      r.note("H" + std::to_string(j) + " is nonzero");
      r.degrade(Status::fail);
    }
  }
  return r;
}

/// dim H_j(d) over Q, F_2, F_3 for every j and d ≤ max_deg.
Report characteristic_report(const std::string& name, const FreeComplex& c, int max_deg, int threads) {
  Report r;
  r.check = "characteristic";
  r.params = {{"complex", name}, {"max_deg", max_deg}};
  std::vector<Multidegree> degs;
  for (int d = 0; d <= max_deg; ++d) degs.emplace_back(d);
  json q;
  for (const auto& dom : {CoeffDomain::rationals(), CoeffDomain::prime_field(2), CoeffDomain::prime_field(3)}) {
    auto all = detail::all_homology(c, degs, dom, threads);
    json tables = json::object();
    for (const auto& [j, m] : all.dims) tables["H" + std::to_string(j)] = degree_table_json(detail::to_degree_table(m));
    r.computed[dom.to_string()] = tables;
    if (dom.kind() == CoeffDomain::Kind::rationals) {
      q = tables;
      r.predicted["q"] = tables;
    } else if (tables != q) {
      r.note("dimensions over " + dom.to_string() + " differ from Q");
      r.degrade(Status::fail);
    }
  }
  return r;
}

struct Suite {
  std::vector<std::vector<Report>> by_criterion = std::vector<std::vector<Report>>(9);
};

Suite run_suite(int threads) {
  Suite s;
  const CheckOptions o = options(threads);
  // 1 and 2
  for (int n = 1; n <= 4; ++n)
    for (int i = 0; i <= n - 1; ++i) {
      Target t = build_target("c", n, i);
      json p = {{"family", "c"}, {"n", n}, {"i", i}};
      s.by_criterion[1].push_back(check_complex(t.complex(), p, o));
      s.by_criterion[2].push_back(check_be_ranks(t.complex(), p, o, expected_C_ranks(n, i)));
    }
  for (int n = 1; n <= 3; ++n)
    s.by_criterion[1].push_back(
        check_complex(build_target("koszul-pfaffian", n).complex(), {{"family", "koszul-pfaffian"}, {"n", n}}, o));
  for (int n = 2; n <= 3; ++n)
    s.by_criterion[1].push_back(
        check_complex(build_target("koszul-hu", n).complex(), {{"family", "koszul-hu"}, {"n", n}}, o));
  // 3, 4
  s.by_criterion[3].push_back(check_filtration(2, 6, options(threads, CoeffDomain::rationals()), {0, 1, 2}));
  s.by_criterion[3].push_back(check_filtration(2, 6, o, {0, 1, 2}));
  s.by_criterion[4].push_back(check_filtration(3, 5, o, {1}));
  // 5
  s.by_criterion[5].push_back(vanishing_report("koszul-pfaffian n=1", build_target("koszul-pfaffian", 1).complex(), 6,
                                               threads));
  s.by_criterion[5].push_back(vanishing_report("koszul x,y,z", build_target("koszul", 0, 0, 3).complex(), 6, threads));
  // 6
  s.by_criterion[6].push_back(check_duality(2, 6, o));
  // 7
  Target k2 = build_target("koszul-pfaffian", 2), k3 = build_target("koszul-pfaffian", 3);
  s.by_criterion[7].push_back(check_torsion(k2.complex(), {{"family", "koszul-pfaffian"}, {"n", 2}}, 5, o));
  s.by_criterion[7].push_back(characteristic_report("koszul-pfaffian n=2", k2.complex(), 6, threads));
  s.by_criterion[7].push_back(characteristic_report("koszul-pfaffian n=3", k3.complex(), 5, threads));
  // 8
  s.by_criterion[8] = check_hu(3, "all", std::nullopt, o);
  return s;
}

const Report* find(const std::vector<Report>& rs, const std::string& check) {
  for (const auto& r : rs)
    if (r.check == check) return &r;
  return nullptr;
}

int cli(const std::string& args) {
  std::string cmd = std::string(PFK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

struct Verdict {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  const Suite s = run_suite(4);
  const double suite_s = std::chrono::duration<double>(clock::now() - t0).count();
  std::vector<Verdict> v(12);

  for (int c : {1, 2, 6, 7, 8}) v[c].require(all_pass(s.by_criterion[c]), first_problem(s.by_criterion[c]));

  // 3: both fields pass, plus the literal values
  v[3].require(all_pass(s.by_criterion[3]), first_problem(s.by_criterion[3]));
  for (const auto& r : s.by_criterion[3]) {
    const json& h0 = r.computed["H0"];
    const json& h1 = r.computed["H1"];
    const json& h2 = r.computed["H2"];
    const long want_h1[] = {5, 40, 175, 560};
    for (long d = 3; d <= 6; ++d)
      v[3].require(at(h1, d) == want_h1[d - 3], "H1(" + std::to_string(d) + ") is " + at(h1, d).dump());
    for (long d = 0; d <= 6; ++d)
      v[3].require(at(h2, d) == (d >= 5 ? at(h0, d - 5) : json(0)), "H2(" + std::to_string(d) + ") != HF(A/I)(d-5)");
  }

  // 4: HF(H1)(d) = HF(M_1)(d-4)
  v[4].require(all_pass(s.by_criterion[4]), first_problem(s.by_criterion[4]));
  for (long d = 0; d <= 5; ++d) {
    const json got = at(s.by_criterion[4][0].computed["H1"], d);
    v[4].require(got == hf_M(3, 1, d - 4).get_si(), "H1(" + std::to_string(d) + ") is " + got.dump());
  }

  v[5].require(all_pass(s.by_criterion[5]), first_problem(s.by_criterion[5]));

  // 6 also needs a nonzero slice somewhere
  for (const auto& r : s.by_criterion[6])
    for (const auto& m : r.messages) v[6].require(m.find("only checked on zero") == std::string::npos, m);

  // 8: the literal presentation
  if (const Report* b = find(s.by_criterion[8], "hu-betti")) {
    v[8].require(b->computed["beta0"] == literal_table({{{1, 2}, 1}, {{3, 1}, 6}}), "beta0 " + b->computed["beta0"].dump());
    v[8].require(b->computed["beta1"] == literal_table({{{2, 3}, 6}, {{3, 2}, 15}, {{4, 1}, 6}}),
                 "beta1 " + b->computed["beta1"].dump());
  } else {
    v[8].require(false, "no hu-betti report");
  }

  // 9: Euler identity wherever 3, 4, 8 computed homology
  int euler_reports = 0;
  for (int c : {3, 4, 8})
    for (const auto& r : s.by_criterion[c])
      if (r.computed.contains("chi")) {
        ++euler_reports;
        v[9].require(!r.computed["chi"].empty() && r.computed["chi"] == r.predicted["chi"],
                     r.check + " " + r.params.dump() + ": Euler identity fails");
      }
  v[9].require(euler_reports == 4, "expected 4 reports with Euler data, found " + std::to_string(euler_reports));

  // 10: mutations must fail loudly through the CLI
  v[10].require(cli("verify complex --family c --n 2 --i 1") == 0, "unmutated C^1 does not pass");
  v[10].require(cli("verify complex --family c --n 2 --i 1 --mutate flip") == 1, "sign flip in d2 not detected");
  v[10].require(cli("verify torsion --family koszul-pfaffian --n 2 --max-deg 3 --mutate double") == 1,
                "doubled Koszul entry not detected");
  v[10].require(cli("verify filtration --n 2 --max-deg 4 --mutate double") == 1,
                "doubled Koszul entry passes the Hilbert function check");
  {
    Target t = build_target("koszul-pfaffian", 2);
    auto [row, col] = first_entry(t.complex(), 1);
    mutate_scale_entry(t.complex(), 1, row, col, 2);
    Report r = check_torsion(t.complex(), {{"mutate", "double"}}, 3, options(1));
    v[10].require(!r.computed["torsion"].empty(), "doubled Koszul entry shows no torsion");
  }

  // 11: byte-identical reports at another thread count
  auto t1 = clock::now();
  const Suite single = run_suite(1);
  const double single_s = std::chrono::duration<double>(clock::now() - t1).count();
  for (int c = 1; c <= 8; ++c)
    v[11].require(reports_json(s.by_criterion[c]) == reports_json(single.by_criterion[c]),
                  "criterion " + std::to_string(c) + " reports differ between 4 threads and 1");

  const char* desc[12] = {"",
                          "d*d = 0 for every C^i (n <= 4) and the Koszul complexes",
                          "rank certificates of C^i over F_32003 and F_65521",
                          "HF(H_j) for n = 2, d <= 6, over Q and F_32003",
                          "HF(H_1)(d) = HF(M_1)(d-4) for n = 3, d <= 5",
                          "no higher homology for n = 1 and for x, y, z",
                          "duality pairings for n = 2, d <= 6 are perfect",
                          "no torsion for n = 2, d <= 5; Q, F_2, F_3 agree",
                          "Huneke-Ulrich n = 3: H_2 cycle, presentation, HF(H_2)",
                          "Euler characteristic identity",
                          "mutations fail with exit code 1",
                          "reports identical at 1 and 4 threads"};
  bool ok = true;
  for (int c = 1; c <= 11; ++c) {
    std::cout << "criterion " << c << ": " << (v[c].ok ? "PASS " : "FAIL ") << desc[c];
    if (!v[c].ok) std::cout << " (" << v[c].why << ")";
    std::cout << "\n";
    ok = ok && v[c].ok;
  }
  std::cout << "suite time: " << static_cast<int>(suite_s) << " s at 4 threads, " << static_cast<int>(single_s)
            << " s at 1 thread\n";
  return ok ? 0 : 1;
}
