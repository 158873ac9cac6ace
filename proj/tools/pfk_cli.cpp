// pfk: build, verify and report on the Pfaffian / Huneke-Ulrich complexes.
//
//   pfk build --family c --n 2 --i 1 --out c21.json
//   pfk verify filtration --n 2 --max-deg 6 --field zp:32003
//   pfk verify hu --n 3 --check h2-cycle
//   pfk report --in report.json
//
// Exit codes: 0 all checks pass (truncated/heuristic allowed), 1 a check
// failed, 2 usage or configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pfk/pfk.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string family = "koszul-pfaffian";
  int n = 2;
  int i = 0;
  std::vector<int> js;
  std::vector<int> is;
  int vars = 3;
  std::string max_deg;
  std::string field = "zp:32003";
  std::uint64_t seed = 42;
  int threads = 0;
  std::string out;
  std::string in;
  std::string format = "json";
  std::string d2 = "weighted";
  std::string mutate;
  int mutate_at = 0;
  std::string check = "all";
  std::vector<std::uint32_t> primes{32003, 65521};
  bool timing = false;
  bool quotient = true;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_output(const Config& cfg, const std::string& text, const std::string& summary) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + cfg.out);
  f << text;
  std::cout << summary;
}

/// "A" or "A,B".
std::optional<pfk::Multidegree> parse_bound(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return pfk::Multidegree(std::stoi(s));
    return pfk::Multidegree(std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw UsageError("bad --max-deg '" + s + "'");
  }
}

int scalar_bound(const Config& cfg, int fallback) {
  auto b = parse_bound(cfg.max_deg);
  if (!b) return fallback;
  if (b->arity() != 1) throw UsageError("--max-deg takes a single degree here");
  if ((*b)[0] < 0) throw UsageError("--max-deg must be nonnegative");
  return (*b)[0];
}

pfk::CheckOptions options(const Config& cfg) {
  pfk::CheckOptions o;
  o.seed = cfg.seed;
  o.primes = cfg.primes;
  o.field = pfk::CoeffDomain::parse(cfg.field);
  o.threads = cfg.threads > 0 ? cfg.threads : pfk::default_threads();
  o.timing = cfg.timing;
  for (auto p : o.primes) pfk::PrimeField check(p);
  return o;
}

pfk::D2Form d2_form(const Config& cfg) {
  if (cfg.d2 == "weighted") return pfk::D2Form::weighted;
  if (cfg.d2 == "literal") return pfk::D2Form::literal;
  throw UsageError("--d2 must be weighted or literal");
}

void apply_mutation(const Config& cfg, pfk::FreeComplex& c) {
  if (cfg.mutate.empty()) return;
  if (cfg.mutate == "flip") {
    int j = cfg.mutate_at ? cfg.mutate_at : 2;
    auto [r, col] = pfk::first_entry(c, j);
    pfk::mutate_flip_sign(c, j, r, col);
  } else if (cfg.mutate == "double") {
    int j = cfg.mutate_at ? cfg.mutate_at : 1;
    auto [r, col] = pfk::first_entry(c, j);
    pfk::mutate_scale_entry(c, j, r, col, 2);
  } else {
    throw UsageError("--mutate must be flip or double");
  }
}

/// The complex named by --in, else by --family/--n/--i, with any mutation.
pfk::Target load_target(const Config& cfg, nlohmann::json& params) {
  pfk::Target t;
  if (!cfg.in.empty()) {
    t.family = "file";
    t.complex() = pfk::parse_complex(read_file(cfg.in));
    params["in"] = cfg.in;
  } else {
    t = pfk::build_target(cfg.family, cfg.n, cfg.i, cfg.vars, d2_form(cfg));
    params["family"] = cfg.family;
    if (cfg.family == "koszul") params["vars"] = cfg.vars;
    else params["n"] = cfg.n;
    if (cfg.family == "c") {
      params["i"] = cfg.i;
      params["d2"] = cfg.d2;
    }
  }
  if (!cfg.mutate.empty()) {
    apply_mutation(cfg, t.complex());
    params["mutate"] = cfg.mutate;
  }
  return t;
}

int emit_reports(const Config& cfg, const std::vector<pfk::Report>& rs) {
  std::string text;
  if (cfg.format == "json") text = pfk::reports_json(rs);
  else if (cfg.format == "csv") text = pfk::render_csv(rs);
  else if (cfg.format == "text") text = pfk::render_text(rs);
  else throw UsageError("--format must be json, csv or text");
  std::string summary;
  for (const auto& r : rs) summary += r.check + ": " + pfk::to_string(r.status) + "\n";
  write_output(cfg, text, summary);
  for (const auto& r : rs)
    if (r.status == pfk::Status::truncated) std::cerr << "warning: " << r.check << " truncated by the degree bound\n";
  return pfk::exit_code(rs);
}

int cmd_build(const Config& cfg) {
  nlohmann::json params;
  pfk::Target t = load_target(cfg, params);
  pfk::check_homogeneity(t.complex());
  write_output(cfg, pfk::emit_complex(t.complex()), "");
  if (!cfg.out.empty()) {
    std::cout << "ranks";
    for (int j = t.complex().lo(); j <= t.complex().hi(); ++j) std::cout << " " << t.complex().rank(j);
    std::cout << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& sub, const Config& cfg) {
  pfk::CheckOptions o = options(cfg);
  std::vector<pfk::Report> rs;
  if (sub == "complex") {
    nlohmann::json params;
    pfk::Target t = load_target(cfg, params);
    rs.push_back(pfk::check_complex(t.complex(), params, o));
  } else if (sub == "be-ranks") {
    nlohmann::json params;
    pfk::Target t = load_target(cfg, params);
    std::optional<std::vector<std::size_t>> expected;
    if (cfg.in.empty() && cfg.family == "c") expected = pfk::expected_C_ranks(cfg.n, cfg.i);
    rs.push_back(pfk::check_be_ranks(t.complex(), params, o, expected));
  } else if (sub == "filtration") {
    if (!o.field.is_field()) throw UsageError("rank requires a field; use SNF (verify torsion)");
    int bound = scalar_bound(cfg, cfg.n <= 2 ? 8 : 5);
    if (!cfg.in.empty()) {
      nlohmann::json params;
      pfk::Target t = load_target(cfg, params);
      rs.push_back(pfk::check_filtration(cfg.n, bound, o, cfg.js, &t.complex()));
    } else if (!cfg.mutate.empty()) {
      nlohmann::json params;
      Config c2 = cfg;
      c2.family = "koszul-pfaffian";
      pfk::Target t = load_target(c2, params);
      rs.push_back(pfk::check_filtration(cfg.n, bound, o, cfg.js, &t.complex()));
    } else {
      rs.push_back(pfk::check_filtration(cfg.n, bound, o, cfg.js));
    }
  } else if (sub == "hu") {
    if (!o.field.is_field()) throw UsageError("rank requires a field; use SNF (verify torsion)");
    rs = pfk::check_hu(cfg.n, cfg.check, parse_bound(cfg.max_deg), o);
  } else if (sub == "duality") {
    if (!o.field.is_field()) throw UsageError("rank requires a field; use SNF (verify torsion)");
    rs.push_back(pfk::check_duality(cfg.n, scalar_bound(cfg, 6), o, cfg.is));
  } else if (sub == "torsion") {
    nlohmann::json params;
    pfk::Target t = load_target(cfg, params);
    rs.push_back(pfk::check_torsion(t.complex(), params, scalar_bound(cfg, 5), o, cfg.js));
  } else if (sub == "betti") {
    if (!o.field.is_field()) throw UsageError("rank requires a field; use SNF (verify torsion)");
    nlohmann::json params;
    pfk::Target t = load_target(cfg, params);
    int j = cfg.js.empty() ? 1 : cfg.js.front();
    auto bound = parse_bound(cfg.max_deg);
    if (!bound) bound = t.complex().ring()->arity() == 2 ? pfk::Multidegree(cfg.n + 1, 3) : pfk::Multidegree(6);
    if (bound->arity() != t.complex().ring()->arity()) throw UsageError("--max-deg arity does not match the ring");
    std::optional<pfk::BettiPrediction> want;
    if (cfg.in.empty() && cfg.mutate.empty()) want = pfk::predicted_betti(cfg.family, cfg.n, j);
    rs.push_back(pfk::check_betti(t.complex(), params, j, *bound, o, want));
  } else {
    throw UsageError("unknown verify subcommand " + sub);
  }
  return emit_reports(cfg, rs);
}

int cmd_report(const Config& cfg) {
  if (cfg.in.empty()) throw UsageError("report needs --in");
  std::vector<pfk::Report> rs;
  try {
    rs = pfk::parse_reports(read_file(cfg.in));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report: ") + e.what());
  }
  Config c2 = cfg;
  c2.in.clear();
  if (cfg.format == "json") {
    write_output(c2, pfk::reports_json(rs), "");
  } else if (cfg.format == "csv") {
    write_output(c2, pfk::render_csv(rs), "");
  } else {
    write_output(c2, pfk::render_text(rs), "");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koszul homology of Pfaffian and Huneke-Ulrich ideals"};
  app.require_subcommand(1);
  Config cfg;
  cfg.format = "";

  auto common = [&](CLI::App* a) {
    a->add_option("--n", cfg.n, "size parameter n");
    a->add_option("--field", cfg.field, "q, z or zp:P");
    a->add_option("--seed", cfg.seed, "random seed");
    a->add_option("--threads", cfg.threads, "worker threads (default PFK_THREADS or 1)")->check(CLI::PositiveNumber);
    a->add_option("--out", cfg.out, "output path");
    a->add_option("--format", cfg.format, "json, csv or text");
    a->add_option("--in", cfg.in, "input complex or report file");
    a->add_option("--max-deg", cfg.max_deg, "degree bound A or A,B");
    a->add_option("--primes", cfg.primes, "primes for rank certificates")->delimiter(',');
    a->add_flag("--timing", cfg.timing, "record wall time in reports");
  };
  auto complex_opts = [&](CLI::App* a) {
    a->add_option("--family", cfg.family, "c, koszul-pfaffian, koszul-hu or koszul");
    a->add_option("--i", cfg.i, "index i of C^i");
    a->add_option("--vars", cfg.vars, "number of variables for --family koszul");
    a->add_option("--d2", cfg.d2, "middle map of C^i: weighted or literal");
    a->add_option("--mutate", cfg.mutate, "flip (a sign) or double (an entry)");
    a->add_option("--mutate-at", cfg.mutate_at, "differential index for --mutate");
  };

  auto* build = app.add_subcommand("build", "build a complex and write its JSON");
  common(build);
  complex_opts(build);

  auto* verify = app.add_subcommand("verify", "run checks and write a report");
  verify->require_subcommand(1);
  std::string sub;
  const std::pair<const char*, const char*> subs[] = {
      {"complex", "d*d = 0 and homogeneity, symbolically"},
      {"be-ranks", "ranks of the differentials at a random point mod p"},
      {"filtration", "HF of Pfaffian Koszul homology against the filtration"},
      {"hu", "Huneke-Ulrich checks (--check)"},
      {"duality", "H_i -> Hom(H_{t-i}, H_t) is an isomorphism"},
      {"torsion", "SNF torsion and Q / F_2 / F_3 agreement"},
      {"betti", "minimal generators and relations of H_j"}};
  for (const auto& [name, help] : subs) {
    auto* s = verify->add_subcommand(name, help);
    common(s);
    complex_opts(s);
    s->add_option("--j", cfg.js, "homology indices")->delimiter(',');
    if (std::string(name) == "duality") s->add_option("--pair", cfg.is, "source indices i")->delimiter(',');
    if (std::string(name) == "hu") s->add_option("--check", cfg.check, "h2-cycle, betti, kustin, h2-hf or all");
    s->callback([&sub, name] { sub = name; });
  }

  auto* report = app.add_subcommand("report", "render a report file");
  common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      if (cfg.format.empty()) cfg.format = "json";
      return cmd_build(cfg);
    }
    if (verify->parsed()) {
      if (cfg.format.empty()) cfg.format = "json";
      return cmd_verify(sub, cfg);
    }
    if (cfg.format.empty()) cfg.format = "text";
    return cmd_report(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
