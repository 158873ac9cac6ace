#pragma once

// Verification reports: one record per check with predicted and computed
// tables, JSON (de)serialization, CSV rows for Hilbert-function tables and
// an aligned text rendering.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfk/poly.hpp"

namespace pfk {

using nlohmann::json;

/// In increasing severity. truncated and heuristic still count as success.
enum class Status { pass, truncated, heuristic, shift_falsified, fail };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::truncated: return "truncated";
    case Status::heuristic: return "heuristic";
    case Status::shift_falsified: return "shift_falsified";
    case Status::fail: return "fail";
  }
  return "fail";
}

inline Status parse_status(const std::string& s) {
  for (Status x : {Status::pass, Status::truncated, Status::heuristic, Status::shift_falsified, Status::fail})
    if (to_string(x) == s) return x;
  throw std::invalid_argument("unknown status '" + s + "'");
}

inline Status worst(Status a, Status b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }
inline bool is_success(Status s) { return static_cast<int>(s) <= static_cast<int>(Status::heuristic); }

/// Table keys: "3" or "(1,2)".
inline std::string degree_key(const Multidegree& d) { return d.to_string(); }

inline Multidegree parse_degree_key(const std::string& s) {
  std::string t = s;
  if (!t.empty() && t.front() == '(') {
    if (t.back() != ')') throw std::invalid_argument("bad degree '" + s + "'");
    t = t.substr(1, t.size() - 2);
    auto comma = t.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad degree '" + s + "'");
    return Multidegree(std::stoi(t.substr(0, comma)), std::stoi(t.substr(comma + 1)));
  }
  std::size_t used = 0;
  int v = std::stoi(t, &used);
  if (used != t.size()) throw std::invalid_argument("bad degree '" + s + "'");
  return Multidegree(v);
}

inline bool is_degree_key(const std::string& s) {
  try {
    parse_degree_key(s);
    return true;
  } catch (...) {
    return false;
  }
}

template <class Map>
json degree_table_json(const Map& m) {
  json t = json::object();
  for (const auto& [d, v] : m) t[degree_key(d)] = v;
  return t;
}

struct Report {
  std::string check;
  json params = json::object();
  std::uint64_t seed = 42;
  std::vector<std::uint32_t> primes;
  json predicted = json::object();
  json computed = json::object();
  Status status = Status::pass;
  std::optional<double> timing_ms;
  std::vector<std::string> messages;

  void note(std::string m) { messages.push_back(std::move(m)); }
  void degrade(Status s) { status = worst(status, s); }
};

inline json to_json(const Report& r) {
  json j;
  j["check"] = r.check;
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["primes"] = r.primes;
  j["tables"] = {{"predicted", r.predicted}, {"computed", r.computed}};
  j["status"] = to_string(r.status);
  j["timing_ms"] = r.timing_ms ? json(*r.timing_ms) : json(nullptr);
  j["messages"] = r.messages;
  return j;
}

inline Report report_from_json(const json& j) {
  Report r;
  r.check = j.at("check").get<std::string>();
  r.params = j.value("params", json::object());
  r.seed = j.value("seed", std::uint64_t{42});
  r.primes = j.value("primes", std::vector<std::uint32_t>{});
  const json& t = j.at("tables");
  r.predicted = t.value("predicted", json::object());
  r.computed = t.value("computed", json::object());
  r.status = parse_status(j.at("status").get<std::string>());
  if (j.contains("timing_ms") && !j["timing_ms"].is_null()) r.timing_ms = j["timing_ms"].get<double>();
  r.messages = j.value("messages", std::vector<std::string>{});
  return r;
}

inline Status combined_status(const std::vector<Report>& rs) {
  Status s = Status::pass;
  for (const auto& r : rs) s = worst(s, r.status);
  return s;
}

/// 0 when every check passed (possibly truncated or heuristic), else 1.
inline int exit_code(const std::vector<Report>& rs) { return is_success(combined_status(rs)) ? 0 : 1; }

inline std::string reports_json(const std::vector<Report>& rs) {
  json arr = json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return json{{"reports", arr}}.dump(2) + "\n";
}

inline std::vector<Report> parse_reports(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object() || !j.contains("reports") || !j["reports"].is_array())
    throw std::invalid_argument("report file needs a top-level \"reports\" array");
  std::vector<Report> out;
  for (const auto& r : j["reports"]) out.push_back(report_from_json(r));
  return out;
}

// ---------------------------------------------------------------------------
// rendering

namespace detail {

/// Degree-keyed entries of a table in graded order.
inline std::vector<std::pair<Multidegree, json>> sorted_degrees(const json& t) {
  std::vector<std::pair<Multidegree, json>> out;
  for (auto it = t.begin(); it != t.end(); ++it) out.emplace_back(parse_degree_key(it.key()), it.value());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.total() != b.first.total()) return a.first.total() < b.first.total();
    return a.first < b.first;
  });
  return out;
}

inline bool is_degree_table(const json& t) {
  if (!t.is_object() || t.empty()) return false;
  for (auto it = t.begin(); it != t.end(); ++it)
    if (!is_degree_key(it.key()) || !it.value().is_number_integer()) return false;
  return true;
}

inline bool is_betti_name(const std::string& name) { return name.rfind("beta", 0) == 0 || name.rfind("F", 0) == 0; }

inline std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

/// "d:   3  4   5   6" over "dim: 5 40 175 560", columns right-aligned.
inline void render_hf_line(std::ostream& os, const json& t) {
  auto rows = sorted_degrees(t);
  std::vector<std::string> top{"d:"}, bottom{"dim:"};
  for (const auto& [d, v] : rows) {
    top.push_back(d.to_string());
    bottom.push_back(cell(v));
  }
  std::size_t w0 = std::max(top[0].size(), bottom[0].size());
  std::string a = top[0] + std::string(w0 - top[0].size(), ' ');
  std::string b = bottom[0] + std::string(w0 - bottom[0].size(), ' ');
  for (std::size_t k = 1; k < top.size(); ++k) {
    std::size_t w = std::max(top[k].size(), bottom[k].size());
    a += " " + std::string(w - top[k].size(), ' ') + top[k];
    b += " " + std::string(w - bottom[k].size(), ' ') + bottom[k];
  }
  os << "    " << a << "\n    " << b << "\n";
}

/// Bigraded Hilbert function as a grid: rows a, columns b.
inline void render_hf_grid(std::ostream& os, const json& t) {
  auto rows = sorted_degrees(t);
  int amax = 0, bmax = 0;
  std::map<std::pair<int, int>, std::string> at;
  for (const auto& [d, v] : rows) {
    amax = std::max(amax, d[0]);
    bmax = std::max(bmax, d[1]);
    at[{d[0], d[1]}] = cell(v);
  }
  std::size_t w = 1;
  for (const auto& [k, s] : at) w = std::max(w, s.size());
  auto pad = [w](const std::string& s) { return std::string(w - std::min(w, s.size()), ' ') + s; };
  os << "    a\\b";
  for (int b = 0; b <= bmax; ++b) os << " " << pad(std::to_string(b));
  os << "\n";
  for (int a = 0; a <= amax; ++a) {
    std::string lab = std::to_string(a);
    os << "    " << lab << std::string(3 - std::min<std::size_t>(3, lab.size()), ' ');
    for (int b = 0; b <= bmax; ++b) {
      auto it = at.find({a, b});
      os << " " << pad(it == at.end() ? "." : it->second);
    }
    os << "\n";
  }
}

/// "(1,2):1 (3,1):6", zero entries omitted.
inline std::string inline_table(const json& t) {
  std::string out;
  for (const auto& [d, v] : sorted_degrees(t)) {
    if (v.is_number_integer() && v.get<std::int64_t>() == 0) continue;
    if (!out.empty()) out += " ";
    out += d.to_string() + ":" + cell(v);
  }
  return out.empty() ? "(empty)" : out;
}

/// Macaulay layout for singly graded β₀/β₁: row = degree − column index.
inline void render_macaulay(std::ostream& os, const json& b0, const json& b1) {
  std::map<std::pair<int, int>, std::string> at;
  int rmin = 0, rmax = 0;
  bool first = true;
  auto add = [&](const json& t, int col) {
    for (const auto& [d, v] : sorted_degrees(t)) {
      if (v.get<std::int64_t>() == 0) continue;
      int r = d[0] - col;
      at[{r, col}] = cell(v);
      rmin = first ? r : std::min(rmin, r);
      rmax = first ? r : std::max(rmax, r);
      first = false;
    }
  };
  add(b0, 0);
  add(b1, 1);
  if (first) return;
  std::size_t w = 5;
  for (const auto& [k, s] : at) w = std::max(w, s.size());
  auto pad = [w](const std::string& s) { return std::string(w - std::min(w, s.size()), ' ') + s; };
  os << "           " << pad("0") << " " << pad("1") << "\n";
  os << "    total: ";
  for (const json* t : {&b0, &b1}) {
    std::int64_t s = 0;
    for (auto it = t->begin(); it != t->end(); ++it) s += it.value().get<std::int64_t>();
    os << pad(std::to_string(s)) << " ";
  }
  os << "\n";
  for (int r = rmin; r <= rmax; ++r) {
    std::string lab = std::to_string(r) + ":";
    os << "    " << std::string(7 - std::min<std::size_t>(7, lab.size()), ' ') << lab;
    for (int c = 0; c <= 1; ++c) {
      auto it = at.find({r, c});
      os << pad(it == at.end() ? "." : it->second) << " ";
    }
    os << "\n";
  }
}

inline void render_tables(std::ostream& os, const char* title, const json& tables) {
  if (!tables.is_object() || tables.empty()) return;
  os << "  " << title << ":\n";
  for (auto it = tables.begin(); it != tables.end(); ++it) {
    const std::string& name = it.key();
    const json& t = it.value();
    if (is_degree_table(t)) {
      bool bigraded = parse_degree_key(t.begin().key()).arity() == 2;
      if (is_betti_name(name) || bigraded) {
        os << "   " << name << ": " << inline_table(t) << "\n";
        if (!is_betti_name(name)) render_hf_grid(os, t);
      } else {
        os << "   " << name << ":\n";
        render_hf_line(os, t);
      }
    } else {
      os << "   " << name << ": " << t.dump() << "\n";
    }
  }
  if (tables.contains("beta0") && tables.contains("beta1") && is_degree_table(tables["beta0"]) &&
      parse_degree_key(tables["beta0"].begin().key()).arity() == 1) {
    json b1 = is_degree_table(tables["beta1"]) ? tables["beta1"] : json::object();
    os << "   betti (row = degree - column):\n";
    render_macaulay(os, tables["beta0"], b1);
  }
}

}  // namespace detail

inline std::string render_text(const std::vector<Report>& rs) {
  if (rs.empty()) return "no checks run\n";
  std::ostringstream os;
  for (const auto& r : rs) {
    os << r.check << " [" << to_string(r.status) << "]";
    if (!r.params.empty()) os << " " << r.params.dump();
    os << "\n  seed: " << r.seed;
    if (!r.primes.empty()) {
      os << "  primes:";
      for (auto p : r.primes) os << " " << p;
    }
    if (r.timing_ms) os << "  time: " << *r.timing_ms << " ms";
    os << "\n";
    detail::render_tables(os, "predicted", r.predicted);
    detail::render_tables(os, "computed", r.computed);
    for (const auto& m : r.messages) os << "  - " << m << "\n";
  }
  os << "overall: " << to_string(combined_status(rs)) << "\n";
  return os.str();
}

/// Rows "check,j,d[,e],predicted,computed,status" for every Hilbert-function
/// table named H<j>; other tables have no CSV form.
inline std::string render_csv(const std::vector<Report>& rs) {
  bool bigraded = false;
  for (const auto& r : rs)
    for (const json* t : {&r.predicted, &r.computed})
      for (auto it = t->begin(); it != t->end(); ++it)
        if (detail::is_degree_table(it.value()) && parse_degree_key(it.value().begin().key()).arity() == 2)
          bigraded = true;
  std::ostringstream os;
  os << (bigraded ? "check,j,a,b,predicted,computed,status\n" : "check,j,d,predicted,computed,status\n");
  for (const auto& r : rs) {
    std::vector<std::string> names;
    for (const json* t : {&r.predicted, &r.computed})
      for (auto it = t->begin(); it != t->end(); ++it)
        if (it.key().size() > 1 && it.key()[0] == 'H' &&
            it.key().find_first_not_of("0123456789", 1) == std::string::npos &&
            std::find(names.begin(), names.end(), it.key()) == names.end())
          names.push_back(it.key());
    std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      return std::stoi(a.substr(1)) < std::stoi(b.substr(1));
    });
    for (const auto& name : names) {
      json p = r.predicted.value(name, json::object()), c = r.computed.value(name, json::object());
      std::map<Multidegree, std::pair<std::string, std::string>> by;
      for (const auto& [d, v] : detail::sorted_degrees(p)) by[d].first = detail::cell(v);
      for (const auto& [d, v] : detail::sorted_degrees(c)) by[d].second = detail::cell(v);
      std::vector<Multidegree> keys;
      for (const auto& [d, v] : by) keys.push_back(d);
      std::sort(keys.begin(), keys.end(), [](const Multidegree& a, const Multidegree& b) {
        if (a.total() != b.total()) return a.total() < b.total();
        return a < b;
      });
      for (const auto& d : keys) {
        const auto& [pv, cv] = by[d];
        std::string st = pv.empty() || cv.empty() ? "" : (pv == cv ? "pass" : "fail");
        os << r.check << "," << name.substr(1) << ",";
        if (d.arity() == 1)
          os << d[0] << (bigraded ? "," : "");
        else
          os << d[0] << "," << d[1];
        os << "," << pv << "," << cv << "," << st << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace pfk
