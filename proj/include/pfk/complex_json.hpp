#pragma once

// JSON form of a FreeComplex:
//   {ring: {vars, degrees, weights?}, lo, modules: [[label…]…],
//    differentials: [{rows, cols, entries: [{r, c, poly: [{coeff, exp}]}]}]}
// Indices r, c are 0-based; coefficients are decimal strings; exp is the
// dense exponent vector. parse(emit(c)) == c.

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfk/complex.hpp"

namespace pfk {

using nlohmann::json;

inline json poly_to_json(const ZPoly& p) {
  json arr = json::array();
  const std::size_t nv = p.ring()->nvars();
  for (const auto& [e, c] : p.terms()) {
    std::vector<int> exp(nv);
    for (std::size_t k = 0; k < nv; ++k) exp[k] = e[k];
    arr.push_back({{"coeff", c.get_str()}, {"exp", exp}});
  }
  return arr;
}

inline ZPoly poly_from_json(const json& j, const RingPtr& ring) {
  std::vector<ZPoly::Term> terms;
  for (const auto& t : j) {
    auto exp = t.at("exp").get<std::vector<int>>();
    if (exp.size() != ring->nvars()) throw std::invalid_argument("exponent length does not match the ring");
    Exponent e;
    for (std::size_t k = 0; k < exp.size(); ++k) {
      if (exp[k] < 0) throw std::invalid_argument("negative exponent");
      e.set(k, static_cast<unsigned>(exp[k]));
    }
    terms.emplace_back(e, Integer(t.at("coeff").get<std::string>()));
  }
  return ZPoly::from_terms(ring, std::move(terms));
}

inline json label_to_json(const GeneratorLabel& g) {
  json f;
  if (g.scalar) {
    f = {{"scalar", true}};
  } else {
    f = {{"k", g.k}, {"N", g.N}, {"subset", g.subset}};
  }
  return {{"functor", f}, {"det_power", g.det_power}, {"twist", g.twist.to_vector()}};
}

inline GeneratorLabel label_from_json(const json& j) {
  Multidegree tw = Multidegree::from_vector(j.at("twist").get<std::vector<int>>());
  const json& f = j.at("functor");
  int det = j.at("det_power").get<int>();
  if (f.value("scalar", false)) return GeneratorLabel::scalar_label(det, tw);
  GeneratorLabel g = GeneratorLabel::exterior(f.at("N").get<int>(), f.at("subset").get<IndexSet>(), det, tw);
  if (g.k != f.at("k").get<int>()) throw std::invalid_argument("functor k does not match subset size");
  return g;
}

inline json complex_to_json(const FreeComplex& c) {
  const PolyRing& r = *c.ring();
  json ring;
  ring["vars"] = r.names();
  json degs = json::array();
  for (const auto& d : r.degrees()) degs.push_back(d.to_vector());
  ring["degrees"] = degs;
  if (r.has_weights()) ring["weights"] = r.weights();
  json mods = json::array();
  for (const auto& m : c.modules()) {
    json gens = json::array();
    for (const auto& g : m.gens) gens.push_back(label_to_json(g));
    mods.push_back(gens);
  }
  json diffs = json::array();
  for (int j = c.lo() + 1; j <= c.hi(); ++j) {
    const PolyMatrix& d = *c.differential_ptr(j);
    json entries = json::array();
    for (std::size_t col = 0; col < d.cols(); ++col) {
      for (const auto& e : d.column(col)) entries.push_back({{"r", e.row}, {"c", col}, {"poly", poly_to_json(e.value)}});
    }
    diffs.push_back({{"rows", d.rows()}, {"cols", d.cols()}, {"entries", entries}});
  }
  return {{"ring", ring}, {"lo", c.lo()}, {"modules", mods}, {"differentials", diffs}};
}

inline FreeComplex complex_from_json(const json& j) {
  const json& rj = j.at("ring");
  auto names = rj.at("vars").get<std::vector<std::string>>();
  std::vector<Multidegree> degs;
  for (const auto& d : rj.at("degrees")) degs.push_back(Multidegree::from_vector(d.get<std::vector<int>>()));
  std::vector<Weight> weights;
  if (rj.contains("weights")) weights = rj["weights"].get<std::vector<Weight>>();
  RingPtr ring = std::make_shared<const PolyRing>(std::move(names), std::move(degs), std::move(weights));
  std::vector<GradedFreeModule> mods;
  for (const auto& m : j.at("modules")) {
    GradedFreeModule gm;
    for (const auto& g : m) gm.gens.push_back(label_from_json(g));
    mods.push_back(std::move(gm));
  }
  std::vector<PolyMatrix> diffs;
  for (const auto& d : j.at("differentials")) {
    PolyMatrix m(d.at("rows").get<std::size_t>(), d.at("cols").get<std::size_t>());
    for (const auto& e : d.at("entries")) {
      auto r = e.at("r").get<std::size_t>(), c = e.at("c").get<std::size_t>();
      if (r >= m.rows() || c >= m.cols()) throw std::invalid_argument("matrix entry out of range");
      if (m.at(r, c)) throw std::invalid_argument("duplicate matrix entry");
      m.set(r, c, poly_from_json(e.at("poly"), ring));
    }
    diffs.push_back(std::move(m));
  }
  return FreeComplex(ring, j.value("lo", 0), std::move(mods), std::move(diffs));
}

inline std::string emit_complex(const FreeComplex& c) { return complex_to_json(c).dump() + "\n"; }
inline FreeComplex parse_complex(const std::string& text) { return complex_from_json(json::parse(text)); }

}  // namespace pfk
