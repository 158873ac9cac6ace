#pragma once

// Closed-form Hilbert functions of the pure modules M_i and the predicted
// Hilbert functions of Koszul homology of the Pfaffian ideal (filtration
// with pure quotients), plus HF(A/J) for the Huneke-Ulrich ideal.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfk/builders.hpp"
#include "pfk/homology.hpp"

namespace pfk {

/// Number of degree-e monomials in C(2n+1, 2) variables of degree 1.
inline Integer pfaffian_ring_hf(int n, long e) {
  if (e < 0) return 0;
  const long v = choose(2 * n + 1, 2);
  return binomial(e + v - 1, v - 1);
}

/// HF of M_i = coker of the pure resolution C^i, by Euler characteristic:
/// twists 0, n−i, n+1, 2n+1−i with ranks C(2n+1,i), C(2n+1,i+1) twice, C(2n+1,i).
inline Integer hf_M(int n, int i, long d) {
  if (n < 1 || i < 0 || i > n - 1) throw std::out_of_range("hf_M needs 0 <= i <= n-1");
  const int N = 2 * n + 1;
  const Integer a = choose(N, i), b = choose(N, i + 1);
  return a * pfaffian_ring_hf(n, d) - b * pfaffian_ring_hf(n, d - (n - i)) + b * pfaffian_ring_hf(n, d - (n + 1)) -
         a * pfaffian_ring_hf(n, d - (2 * n + 1 - i));
}

enum class FiltrationPart { a, b };

/// One layer M_{j−2i} of the predicted filtration, placed at `shift`.
struct FiltrationLayer {
  int i = 0;
  int module = 0;  // index of M
  int det_power = 0;
  long shift = 0;
};

struct FiltrationPrediction {
  int n = 0;
  int j = 0;  // index of the predicted homology module
  FiltrationPart part = FiltrationPart::a;
  std::vector<FiltrationLayer> layers;
};

/// Internal shift of layer i. Every element of internal degree d has
/// E-degree 2d (each φ_ab has E-degree 2), and M_k ⊗ (det E)^m is generated
/// by ∧^k E ⊗ (det E)^m, of E-degree k + m(2n+1). Hence
///   part a, H_j:         shift = (j−2i + j(2n+1)) / 2 = j(n+1) − i,
///   part b, H_{2n−2−j}:  shift = (j−2i + (2n−2−j)(2n+1)) / 2.
inline long filtration_shift(int n, int j, FiltrationPart part, int i) {
  if (part == FiltrationPart::a) return static_cast<long>(j) * (n + 1) - i;
  long e = (j - 2 * i) + static_cast<long>(2 * n - 2 - j) * (2 * n + 1);
  if (e % 2) throw std::logic_error("odd E-degree in filtration shift");
  return e / 2;
}

inline FiltrationPrediction predict_filtration(int n, int j, FiltrationPart part) {
  if (n < 1) throw std::out_of_range("n must be at least 1");
  if (part == FiltrationPart::a && (j < 0 || j > n - 1)) throw std::out_of_range("part a needs 0 <= j <= n-1");
  if (part == FiltrationPart::b && (j < 0 || j > n - 2)) throw std::out_of_range("part b needs 0 <= j <= n-2");
  FiltrationPrediction p;
  p.n = n;
  p.part = part;
  p.j = part == FiltrationPart::a ? j : 2 * n - 2 - j;
  for (int i = 0; 2 * i <= j; ++i)
    p.layers.push_back({i, j - 2 * i, p.j, filtration_shift(n, j, part, i)});
  return p;
}

inline Integer predicted_hf(const FiltrationPrediction& p, long d) {
  Integer s = 0;
  for (const auto& l : p.layers) s += hf_M(p.n, l.module, d - l.shift);
  return s;
}

inline Integer predicted_hf(int n, int j, FiltrationPart part, long d) {
  return predicted_hf(predict_filtration(n, j, part), d);
}

/// The prediction covering H_h of the Pfaffian Koszul complex, if any:
/// part a for h ≤ n−1, part b for n ≤ h ≤ 2n−2.
inline std::optional<FiltrationPrediction> prediction_for(int n, int h) {
  if (h >= 0 && h <= n - 1) return predict_filtration(n, h, FiltrationPart::a);
  if (h >= n && h <= 2 * n - 2) return predict_filtration(n, 2 * n - 2 - h, FiltrationPart::b);
  return std::nullopt;
}

/// Lowest degree in which the predicted H_h is nonzero.
inline long predicted_initial_degree(int n, int h) {
  auto p = prediction_for(n, h);
  if (!p) throw std::out_of_range("no prediction for this homology index");
  long lo = p->layers.front().shift;
  for (const auto& l : p->layers) lo = std::min(lo, l.shift);
  return lo;
}

/// HF(A/J)(d) = dim A_d − dim J_d for the Huneke-Ulrich ideal, i.e. H_0 of
/// its Koszul complex: the rank of the generator multiplication map.
inline std::map<Multidegree, std::size_t> hf_quotient(const FreeComplex& koszul, const Multidegree& bound,
                                                      const CoeffDomain& dom, int threads = 1) {
  return hilbert_function(koszul, 0, bound, dom, threads);
}

/// HF(H_2)(d) predicted as HF(A/J)(d − (n+1, 2)); `quotient` must cover
/// the shifted degree.
inline std::int64_t predicted_hf_hu(int n, const Multidegree& d, const std::map<Multidegree, std::size_t>& quotient) {
  if (n < 3) throw std::invalid_argument("n must be at least 3; n=2 is a codimension 3 Pfaffian ideal");
  Multidegree e = d - Multidegree(n + 1, 2);
  if (!e.nonnegative()) return 0;
  auto it = quotient.find(e);
  if (it == quotient.end()) throw std::out_of_range("HF(A/J) not computed at " + e.to_string());
  return static_cast<std::int64_t>(it->second);
}

}  // namespace pfk
