#pragma once

// Index subsets of [1, N], shuffle signs and comultiplication splittings of
// exterior powers. All enumeration orders are lex on element lists.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfk {

/// Strictly increasing 1-based indices; the basis vector e_I of ∧^|I| E.
using IndexSet = std::vector<int>;

inline bool is_index_set(const IndexSet& s, int ground) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 1 || s[k] > ground) return false;
    if (k && s[k - 1] >= s[k]) return false;
  }
  return true;
}

inline std::int64_t choose(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

inline std::string to_string(const IndexSet& s) {
  std::string out = "(";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
  return out + ")";
}

/// Sign of the permutation sorting the concatenation (a, b).
inline int shuffle_sign(const IndexSet& a, const IndexSet& b) {
  std::size_t inv = 0;
  for (int x : a)
    for (int y : b) {
      if (x == y) throw std::invalid_argument("shuffle_sign of overlapping sets " + to_string(a) + ", " + to_string(b));
      if (x > y) ++inv;
    }
  return inv % 2 ? -1 : 1;
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) out.push_back(a[i++]);
    else if (i == a.size() || b[j] < a[i]) out.push_back(b[j++]);
    else {
      out.push_back(a[i++]);
      ++j;
    }
  }
  return out;
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::size_t j = 0;
  for (int x : a) {
    while (j < b.size() && b[j] < x) ++j;
    if (j == b.size() || b[j] != x) out.push_back(x);
  }
  return out;
}

inline bool intersects(const IndexSet& a, const IndexSet& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return false;
}

inline IndexSet complement(const IndexSet& s, int ground) {
  IndexSet full(ground);
  for (int k = 0; k < ground; ++k) full[k] = k + 1;
  return set_difference(full, s);
}

/// All k-subsets of [1, N] in lex order.
inline std::vector<IndexSet> subsets(int ground, int k) {
  std::vector<IndexSet> out;
  if (k < 0 || k > ground) return out;
  IndexSet cur(k);
  for (int t = 0; t < k; ++t) cur[t] = t + 1;
  for (;;) {
    out.push_back(cur);
    int t = k - 1;
    while (t >= 0 && cur[t] == ground - k + t + 1) --t;
    if (t < 0) break;
    ++cur[t];
    for (int u = t + 1; u < k; ++u) cur[u] = cur[u - 1] + 1;
  }
  return out;
}

/// Position of a k-subset of [1, N] in the lex enumeration.
inline std::int64_t subset_rank(const IndexSet& s, int ground) {
  if (!is_index_set(s, ground)) throw std::invalid_argument("not an index set over [1," + std::to_string(ground) + "]");
  const int k = static_cast<int>(s.size());
  std::int64_t r = 0;
  int prev = 0;
  for (int t = 0; t < k; ++t) {
    for (int x = prev + 1; x < s[t]; ++x) r += choose(ground - x, k - t - 1);
    prev = s[t];
  }
  return r;
}

inline IndexSet subset_unrank(std::int64_t r, int k, int ground) {
  if (k < 0 || k > ground || r < 0 || r >= choose(ground, k))
    throw std::out_of_range("subset rank " + std::to_string(r) + " out of range for C(" + std::to_string(ground) + "," +
                            std::to_string(k) + ")");
  IndexSet s;
  int x = 1;
  for (int t = 0; t < k; ++t) {
    for (;; ++x) {
      std::int64_t c = choose(ground - x, k - t - 1);
      if (r < c) break;
      r -= c;
    }
    s.push_back(x++);
  }
  return s;
}

struct Splitting {
  IndexSet first;
  IndexSet second;
  int sign;
  bool operator==(const Splitting&) const = default;
};

/// Every splitting I = I' ⊔ I'' with |I'| = k, lex on I', signed by
/// shuffle_sign(I', I'').
inline std::vector<Splitting> comultiply(const IndexSet& s, int k) {
  const int m = static_cast<int>(s.size());
  if (k < 0 || k > m)
    throw std::out_of_range("comultiply degree " + std::to_string(k) + " outside [0," + std::to_string(m) + "]");
  std::vector<Splitting> out;
  for (const auto& pos : subsets(m, k)) {
    IndexSet a, b;
    std::size_t p = 0;
    std::size_t inv = 0;
    for (int t = 1; t <= m; ++t) {
      if (p < pos.size() && pos[p] == t) {
        a.push_back(s[t - 1]);
        inv += b.size();  // each earlier element of I'' precedes this one
        ++p;
      } else {
        b.push_back(s[t - 1]);
      }
    }
    // inversions of (I', I'') = pairs x in I', y in I'' with x > y
    out.push_back({std::move(a), std::move(b), inv % 2 ? -1 : 1});
  }
  return out;
}

}  // namespace pfk
