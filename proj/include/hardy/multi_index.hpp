/*
   Copyright 2026 The hardy-factor authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace hardy {

/// Exponent tuple k = (k_1, ..., k_n) of a monomial z^k, all entries >= 0.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& k) {
  return std::accumulate(k.begin(), k.end(), 0);
}

/// Graded lexicographic order: first by total degree, then entrywise
/// lexicographic (so in two variables (0,1) precedes (1,0)).
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Box truncation window: all multi-indices with 0 <= k_i <= degree,
/// i = 1..vars. Cardinality (degree+1)^vars.
struct DegreeWindow {
  int vars = 1;
  int degree = 0;

  DegreeWindow() = default;
  DegreeWindow(int n, int d) : vars(n), degree(d) {
    if (n < 1) throw std::invalid_argument("DegreeWindow: vars must be >= 1");
    if (d < 0) throw std::invalid_argument("DegreeWindow: degree must be >= 0");
  }

  std::int64_t cardinality() const {
    std::int64_t c = 1;
    for (int i = 0; i < vars; ++i) c *= degree + 1;
    return c;
  }

  bool contains(const MultiIndex& k) const {
    if (static_cast<int>(k.size()) != vars) return false;
    for (int e : k)
      if (e < 0 || e > degree) return false;
    return true;
  }

  DegreeWindow grown(int by) const { return DegreeWindow(vars, degree + by); }

  friend bool operator==(const DegreeWindow& a, const DegreeWindow& b) {
    return a.vars == b.vars && a.degree == b.degree;
  }
};

namespace detail {

inline std::uint64_t pack_index(const MultiIndex& k) {
  // 8 bits per entry is ample for desk-scale degrees.
  std::uint64_t key = 0;
  for (int e : k) key = (key << 8) | static_cast<std::uint64_t>(e & 0xff);
  return key;
}

/// Enumeration of a window in graded-lex order with O(1) position lookup.
struct WindowTable {
  DegreeWindow window;
  std::vector<MultiIndex> indices;              // position -> multi-index
  std::unordered_map<std::uint64_t, int> pos_;  // packed multi-index -> position

  explicit WindowTable(const DegreeWindow& w) : window(w) {
    indices.reserve(static_cast<std::size_t>(w.cardinality()));
    MultiIndex k(w.vars, 0);
    // enumerate the full box, then sort graded-lex
    while (true) {
      indices.push_back(k);
      int i = w.vars - 1;
      while (i >= 0 && k[i] == w.degree) k[i--] = 0;
      if (i < 0) break;
      ++k[i];
    }
    std::sort(indices.begin(), indices.end(), graded_lex_less);
    pos_.reserve(indices.size() * 2);
    for (int p = 0; p < static_cast<int>(indices.size()); ++p)
      pos_.emplace(pack_index(indices[p]), p);
  }

  /// Position of k in graded-lex order, or -1 if outside the window.
  int position(const MultiIndex& k) const {
    if (!window.contains(k)) return -1;
    auto it = pos_.find(pack_index(k));
    return it == pos_.end() ? -1 : it->second;
  }
};

/// Shared per-(vars,degree) table cache. Tables are immutable once built.
inline const WindowTable& window_table(const DegreeWindow& w) {
  static std::mutex mtx;
  static std::unordered_map<std::uint64_t, std::unique_ptr<WindowTable>> cache;
  const std::uint64_t key =
      (static_cast<std::uint64_t>(w.vars) << 32) | static_cast<std::uint64_t>(w.degree);
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<WindowTable>(w)).first;
  return *it->second;
}

}  // namespace detail

}  // namespace hardy
