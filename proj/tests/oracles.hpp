#pragma once

// Reference computations that share no code path with the library routines
// they check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "edgesym/combinatorial_map.hpp"

namespace edgesym::oracle {

/// Cycle up to rotation and reversal.
inline std::vector<int> dihedral_key(std::vector<int> cyc) {
  std::vector<int> best;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t r = 0; r < cyc.size(); ++r) {
      std::vector<int> c(cyc.begin() + r, cyc.end());
      c.insert(c.end(), cyc.begin(), cyc.begin() + r);
      if (best.empty() || c < best) best = c;
    }
    std::reverse(cyc.begin(), cyc.end());
  }
  return best;
}

/// Every vertex permutation that maps the set of face cycles onto itself
/// (and fixes the outer face's cycle for plane graphs), by trying all n!.
inline std::vector<std::vector<int>> brute_force_symmetries(const CombinatorialMap& m) {
  const int n = m.vertex_count();
  std::set<std::vector<int>> bounded;
  std::vector<int> outer;
  for (int f = 0; f < m.face_count(); ++f) {
    if (m.is_bounded(f)) {
      bounded.insert(dihedral_key(m.faces()[f]));
    } else {
      outer = dihedral_key(m.faces()[f]);
    }
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    auto image = [&](const std::vector<int>& cyc) {
      std::vector<int> c;
      for (int v : cyc) c.push_back(perm[v]);
      return dihedral_key(c);
    };
    bool ok = true;
    for (const auto& f : bounded) {
      if (!bounded.count(image(f))) {
        ok = false;
        break;
      }
    }
    if (ok && !outer.empty() && image(outer) != outer) ok = false;
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Circumradius of a triangle, R = abc / (4K) with Heron's area.
inline double heron_circumradius(double a, double b, double c) {
  const double s = (a + b + c) / 2.0;
  const double area = std::sqrt(s * (s - a) * (s - b) * (s - c));
  return a * b * c / (4.0 * area);
}

/// Law of cosines.
inline double law_of_cosines(double r1, double r2, double angle) {
  return std::sqrt(r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(angle));
}

}  // namespace edgesym::oracle
