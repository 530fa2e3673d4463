#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "edgesym/combinatorial_map.hpp"
#include "edgesym/error.hpp"
#include "edgesym/isometry.hpp"
#include "edgesym/tolerance.hpp"

namespace edgesym {

/// Bijection on dense vertex ids; v maps to images()[v].
class VertexPermutation {
 public:
  VertexPermutation() = default;

  explicit VertexPermutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> hit(images_.size(), false);
    for (int x : images_) {
      if (x < 0 || x >= static_cast<int>(images_.size()) || hit[x]) {
        throw Error(ErrorKind::InvalidArgument, "vertex permutation is not a bijection");
      }
      hit[x] = true;
    }
  }

  static VertexPermutation identity(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return VertexPermutation(std::move(v));
  }

  int operator()(int v) const { return images_[v]; }
  std::size_t size() const { return images_.size(); }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i] != static_cast<int>(i)) return false;
    }
    return true;
  }

  /// (a * b)(v) = a(b(v))
  friend VertexPermutation operator*(const VertexPermutation& a, const VertexPermutation& b) {
    std::vector<int> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = a(b(static_cast<int>(i)));
    return VertexPermutation(std::move(out));
  }

  VertexPermutation inverse() const {
    std::vector<int> out(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) out[images_[i]] = static_cast<int>(i);
    return VertexPermutation(std::move(out));
  }

  /// Cycle notation on labels, e.g. "(1 4 3 2)"; fixed points are omitted
  /// and the identity prints as "()". Each cycle starts at its
  /// lexicographically smallest label; cycles are ordered by that label.
  std::string cycle_notation(const std::vector<std::string>& labels) const {
    std::vector<int> order(images_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return labels[a] < labels[b]; });
    std::vector<bool> seen(images_.size(), false);
    std::string out;
    for (int start : order) {
      if (seen[start] || images_[start] == start) continue;
      out += '(';
      int v = start;
      bool first = true;
      while (!seen[v]) {
        seen[v] = true;
        if (!first) out += ' ';
        out += labels[v];
        first = false;
        v = images_[v];
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  friend auto operator<=>(const VertexPermutation&, const VertexPermutation&) = default;

 private:
  std::vector<int> images_;
};

/// A map automorphism restricted to vertices and faces.
struct Automorphism {
  VertexPermutation vertex;
  std::vector<int> face;
};

/// All automorphisms of the map (fixing the outer face for plane graphs),
/// sorted by vertex permutation. A seed flag is sent to every flag with the
/// same (vertex degree, face size) signature; propagation along the flag
/// graph is forced, so each candidate yields at most one automorphism.
inline std::vector<Automorphism> enumerate_automorphisms(const CombinatorialMap& m) {
  const int seed = detail::seed_flag(m);
  const int seed_degree = m.degree(m.flag_vertex(seed));
  const std::size_t seed_size = m.faces()[m.flag_face(seed)].size();
  std::vector<Automorphism> out;
  std::set<std::vector<int>> seen;
  for (int y = 0; y < m.flag_count(); ++y) {
    if (m.degree(m.flag_vertex(y)) != seed_degree || m.faces()[m.flag_face(y)].size() != seed_size) continue;
    if (!m.is_bounded(m.flag_face(y))) continue;
    auto iso = detail::propagate_flags(m, m, seed, y);
    if (!iso) continue;
    if (m.outer_face() && iso->face[*m.outer_face()] != *m.outer_face()) continue;
    if (!seen.insert(iso->vertex).second) continue;
    out.push_back({VertexPermutation(iso->vertex), iso->face});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
  return out;
}

inline std::vector<VertexPermutation> enumerate_symmetries(const CombinatorialMap& m) {
  std::vector<VertexPermutation> out;
  for (auto& a : enumerate_automorphisms(m)) out.push_back(std::move(a.vertex));
  return out;
}

template <int Dim>
bool is_edge_preserving(const CombinatorialMap& m, std::span<const Vec<Dim>> coords, const VertexPermutation& sigma,
                        const Tolerance& tol = {}) {
  const double threshold = tol.length_threshold(diameter<Dim>(coords));
  bool preserving = true;
  for (const auto& [u, v] : m.edges()) {
    const int su = sigma(u);
    const int sv = sigma(v);
    if (!m.has_edge(su, sv)) {
      throw Error(ErrorKind::PermutationNotASymmetry, "edge " + m.labels()[u] + "-" + m.labels()[v] +
                                                          " maps to non-edge " + m.labels()[su] + "-" +
                                                          m.labels()[sv]);
    }
    const double before = (coords[u] - coords[v]).norm();
    const double after = (coords[su] - coords[sv]).norm();
    if (std::abs(before - after) > threshold) preserving = false;
  }
  return preserving;
}

/// Procrustes fit of the motion sending vertex i to the position of sigma(i).
template <int Dim>
IsometryFit<Dim> fit_symmetry(std::span<const Vec<Dim>> coords, const VertexPermutation& sigma) {
  std::vector<Vec<Dim>> dst(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) dst[i] = coords[sigma(static_cast<int>(i))];
  return best_fit_isometry<Dim>(coords, std::span<const Vec<Dim>>(dst), true);
}

/// The isometry realizing sigma, if the rmsd is within fit_eps * diameter.
template <int Dim>
std::optional<IsometryFit<Dim>> realize(const CombinatorialMap& m, std::span<const Vec<Dim>> coords,
                                        const VertexPermutation& sigma, const Tolerance& tol = {}) {
  if (sigma.size() != static_cast<std::size_t>(m.vertex_count()) || coords.size() != sigma.size()) {
    throw Error(ErrorKind::LengthMismatch, "realize: permutation, map and coordinates disagree in size");
  }
  auto fit = fit_symmetry<Dim>(coords, sigma);
  if (fit.rmsd > tol.fit_threshold(diameter<Dim>(coords))) return std::nullopt;
  return fit;
}

template <int Dim>
struct SymmetryRecord {
  VertexPermutation sigma;
  std::vector<int> face_image;
  bool edge_preserving = false;
  bool realized = false;
  std::optional<Isometry<Dim>> isometry;
  double rmsd = 0.0;
  /// +1 or -1 for realized symmetries, 0 otherwise.
  int orientation = 0;
};

template <int Dim>
struct SymmetryReport {
  std::string instance;
  double diameter = 0.0;
  std::size_t total = 0;
  std::size_t edge_preserving = 0;
  std::size_t realized = 0;
  std::vector<SymmetryRecord<Dim>> records;
  bool closed_under_composition = false;
};

inline bool is_group(const std::vector<VertexPermutation>& perms) {
  if (perms.empty()) return false;
  std::set<VertexPermutation> members(perms.begin(), perms.end());
  if (!members.count(VertexPermutation::identity(perms.front().size()))) return false;
  for (const auto& a : perms) {
    if (!members.count(a.inverse())) return false;
    for (const auto& b : perms) {
      if (!members.count(a * b)) return false;
    }
  }
  return true;
}

template <int Dim>
SymmetryReport<Dim> analyze(const CombinatorialMap& m, std::span<const Vec<Dim>> coords, const Tolerance& tol = {},
                            std::string instance = {}) {
  SymmetryReport<Dim> report;
  report.instance = std::move(instance);
  report.diameter = diameter<Dim>(coords);
  const double fit_threshold = tol.fit_threshold(report.diameter);
  std::vector<VertexPermutation> perms;
  for (auto& aut : enumerate_automorphisms(m)) {
    SymmetryRecord<Dim> rec;
    rec.edge_preserving = is_edge_preserving<Dim>(m, coords, aut.vertex, tol);
    const auto fit = fit_symmetry<Dim>(coords, aut.vertex);
    rec.rmsd = fit.rmsd;
    if (fit.rmsd <= fit_threshold) {
      if (!rec.edge_preserving) {
        throw Error(ErrorKind::InconsistentTolerance,
                    "symmetry " + aut.vertex.cycle_notation(m.labels()) +
                        " is realized within fit_eps but fails the edge-length comparison; tighten fit_eps");
      }
      rec.realized = true;
      rec.isometry = fit.isometry;
      rec.orientation = fit.isometry.orientation();
    }
    perms.push_back(aut.vertex);
    rec.sigma = std::move(aut.vertex);
    rec.face_image = std::move(aut.face);
    report.edge_preserving += rec.edge_preserving ? 1 : 0;
    report.realized += rec.realized ? 1 : 0;
    report.records.push_back(std::move(rec));
  }
  report.total = report.records.size();
  report.closed_under_composition = is_group(perms);
  return report;
}

template <int Dim>
SymmetryReport<Dim> analyze(const CombinatorialMap& m, const std::vector<Vec<Dim>>& coords, const Tolerance& tol = {},
                            std::string instance = {}) {
  return analyze<Dim>(m, std::span<const Vec<Dim>>(coords), tol, std::move(instance));
}

}  // namespace edgesym
