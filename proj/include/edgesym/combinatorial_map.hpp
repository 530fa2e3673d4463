#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "edgesym/error.hpp"

namespace edgesym {

/// Mutually incident (vertex, edge, face) triple, in dense ids.
struct FlagTriple {
  int vertex;
  int edge;
  int face;
  friend bool operator==(const FlagTriple&, const FlagTriple&) = default;
};

/// Vertex/edge/face incidence structure of a sphere map: the surface of a
/// 3-polytope, or a plane graph together with its unbounded face.
///
/// Faces are coherently oriented cycles of dense vertex ids, so every
/// undirected edge occurs once in each direction. Flags are encoded densely:
/// flag (face f, position i, side s) names vertex cycle[i] together with the
/// edge to the next (s = 0) or previous (s = 1) cycle vertex.
class CombinatorialMap {
 public:
  CombinatorialMap() = default;

  static CombinatorialMap from_faces(std::vector<std::string> labels,
                                     std::vector<std::vector<int>> faces,
                                     std::optional<int> outer_face = std::nullopt) {
    CombinatorialMap m;
    m.labels_ = std::move(labels);
    m.faces_ = std::move(faces);
    m.outer_face_ = outer_face;
    m.build();
    return m;
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::optional<int> outer_face() const { return outer_face_; }

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int bounded_face_count() const { return face_count() - (outer_face_ ? 1 : 0); }
  bool is_bounded(int face) const { return !outer_face_ || *outer_face_ != face; }

  int degree(int vertex) const { return degree_[vertex]; }

  std::optional<int> index_of(const std::string& label) const {
    auto it = std::lower_bound(sorted_labels_.begin(), sorted_labels_.end(),
                               std::make_pair(label, 0),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it == sorted_labels_.end() || it->first != label) return std::nullopt;
    return it->second;
  }

  std::optional<int> edge_index(int u, int v) const {
    auto it = edge_ids_.find(std::minmax(u, v));
    if (it == edge_ids_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(int u, int v) const { return edge_index(u, v).has_value(); }

  // -- flags ---------------------------------------------------------------

  int flag_count() const { return static_cast<int>(flag_face_.size()); }

  int flag_id(int face, int pos, int side) const { return face_offset_[face] + 2 * pos + side; }
  int flag_face(int flag) const { return flag_face_[flag]; }
  int flag_position(int flag) const { return (flag - face_offset_[flag_face_[flag]]) / 2; }
  int flag_side(int flag) const { return (flag - face_offset_[flag_face_[flag]]) % 2; }

  int flag_vertex(int flag) const { return faces_[flag_face(flag)][flag_position(flag)]; }

  int flag_edge(int flag) const {
    const auto& cyc = faces_[flag_face(flag)];
    const int n = static_cast<int>(cyc.size());
    const int i = flag_position(flag);
    const int other = flag_side(flag) == 0 ? cyc[(i + 1) % n] : cyc[(i + n - 1) % n];
    return *edge_index(cyc[i], other);
  }

  FlagTriple flag_triple(int flag) const { return {flag_vertex(flag), flag_edge(flag), flag_face(flag)}; }

  /// The unique flag differing from `flag` exactly in coordinate k
  /// (0: vertex, 1: edge, 2: face).
  int flag_neighbor(int flag, int k) const { return neighbors_[flag][k]; }

  std::vector<FlagTriple> flags() const {
    std::vector<FlagTriple> out;
    out.reserve(flag_count());
    for (int f = 0; f < flag_count(); ++f) out.push_back(flag_triple(f));
    return out;
  }

  friend bool operator==(const CombinatorialMap& a, const CombinatorialMap& b) {
    return a.labels_ == b.labels_ && a.faces_ == b.faces_ && a.outer_face_ == b.outer_face_;
  }

 private:
  void build() {
    const int nv = vertex_count();
    sorted_labels_.clear();
    for (int i = 0; i < nv; ++i) sorted_labels_.emplace_back(labels_[i], i);
    std::sort(sorted_labels_.begin(), sorted_labels_.end());
    for (std::size_t i = 1; i < sorted_labels_.size(); ++i) {
      if (sorted_labels_[i].first == sorted_labels_[i - 1].first) {
        throw Error(ErrorKind::DuplicateLabel, "map label '" + sorted_labels_[i].first + "' repeated");
      }
    }
    if (outer_face_ && (*outer_face_ < 0 || *outer_face_ >= face_count())) {
      throw Error(ErrorKind::InvalidArgument, "outer face id out of range");
    }

    std::map<std::pair<int, int>, std::pair<int, int>> directed;  // (u,v) -> (face, pos)
    std::vector<bool> used(nv, false);
    face_offset_.assign(faces_.size(), 0);
    flag_face_.clear();
    for (int f = 0; f < face_count(); ++f) {
      const auto& cyc = faces_[f];
      const int n = static_cast<int>(cyc.size());
      if (n < 3) throw Error(ErrorKind::InvalidArgument, "face " + std::to_string(f) + " has fewer than 3 vertices");
      std::set<int> distinct(cyc.begin(), cyc.end());
      if (static_cast<int>(distinct.size()) != n) {
        throw Error(ErrorKind::InvalidArgument, "face " + std::to_string(f) + " repeats a vertex");
      }
      face_offset_[f] = static_cast<int>(flag_face_.size());
      for (int i = 0; i < n; ++i) {
        const int u = cyc[i];
        const int v = cyc[(i + 1) % n];
        if (u < 0 || u >= nv) throw Error(ErrorKind::InvalidArgument, "face vertex id out of range");
        used[u] = true;
        if (!directed.emplace(std::make_pair(u, v), std::make_pair(f, i)).second) {
          throw Error(ErrorKind::InvalidArgument,
                      "directed edge " + labels_[u] + "->" + labels_[v] + " appears in two faces");
        }
        flag_face_.push_back(f);
        flag_face_.push_back(f);
      }
    }
    for (int v = 0; v < nv; ++v) {
      if (!used[v]) throw Error(ErrorKind::InvalidArgument, "vertex '" + labels_[v] + "' lies on no face");
    }

    edges_.clear();
    edge_ids_.clear();
    for (const auto& [uv, where] : directed) {
      if (!directed.count({uv.second, uv.first})) {
        throw Error(ErrorKind::InvalidArgument, "edge " + labels_[uv.first] + "-" + labels_[uv.second] +
                                                    " is not shared by two faces");
      }
      if (uv.first < uv.second) edges_.push_back(uv);
    }
    std::sort(edges_.begin(), edges_.end());
    degree_.assign(nv, 0);
    for (int e = 0; e < edge_count(); ++e) {
      edge_ids_[edges_[e]] = e;
      ++degree_[edges_[e].first];
      ++degree_[edges_[e].second];
    }
    if (vertex_count() - edge_count() + face_count() != 2) {
      throw Error(ErrorKind::NumericFailure,
                  "Euler relation fails: V - E + F = " +
                      std::to_string(vertex_count() - edge_count() + face_count()));
    }

    neighbors_.assign(flag_face_.size(), {0, 0, 0});
    for (int f = 0; f < face_count(); ++f) {
      const auto& cyc = faces_[f];
      const int n = static_cast<int>(cyc.size());
      for (int i = 0; i < n; ++i) {
        const int a = flag_id(f, i, 0);
        const int b = flag_id(f, i, 1);
        neighbors_[a][0] = flag_id(f, (i + 1) % n, 1);
        neighbors_[b][0] = flag_id(f, (i + n - 1) % n, 0);
        neighbors_[a][1] = b;
        neighbors_[b][1] = a;
        {
          // edge cyc[i] -> cyc[i+1]; the other face traverses it backwards
          const auto [g, j] = directed.at({cyc[(i + 1) % n], cyc[i]});
          const int m = static_cast<int>(faces_[g].size());
          neighbors_[a][2] = flag_id(g, (j + 1) % m, 1);
        }
        {
          const auto [g, j] = directed.at({cyc[i], cyc[(i + n - 1) % n]});
          neighbors_[b][2] = flag_id(g, j, 0);
        }
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<int>> faces_;
  std::optional<int> outer_face_;

  std::vector<std::pair<std::string, int>> sorted_labels_;
  std::vector<std::pair<int, int>> edges_;
  std::map<std::pair<int, int>, int> edge_ids_;
  std::vector<int> degree_;
  std::vector<int> face_offset_;
  std::vector<int> flag_face_;
  std::vector<std::array<int, 3>> neighbors_;
};

/// Rotates each cycle to start at its smallest id and sorts the list.
inline std::vector<std::vector<int>> canonical_cycles(std::vector<std::vector<int>> cycles) {
  for (auto& c : cycles) std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

/// Structure-preserving bijection between two maps, in dense ids.
struct MapIsomorphism {
  std::vector<int> vertex;
  std::vector<int> edge;
  std::vector<int> face;
};

namespace detail {

/// Forced propagation of seed -> image across the flag graphs. Returns the
/// induced vertex/edge/face maps, or nothing if the assignment is
/// inconsistent.
inline std::optional<MapIsomorphism> propagate_flags(const CombinatorialMap& a, const CombinatorialMap& b,
                                                     int seed, int image) {
  if (a.flag_count() != b.flag_count()) return std::nullopt;
  std::vector<int> phi(a.flag_count(), -1);
  std::vector<int> stack{seed};
  phi[seed] = image;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int k = 0; k < 3; ++k) {
      const int xn = a.flag_neighbor(x, k);
      const int yn = b.flag_neighbor(phi[x], k);
      if (phi[xn] < 0) {
        phi[xn] = yn;
        stack.push_back(xn);
      } else if (phi[xn] != yn) {
        return std::nullopt;
      }
    }
  }
  MapIsomorphism iso;
  iso.vertex.assign(a.vertex_count(), -1);
  iso.edge.assign(a.edge_count(), -1);
  iso.face.assign(a.face_count(), -1);
  std::vector<bool> hit(b.flag_count(), false);
  auto assign = [](std::vector<int>& m, int from, int to) {
    if (m[from] < 0) m[from] = to;
    return m[from] == to;
  };
  for (int x = 0; x < a.flag_count(); ++x) {
    if (phi[x] < 0 || hit[phi[x]]) return std::nullopt;
    hit[phi[x]] = true;
    const auto fa = a.flag_triple(x);
    const auto fb = b.flag_triple(phi[x]);
    if (!assign(iso.vertex, fa.vertex, fb.vertex) || !assign(iso.edge, fa.edge, fb.edge) ||
        !assign(iso.face, fa.face, fb.face)) {
      return std::nullopt;
    }
  }
  return iso;
}

inline int seed_flag(const CombinatorialMap& m) {
  for (int f = 0; f < m.face_count(); ++f) {
    if (m.is_bounded(f)) return m.flag_id(f, 0, 0);
  }
  return 0;
}

}  // namespace detail

/// Maps are of the same kind when both have, or both lack, an outer face.
inline bool same_kind(const CombinatorialMap& a, const CombinatorialMap& b) {
  return a.outer_face().has_value() == b.outer_face().has_value();
}

/// True iff the identity on labels extends to an isomorphism of maps
/// (sending the outer face to the outer face for plane graphs).
inline bool combinatorially_equivalent(const CombinatorialMap& a, const CombinatorialMap& b) {
  if (!same_kind(a, b) || a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
      a.face_count() != b.face_count()) {
    return false;
  }
  std::vector<int> label_map(a.vertex_count());
  for (int v = 0; v < a.vertex_count(); ++v) {
    auto w = b.index_of(a.labels()[v]);
    if (!w) return false;
    label_map[v] = *w;
  }
  const int seed = detail::seed_flag(a);
  const int target = label_map[a.flag_vertex(seed)];
  for (int y = 0; y < b.flag_count(); ++y) {
    if (b.flag_vertex(y) != target) continue;
    auto iso = detail::propagate_flags(a, b, seed, y);
    if (!iso || iso->vertex != label_map) continue;
    if (a.outer_face() && iso->face[*a.outer_face()] != *b.outer_face()) continue;
    return true;
  }
  return false;
}

}  // namespace edgesym
