#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "edgesym/circle.hpp"
#include "edgesym/error.hpp"
#include "edgesym/plane_graph.hpp"
#include "edgesym/polytope.hpp"
#include "edgesym/symmetry.hpp"
#include "edgesym/tolerance.hpp"
#include "edgesym/verify.hpp"

namespace edgesym {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

// -- canonical JSON ------------------------------------------------------------

/// 17 significant digits; integral values print without a fraction, -0
/// prints as 0 and non-finite values as null.
inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void dump_canonical(const json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += ": ";
        dump_canonical(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool scalars = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += scalars ? ", " : ",";
        first = false;
        if (!scalars) newline(depth + 1);
        dump_canonical(e, out, indent, depth + 1);
      }
      if (!scalars) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Byte-stable rendering: sorted keys, two-space indent, fixed float format.
inline std::string canonical_dump(const json& j) {
  std::string out;
  detail::dump_canonical(j, out, 2, 0);
  out += '\n';
  return out;
}

// -- OFF -----------------------------------------------------------------------

struct OffDocument {
  IndexedPolytope polytope;
  std::vector<std::string> warnings;
};

namespace detail {

struct OffLines {
  std::vector<std::pair<int, std::vector<std::string>>> rows;  // (line number, tokens)
  std::size_t next = 0;
};

inline OffLines tokenize_off(std::istream& in) {
  OffLines lines;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (!tokens.empty()) lines.rows.emplace_back(number, std::move(tokens));
  }
  return lines;
}

[[noreturn]] inline void off_error(const std::string& source, int line, const std::string& what) {
  throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

inline double parse_number(const std::string& token, const std::string& source, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    off_error(source, line, "'" + token + "' is not a finite number");
  }
}

inline long parse_integer(const std::string& token, const std::string& source, int line) {
  try {
    std::size_t used = 0;
    long v = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    off_error(source, line, "'" + token + "' is not an integer");
  }
}

}  // namespace detail

/// OFF reader. Vertex order defines the labels "0", "1", ...; face records
/// are optional and only compared against the recomputed hull faces.
inline OffDocument parse_off(std::istream& in, const Tolerance& tol = {}, const std::string& source = "<off>") {
  auto lines = detail::tokenize_off(in);
  auto& rows = lines.rows;
  if (rows.empty()) detail::off_error(source, 0, "empty file");
  auto [header_line, header] = rows[0];
  if (header[0] != "OFF") detail::off_error(source, header_line, "expected 'OFF' header, found '" + header[0] + "'");
  std::vector<std::string> counts(header.begin() + 1, header.end());
  int counts_line = header_line;
  std::size_t cursor = 1;
  if (counts.empty()) {
    if (rows.size() < 2) detail::off_error(source, header_line, "missing vertex/face/edge counts");
    counts = rows[1].second;
    counts_line = rows[1].first;
    cursor = 2;
  }
  if (counts.size() < 2) detail::off_error(source, counts_line, "expected '<vertices> <faces> [<edges>]'");
  const long nv = detail::parse_integer(counts[0], source, counts_line);
  const long nf = detail::parse_integer(counts[1], source, counts_line);
  if (nv < 0 || nf < 0) detail::off_error(source, counts_line, "negative count");

  std::vector<LabeledPoint3> points;
  for (long i = 0; i < nv; ++i, ++cursor) {
    if (cursor >= rows.size()) detail::off_error(source, rows.back().first, "file ends before vertex " + std::to_string(i));
    const auto& [line, tok] = rows[cursor];
    if (tok.size() < 3) detail::off_error(source, line, "vertex " + std::to_string(i) + " needs 3 coordinates");
    points.emplace_back(std::to_string(i), Vec3(detail::parse_number(tok[0], source, line),
                                                detail::parse_number(tok[1], source, line),
                                                detail::parse_number(tok[2], source, line)));
  }
  std::set<std::set<std::string>> declared;
  for (long f = 0; f < nf; ++f, ++cursor) {
    if (cursor >= rows.size()) detail::off_error(source, rows.back().first, "file ends before face " + std::to_string(f));
    const auto& [line, tok] = rows[cursor];
    const long k = detail::parse_integer(tok[0], source, line);
    if (k < 3 || static_cast<long>(tok.size()) < k + 1) {
      detail::off_error(source, line, "face " + std::to_string(f) + " is malformed");
    }
    std::set<std::string> face;
    for (long j = 1; j <= k; ++j) {
      const long v = detail::parse_integer(tok[j], source, line);
      if (v < 0 || v >= nv) detail::off_error(source, line, "face " + std::to_string(f) + " references vertex " + std::to_string(v));
      face.insert(std::to_string(v));
    }
    declared.insert(std::move(face));
  }

  OffDocument doc;
  doc.polytope = build_polytope(std::move(points), tol);
  if (nf > 0) {
    const auto m = face_map(doc.polytope, tol);
    std::set<std::set<std::string>> computed;
    for (const auto& cyc : m.faces()) {
      std::set<std::string> face;
      for (int v : cyc) face.insert(m.labels()[v]);
      computed.insert(std::move(face));
    }
    if (computed != declared) {
      doc.warnings.push_back(source + ": declared faces differ from the convex hull faces (" +
                             std::to_string(declared.size()) + " declared, " + std::to_string(computed.size()) +
                             " computed); using the hull");
    }
  }
  return doc;
}

inline OffDocument parse_off_file(const std::string& path, const Tolerance& tol = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "': file not found or unreadable");
  return parse_off(in, tol, path);
}

/// Writes a polytope labelled "0".."n-1" with its hull faces.
inline std::string write_off(const IndexedPolytope& p, const Tolerance& tol = {}) {
  const auto m = face_map(p, tol);
  std::vector<int> position(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto idx = p.index_of(std::to_string(k));
    if (!idx) throw Error(ErrorKind::InvalidArgument, "write_off: labels must be 0..n-1");
    position[*idx] = static_cast<int>(k);
  }
  std::string out = "OFF\n" + std::to_string(p.size()) + " " + std::to_string(m.face_count()) + " " +
                    std::to_string(m.edge_count()) + "\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& v = p.points[*p.index_of(std::to_string(k))];
    out += format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z()) + "\n";
  }
  for (const auto& cyc : m.faces()) {
    out += std::to_string(cyc.size());
    for (int v : cyc) out += " " + std::to_string(position[v]);
    out += "\n";
  }
  return out;
}

// -- graph JSON ----------------------------------------------------------------

inline ConvexPlaneGraph parse_graph_json(const std::string& text, const Tolerance& tol = {},
                                         const std::string& source = "<graph>") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, source + ": " + e.what());
  }
  auto fail = [&](const std::string& where, const std::string& what) {
    throw Error(ErrorKind::ParseError, source + ": " + where + ": " + what);
  };
  if (!doc.is_object()) fail("$", "expected an object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) fail("vertices", "missing or not an array");
  if (!doc.contains("edges") || !doc["edges"].is_array()) fail("edges", "missing or not an array");
  std::vector<LabeledPoint2> points;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const auto& v = doc["vertices"][i];
    const std::string where = "vertices[" + std::to_string(i) + "]";
    if (!v.is_object()) fail(where, "expected an object");
    if (!v.contains("id") || !v["id"].is_string()) fail(where + ".id", "expected a string");
    if (!v.contains("x") || !v["x"].is_number()) fail(where + ".x", "expected a number");
    if (!v.contains("y") || !v["y"].is_number()) fail(where + ".y", "expected a number");
    points.emplace_back(v["id"].get<std::string>(), Vec2(v["x"].get<double>(), v["y"].get<double>()));
  }
  std::vector<LabelEdge> edges;
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const auto& e = doc["edges"][i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      fail(where, "expected a pair of vertex ids");
    }
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return build_plane_graph(std::move(points), edges, tol);
}

inline ConvexPlaneGraph parse_graph_json_file(const std::string& path, const Tolerance& tol = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "': file not found or unreadable");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_json(ss.str(), tol, path);
}

inline json graph_to_json(const ConvexPlaneGraph& g) {
  json vertices = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    vertices.push_back({{"id", g.labels[i]}, {"x", g.points[i].x()}, {"y", g.points[i].y()}});
  }
  json edges = json::array();
  for (const auto& [a, b] : label_edges(g)) edges.push_back({a, b});
  return {{"vertices", vertices}, {"edges", edges}};
}

inline std::string write_graph_json(const ConvexPlaneGraph& g) { return canonical_dump(graph_to_json(g)); }

// -- reports -------------------------------------------------------------------

struct InstanceInfo {
  std::string source;
  std::size_t vertex_count = 0;
  double diameter = 0.0;
  int dimension = 3;
};

namespace detail {

template <int Dim>
json vector_json(const Vec<Dim>& v) {
  json out = json::array();
  for (int i = 0; i < Dim; ++i) out.push_back(v[i]);
  return out;
}

template <int Dim>
json isometry_json(const Isometry<Dim>& iso) {
  json linear = json::array();
  for (int r = 0; r < Dim; ++r) {
    json row = json::array();
    for (int c = 0; c < Dim; ++c) row.push_back(iso.linear(r, c));
    linear.push_back(row);
  }
  return {{"linear", linear}, {"translation", vector_json<Dim>(iso.translation)}};
}

inline json cycle_json(const CombinatorialMap& m, int face) {
  json out = json::array();
  for (int v : m.faces()[face]) out.push_back(m.labels()[v]);
  return out;
}

template <int Dim>
json record_json(const SymmetryRecord<Dim>& rec, const CombinatorialMap& m) {
  json images = json::object();
  for (std::size_t v = 0; v < rec.sigma.size(); ++v) images[m.labels()[v]] = m.labels()[rec.sigma(static_cast<int>(v))];
  json faces = json::array();
  for (int f : rec.face_image) faces.push_back(f);
  return {{"sigma", rec.sigma.cycle_notation(m.labels())},
          {"images", images},
          {"face_image", faces},
          {"edge_preserving", rec.edge_preserving},
          {"realized", rec.realized},
          {"rmsd", rec.rmsd},
          {"orientation", rec.orientation},
          {"isometry", rec.isometry ? isometry_json<Dim>(*rec.isometry) : json(nullptr)}};
}

inline json faces_json(const CombinatorialMap& m) {
  json faces = json::array();
  for (int f = 0; f < m.face_count(); ++f) faces.push_back(cycle_json(m, f));
  return faces;
}

}  // namespace detail

inline json tolerance_json(const Tolerance& tol) {
  return {{"abs_eps", tol.abs_eps}, {"rel_eps", tol.rel_eps}, {"fit_eps", tol.fit_eps}};
}

inline json report_document(const std::string& kind, const InstanceInfo& info, const Tolerance& tol, json payload) {
  return {{"schema_version", kSchemaVersion},
          {"kind", kind},
          {"instance",
           {{"source", info.source},
            {"vertex_count", info.vertex_count},
            {"diameter", info.diameter},
            {"dimension", info.dimension}}},
          {"tolerance", tolerance_json(tol)},
          {"payload", std::move(payload)}};
}

template <int Dim>
json symmetry_report_json(const SymmetryReport<Dim>& report, const CombinatorialMap& m) {
  json records = json::array();
  for (const auto& rec : report.records) records.push_back(detail::record_json<Dim>(rec, m));
  json payload = {{"counts",
                   {{"total", report.total}, {"edge_preserving", report.edge_preserving}, {"realized", report.realized}}},
                  {"group_closed", report.closed_under_composition},
                  {"faces", detail::faces_json(m)},
                  {"records", records}};
  if (m.outer_face()) payload["outer_face"] = *m.outer_face();
  return payload;
}

template <int Dim>
json verdict_json(const TheoremVerdict<Dim>& v, const CombinatorialMap& m) {
  json faces = json::array();
  for (const auto& f : v.faces) {
    faces.push_back({{"face", f.face},
                     {"cycle", detail::cycle_json(m, f.face)},
                     {"inscribed", f.inscribed},
                     {"max_residual", f.max_residual},
                     {"radius", f.radius}});
  }
  json violations = json::array();
  for (const auto& rec : v.violations) violations.push_back(detail::record_json<Dim>(rec, m));
  return {{"classification", std::string(to_string(v.classification))},
          {"hypothesis_holds", v.hypothesis_holds},
          {"conclusion_holds", v.conclusion_holds},
          {"worst_face_residual", v.worst_face_residual},
          {"counts",
           {{"total", v.report.total},
            {"edge_preserving", v.report.edge_preserving},
            {"realized", v.report.realized}}},
          {"group_closed", v.report.closed_under_composition},
          {"faces", faces},
          {"violations", violations}};
}

inline json reconstruction_json(const std::vector<double>& sides) {
  const auto sol = solve_circumcircle(sides);
  const auto poly = reconstruct_inscribed_polygon(sides);
  json vertices = json::array();
  for (const auto& p : poly) vertices.push_back(detail::vector_json<2>(p));
  return {{"sides", sides},
          {"circumradius", sol.radius},
          {"center_outside", sol.long_chord.has_value()},
          {"vertices", vertices}};
}

inline std::string write_report(const json& document) { return canonical_dump(document); }

inline json parse_report(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("report: ") + e.what());
  }
}

}  // namespace edgesym
