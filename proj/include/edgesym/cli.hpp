#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "edgesym/error.hpp"
#include "edgesym/io.hpp"
#include "edgesym/verify.hpp"

namespace edgesym::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitTheoremViolation = 3;

struct LoadedInstance {
  std::string source;
  GalleryInstance instance;
  std::vector<std::string> warnings;
};

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// ".json" files are plane graphs, everything else is read as OFF.
inline LoadedInstance load_path(const std::string& path, const Tolerance& tol) {
  if (ends_with(path, ".json")) return {path, parse_graph_json_file(path, tol), {}};
  auto doc = parse_off_file(path, tol);
  return {path, std::move(doc.polytope), std::move(doc.warnings)};
}

inline InstanceInfo info_of(const LoadedInstance& li) {
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return InstanceInfo{li.source, x.size(), x.diameter(), std::is_same_v<T, ConvexPlaneGraph> ? 2 : 3};
      },
      li.instance);
}

namespace detail {

template <int Dim>
void text_records(std::ostream& out, const std::vector<SymmetryRecord<Dim>>& records, const CombinatorialMap& m) {
  for (const auto& rec : records) {
    out << "  " << rec.sigma.cycle_notation(m.labels()) << "  edge-preserving=" << (rec.edge_preserving ? "yes" : "no")
        << " realized=" << (rec.realized ? "yes" : "no") << " rmsd=" << format_double(rec.rmsd);
    if (rec.realized) out << " orientation=" << (rec.orientation > 0 ? "+1" : "-1");
    out << '\n';
  }
}

inline void text_header(std::ostream& out, const InstanceInfo& info) {
  out << "instance: " << info.source << " (" << info.vertex_count << " vertices, dimension " << info.dimension
      << ", diameter " << format_double(info.diameter) << ")\n";
}

struct Rendered {
  std::string text;
  bool violation = false;
};

inline Rendered render_analyze(const LoadedInstance& li, const Tolerance& tol, bool as_json) {
  const auto info = info_of(li);
  std::ostringstream out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        constexpr int Dim = std::is_same_v<T, ConvexPlaneGraph> ? 2 : 3;
        CombinatorialMap m;
        std::vector<Vec<Dim>> coords;
        if constexpr (Dim == 3) {
          m = face_map(x, tol);
          coords = coordinates_for(x, m);
        } else {
          m = x.map;
          coords = x.points;
        }
        const auto report = analyze<Dim>(m, coords, tol, li.source);
        if (as_json) {
          out << write_report(report_document("symmetry_report", info, tol, symmetry_report_json<Dim>(report, m)));
        } else {
          text_header(out, info);
          out << "symmetries: " << report.total << " total, " << report.edge_preserving << " edge-preserving, "
              << report.realized << " realized\n";
          out << "group closed: " << (report.closed_under_composition ? "yes" : "no") << '\n';
          text_records<Dim>(out, report.records, m);
        }
      },
      li.instance);
  return {out.str(), false};
}

inline Rendered render_verify(const LoadedInstance& li, const Tolerance& tol, bool as_json) {
  const auto info = info_of(li);
  std::ostringstream out;
  bool violation = false;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        constexpr int Dim = std::is_same_v<T, ConvexPlaneGraph> ? 2 : 3;
        CombinatorialMap m;
        TheoremVerdict<Dim> verdict;
        if constexpr (Dim == 3) {
          m = face_map(x, tol);
          verdict = verify_polytope_theorem(x, tol, li.source);
        } else {
          m = x.map;
          verdict = verify_graph_theorem(x, tol, li.source);
        }
        violation = verdict.classification == Classification::TheoremViolation;
        if (as_json) {
          out << write_report(report_document("theorem_verdict", info, tol, verdict_json<Dim>(verdict, m)));
        } else {
          text_header(out, info);
          out << "classification: " << to_string(verdict.classification) << '\n';
          out << "all faces inscribed: " << (verdict.hypothesis_holds ? "yes" : "no")
              << " (worst residual " << format_double(verdict.worst_face_residual) << ")\n";
          out << "symmetries: " << verdict.report.total << " total, " << verdict.report.edge_preserving
              << " edge-preserving, " << verdict.report.realized << " realized\n";
          if (!verdict.violations.empty()) {
            out << "unrealized edge-preserving symmetries:\n";
            text_records<Dim>(out, verdict.violations, m);
          }
        }
      },
      li.instance);
  return {out.str(), violation};
}

inline std::vector<double> parse_sides(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string token; std::getline(ss, token, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "--sides: '" + token + "' is not a number");
    }
  }
  return out;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. Exit codes: 0 normal,
/// 2 input or validation error, 3 theorem-violation alarm.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combinatorial, edge-preserving and realized symmetries of convex polytopes and plane graphs",
               "edgesym"};
  app.require_subcommand(1);

  double tol_scale = 1.0;
  std::string format = "json";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol_scale, "Scale factor applied to all default tolerances")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Enumerate and classify symmetries of one instance");
  std::string analyze_input;
  std::string analyze_gallery;
  analyze_cmd->add_option("input", analyze_input, "OFF polytope or graph JSON file");
  analyze_cmd->add_option("--gallery", analyze_gallery, "Built-in instance name");
  add_common(analyze_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check the inscribed-faces theorem on instances");
  std::vector<std::string> verify_inputs;
  std::string verify_gallery;
  std::optional<int> random_n;
  std::uint64_t seed = 0;
  bool random_graph = false;
  int jobs = 1;
  verify_cmd->add_option("inputs", verify_inputs, "OFF polytope or graph JSON files");
  verify_cmd->add_option("--gallery", verify_gallery, "Built-in instance name");
  verify_cmd->add_option("--random", random_n, "Random inscribed polytope with this many vertices");
  verify_cmd->add_option("--seed", seed, "Seed for --random");
  verify_cmd->add_flag("--random-graph", random_graph, "With --random: a random Delaunay triangulation instead");
  verify_cmd->add_option("--jobs", jobs, "Parallel workers for batches")->check(CLI::PositiveNumber);
  add_common(verify_cmd);

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Inscribed polygon from its side lengths");
  std::string sides_text;
  reconstruct_cmd->add_option("--sides", sides_text, "Comma-separated side lengths")->required();
  reconstruct_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::vector<const char*> argv{"edgesym"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  const bool as_json = format == "json";
  try {
    const Tolerance tol = Tolerance::scaled(tol_scale);
    if (*reconstruct_cmd) {
      const auto sides = detail::parse_sides(sides_text);
      const auto payload = reconstruction_json(sides);
      if (as_json) {
        out << write_report(report_document("reconstruction", {"--sides " + sides_text, sides.size(), 0.0, 2},
                                            Tolerance{}, payload));
      } else {
        out << "circumradius: " << format_double(payload["circumradius"].get<double>()) << '\n';
        out << "center outside polygon: " << (payload["center_outside"].get<bool>() ? "yes" : "no") << '\n';
        for (const auto& v : payload["vertices"]) {
          out << format_double(v[0].get<double>()) << ' ' << format_double(v[1].get<double>()) << '\n';
        }
      }
      return kExitOk;
    }

    if (*analyze_cmd) {
      if (analyze_input.empty() == analyze_gallery.empty()) {
        err << "error: analyze needs exactly one of <input> or --gallery\n";
        return kExitInputError;
      }
      LoadedInstance li = analyze_gallery.empty()
                              ? load_path(analyze_input, tol)
                              : LoadedInstance{"gallery:" + analyze_gallery, gallery(analyze_gallery), {}};
      for (const auto& w : li.warnings) err << "warning: " << w << '\n';
      out << detail::render_analyze(li, tol, as_json).text;
      return kExitOk;
    }

    // verify
    std::vector<LoadedInstance> batch;
    for (const auto& path : verify_inputs) batch.push_back(load_path(path, tol));
    if (!verify_gallery.empty()) batch.push_back({"gallery:" + verify_gallery, gallery(verify_gallery), {}});
    if (random_n) {
      const std::string tag = (random_graph ? "random-graph:" : "random:") + std::to_string(*random_n) +
                              ":seed=" + std::to_string(seed);
      if (random_graph) {
        batch.push_back({tag, random_triangulation(*random_n, seed, tol), {}});
      } else {
        batch.push_back({tag, random_inscribed_polytope(*random_n, seed, tol), {}});
      }
    }
    if (batch.empty()) {
      err << "error: verify needs an input file, --gallery or --random\n";
      return kExitInputError;
    }
    for (const auto& li : batch) {
      for (const auto& w : li.warnings) err << "warning: " << w << '\n';
    }

    std::vector<detail::Rendered> results(batch.size());
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), batch.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) results[i] = detail::render_verify(batch[i], tol, as_json);
    } else {
      std::vector<std::future<void>> pool;
      std::atomic<std::size_t> next{0};
      for (std::size_t w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&] {
          for (std::size_t i = next++; i < batch.size(); i = next++) {
            results[i] = detail::render_verify(batch[i], tol, as_json);
          }
        }));
      }
      for (auto& f : pool) f.get();
    }
    bool violation = false;
    for (const auto& r : results) {
      out << r.text;
      violation = violation || r.violation;
    }
    return violation ? kExitTheoremViolation : kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace edgesym::cli
