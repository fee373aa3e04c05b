#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twopoint/capacity_lab.hpp"
#include "twopoint/covering.hpp"
#include "twopoint/inequalities.hpp"
#include "twopoint/report.hpp"
#include "twopoint/serialization.hpp"
#include "twopoint/svg.hpp"

namespace twopoint::cli {

inline constexpr const char* kSeedVariable = "TWOPOINT_SEED";
inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

enum class Command { Goluzin, Schwarzian, Covering, Capacity, Extremal, Scan };
enum class ExtremalKind { Schwarzian, Goluzin };

enum ExitCode : int { kHolds = 0, kRuntimeError = 1, kViolated = 2, kHypothesisViolated = 3 };

struct RunConfig {
  Command command = Command::Goluzin;
  std::string map_spec;  // inline JSON object or path to a JSON file
  std::optional<double> extremal_lambda;
  std::optional<Complex> z1, z2;
  CurveFamily family = CurveFamily::Gamma;
  bool check = false;
  CoveringResolution resolution;
  std::string condenser_spec;
  GridSpec grid;
  ExtremalKind kind = ExtremalKind::Schwarzian;
  Complex w1{-1.0, 0.0}, w2{1.0, 0.0};
  std::vector<double> lambdas;
  double tolerance = 1e-10;
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;  // empty: stdout
  ReportFormat format = ReportFormat::Json;
  std::string svg_path;
  std::string field_path;
  std::string map_out_path;
};

/// "0.5", "-0.5i", "0.3-0.1i", "i", "1e-3+2e-2i".
inline Complex parse_complex(std::string text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto fail = [&]() -> Complex { throw Error(ErrorKind::InvalidInput, "cannot parse complex number '" + text + "'"); };
  if (s.empty()) return fail();

  auto real_part = [&](const std::string& t) -> double {
    if (t.empty()) fail();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != t.size()) fail();
    return v;
  };
  auto imag_part = [&](std::string t) -> double {
    if (t == "+" || t.empty()) return 1.0;
    if (t == "-") return -1.0;
    return real_part(t);
  };

  if (s.back() != 'i') return {real_part(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {real_part(s.substr(0, split)), imag_part(s.substr(split))};
}

inline Json load_json_spec(const std::string& spec, const char* what) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  std::string text;
  if (first != std::string::npos && spec[first] == '{') {
    text = spec;
  } else {
    std::ifstream in(spec);
    if (!in) throw Error(ErrorKind::IoError, std::string("cannot read ") + what + " file " + spec);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + " is not valid JSON: " + e.what());
  }
}

inline std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedVariable);
  if (!env || !*env) return kDefaultSeed;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidInput, std::string(kSeedVariable) + " is not an unsigned integer");
}

/// Parse outcome: a config, or an exit code when parsing already finished the run (help, usage errors).
struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kHolds;
};

inline void write_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << dump_json(Json{{"error", Json{{"kind", std::string(kind)}, {"message", message}}}}, -1) << '\n';
}

inline ParseResult parse_args(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Two-point distortion inequalities and condenser capacities"};
  app.require_subcommand(1, 1);

  std::string z1, z2, w1, w2, family = "gamma", format = "json", kind = "schwarzian";
  std::optional<std::uint64_t> seed;
  std::size_t curve_samples = cfg.resolution.curve_samples, family_samples = cfg.resolution.family_samples;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tolerance", cfg.tolerance, "Slack tolerance for the holds verdict")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "Seed for stochastic solvers (default: $" + std::string(kSeedVariable) + ")");
    sub->add_option("--out,-o", cfg.out_path, "Report path (default: stdout)");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto points = [&](CLI::App* sub) {
    sub->add_option("--z1", z1, "First point, e.g. -0.5 or 0.2+0.1i");
    sub->add_option("--z2", z2, "Second point");
  };
  auto resolution = [&](CLI::App* sub) {
    sub->add_option("--curve-samples", curve_samples, "Samples per curve")->check(CLI::Range(8, 1 << 20));
    sub->add_option("--family-samples", family_samples, "Curves per family")->check(CLI::Range(3, 1 << 20));
  };

  auto* gol = app.add_subcommand("goluzin", "Two-point distortion bound for a map");
  auto* sch = app.add_subcommand("schwarzian", "Schwarzian two-point bound for a map");
  for (auto* sub : {gol, sch}) {
    sub->add_option("--map", cfg.map_spec, "Map spec: JSON file or inline JSON");
    sub->add_option("--extremal-lambda", cfg.extremal_lambda, "Use the extremal map for this lambda in (0, 1)");
    points(sub);
    sub->add_flag("--check", cfg.check, "Run the covering hypothesis check (Γ for goluzin, Δ for schwarzian)");
    resolution(sub);
    sub->add_option("--svg", cfg.svg_path, "Draw the boundary image and marked points");
    common(sub);
  }

  auto* cov = app.add_subcommand("covering", "Covering hypothesis check");
  cov->add_option("--map", cfg.map_spec, "Map spec: JSON file or inline JSON")->required();
  points(cov);
  cov->add_option("--family", family, "Curve family")->check(CLI::IsMember({"gamma", "delta"}));
  resolution(cov);
  cov->add_option("--svg", cfg.svg_path, "Draw the family curves and any witness");
  common(cov);

  auto* cap = app.add_subcommand("capacity", "Condenser capacity");
  cap->add_option("--condenser", cfg.condenser_spec, "Condenser spec: JSON file or inline JSON")->required();
  cap->add_option("--cells", cfg.grid.cells, "Grid cells along the longer side")->check(CLI::Range(8, 1 << 16));
  cap->add_flag("--richardson", cfg.grid.richardson, "Extrapolate from a half-resolution grid");
  cap->add_flag("--graded", cfg.grid.graded, "Grade the grid toward the plates");
  cap->add_option("--cells-per-radius", cfg.grid.cells_per_radius, "Graded grids: spacing near plates")->check(CLI::PositiveNumber);
  cap->add_option("--growth", cfg.grid.growth, "Graded grids: spacing growth factor")->check(CLI::Range(1.0, 2.0));
  cap->add_option("--box-factor", cfg.grid.box_factor, "Half-plane truncation size")->check(CLI::PositiveNumber);
  cap->add_option("--field", cfg.field_path, "Binary dump of the potential");
  cap->add_option("--svg", cfg.svg_path, "Draw plates and the potential");
  common(cap);

  auto* ext = app.add_subcommand("extremal", "Report on an extremal map");
  ext->add_option("--lambda", cfg.extremal_lambda, "lambda in (0, 1)")->required();
  ext->add_option("--kind", kind, "Which extremal")->check(CLI::IsMember({"schwarzian", "goluzin"}));
  ext->add_option("--w1", w1, "Goluzin extremal: image of -lambda");
  ext->add_option("--w2", w2, "Goluzin extremal: image of lambda");
  ext->add_option("--map-out", cfg.map_out_path, "Write the map spec here");
  ext->add_option("--svg", cfg.svg_path, "Draw the boundary image");
  common(ext);

  auto* scan = app.add_subcommand("scan", "Equality scan over lambda for an extremal family");
  scan->add_option("--lambdas", cfg.lambdas, "lambda values (default 0.1 0.2 ... 0.9)");
  scan->add_option("--kind", kind, "Which extremal")->check(CLI::IsMember({"schwarzian", "goluzin"}));
  common(scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {std::nullopt, kHolds};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {std::nullopt, kHolds};
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return {std::nullopt, kRuntimeError};
  }

  try {
    if (gol->parsed()) cfg.command = Command::Goluzin;
    if (sch->parsed()) cfg.command = Command::Schwarzian;
    if (cov->parsed()) cfg.command = Command::Covering;
    if (cap->parsed()) cfg.command = Command::Capacity;
    if (ext->parsed()) cfg.command = Command::Extremal;
    if (scan->parsed()) cfg.command = Command::Scan;
    if (!z1.empty()) cfg.z1 = parse_complex(z1);
    if (!z2.empty()) cfg.z2 = parse_complex(z2);
    if (!w1.empty()) cfg.w1 = parse_complex(w1);
    if (!w2.empty()) cfg.w2 = parse_complex(w2);
    cfg.family = family == "delta" ? CurveFamily::Delta : CurveFamily::Gamma;
    cfg.format = format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    cfg.kind = kind == "goluzin" ? ExtremalKind::Goluzin : ExtremalKind::Schwarzian;
    cfg.resolution = {curve_samples, family_samples};
    cfg.seed = seed ? *seed : default_seed();
  } catch (const Error& e) {
    write_error(err, to_string(e.kind()), e.message());
    return {std::nullopt, kRuntimeError};
  }
  return {cfg, kHolds};
}

namespace detail {

inline RationalMap extremal_map(ExtremalKind kind, double lambda, Complex w1, Complex w2) {
  return kind == ExtremalKind::Goluzin ? goluzin_extremal_map(lambda, w1, w2) : extremal_schwarzian_map(lambda);
}

inline BoundReport extremal_report(ExtremalKind kind, double lambda, Complex w1, Complex w2) {
  const RationalMap f = extremal_map(kind, lambda, w1, w2);
  const DiskPoint a(-lambda), b(lambda);
  return kind == ExtremalKind::Goluzin ? goluzin_report(f, a, b) : schwarzian_report(f, a, b);
}

inline Polyline boundary_image(const RationalMap& f, std::size_t n = 2048) {
  Polyline p;
  p.reserve(n);
  for (std::size_t k = 0; k < n; ++k) p.push_back(f(std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n))));
  return p;
}

inline Scene map_scene(const RationalMap& f, Complex z1, Complex z2) {
  Scene s;
  s.curves.push_back({boundary_image(f), true, "#1f4e9c"});
  s.points.push_back({f(z1)});
  s.points.push_back({f(z2)});
  return s;
}

inline Scene covering_scene(const CoveringVerdict& v, Complex w1, Complex w2, std::size_t curves) {
  Scene s;
  curves = std::max<std::size_t>(curves, 2);
  if (v.family == CurveFamily::Gamma) {
    const double half = 0.5 * std::abs(w2 - w1);
    for (std::size_t k = 0; k < curves; ++k) {
      // offsets spread by tan over (-π/2, π/2); the middle member is the segment's circle
      const double u = kPi * ((static_cast<double>(k) + 0.5) / static_cast<double>(curves) - 0.5);
      s.curves.push_back({gamma_trace(GammaCircle(w1, w2, half * std::tan(u)), 256).points, true, "#1f4e9c"});
    }
  } else {
    for (double t : delta_parameter_grid(curves))
      for (DeltaBranch br : {DeltaBranch::Plus, DeltaBranch::Minus})
        s.curves.push_back({delta_trace(DeltaCurve(w1, w2, t, br), 256), true, "#1f4e9c"});
  }
  s.points.push_back({w1});
  s.points.push_back({w2});
  if (v.witness && !v.witness->w_is_infinite) s.points.push_back({v.witness->w, "#e67e22"});
  return s;
}

inline Scene condenser_scene(const Condenser& c, const fd::Solution& field) {
  Scene s;
  for (const Plate& p : c.plates) s.curves.push_back({circle_polyline(p.center, p.radius), true, "#000000"});
  if (c.domain.kind == DomainSpec::Kind::UnitDisk) s.domain_outline = circle_polyline(0.0, 1.0, 512);
  if (c.domain.kind == DomainSpec::Kind::Disk) s.domain_outline = circle_polyline(c.domain.center, c.domain.radius, 512);
  if (!field.x.empty()) s.field = ScalarField{field.x, field.y, field.u};
  return s;
}

inline int bound_exit(const BoundReport& r, double tolerance) {
  if (r.hypothesis == Hypothesis::CheckedViolated) return kHypothesisViolated;
  return r.slack >= -tolerance ? kHolds : kViolated;
}

}  // namespace detail

inline void write_output(const RunConfig& cfg, const std::vector<ReportItem>& items, std::ostream& out) {
  if (cfg.out_path.empty())
    out << render_report(items, cfg.format);
  else
    emit_report(items, cfg.format, cfg.out_path);
}

/// Executes one command. Exit codes: 0 holds, 2 inequality violated,
/// 3 geometric hypothesis violated (report still written), 1 error.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    switch (cfg.command) {
      case Command::Goluzin:
      case Command::Schwarzian: {
        const bool gol = cfg.command == Command::Goluzin;
        if (cfg.map_spec.empty() == !cfg.extremal_lambda)
          throw Error(ErrorKind::InvalidInput, "give exactly one of --map and --extremal-lambda");
        std::optional<Complex> z1 = cfg.z1, z2 = cfg.z2;
        if (cfg.extremal_lambda) {
          if (!z1) z1 = Complex(-*cfg.extremal_lambda);
          if (!z2) z2 = Complex(*cfg.extremal_lambda);
        }
        const RationalMap f =
            cfg.extremal_lambda ? detail::extremal_map(gol ? ExtremalKind::Goluzin : ExtremalKind::Schwarzian,
                                                       *cfg.extremal_lambda, cfg.w1, cfg.w2)
                                : map_from_json(load_json_spec(cfg.map_spec, "map"));
        if (!z1 || !z2) throw Error(ErrorKind::InvalidInput, "--z1 and --z2 are required");
        const CheckOptions opt{cfg.check, cfg.resolution};
        const BoundReport r = gol ? goluzin_report(f, DiskPoint(*z1), DiskPoint(*z2), opt)
                                  : schwarzian_report(f, DiskPoint(*z1), DiskPoint(*z2), opt);
        write_output(cfg, {r}, out);
        if (!cfg.svg_path.empty()) emit_svg(detail::map_scene(f, *z1, *z2), cfg.svg_path);
        return detail::bound_exit(r, cfg.tolerance);
      }
      case Command::Covering: {
        if (!cfg.z1 || !cfg.z2) throw Error(ErrorKind::InvalidInput, "--z1 and --z2 are required");
        const RationalMap f = map_from_json(load_json_spec(cfg.map_spec, "map"));
        const CoveringVerdict v = check_covering(cfg.family, f, DiskPoint(*cfg.z1), DiskPoint(*cfg.z2), cfg.resolution);
        write_output(cfg, {v}, out);
        if (!cfg.svg_path.empty()) emit_svg(detail::covering_scene(v, f(*cfg.z1), f(*cfg.z2), 9), cfg.svg_path);
        return v.status == CoveringStatus::NoViolationFound ? kHolds : kHypothesisViolated;
      }
      case Command::Capacity: {
        const Condenser c = condenser_from_json(load_json_spec(cfg.condenser_spec, "condenser"));
        const bool want_field = !cfg.field_path.empty() || !cfg.svg_path.empty();
        CondenserField sol;
        if (want_field) {
          sol = solve_condenser_field(c, cfg.grid);
        } else {
          sol.estimate = solve_condenser(c, cfg.grid);
        }
        write_output(cfg, {sol.estimate}, out);
        if (!cfg.field_path.empty()) {
          if (sol.field.x.empty()) throw Error(ErrorKind::InvalidInput, "this condenser has no grid field");
          fd::write_field(cfg.field_path, sol.field);
        }
        if (!cfg.svg_path.empty()) emit_svg(detail::condenser_scene(c, sol.field), cfg.svg_path);
        return kHolds;
      }
      case Command::Extremal: {
        const double lambda = *cfg.extremal_lambda;
        const RationalMap f = detail::extremal_map(cfg.kind, lambda, cfg.w1, cfg.w2);
        const BoundReport r = detail::extremal_report(cfg.kind, lambda, cfg.w1, cfg.w2);
        write_output(cfg, {r}, out);
        if (!cfg.map_out_path.empty()) {
          std::ofstream mo(cfg.map_out_path, std::ios::binary);
          if (!(mo << dump_json(to_json(f)) << '\n')) throw Error(ErrorKind::IoError, "cannot write " + cfg.map_out_path);
        }
        if (!cfg.svg_path.empty()) emit_svg(detail::map_scene(f, -lambda, lambda), cfg.svg_path);
        return detail::bound_exit(r, cfg.tolerance);
      }
      case Command::Scan: {
        std::vector<double> lambdas = cfg.lambdas;
        if (lambdas.empty())
          for (int k = 1; k <= 9; ++k) lambdas.push_back(k / 10.0);
        std::vector<ReportItem> items;
        int code = kHolds;
        for (double lambda : lambdas) {
          BoundReport r = detail::extremal_report(cfg.kind, lambda, cfg.w1, cfg.w2);
          code = std::max(code, detail::bound_exit(r, cfg.tolerance));
          items.emplace_back(std::move(r));
        }
        write_output(cfg, items, out);
        return code;
      }
    }
  } catch (const Error& e) {
    write_error(err, to_string(e.kind()), e.message());
    return kRuntimeError;
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
    return kRuntimeError;
  }
  return kRuntimeError;
}

inline int main(int argc, const char* const* argv) {
  ParseResult p = parse_args(argc, argv);
  if (!p.config) return p.exit_code;
  return run(*p.config);
}

}  // namespace twopoint::cli
