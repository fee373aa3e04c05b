#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "twopoint/capacity_lab.hpp"
#include "twopoint/covering.hpp"
#include "twopoint/disk_geometry.hpp"
#include "twopoint/inequalities.hpp"
#include "twopoint/rational_map.hpp"

namespace twopoint {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void bad_spec(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_spec(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const char* what) {
  if (!j.is_number()) bad_spec(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace detail

/// [re, im] or a bare real number.
inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  detail::bad_spec("complex numbers are [re, im] pairs");
}

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_array()) detail::bad_spec("coefficient list must be an array");
  std::vector<Complex> c;
  for (const Json& e : j) c.push_back(complex_from_json(e));
  return Polynomial(std::move(c));
}

inline Json to_json(const Polynomial& p) {
  Json a = Json::array();
  for (Complex c : p.coefficients()) a.push_back(to_json(c));
  return a;
}

/// {"numerator": [[re,im],...], "denominator": [[re,im],...]}, ascending degree.
inline RationalMap map_from_json(const Json& j) {
  return {polynomial_from_json(detail::field(j, "numerator")), polynomial_from_json(detail::field(j, "denominator"))};
}

inline Json to_json(const RationalMap& f) {
  return Json{{"numerator", to_json(f.numerator())}, {"denominator", to_json(f.denominator())}};
}

inline DomainSpec domain_from_json(const Json& j) {
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind == "unit_disk") return DomainSpec::unit_disk();
  if (kind == "disk")
    return DomainSpec::disk(complex_from_json(detail::field(j, "center")), detail::number(detail::field(j, "radius"), "radius"));
  if (kind == "half_plane")
    return DomainSpec::half_plane(complex_from_json(detail::field(j, "normal")),
                                  detail::number(detail::field(j, "offset"), "offset"));
  if (kind == "half_disk") {
    const std::string side = detail::field(j, "side").get<std::string>();
    if (side != "left" && side != "right") detail::bad_spec("half_disk side must be left or right");
    return DomainSpec::half_disk(side == "left" ? HalfDiskSide::Left : HalfDiskSide::Right);
  }
  if (kind == "green_level") {
    const int sign = j.contains("sign") ? j.at("sign").get<int>() : 1;
    return DomainSpec::green_level(domain_from_json(detail::field(j, "base")), complex_from_json(detail::field(j, "z1")),
                                   complex_from_json(detail::field(j, "z2")), sign);
  }
  detail::bad_spec("unknown domain kind '" + kind + "'");
}

inline Json to_json(const DomainSpec& d) {
  switch (d.kind) {
    case DomainSpec::Kind::UnitDisk: return Json{{"kind", "unit_disk"}};
    case DomainSpec::Kind::Disk: return Json{{"kind", "disk"}, {"center", to_json(d.center)}, {"radius", d.radius}};
    case DomainSpec::Kind::HalfPlane:
      return Json{{"kind", "half_plane"}, {"normal", to_json(d.normal)}, {"offset", d.offset}};
    case DomainSpec::Kind::HalfDisk:
      return Json{{"kind", "half_disk"}, {"side", d.side == HalfDiskSide::Left ? "left" : "right"}};
    case DomainSpec::Kind::GreenLevelSubdomain:
      return Json{{"kind", "green_level"}, {"base", to_json(*d.base)}, {"z1", to_json(d.z1)}, {"z2", to_json(d.z2)}, {"sign", d.sign}};
  }
  return Json{};
}

inline Condenser condenser_from_json(const Json& j) {
  Condenser c{domain_from_json(detail::field(j, "domain")), {}};
  const Json& plates = detail::field(j, "plates");
  if (!plates.is_array()) detail::bad_spec("plates must be an array");
  for (const Json& p : plates)
    c.plates.push_back({complex_from_json(detail::field(p, "center")), detail::number(detail::field(p, "radius"), "radius"),
                        detail::number(detail::field(p, "potential"), "potential")});
  return c;
}

inline Json to_json(const Condenser& c) {
  Json plates = Json::array();
  for (const Plate& p : c.plates)
    plates.push_back(Json{{"center", to_json(p.center)}, {"radius", p.radius}, {"potential", p.potential}});
  return Json{{"domain", to_json(c.domain)}, {"plates", plates}};
}

inline Json to_json(const CoveringVerdict& v) {
  Json w = nullptr;
  if (v.witness) {
    Json pre = Json::array();
    for (Complex z : v.witness->preimages) pre.push_back(to_json(z));
    w = Json{{"w", v.witness->w_is_infinite ? Json("infinity") : to_json(v.witness->w)}, {"preimages", pre}};
  }
  return Json{{"type", "covering_verdict"},
              {"family", v.family == CurveFamily::Gamma ? "gamma" : "delta"},
              {"status", std::string(to_string(v.status))},
              {"witness", w},
              {"resolution", Json{{"curve_samples", v.curve_samples}, {"family_samples", v.family_samples}}}};
}

inline Json to_json(const BoundReport& r) {
  Json pts = Json::array();
  for (Complex z : r.points) pts.push_back(to_json(z));
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  return Json{{"type", "bound_report"},
              {"inequality_id", std::string(to_string(r.id))},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"slack", r.slack},
              {"hypothesis", std::string(to_string(r.hypothesis))},
              {"covering", r.covering ? to_json(*r.covering) : Json(nullptr)},
              {"map_digest", r.map_digest},
              {"points", pts},
              {"parameters", params}};
}

inline Json to_json(const CapacityEstimate& e) {
  Json levels = Json::array();
  for (const GridLevel& l : e.levels)
    levels.push_back(Json{{"nx", l.nx}, {"ny", l.ny}, {"min_spacing", l.min_spacing}, {"energy", l.energy}, {"iterations", l.iterations}});
  return Json{{"type", "capacity_estimate"},
              {"value", e.value},
              {"method", std::string(to_string(e.method))},
              {"discretization", e.discretization},
              {"error_bar", e.error_bar ? Json(*e.error_bar) : Json(nullptr)},
              {"box", Json::array({e.box.x0, e.box.x1, e.box.y0, e.box.y1})},
              {"levels", levels}};
}

/// Shortest exact decimal is not what we want here: reports carry every double
/// at 17 significant digits so files are stable across library versions.
inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

namespace detail {

inline void write_json(const Json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write_json(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // scalar-only arrays (complex pairs, boxes) stay on one line
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += flat && indent >= 0 ? ", " : ",";
        if (!flat) newline(depth + 1);
        write_json(j[i], out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: out += format_double(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// JSON text with doubles at 17 significant digits (indent < 0: compact).
inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::write_json(j, out, indent, 0);
  return out;
}

}  // namespace twopoint
