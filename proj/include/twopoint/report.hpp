#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "twopoint/serialization.hpp"

namespace twopoint {

using ReportItem = std::variant<BoundReport, CoveringVerdict, CapacityEstimate>;

enum class ReportFormat { Json, Csv };

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += csv_field(cells[i]);
  }
  return row + '\n';
}

inline std::string point_cell(const std::vector<Complex>& pts, std::size_t i, bool imag) {
  if (i >= pts.size()) return "";
  return format_double(imag ? pts[i].imag() : pts[i].real());
}

inline std::vector<std::string> csv_header(const BoundReport&) {
  return {"inequality_id", "lhs", "rhs", "slack", "hypothesis", "covering_status", "map_digest",
          "z1_re", "z1_im", "z2_re", "z2_im", "parameters"};
}

inline std::vector<std::string> csv_cells(const BoundReport& r) {
  std::string params;
  for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : ";") + k + "=" + format_double(v);
  return {std::string(to_string(r.id)), format_double(r.lhs), format_double(r.rhs), format_double(r.slack),
          std::string(to_string(r.hypothesis)), r.covering ? std::string(to_string(r.covering->status)) : "",
          r.map_digest, point_cell(r.points, 0, false), point_cell(r.points, 0, true), point_cell(r.points, 1, false),
          point_cell(r.points, 1, true), params};
}

inline std::vector<std::string> csv_header(const CoveringVerdict&) {
  return {"family", "status", "curve_samples", "family_samples", "witness_re", "witness_im", "witness_infinite",
          "witness_preimages"};
}

inline std::vector<std::string> csv_cells(const CoveringVerdict& v) {
  std::vector<std::string> c{v.family == CurveFamily::Gamma ? "gamma" : "delta", std::string(to_string(v.status)),
                             std::to_string(v.curve_samples), std::to_string(v.family_samples)};
  if (!v.witness) {
    c.insert(c.end(), {"", "", "", ""});
    return c;
  }
  const CoveringWitness& w = *v.witness;
  c.push_back(w.w_is_infinite ? "" : format_double(w.w.real()));
  c.push_back(w.w_is_infinite ? "" : format_double(w.w.imag()));
  c.push_back(w.w_is_infinite ? "true" : "false");
  std::string pre;
  for (Complex z : w.preimages) pre += (pre.empty() ? "" : ";") + format_double(z.real()) + " " + format_double(z.imag());
  c.push_back(pre);
  return c;
}

inline std::vector<std::string> csv_header(const CapacityEstimate&) {
  return {"value", "method", "error_bar", "discretization", "box_x0", "box_x1", "box_y0", "box_y1"};
}

inline std::vector<std::string> csv_cells(const CapacityEstimate& e) {
  return {format_double(e.value), std::string(to_string(e.method)), e.error_bar ? format_double(*e.error_bar) : "",
          e.discretization, format_double(e.box.x0), format_double(e.box.x1), format_double(e.box.y0),
          format_double(e.box.y1)};
}

}  // namespace detail

/// Renders a homogeneous, nonempty result list.
inline std::string render_report(const std::vector<ReportItem>& items, ReportFormat format) {
  if (items.empty()) throw Error(ErrorKind::InvalidInput, "report needs at least one result");
  for (const ReportItem& it : items)
    if (it.index() != items.front().index())
      throw Error(ErrorKind::InvalidInput, "report mixes result types");

  if (format == ReportFormat::Json) {
    Json arr = Json::array();
    for (const ReportItem& it : items) std::visit([&](const auto& r) { arr.push_back(to_json(r)); }, it);
    return dump_json(arr) + '\n';
  }
  std::string out = std::visit([](const auto& r) { return detail::csv_row(detail::csv_header(r)); }, items.front());
  for (const ReportItem& it : items) out += std::visit([](const auto& r) { return detail::csv_row(detail::csv_cells(r)); }, it);
  return out;
}

inline void emit_report(const std::vector<ReportItem>& items, ReportFormat format, const std::string& path) {
  const std::string text = render_report(items, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open report file " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "failed writing report file " + path);
}

}  // namespace twopoint
