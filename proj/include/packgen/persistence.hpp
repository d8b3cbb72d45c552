#pragma once

// Result/curve serialization and SVG rendering. Formats are line-oriented
// plain text; numeric fields use 17-significant-digit round-trip decimals.
// Renders are pure functions of the result (no timestamps).

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "packgen/analysis.hpp"
#include "packgen/geometry.hpp"
#include "packgen/packer.hpp"

namespace packgen {

inline constexpr const char* kFormatVersion = "packgen/1";

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw FormatError("malformed number '" + s + "' in " + where);
  }
}

}  // namespace detail

// On-disk form of a PackingResult plus any header keys this version does not
// interpret (preserved verbatim on rewrite).
struct ResultFile {
  PackingResult result;
  std::vector<std::pair<std::string, std::string>> extra_header;
  bool has_wall_time = false;  // wall_time is written only when recorded
};

inline void write_result_file(const ResultFile& file, const std::string& path) {
  const PackingResult& r = file.result;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  using detail::fmt_g17;
  out << "# " << kFormatVersion << "\n";
  out << "# domain " << to_string(r.spec) << "\n";
  out << "# n " << r.centers.size() << "\n";
  out << "# r " << fmt_g17(r.r) << "\n";
  out << "# rho " << fmt_g17(r.rho) << "\n";
  out << "# seed " << r.seed << "\n";
  out << "# trials " << r.trials << "\n";
  out << "# s0 " << fmt_g17(r.schedule.s0) << "\n";
  out << "# growth " << fmt_g17(r.schedule.growth) << "\n";
  out << "# smax " << fmt_g17(r.schedule.s_max) << "\n";
  out << "# grad_tol " << fmt_g17(r.schedule.grad_tol) << "\n";
  out << "# inner_iters " << r.schedule.inner_max_iters << "\n";
  out << "# image_weight0 " << fmt_g17(r.schedule.image_weight0) << "\n";
  out << "# image_decay_stages " << r.schedule.image_weight_decay_stages << "\n";
  if (file.has_wall_time)
    out << "# wall_time " << fmt_g17(r.wall_time) << "\n";
  for (const auto& [k, v] : file.extra_header)
    out << "# " << k << " " << v << "\n";
  for (const auto& c : r.centers)
    out << fmt_g17(c.x) << " " << fmt_g17(c.y) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

inline void write_result(const PackingResult& r, const std::string& path,
                         bool with_wall_time = false) {
  write_result_file({r, {}, with_wall_time}, path);
}

inline ResultFile read_result_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  ResultFile file;
  PackingResult& r = file.result;
  std::string line;
  int lineno = 0;
  long n_declared = -1;
  bool version_seen = false;
  std::map<std::string, bool> known;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (!version_seen) {
        if (key != kFormatVersion)
          throw FormatError("line 1: expected format version '" +
                            std::string(kFormatVersion) + "', got '" + key + "'");
        version_seen = true;
        continue;
      }
      std::string value;
      std::getline(ls, value);
      if (!value.empty() && value[0] == ' ') value.erase(0, 1);
      auto where = "header line " + std::to_string(lineno);
      if (key == "domain") r.spec = parse_domain(value);
      else if (key == "n") n_declared = std::stol(value);
      else if (key == "r") r.r = detail::parse_double(value, where);
      else if (key == "rho") r.rho = detail::parse_double(value, where);
      else if (key == "seed") r.seed = std::stoull(value);
      else if (key == "trials") r.trials = (int)std::stol(value);
      else if (key == "s0") r.schedule.s0 = detail::parse_double(value, where);
      else if (key == "growth") r.schedule.growth = detail::parse_double(value, where);
      else if (key == "smax") r.schedule.s_max = detail::parse_double(value, where);
      else if (key == "grad_tol") r.schedule.grad_tol = detail::parse_double(value, where);
      else if (key == "inner_iters") r.schedule.inner_max_iters = (int)std::stol(value);
      else if (key == "image_weight0") r.schedule.image_weight0 = detail::parse_double(value, where);
      else if (key == "image_decay_stages") r.schedule.image_weight_decay_stages = (int)std::stol(value);
      else if (key == "wall_time") { r.wall_time = detail::parse_double(value, where); file.has_wall_time = true; }
      else file.extra_header.emplace_back(key, value);
      continue;
    }
    if (!version_seen)
      throw FormatError("line " + std::to_string(lineno) +
                        ": missing format version header");
    std::istringstream ls(line);
    std::string xs, ys;
    if (!(ls >> xs >> ys))
      throw FormatError("line " + std::to_string(lineno) +
                        ": expected 'x y' center line");
    auto where = "body line " + std::to_string(lineno);
    r.centers.push_back({detail::parse_double(xs, where),
                         detail::parse_double(ys, where)});
  }
  if (!version_seen) throw FormatError("empty file: " + path);
  if (n_declared >= 0 && (long)r.centers.size() != n_declared)
    throw FormatError("header declares n=" + std::to_string(n_declared) +
                      " but body has " + std::to_string(r.centers.size()) +
                      " centers");
  // Header rho must agree with the recomputed packing fraction.
  double rho_check = packing_fraction(r.spec, (int)r.centers.size(), r.r);
  if (std::fabs(rho_check - r.rho) > 1e-9)
    throw FormatError("header rho " + detail::fmt_g17(r.rho) +
                      " inconsistent with recomputed " +
                      detail::fmt_g17(rho_check));
  return file;
}

inline PackingResult read_result(const std::string& path) {
  return read_result_file(path).result;
}

inline void write_curve(const DensityCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "a,rho,r,N,seed\n";
  for (const auto& s : curve)
    out << detail::fmt_g17(s.a) << "," << detail::fmt_g17(s.rho) << ","
        << detail::fmt_g17(s.r) << "," << s.n << "," << s.seed << "\n";
  if (!out) throw IoError("write failed: " + path);
}

inline DensityCurve read_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "a,rho,r,N,seed")
    throw FormatError("row 1: expected header 'a,rho,r,N,seed'");
  DensityCurve curve;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5)
      throw FormatError("row " + std::to_string(row) + ": expected 5 columns");
    DensitySample s;
    auto at = [&](int col) {
      return detail::parse_double(cells[col], "row " + std::to_string(row) +
                                                  " column " +
                                                  std::to_string(col + 1));
    };
    s.a = at(0);
    s.rho = at(1);
    s.r = at(2);
    try {
      s.n = (int)std::stol(cells[3]);
      s.seed = std::stoull(cells[4]);
    } catch (const std::exception&) {
      throw FormatError("row " + std::to_string(row) + ": malformed N/seed");
    }
    curve.push_back(s);
  }
  return curve;
}

// --- SVG rendering -----------------------------------------------------

enum class RenderMode { Contacts, Voronoi };

// Fixed palette indexed by count 4..9; counts outside clamp to the ends.
inline const char* palette_color(int count) {
  static const char* colors[6] = {"#4daf4a", "#377eb8", "#ffff99",
                                  "#ff7f00", "#e41a1c", "#984ea3"};
  int idx = std::clamp(count, 4, 9) - 4;
  return colors[idx];
}

namespace detail {

inline std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string path_of_loop(const std::vector<Point2>& loop) {
  std::string d = "M " + fmt_coord(loop[0].x) + " " + fmt_coord(loop[0].y);
  for (size_t i = 1; i < loop.size(); ++i)
    d += " L " + fmt_coord(loop[i].x) + " " + fmt_coord(loop[i].y);
  d += " Z";
  return d;
}

}  // namespace detail

inline void render_svg(const PackingResult& result, RenderMode mode,
                       const std::string& path) {
  auto loops = boundary_loops(result.spec, 1024);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& loop : loops)
    for (const auto& p : loop) {
      xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
  double margin = 0.05 * std::max(xmax - xmin, ymax - ymin);
  xmin -= margin; xmax += margin; ymin -= margin; ymax += margin;
  const double W = 800.0;
  double scale = W / (xmax - xmin);
  double H = (ymax - ymin) * scale;
  const double legend_h = 40.0;
  auto X = [&](double x) { return (x - xmin) * scale; };
  auto Y = [&](double y) { return (ymax - y) * scale; };  // flip y

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)W
      << "\" height=\"" << (int)(H + legend_h) << "\" viewBox=\"0 0 " << (int)W
      << " " << (int)(H + legend_h) << "\">\n";

  std::set<int> counts_present;
  using detail::fmt_coord;

  if (mode == RenderMode::Voronoi && result.centers.size() >= 2) {
    auto cells = voronoi_cells(result);
    for (const auto& cell : cells) {
      if (cell.polygon.empty()) continue;
      counts_present.insert(cell.side_count);
      svg << "<polygon points=\"";
      for (size_t i = 0; i < cell.polygon.size(); ++i) {
        if (i) svg << " ";
        svg << fmt_coord(X(cell.polygon[i].x)) << ","
            << fmt_coord(Y(cell.polygon[i].y));
      }
      svg << "\" fill=\"" << palette_color(cell.side_count)
          << "\" stroke=\"black\" stroke-width=\"0.7\"/>\n";
    }
  }

  // Domain outline (evenodd so the annulus hole reads as a hole).
  svg << "<path d=\"";
  for (size_t i = 0; i < loops.size(); ++i) {
    std::vector<Point2> screen(loops[i].size());
    for (size_t k = 0; k < loops[i].size(); ++k)
      screen[k] = {X(loops[i][k].x), Y(loops[i][k].y)};
    if (i) svg << " ";
    svg << detail::path_of_loop(screen);
  }
  svg << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
         "fill-rule=\"evenodd\"/>\n";

  if (mode == RenderMode::Contacts) {
    ContactGraph g = contact_graph(result);
    for (size_t i = 0; i < result.centers.size(); ++i) {
      int count = g.disk_contacts[i] + g.border_contacts[i];
      counts_present.insert(count);
      svg << "<circle cx=\"" << fmt_coord(X(result.centers[i].x)) << "\" cy=\""
          << fmt_coord(Y(result.centers[i].y)) << "\" r=\""
          << fmt_coord(result.r * scale) << "\" fill=\"" << palette_color(count)
          << "\" stroke=\"black\" stroke-width=\"0.7\"/>\n";
    }
  } else {
    for (const auto& c : result.centers)
      svg << "<circle cx=\"" << fmt_coord(X(c.x)) << "\" cy=\""
          << fmt_coord(Y(c.y)) << "\" r=\"" << fmt_coord(result.r * scale)
          << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.7\"/>\n";
  }

  // Legend: exactly the counts present.
  double lx = 10.0;
  for (int count : counts_present) {
    svg << "<rect x=\"" << fmt_coord(lx) << "\" y=\"" << fmt_coord(H + 10)
        << "\" width=\"18\" height=\"18\" fill=\"" << palette_color(count)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt_coord(lx + 24) << "\" y=\"" << fmt_coord(H + 24)
        << "\" font-size=\"14\" font-family=\"sans-serif\">" << count
        << "</text>\n";
    lx += 60.0;
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << svg.str();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace packgen
