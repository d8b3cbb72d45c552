#pragma once

// Post-hoc analysis: contact graphs, domain-clipped Voronoi diagrams with
// topological charge, closed-form rectangle peak predictions, hexagonal
// numbers and the cardioid density scaling fit.

#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "packgen/geometry.hpp"
#include "packgen/packer.hpp"

namespace packgen {

inline double packing_fraction(const DomainSpec& spec, int n, double r) {
  return n * kPi * r * r / area(spec);
}

struct ContactGraph {
  std::vector<int> disk_contacts;    // per disk
  std::vector<int> border_contacts;  // per disk (per boundary component)
  std::vector<std::vector<int>> adjacency;
};

inline ContactGraph contact_graph(const PackingResult& result,
                                  double contact_tol = 1e-6) {
  int n = (int)result.centers.size();
  ContactGraph g;
  g.disk_contacts.assign(n, 0);
  g.border_contacts.assign(n, 0);
  g.adjacency.assign(n, {});
  double tol = contact_tol * result.r;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = (result.centers[i] - result.centers[j]).norm();
      if (std::fabs(d - 2.0 * result.r) <= tol) {
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
        ++g.disk_contacts[i];
        ++g.disk_contacts[j];
      }
    }
    auto hits = nearest_boundary(result.spec, result.centers[i],
                                 default_tie_tol(result.spec));
    std::set<int> touched;
    for (const auto& h : hits)
      if (std::fabs(h.dist - result.r) <= tol)
        touched.insert((int)h.component);
    // A disk may also touch the non-nearest annulus component.
    if (result.spec.family == Family::Annulus) {
      double rr = result.centers[i].norm();
      if (std::fabs((1.0 - rr) - result.r) <= tol) touched.insert(0);
      if (std::fabs((rr - result.spec.a) - result.r) <= tol) touched.insert(1);
    }
    g.border_contacts[i] = (int)touched.size();
  }
  return g;
}

struct VoronoiCell {
  int disk = 0;
  int side_count = 0;   // Voronoi-edge neighbors plus border arcs
  int border_arcs = 0;  // distinct boundary components touching the cell
  int charge = 0;       // 6 - side_count - border_arcs
  std::vector<Point2> polygon;  // clipped cell (hole not subtracted)
  std::vector<int> neighbors;
};

struct DegenerateSites : std::runtime_error {
  DegenerateSites() : std::runtime_error("two Voronoi sites coincide") {}
};

namespace detail {

// Polygon with per-edge provenance: tag[i] labels the edge v[i] -> v[i+1];
// -1 means domain border, j >= 0 means the bisector against site j.
struct TaggedPoly {
  std::vector<Point2> v;
  std::vector<int> tag;
};

// Sutherland-Hodgman clip against the half-plane n.x <= c.
inline void clip_halfplane(TaggedPoly& poly, Vec2 nrm, double c, int new_tag) {
  size_t n = poly.v.size();
  if (n == 0) return;
  TaggedPoly out;
  out.v.reserve(n + 2);
  out.tag.reserve(n + 2);
  for (size_t i = 0; i < n; ++i) {
    Point2 cur = poly.v[i];
    Point2 nxt = poly.v[(i + 1) % n];
    int t = poly.tag[i];
    double sc = nrm.dot(cur) - c;
    double sn = nrm.dot(nxt) - c;
    bool cin = sc <= 0.0, nin = sn <= 0.0;
    if (cin) {
      out.v.push_back(cur);
      out.tag.push_back(t);
      if (!nin) {
        double f = sc / (sc - sn);
        out.v.push_back(cur + f * (nxt - cur));
        out.tag.push_back(new_tag);
      }
    } else if (nin) {
      double f = sc / (sc - sn);
      out.v.push_back(cur + f * (nxt - cur));
      out.tag.push_back(t);
    }
  }
  poly = std::move(out);
}

inline double point_segment_dist(Point2 p, Point2 a, Point2 b) {
  return (p - closest_on_segment(p, a, b)).norm();
}

}  // namespace detail

// Voronoi diagram of the centers clipped to the domain (smooth boundaries
// discretized at 4096 segments). Side count includes one side per border arc;
// border-arc count is the number of distinct boundary components touching the
// cell, so an annular ring cell reads 4 sides / 2 arcs / charge 0.
inline std::vector<VoronoiCell> voronoi_cells(const PackingResult& result,
                                              int boundary_segments = 4096) {
  int n = (int)result.centers.size();
  if (n < 2)
    throw std::invalid_argument("voronoi_cells: need at least 2 sites");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((result.centers[i] - result.centers[j]).norm() < 1e-12)
        throw DegenerateSites{};

  auto loops = boundary_loops(result.spec, boundary_segments);
  const auto& outer = loops[0];
  double edge_eps = 1e-9 * domain_diameter(result.spec);

  std::vector<VoronoiCell> cells(n);
  for (int i = 0; i < n; ++i) {
    detail::TaggedPoly poly;
    poly.v = outer;
    poly.tag.assign(outer.size(), -1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Vec2 nrm = result.centers[j] - result.centers[i];
      Point2 mid = 0.5 * (result.centers[i] + result.centers[j]);
      detail::clip_halfplane(poly, nrm, nrm.dot(mid), j);
      if (poly.v.empty()) break;
    }
    VoronoiCell& cell = cells[i];
    cell.disk = i;
    cell.polygon = poly.v;
    std::set<int> nbrs;
    bool outer_arc = false;
    size_t m = poly.v.size();
    for (size_t k = 0; k < m; ++k) {
      const Point2& a = poly.v[k];
      const Point2& b = poly.v[(k + 1) % m];
      double len = (b - a).norm();
      if (len < edge_eps) continue;
      // Edges lying wholly inside the annulus hole are not part of the
      // domain; micro-edges from near-degenerate central vertices would
      // otherwise tag spurious neighbors.
      if (result.spec.family == Family::Annulus &&
          std::max(a.norm(), b.norm()) < result.spec.a)
        continue;
      if (poly.tag[k] < 0)
        outer_arc = true;
      else
        nbrs.insert(poly.tag[k]);
    }
    cell.neighbors.assign(nbrs.begin(), nbrs.end());
    cell.border_arcs = outer_arc ? 1 : 0;
    if (result.spec.family == Family::Annulus && m > 0) {
      // Cell touches the inner border iff its region overlaps the hole.
      double dmin = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < m; ++k)
        dmin = std::min(dmin, detail::point_segment_dist(
                                  {0, 0}, poly.v[k], poly.v[(k + 1) % m]));
      bool origin_inside = detail::point_in_polygon({0, 0}, poly.v);
      if (origin_inside || dmin < result.spec.a - 1e-9) ++cell.border_arcs;
    }
    cell.side_count = (int)cell.neighbors.size() + cell.border_arcs;
    cell.charge = 6 - cell.side_count - cell.border_arcs;
  }
  return cells;
}

inline int total_topological_charge(const std::vector<VoronoiCell>& cells) {
  int q = 0;
  for (const auto& c : cells) q += c.charge;
  return q;
}

enum class RectPeakCase { OddRows, EvenRows, DivisorCase };

inline const char* rect_peak_case_name(RectPeakCase c) {
  switch (c) {
    case RectPeakCase::OddRows: return "odd";
    case RectPeakCase::EvenRows: return "even";
    case RectPeakCase::DivisorCase: return "divisor";
  }
  return "?";
}

struct RectPeak {
  int l = 1;
  RectPeakCase peak_case = RectPeakCase::DivisorCase;
  double a = 0.0;
  double rho = 0.0;
};

// Closed-form aspect ratios at which N disks admit l hexagonally packed rows
// in the [-a,a] x [-1,1] rectangle, with the corresponding densities.
inline std::vector<RectPeak> rect_peaks(int n, int l_max) {
  if (n < 1 || l_max < 1)
    throw std::invalid_argument("rect_peaks: n and l_max must be >= 1");
  const double s3 = std::numbers::sqrt3;
  std::vector<RectPeak> peaks;
  for (int l = 1; l <= l_max; ++l) {
    double denom = 2.0 + (l - 1) * s3;
    if (l % 2 == 1 && (n + (l - 1) / 2) % l == 0) {
      double a = (2.0 * n + l - 1) / (l * denom);
      double rho = n * l * kPi / ((2.0 * n + l - 1) * denom);
      peaks.push_back({l, RectPeakCase::OddRows, a, rho});
    }
    if (l % 2 == 0 && (n + l / 2) % l == 0) {
      double a = (2.0 * n + l) / (l * denom);
      double rho = n * l * kPi / ((2.0 * n + l) * denom);
      peaks.push_back({l, RectPeakCase::EvenRows, a, rho});
    }
    if (n % l == 0) {
      double a = (2.0 * n + l) / (l * denom);
      double rho = n * l * kPi / ((2.0 * n + l) * denom);
      peaks.push_back({l, RectPeakCase::DivisorCase, a, rho});
    }
  }
  return peaks;
}

// Distinct predicted ratios, deduplicated to 1e-12.
inline std::vector<double> rect_peak_ratios(const std::vector<RectPeak>& peaks) {
  std::vector<double> out;
  for (const auto& p : peaks) {
    bool dup = false;
    for (double a : out)
      if (std::fabs(a - p.a) < 1e-12) { dup = true; break; }
    if (!dup) out.push_back(p.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> hexagonal_numbers(int k_max) {
  if (k_max < 1) throw std::invalid_argument("hexagonal_numbers: k_max >= 1");
  std::vector<int> out;
  for (int k = 1; k <= k_max; ++k) out.push_back(3 * k * (k + 1) + 1);
  return out;
}

struct InsufficientData : std::invalid_argument {
  InsufficientData() : std::invalid_argument("fit_kappa: need >= 2 samples") {}
};

struct ScalingFit {
  double kappa = 0.0;
  double residual_rms = 0.0;
  std::vector<std::pair<double, double>> samples;  // (N, rho)
};

// Single-parameter least squares of (pi/sqrt(12) - rho) = kappa * N^(-1/4)
// through the origin.
inline ScalingFit fit_kappa(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw InsufficientData{};
  const double rho_max = kPi / std::sqrt(12.0);
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [n, rho] : samples) {
    if (n < 1) throw std::invalid_argument("fit_kappa: N must be >= 1");
    double x = std::pow(n, -0.25);
    double y = rho_max - rho;
    sxy += x * y;
    sxx += x * x;
  }
  ScalingFit fit;
  fit.samples = samples;
  fit.kappa = sxy / sxx;
  double ss = 0.0;
  for (const auto& [n, rho] : samples) {
    double res = (rho_max - rho) - fit.kappa * std::pow(n, -0.25);
    ss += res * res;
  }
  fit.residual_rms = std::sqrt(ss / samples.size());
  return fit;
}

}  // namespace packgen
