#pragma once

// Parametric planar domains: containment, star-shaped parametrization,
// nearest-boundary queries and image-point construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace packgen {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double xx, double yy) : x(xx), y(yy) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double c) const { return {x * c, y * c}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
  constexpr double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  constexpr Vec2 perp() const { return {-y, x}; }
};

inline constexpr Vec2 operator*(double c, Vec2 v) { return v * c; }

using Point2 = Vec2;

inline double dist2(Point2 a, Point2 b) { return (a - b).norm2(); }

enum class Family { Rectangle, Cross, Ellipse, CircleCardioid, Annulus };

struct DomainSpec {
  Family family = Family::Ellipse;
  double a = 1.0;

  void validate() const {
    switch (family) {
      case Family::Rectangle:
        if (a < 1.0) throw std::invalid_argument("rect: a must be >= 1");
        break;
      case Family::Cross:
        if (a < 0.0) throw std::invalid_argument("cross: a must be >= 0");
        break;
      case Family::Ellipse:
        if (a < 1.0) throw std::invalid_argument("ellipse: a must be >= 1");
        break;
      case Family::CircleCardioid:
        if (a < 0.0 || a > 1.0)
          throw std::invalid_argument("cardioid: a must be in [0, 1]");
        break;
      case Family::Annulus:
        if (a < 0.0 || a >= 1.0)
          throw std::invalid_argument("annulus: a must be in [0, 1)");
        break;
    }
  }
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Rectangle: return "rect";
    case Family::Cross: return "cross";
    case Family::Ellipse: return "ellipse";
    case Family::CircleCardioid: return "cardioid";
    case Family::Annulus: return "annulus";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "rect" || s == "rectangle") return Family::Rectangle;
  if (s == "cross") return Family::Cross;
  if (s == "ellipse" || s == "circle") return Family::Ellipse;
  if (s == "cardioid" || s == "circle-cardioid") return Family::CircleCardioid;
  if (s == "annulus") return Family::Annulus;
  throw std::invalid_argument("unknown domain family: " + s);
}

// Serialized form used in CLI flags and result-file headers, e.g. "rect:1.500000".
inline std::string to_string(const DomainSpec& spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%.6f", family_name(spec.family), spec.a);
  return buf;
}

inline DomainSpec parse_domain(const std::string& s) {
  auto pos = s.find(':');
  if (pos == std::string::npos)
    throw std::invalid_argument("domain spec must be family:a, got " + s);
  DomainSpec spec;
  spec.family = parse_family(s.substr(0, pos));
  try {
    spec.a = std::stod(s.substr(pos + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad shape parameter in domain spec: " + s);
  }
  spec.validate();
  return spec;
}

// Unconstrained per-point parameters. Radial families use (t, u) with
// P = R(t) * C(u); the rectangle uses (u1, u2) with x = a sin u1, y = sin u2.
struct Coords {
  double t = 0.0;
  double u = 0.0;
};

enum class BoundaryComponent { Outer, Inner };

struct BoundaryHit {
  Point2 b;
  double dist = 0.0;
  BoundaryComponent component = BoundaryComponent::Outer;
};

inline constexpr int kMaxImages = 8;

namespace detail {

// Brent's method for a 1-d minimum bracketed by [lo, hi].
template <class F>
double brent_min(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  const double gold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    double m = 0.5 * (a + b);
    double tol1 = tol + 1e-15 * std::fabs(x);
    if (std::fabs(x - m) <= 2.0 * tol1 - 0.5 * (b - a)) break;
    bool parabolic = false;
    if (std::fabs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      double etmp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etmp) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        double u = x + d;
        if (u - a < 2.0 * tol1 || b - u < 2.0 * tol1)
          d = (m > x) ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    double u = (std::fabs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
    double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

inline Point2 closest_on_segment(Point2 p, Point2 s0, Point2 s1) {
  Vec2 d = s1 - s0;
  double L2 = d.norm2();
  if (L2 == 0.0) return s0;
  double t = std::clamp((p - s0).dot(d) / L2, 0.0, 1.0);
  return s0 + t * d;
}

}  // namespace detail

// Vertices of the plus-shaped 12-gon (4-gon when a = 0), CCW.
inline std::vector<Point2> cross_polygon(double a) {
  const double h = 0.5, L = 0.5 + a;
  std::vector<Point2> v = {{L, -h}, {L, h},  {h, h},   {h, L},   {-h, L},
                           {-h, h}, {-L, h}, {-L, -h}, {-h, -h}, {-h, -L},
                           {h, -L}, {h, -h}};
  if (a <= 0.0) v = {{h, -h}, {h, h}, {-h, h}, {-h, -h}};
  return v;
}

inline std::vector<Point2> domain_polygon(const DomainSpec& spec) {
  switch (spec.family) {
    case Family::Rectangle:
      return {{spec.a, -1.0}, {spec.a, 1.0}, {-spec.a, 1.0}, {-spec.a, -1.0}};
    case Family::Cross:
      return cross_polygon(spec.a);
    default:
      throw std::logic_error("domain_polygon: not a polygonal family");
  }
}

// Boundary curve C(u) of the given component (Inner only for Annulus).
inline Point2 boundary_point(const DomainSpec& spec, double u,
                             BoundaryComponent comp = BoundaryComponent::Outer) {
  switch (spec.family) {
    case Family::Rectangle: {
      // Used only for sampling/rendering; trace the four sides.
      double s = std::fmod(u < 0 ? u + 2 * kPi * (1 + (int)(-u / (2 * kPi))) : u,
                           2 * kPi) / (2 * kPi);  // [0,1)
      auto poly = domain_polygon(spec);
      double per = 0;
      std::vector<double> lens(4);
      for (int i = 0; i < 4; ++i) { lens[i] = (poly[(i + 1) % 4] - poly[i]).norm(); per += lens[i]; }
      double want = s * per;
      for (int i = 0; i < 4; ++i) {
        if (want <= lens[i] || i == 3) {
          double f = lens[i] > 0 ? want / lens[i] : 0;
          return poly[i] + f * (poly[(i + 1) % 4] - poly[i]);
        }
        want -= lens[i];
      }
      return poly[0];
    }
    case Family::Cross: {
      // Star-shaped radial map: boundary point of the 12-gon in direction u.
      auto poly = cross_polygon(spec.a);
      Vec2 d{std::cos(u), std::sin(u)};
      double best = std::numeric_limits<double>::infinity();
      Point2 bp{};
      size_t n = poly.size();
      for (size_t i = 0; i < n; ++i) {
        Point2 v0 = poly[i], v1 = poly[(i + 1) % n];
        Vec2 nrm = (v1 - v0).perp();
        double c = nrm.dot(v0);
        double nd = nrm.dot(d);
        if (std::fabs(nd) < 1e-300) continue;
        double r = c / nd;
        if (r <= 0) continue;
        Point2 q = r * d;
        // within segment extent?
        Vec2 e = v1 - v0;
        double s = (q - v0).dot(e) / e.norm2();
        if (s < -1e-12 || s > 1 + 1e-12) continue;
        if (r < best) { best = r; bp = q; }
      }
      return bp;
    }
    case Family::Ellipse:
      return {spec.a * std::cos(u), std::sin(u)};
    case Family::CircleCardioid: {
      double k = std::sqrt(2.0 / (2.0 + spec.a * spec.a));
      double su = std::sin(u), cu = std::cos(u);
      return {k * (cu - spec.a * su * su), k * (1.0 + spec.a * cu) * su};
    }
    case Family::Annulus: {
      double r = (comp == BoundaryComponent::Inner) ? spec.a : 1.0;
      return {r * std::cos(u), r * std::sin(u)};
    }
  }
  return {};
}

// dC/du for smooth families.
inline Vec2 boundary_tangent(const DomainSpec& spec, double u,
                             BoundaryComponent comp = BoundaryComponent::Outer) {
  switch (spec.family) {
    case Family::Ellipse:
      return {-spec.a * std::sin(u), std::cos(u)};
    case Family::CircleCardioid: {
      double k = std::sqrt(2.0 / (2.0 + spec.a * spec.a));
      double su = std::sin(u), cu = std::cos(u);
      return {k * (-su - spec.a * 2.0 * su * cu),
              k * (cu + spec.a * (cu * cu - su * su))};
    }
    case Family::Annulus: {
      double r = (comp == BoundaryComponent::Inner) ? spec.a : 1.0;
      return {-r * std::sin(u), r * std::cos(u)};
    }
    default:
      throw std::logic_error("boundary_tangent: family not smooth-parametrized");
  }
}

inline double area(const DomainSpec& spec) {
  switch (spec.family) {
    case Family::Rectangle: return 4.0 * spec.a;
    case Family::Cross: return 1.0 + 4.0 * spec.a;
    case Family::Ellipse: return kPi * spec.a;
    case Family::CircleCardioid: return kPi;
    case Family::Annulus: return kPi * (1.0 - spec.a * spec.a);
  }
  return 0.0;
}

// Cheap upper bound on the diameter; used only to scale tolerances.
inline double domain_diameter(const DomainSpec& spec) {
  switch (spec.family) {
    case Family::Rectangle: return 2.0 * std::hypot(spec.a, 1.0);
    case Family::Cross:
      return std::max(1.0 + 2.0 * spec.a, std::numbers::sqrt2 * (1.0 + spec.a));
    case Family::Ellipse: return 2.0 * spec.a;
    case Family::CircleCardioid: {
      thread_local std::map<double, double> cache;
      auto it = cache.find(spec.a);
      if (it == cache.end()) {
        double m = 0;
        for (int i = 0; i < 256; ++i)
          m = std::max(m, boundary_point(spec, 2 * kPi * i / 256).norm());
        it = cache.emplace(spec.a, 2.0 * m).first;
      }
      return it->second;
    }
    case Family::Annulus: return 2.0;
  }
  return 2.0;
}

namespace detail {

// Precomputed boundary sample table for smooth families (nearest-point seeding).
struct BoundaryTable {
  static constexpr int kSamples = 1024;
  std::vector<Point2> pts;
  std::vector<double> us;
};

inline const BoundaryTable& boundary_table(const DomainSpec& spec) {
  thread_local std::map<std::pair<int, double>, BoundaryTable> cache;
  auto key = std::make_pair(static_cast<int>(spec.family), spec.a);
  auto it = cache.find(key);
  if (it == cache.end()) {
    BoundaryTable t;
    t.pts.resize(BoundaryTable::kSamples);
    t.us.resize(BoundaryTable::kSamples);
    for (int i = 0; i < BoundaryTable::kSamples; ++i) {
      double u = 2 * kPi * i / BoundaryTable::kSamples;
      t.us[i] = u;
      t.pts[i] = boundary_point(spec, u);
    }
    it = cache.emplace(key, std::move(t)).first;
  }
  return it->second;
}

struct SmoothHit {
  double u;
  Point2 b;
  double d2;
};

// d^2 C / du^2 for the smooth-parametrized families.
inline Vec2 boundary_second(const DomainSpec& spec, double u) {
  switch (spec.family) {
    case Family::Ellipse:
      return {-spec.a * std::cos(u), -std::sin(u)};
    case Family::CircleCardioid: {
      double k = std::sqrt(2.0 / (2.0 + spec.a * spec.a));
      double su = std::sin(u), cu = std::cos(u);
      double s2 = 2.0 * su * cu, c2 = cu * cu - su * su;
      return {k * (-cu - spec.a * 2.0 * c2), k * (-su - spec.a * 2.0 * s2)};
    }
    default:
      throw std::logic_error("boundary_second: family not smooth-parametrized");
  }
}

// All local minima of |p - C(u)|^2 for a smooth boundary, Brent-refined.
inline std::vector<SmoothHit> smooth_local_minima(const DomainSpec& spec,
                                                  Point2 p) {
  const auto& tab = boundary_table(spec);
  const int M = BoundaryTable::kSamples;
  thread_local std::vector<double> g;
  thread_local std::vector<int> mins;
  g.resize(M);
  mins.clear();
  for (int i = 0; i < M; ++i) g[i] = dist2(p, tab.pts[i]);
  if (g[0] <= g[M - 1] && g[0] <= g[1]) mins.push_back(0);
  for (int i = 1; i < M - 1; ++i)
    if (g[i] <= g[i - 1] && g[i] <= g[i + 1]) mins.push_back(i);
  if (g[M - 1] <= g[M - 2] && g[M - 1] <= g[0]) mins.push_back(M - 1);
  // Flat (degenerate-center) profile: keep an evenly spaced subset.
  if ((int)mins.size() > 4 * kMaxImages) {
    std::vector<int> kept;
    int stride = (int)mins.size() / kMaxImages;
    for (size_t i = 0; i < mins.size(); i += stride) kept.push_back(mins[i]);
    mins = kept;
  }
  const double du = 2 * kPi / M;
  std::vector<SmoothHit> hits;
  auto f = [&](double u) { return dist2(p, boundary_point(spec, u)); };
  // d/du |p - C(u)|^2, up to a factor of 2
  auto fp = [&](double u) {
    return (boundary_point(spec, u) - p).dot(boundary_tangent(spec, u));
  };
  for (int i : mins) {
    double lo = tab.us[i] - du, hi = tab.us[i] + du;
    double u;
    double dlo = fp(lo), dhi = fp(hi);
    if (dlo <= 0.0 && dhi >= 0.0) {
      // Root-find on the derivative: pins u to machine precision, which a
      // value-only minimizer cannot do on the flat quadratic bottom.
      // Newton with a bisection safeguard (the bracket is kept valid).
      u = 0.5 * (lo + hi);
      for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
        Vec2 d = boundary_point(spec, u) - p;
        Vec2 T = boundary_tangent(spec, u);
        double fm = d.dot(T);
        if (fm <= 0.0) lo = u; else hi = u;
        double fpp = T.dot(T) + d.dot(boundary_second(spec, u));
        double un = (fpp > 0.0) ? u - fm / fpp : 0.5 * (lo + hi);
        if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
        if (std::fabs(un - u) < 1e-16) { u = un; break; }
        u = un;
      }
    } else {
      u = brent_min(f, lo, hi, 1e-13);
    }
    Point2 b = boundary_point(spec, u);
    hits.push_back({u, b, dist2(p, b)});
  }
  // Dedupe coincident refined minima.
  std::sort(hits.begin(), hits.end(),
            [](const SmoothHit& a, const SmoothHit& b) { return a.d2 < b.d2; });
  std::vector<SmoothHit> out;
  double tol2 = 1e-18;
  for (const auto& h : hits) {
    bool dup = false;
    for (const auto& o : out)
      if (dist2(h.b, o.b) < tol2) { dup = true; break; }
    if (!dup) out.push_back(h);
  }
  return out;
}

inline bool point_in_polygon(Point2 p, const std::vector<Point2>& poly) {
  bool in = false;
  size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
      double xs = poly[j].x + (p.y - poly[j].y) / (poly[i].y - poly[j].y) *
                                  (poly[i].x - poly[j].x);
      if (p.x < xs) in = !in;
    }
  }
  return in;
}

}  // namespace detail

inline Point2 to_cartesian(const DomainSpec& spec, Coords c) {
  switch (spec.family) {
    case Family::Rectangle: {
      return {spec.a * std::sin(c.t), std::sin(c.u)};
    }
    case Family::Annulus: {
      double s = std::sin(c.t);
      double R = spec.a + (1.0 - spec.a) * s * s;
      return R * Point2{std::cos(c.u), std::sin(c.u)};
    }
    default: {
      double s = std::sin(c.t);
      double R = s * s;
      return R * boundary_point(spec, c.u);
    }
  }
}

// Jacobian of to_cartesian: dP/dt and dP/du.
inline void cartesian_jacobian(const DomainSpec& spec, Coords c, Vec2& dP_dt,
                               Vec2& dP_du) {
  switch (spec.family) {
    case Family::Rectangle:
      dP_dt = {spec.a * std::cos(c.t), 0.0};
      dP_du = {0.0, std::cos(c.u)};
      return;
    case Family::Annulus: {
      double s2t = std::sin(2.0 * c.t);
      double s = std::sin(c.t);
      double R = spec.a + (1.0 - spec.a) * s * s;
      Vec2 C{std::cos(c.u), std::sin(c.u)};
      dP_dt = (1.0 - spec.a) * s2t * C;
      dP_du = R * Vec2{-C.y, C.x};
      return;
    }
    case Family::Ellipse:
    case Family::CircleCardioid: {
      double s2t = std::sin(2.0 * c.t);
      double s = std::sin(c.t);
      double R = s * s;
      Vec2 C = boundary_point(spec, c.u);
      dP_dt = s2t * C;
      dP_du = R * boundary_tangent(spec, c.u);
      return;
    }
    case Family::Cross: {
      // C(u) = r_b(u) d(u) on the active polygon edge n.x = cn.
      auto poly = cross_polygon(spec.a);
      Vec2 d{std::cos(c.u), std::sin(c.u)};
      Vec2 dp{-d.y, d.x};
      size_t n = poly.size();
      double best = std::numeric_limits<double>::infinity();
      Vec2 bestn{};
      double bestc = 0;
      for (size_t i = 0; i < n; ++i) {
        Point2 v0 = poly[i], v1 = poly[(i + 1) % n];
        Vec2 nrm = (v1 - v0).perp();
        double cn = nrm.dot(v0);
        double nd = nrm.dot(d);
        if (std::fabs(nd) < 1e-300) continue;
        double r = cn / nd;
        if (r <= 0) continue;
        Point2 q = r * d;
        Vec2 e = v1 - v0;
        double sseg = (q - v0).dot(e) / e.norm2();
        if (sseg < -1e-12 || sseg > 1 + 1e-12) continue;
        if (r < best) { best = r; bestn = nrm; bestc = cn; }
      }
      double nd = bestn.dot(d);
      double rb = bestc / nd;
      double rbp = -bestc * bestn.dot(dp) / (nd * nd);
      Vec2 C = rb * d;
      Vec2 Cp = rbp * d + rb * dp;
      double s2t = std::sin(2.0 * c.t);
      double s = std::sin(c.t);
      dP_dt = s2t * C;
      dP_du = (s * s) * Cp;
      return;
    }
  }
}

inline bool contains(const DomainSpec& spec, Point2 p, double tol = 1e-12) {
  switch (spec.family) {
    case Family::Rectangle:
      return std::fabs(p.x) <= spec.a + tol && std::fabs(p.y) <= 1.0 + tol;
    case Family::Cross: {
      const double h = 0.5 + tol, L = 0.5 + spec.a + tol;
      return (std::fabs(p.x) <= h && std::fabs(p.y) <= L) ||
             (std::fabs(p.y) <= h && std::fabs(p.x) <= L);
    }
    case Family::Ellipse: {
      double f = (p.x / spec.a) * (p.x / spec.a) + p.y * p.y;
      return f <= 1.0 + 2.0 * tol;
    }
    case Family::Annulus: {
      double r = p.norm();
      return r >= spec.a - tol && r <= 1.0 + tol;
    }
    case Family::CircleCardioid: {
      if (spec.a == 0.0) return p.norm2() <= 1.0 + 2.0 * tol;
      auto hits = detail::smooth_local_minima(spec, p);
      if (hits.empty()) return false;
      const auto& h = hits.front();
      Vec2 T = boundary_tangent(spec, h.u);
      double tn = T.norm();
      if (tn > 1e-6) {
        // CCW boundary: interior lies to the left of the tangent.
        return T.cross(p - h.b) >= -tol * tn;
      }
      // Near the cusp the tangent degenerates; fall back to a crossing test.
      const auto& tab = detail::boundary_table(spec);
      return detail::point_in_polygon(p, tab.pts) ||
             std::sqrt(h.d2) <= tol;
    }
  }
  return false;
}

// All local-minimum boundary points within tie_tol of the global minimum
// distance, sorted by distance then angle, capped at kMaxImages.
inline std::vector<BoundaryHit> nearest_boundary(const DomainSpec& spec,
                                                 Point2 p, double tie_tol) {
  std::vector<BoundaryHit> hits;
  switch (spec.family) {
    case Family::Rectangle:
    case Family::Cross: {
      auto poly = domain_polygon(spec);
      size_t n = poly.size();
      for (size_t i = 0; i < n; ++i) {
        Point2 b = detail::closest_on_segment(p, poly[i], poly[(i + 1) % n]);
        hits.push_back({b, (b - p).norm(), BoundaryComponent::Outer});
      }
      break;
    }
    case Family::Annulus: {
      double r = p.norm();
      Vec2 dir = (r > 0) ? (1.0 / r) * p : Vec2{1.0, 0.0};
      hits.push_back({dir, std::fabs(1.0 - r), BoundaryComponent::Outer});
      hits.push_back({spec.a * dir, std::fabs(r - spec.a),
                      BoundaryComponent::Inner});
      break;
    }
    case Family::Ellipse:
    case Family::CircleCardioid: {
      for (const auto& h : detail::smooth_local_minima(spec, p))
        hits.push_back({h.b, std::sqrt(h.d2), BoundaryComponent::Outer});
      break;
    }
  }
  // Dedupe coincident candidates (segment endpoints shared by two edges).
  std::sort(hits.begin(), hits.end(), [](const BoundaryHit& a, const BoundaryHit& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return std::atan2(a.b.y, a.b.x) < std::atan2(b.b.y, b.b.x);
  });
  double dedupe = 1e-9 * domain_diameter(spec);
  std::vector<BoundaryHit> out;
  for (const auto& h : hits) {
    bool dup = false;
    for (const auto& o : out)
      if ((h.b - o.b).norm() < dedupe && h.component == o.component) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(h);
  }
  double dmin = out.front().dist;
  std::vector<BoundaryHit> kept;
  for (const auto& h : out) {
    if (h.dist <= dmin + tie_tol && (int)kept.size() < kMaxImages)
      kept.push_back(h);
  }
  return kept;
}

inline double default_tie_tol(const DomainSpec& spec) {
  return 1e-9 * domain_diameter(spec);
}

// Reflections q = 2b - p through each nearest-boundary point.
inline std::vector<Point2> image_points(const DomainSpec& spec, Point2 p,
                                        double tie_tol) {
  auto hits = nearest_boundary(spec, p, tie_tol);
  std::vector<Point2> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(2.0 * h.b - p);
  return out;
}

// Inverse of to_cartesian for an interior point (principal branch).
inline Coords invert(const DomainSpec& spec, Point2 p) {
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  switch (spec.family) {
    case Family::Rectangle:
      return {std::asin(std::clamp(p.x / spec.a, -1.0, 1.0)),
              std::asin(std::clamp(p.y, -1.0, 1.0))};
    case Family::Ellipse: {
      Vec2 q{p.x / spec.a, p.y};
      double R = q.norm();
      double u = std::atan2(q.y, q.x);
      return {std::asin(std::sqrt(clamp01(R))), u};
    }
    case Family::Annulus: {
      double R = p.norm();
      double u = std::atan2(p.y, p.x);
      double s2 = clamp01((R - spec.a) / (1.0 - spec.a));
      return {std::asin(std::sqrt(s2)), u};
    }
    case Family::Cross: {
      if (p.norm2() == 0.0) return {0.0, 0.0};
      double u = std::atan2(p.y, p.x);
      double rb = boundary_point(spec, u).norm();
      double R = clamp01(p.norm() / rb);
      return {std::asin(std::sqrt(R)), u};
    }
    case Family::CircleCardioid: {
      if (p.norm2() == 0.0) return {0.0, 0.0};
      double phi = std::atan2(p.y, p.x);
      // Solve angle(C(u)) = phi by bisection on the (monotone) angle profile.
      const auto& tab = detail::boundary_table(spec);
      const int M = detail::BoundaryTable::kSamples;
      auto ang = [&](double u) {
        Point2 b = boundary_point(spec, u);
        double a0 = std::atan2(b.y, b.x);
        return a0;
      };
      // Find bracketing sample interval (angles unwrapped).
      double target = phi;
      double prev = ang(0.0);
      double acc = prev;
      double lou = 0.0, hiu = 2 * kPi;
      bool found = false;
      double tshift = target;
      while (tshift < acc) tshift += 2 * kPi;
      for (int i = 1; i <= M; ++i) {
        double u = 2 * kPi * i / M;
        double av = ang(u);
        while (av < acc - 1e-12) av += 2 * kPi;
        if (acc <= tshift && tshift <= av) {
          lou = 2 * kPi * (i - 1) / M;
          hiu = u;
          found = true;
          break;
        }
        acc = av;
      }
      if (!found) { lou = 0; hiu = 2 * kPi; }
      // Bisect on signed angle difference.
      auto diff = [&](double u) {
        Point2 b = boundary_point(spec, u);
        return b.cross(p);  // zero when collinear, sign flips across target
      };
      double lo = lou, hi = hiu, flo = diff(lo);
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = diff(mid);
        if ((fm >= 0) == (flo >= 0)) { lo = mid; flo = fm; }
        else hi = mid;
      }
      double u = 0.5 * (lo + hi);
      double rb = boundary_point(spec, u).norm();
      double R = clamp01(p.norm() / rb);
      return {std::asin(std::sqrt(R)), u};
    }
  }
  return {};
}

// Closed boundary loops sampled for rendering and Voronoi clipping.
// Outer loop first (CCW); Annulus adds the inner circle as a second loop.
inline std::vector<std::vector<Point2>> boundary_loops(const DomainSpec& spec,
                                                       int samples) {
  std::vector<std::vector<Point2>> loops;
  switch (spec.family) {
    case Family::Rectangle:
    case Family::Cross:
      loops.push_back(domain_polygon(spec));
      break;
    case Family::Ellipse:
    case Family::CircleCardioid: {
      std::vector<Point2> loop(samples);
      for (int i = 0; i < samples; ++i)
        loop[i] = boundary_point(spec, 2 * kPi * i / samples);
      loops.push_back(std::move(loop));
      break;
    }
    case Family::Annulus: {
      std::vector<Point2> outer(samples), inner(samples);
      for (int i = 0; i < samples; ++i) {
        double u = 2 * kPi * i / samples;
        outer[i] = {std::cos(u), std::sin(u)};
        inner[i] = {spec.a * std::cos(u), spec.a * std::sin(u)};
      }
      loops.push_back(std::move(outer));
      loops.push_back(std::move(inner));
      break;
    }
  }
  return loops;
}

}  // namespace packgen
