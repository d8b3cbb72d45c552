#pragma once

// Energy minimization engine: image-charge energy, frozen-image gradients,
// staged exponent schedule with accept-if-denser bookkeeping, multi-trial
// orchestration and warm-started parameter sweeps.

#include <array>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "packgen/geometry.hpp"

namespace packgen {

struct EnergyParams {
  double s = 1.0;            // potential exponent
  double lambda = 1.0;       // minimal squared distance scale
  double image_weight = 1.0; // charge multiplier on point-image terms
};

struct Schedule {
  double s0 = 1.0;
  double growth = 1.5;
  double s_max = 2e6;
  int inner_max_iters = 50000;
  double grad_tol = 1e-10;
  double image_weight0 = 2.0;
  int image_weight_decay_stages = 10;
};

struct EmptyConfiguration : std::runtime_error {
  EmptyConfiguration() : std::runtime_error("configuration has no points") {}
};

struct InvalidN : std::invalid_argument {
  explicit InvalidN(int n)
      : std::invalid_argument("n must be >= 1, got " + std::to_string(n)) {}
};

struct Configuration {
  DomainSpec spec;
  std::vector<Coords> coords;
  std::vector<Point2> pts;                  // cache of to_cartesian(coords)
  std::vector<std::vector<Point2>> images;  // cache, per point

  int size() const { return (int)coords.size(); }

  void refresh_cartesian() {
    pts.resize(coords.size());
    for (size_t i = 0; i < coords.size(); ++i)
      pts[i] = to_cartesian(spec, coords[i]);
  }

  void refresh_images(double tie_tol) {
    images.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i)
      images[i] = image_points(spec, pts[i], tie_tol);
  }
};

struct PackingResult {
  DomainSpec spec;
  std::vector<Point2> centers;
  double r = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  int trials = 1;
  Schedule schedule;
  double wall_time = 0.0;
};

struct DensitySample {
  double a = 0.0;
  double rho = 0.0;
  double r = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
};

using DensityCurve = std::vector<DensitySample>;

namespace detail {

// splitmix64: deterministic across platforms, unlike <random> distributions.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double next_double() {  // [0,1)
    return (next_u64() >> 11) * 0x1.0p-53;
  }
};

}  // namespace detail

// Minimum over point-point pairs and point-own-image pairs of squared distance.
inline double min_squared_distance(const Configuration& cfg) {
  int n = cfg.size();
  if (n == 0) throw EmptyConfiguration{};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j)
      best = std::min(best, dist2(cfg.pts[i], cfg.pts[j]));
    for (const auto& q : cfg.images[i])
      best = std::min(best, dist2(cfg.pts[i], q));
  }
  return best;
}

namespace detail {

inline double clamp_d2(double d2, double eps2) {
  return d2 > eps2 ? d2 : eps2;
}

// (lambda / d2)^s evaluated in log space; underflows to 0, capped at exp(700).
inline double pair_term(double s, double lambda, double d2) {
  double t = s * (std::log(lambda) - std::log(d2));
  if (t < -745.0) return 0.0;
  if (t > 700.0) t = 700.0;
  return std::exp(t);
}

// Squared distance beyond which pair_term underflows to exactly 0; lets the
// hot loops skip the log/exp for far pairs with a single compare.
inline double skip_d2(double s, double lambda) {
  double e = 745.0 / s;
  return e > 700.0 ? std::numeric_limits<double>::infinity()
                   : lambda * std::exp(e);
}

inline double pair_term_fast(double s, double loglam, double d2) {
  double t = s * (loglam - std::log(d2));
  if (t < -745.0) return 0.0;
  if (t > 700.0) t = 700.0;
  return std::exp(t);
}

// Uniform bucket grid for range-limited pair enumeration. The visiting order
// is a fixed function of the point list and cell size, so results stay
// deterministic. Buffers are reused across calls.
class NeighborGrid {
 public:
  // Returns false when the cutoff radius is too large for the grid to help.
  bool build(const std::vector<Point2>& pts, double cut_d2) {
    int n = (int)pts.size();
    if (n < 32 || !(cut_d2 > 0.0) || std::isinf(cut_d2)) return false;
    double h = std::sqrt(cut_d2);
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    // Cap total cells at ~4n so the cell sweep stays O(n).
    int cap = std::max(4, (int)(2.0 * std::sqrt((double)n)));
    nx_ = std::min(cap, std::max(1, (int)((xmax - xmin) / h)));
    ny_ = std::min(cap, std::max(1, (int)((ymax - ymin) / h)));
    if (nx_ * ny_ < 16) return false;  // cutoff spans the whole cloud
    x0_ = xmin;
    y0_ = ymin;
    hx_ = (xmax - xmin) / nx_ + 1e-300;
    hy_ = (ymax - ymin) / ny_ + 1e-300;
    cell_.resize(n);
    start_.assign(nx_ * ny_ + 1, 0);
    order_.resize(n);
    for (int i = 0; i < n; ++i) {
      int cx = std::min(nx_ - 1, (int)((pts[i].x - x0_) / hx_));
      int cy = std::min(ny_ - 1, (int)((pts[i].y - y0_) / hy_));
      cell_[i] = cy * nx_ + cx;
      ++start_[cell_[i] + 1];
    }
    for (int c = 0; c < nx_ * ny_; ++c) start_[c + 1] += start_[c];
    fill_ = start_;
    for (int i = 0; i < n; ++i) order_[fill_[cell_[i]]++] = i;
    return true;
  }

  // Calls f(i, j) for every pair within one cell diagonal (superset of all
  // pairs closer than the cutoff radius).
  template <class F>
  void for_each_pair(F&& f) const {
    static constexpr int dx[4] = {1, -1, 0, 1};
    static constexpr int dy[4] = {0, 1, 1, 1};
    for (int cy = 0; cy < ny_; ++cy)
      for (int cx = 0; cx < nx_; ++cx) {
        int c = cy * nx_ + cx;
        for (int a = start_[c]; a < start_[c + 1]; ++a) {
          for (int b = a + 1; b < start_[c + 1]; ++b)
            f(order_[a], order_[b]);
          for (int k = 0; k < 4; ++k) {
            int ox = cx + dx[k], oy = cy + dy[k];
            if (ox < 0 || ox >= nx_ || oy >= ny_) continue;
            int oc = oy * nx_ + ox;
            for (int b = start_[oc]; b < start_[oc + 1]; ++b)
              f(order_[a], order_[b]);
          }
        }
      }
  }

 private:
  int nx_ = 0, ny_ = 0;
  double x0_ = 0, y0_ = 0, hx_ = 1, hy_ = 1;
  std::vector<int> cell_, start_, fill_, order_;
};

inline NeighborGrid& scratch_grid() {
  thread_local NeighborGrid grid;
  return grid;
}

}  // namespace detail

inline double energy(const Configuration& cfg, const EnergyParams& prm) {
  int n = cfg.size();
  double eps = 1e-14 * domain_diameter(cfg.spec);
  double eps2 = eps * eps;
  double e = 0.0;
  const double loglam = std::log(prm.lambda);
  const double cut = detail::skip_d2(prm.s, prm.lambda);
  auto add_pair = [&](int i, int j) {
    double d2 = detail::clamp_d2(dist2(cfg.pts[i], cfg.pts[j]), eps2);
    if (d2 > cut) return;
    e += detail::pair_term_fast(prm.s, loglam, d2);
  };
  auto& grid = detail::scratch_grid();
  if (grid.build(cfg.pts, cut)) {
    grid.for_each_pair(add_pair);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) add_pair(i, j);
  }
  for (int i = 0; i < n; ++i)
    for (const auto& q : cfg.images[i]) {
      double d2 = detail::clamp_d2(dist2(cfg.pts[i], q), eps2);
      if (d2 > cut) continue;
      e += prm.image_weight * detail::pair_term_fast(prm.s, loglam, d2);
    }
  return e;
}

// Gradient of the energy with respect to the unconstrained coordinates,
// holding image positions fixed. Two components per point.
inline std::vector<Coords> gradient(const Configuration& cfg,
                                    const EnergyParams& prm) {
  int n = cfg.size();
  double eps = 1e-14 * domain_diameter(cfg.spec);
  double eps2 = eps * eps;
  std::vector<Vec2> gp(n, Vec2{0, 0});  // dE/dp_i in Cartesian coordinates
  const double loglam = std::log(prm.lambda);
  const double cut = detail::skip_d2(prm.s, prm.lambda);
  auto add_pair = [&](int i, int j) {
    double d2 = detail::clamp_d2(dist2(cfg.pts[i], cfg.pts[j]), eps2);
    if (d2 > cut) return;
    double term = detail::pair_term_fast(prm.s, loglam, d2);
    if (term == 0.0) return;
    double coeff = -2.0 * prm.s * term / d2;
    Vec2 dv = cfg.pts[i] - cfg.pts[j];
    gp[i] = gp[i] + coeff * dv;
    gp[j] = gp[j] - coeff * dv;
  };
  auto& grid = detail::scratch_grid();
  if (grid.build(cfg.pts, cut)) {
    grid.for_each_pair(add_pair);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) add_pair(i, j);
  }
  for (int i = 0; i < n; ++i)
    for (const auto& q : cfg.images[i]) {
      double d2 = detail::clamp_d2(dist2(cfg.pts[i], q), eps2);
      if (d2 > cut) continue;
      double term = detail::pair_term_fast(prm.s, loglam, d2);
      if (term == 0.0) continue;
      double coeff = -2.0 * prm.s * prm.image_weight * term / d2;
      gp[i] = gp[i] + coeff * (cfg.pts[i] - q);
    }
  std::vector<Coords> g(n);
  for (int i = 0; i < n; ++i) {
    Vec2 dP_dt, dP_du;
    cartesian_jacobian(cfg.spec, cfg.coords[i], dP_dt, dP_du);
    g[i].t = gp[i].dot(dP_dt);
    g[i].u = gp[i].dot(dP_du);
  }
  return g;
}

struct StageReport {
  int iterations = 0;
  bool stalled = false;  // iteration cap hit with gradient above tolerance
  double final_energy = 0.0;
};

// Line-searched quasi-second-order descent (limited-memory BFGS with an
// Armijo backtracking line search) at fixed s and lambda. Images are frozen
// during each gradient/line-search evaluation and recomputed after every
// accepted step; the curvature history is discarded whenever the quasi-Newton
// direction stops being a descent direction.
inline StageReport minimize_stage(Configuration& cfg, const EnergyParams& prm,
                                  const Schedule& sched) {
  const double tie_tol = default_tie_tol(cfg.spec);
  const double c1 = 1e-4;
  constexpr int kMemory = 8;
  StageReport rep;

  double e_cur = energy(cfg, prm);
  Configuration best = cfg;
  double e_best = e_cur;

  Configuration trial = cfg;
  // Windowed progress gauge: give up on the stage once energy has dropped by
  // less than kRateTol (relative) over a trailing window. Progress per
  // iteration shrinks with the number of variables, so the gauge window
  // scales with the configuration size.
  constexpr double kCurvatureGateS = 100.0;
  const int window = std::max(400, 2 * cfg.size());
  // Late (hard-disk regime) stages need a tighter gauge: the last fraction of
  // the disks' travel is what snaps a near-lattice configuration into place.
  // Early annealing stages only need to be roughed in, not converged.
  const double kRateTol = (prm.s < kCurvatureGateS) ? 1e-8
                          : (prm.s >= 1e5)          ? 1e-13
                                                    : 1e-10;
  std::vector<double> e_hist(window, 0.0);

  const size_t n = cfg.coords.size();
  std::vector<std::vector<Coords>> hist_s, hist_y;  // L-BFGS curvature pairs
  std::vector<double> hist_rho;
  std::vector<Coords> dir(n), g_old;
  std::vector<double> lb_a(kMemory);

  auto dot = [](const std::vector<Coords>& x, const std::vector<Coords>& y) {
    double d = 0.0;
    for (size_t i = 0; i < x.size(); ++i) d += x[i].t * y[i].t + x[i].u * y[i].u;
    return d;
  };

  // CG annealing pays for itself only on small systems, where the basin
  // structure is coarse enough that a perfect lattice is reachable; larger
  // clouds are locally frustrated either way and quasi-Newton speed wins.
  const bool use_lbfgs = prm.s >= kCurvatureGateS || (int)n > 128;
  double g2_old = 0.0;
  auto g = gradient(cfg, prm);

  // Backtracking Armijo line search on the frozen-image energy. A strict
  // decrease is required so rounding can never buy a zero-progress accept.
  // On success `trial` holds the accepted position.
  auto line_search = [&](double gd) -> double {
    trial.images = cfg.images;
    double aa = 1.0;
    for (int k = 0; k < 60; ++k) {
      trial.coords.resize(n);
      for (size_t i = 0; i < n; ++i) {
        trial.coords[i].t = cfg.coords[i].t + aa * dir[i].t;
        trial.coords[i].u = cfg.coords[i].u + aa * dir[i].u;
      }
      trial.refresh_cartesian();
      double e_new = energy(trial, prm);
      if (e_new < e_cur && e_new <= e_cur + c1 * aa * gd) return aa;
      aa *= 0.5;
    }
    return -1.0;
  };

  auto accept_step = [&]() {
    cfg.coords = trial.coords;
    cfg.pts = trial.pts;
    cfg.refresh_images(tie_tol);
    e_cur = energy(cfg, prm);
    if (e_cur < e_best) {
      e_best = e_cur;
      best = cfg;
    }
    g_old = std::move(g);
    g = gradient(cfg, prm);
  };

  auto stall_break = [&]() {
    int slot = rep.iterations % window;
    bool stop = rep.iterations >= window &&
                e_hist[slot] - e_cur < kRateTol * std::max(1.0, std::fabs(e_cur));
    e_hist[slot] = e_cur;
    return stop;
  };

  for (rep.iterations = 0; rep.iterations < sched.inner_max_iters;
       ++rep.iterations) {
    double ginf = 0.0, g2 = 0.0;
    for (const auto& gi : g) {
      ginf = std::max({ginf, std::fabs(gi.t), std::fabs(gi.u)});
      g2 += gi.t * gi.t + gi.u * gi.u;
    }
    if (ginf < sched.grad_tol) break;

    if (!use_lbfgs) {
      // Polak-Ribiere conjugate gradient with automatic reset. Its heavier,
      // momentum-like steps anneal the long-range stages into better basins
      // than quasi-Newton quenching does.
      double beta = 0.0;
      if (!g_old.empty() && g2_old > 0.0) {
        double num = 0.0;
        for (size_t i = 0; i < n; ++i)
          num += g[i].t * (g[i].t - g_old[i].t) + g[i].u * (g[i].u - g_old[i].u);
        beta = std::max(0.0, num / g2_old);
      }
      if (g_old.empty() || beta == 0.0) {
        for (size_t i = 0; i < n; ++i) dir[i] = {-g[i].t, -g[i].u};
      } else {
        for (size_t i = 0; i < n; ++i) {
          dir[i].t = -g[i].t + beta * dir[i].t;
          dir[i].u = -g[i].u + beta * dir[i].u;
        }
      }
      double gd = dot(g, dir);
      if (!(gd < 0.0)) {
        for (size_t i = 0; i < n; ++i) dir[i] = {-g[i].t, -g[i].u};
        gd = -g2;
      }
      double a = line_search(gd);
      if (a < 0.0) break;  // no descent left at this resolution
      g2_old = g2;
      accept_step();
      if (stall_break()) break;
      continue;
    }

    // Two-loop recursion: dir = -H*g.
    dir = g;
    int m = (int)hist_s.size();
    for (int k = m - 1; k >= 0; --k) {
      lb_a[k] = hist_rho[k] * dot(hist_s[k], dir);
      for (size_t i = 0; i < n; ++i) {
        dir[i].t -= lb_a[k] * hist_y[k][i].t;
        dir[i].u -= lb_a[k] * hist_y[k][i].u;
      }
    }
    if (m > 0) {
      double yy = dot(hist_y[m - 1], hist_y[m - 1]);
      double gamma = yy > 0.0 ? 1.0 / (hist_rho[m - 1] * yy) : 1.0;
      for (auto& d : dir) {
        d.t *= gamma;
        d.u *= gamma;
      }
    }
    for (int k = 0; k < m; ++k) {
      double b = hist_rho[k] * dot(hist_y[k], dir);
      for (size_t i = 0; i < n; ++i) {
        dir[i].t += (lb_a[k] - b) * hist_s[k][i].t;
        dir[i].u += (lb_a[k] - b) * hist_s[k][i].u;
      }
    }
    for (auto& d : dir) {
      d.t = -d.t;
      d.u = -d.u;
    }
    double gd = dot(g, dir);
    if (!(gd < 0.0)) {  // not a descent direction: reset to scaled steepest
      hist_s.clear();
      hist_y.clear();
      hist_rho.clear();
      double scale = 1.0 / std::max(1.0, std::sqrt(g2));
      for (size_t i = 0; i < n; ++i) {
        dir[i].t = -scale * g[i].t;
        dir[i].u = -scale * g[i].u;
      }
      gd = -scale * g2;
    }

    double a = line_search(gd);
    if (a < 0.0) {
      if (hist_s.empty()) break;  // no descent left at this resolution
      hist_s.clear();  // stale curvature: drop it and retry from steepest
      hist_y.clear();
      hist_rho.clear();
      continue;
    }

    accept_step();
    std::vector<Coords> sv(n), yv(n);
    for (size_t i = 0; i < n; ++i) {
      sv[i].t = a * dir[i].t;
      sv[i].u = a * dir[i].u;
      yv[i].t = g[i].t - g_old[i].t;
      yv[i].u = g[i].u - g_old[i].u;
    }
    double sy = dot(sv, yv);
    if (sy > 1e-30) {  // keep the inverse-Hessian estimate positive definite
      if ((int)hist_s.size() == kMemory) {
        hist_s.erase(hist_s.begin());
        hist_y.erase(hist_y.begin());
        hist_rho.erase(hist_rho.begin());
      }
      hist_s.push_back(std::move(sv));
      hist_y.push_back(std::move(yv));
      hist_rho.push_back(1.0 / sy);
    }

    if (stall_break()) break;
  }

  if (rep.iterations >= sched.inner_max_iters) rep.stalled = true;
  if (e_best < e_cur) cfg = best;
  rep.final_energy = std::min(e_best, e_cur);
  return rep;
}

inline double packing_fraction_of(const Configuration& cfg) {
  double r = 0.5 * std::sqrt(min_squared_distance(cfg));
  return cfg.size() * kPi * r * r / area(cfg.spec);
}

namespace detail {

inline Configuration random_configuration(const DomainSpec& spec, int n,
                                          std::uint64_t seed) {
  Configuration cfg;
  cfg.spec = spec;
  cfg.coords.resize(n);
  Rng rng(seed);
  double min_sep = 1e-6 * domain_diameter(spec);
  auto draw = [&](int i) {
    cfg.coords[i].t = 2 * kPi * rng.next_double() - kPi;
    cfg.coords[i].u = 2 * kPi * rng.next_double() - kPi;
  };
  for (int i = 0; i < n; ++i) draw(i);
  cfg.refresh_cartesian();
  // Rejection-resample near-coincident points.
  for (int rounds = 0; rounds < 1000; ++rounds) {
    bool clean = true;
    for (int i = 0; i < n && clean; ++i)
      for (int j = 0; j < i; ++j)
        if ((cfg.pts[i] - cfg.pts[j]).norm() < min_sep) {
          draw(i);
          cfg.pts[i] = to_cartesian(spec, cfg.coords[i]);
          clean = false;
          break;
        }
    if (clean) break;
  }
  cfg.refresh_images(default_tie_tol(spec));
  return cfg;
}

inline double stage_image_weight(const Schedule& sched, int stage) {
  if (sched.image_weight0 <= 1.0 || sched.image_weight_decay_stages <= 0)
    return 1.0;
  if (stage >= sched.image_weight_decay_stages) return 1.0;
  double f = (double)stage / sched.image_weight_decay_stages;
  return std::pow(sched.image_weight0, 1.0 - f);
}

// Full staged run starting from a given configuration.
inline PackingResult pack_from(Configuration cfg, const Schedule& sched,
                               std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  const DomainSpec spec = cfg.spec;

  Configuration best = cfg;
  double best_rho = packing_fraction_of(cfg);

  double s = sched.s0;
  int stage = 0;
  while (s <= sched.s_max * (1.0 + 1e-12)) {
    EnergyParams prm;
    prm.s = s;
    prm.lambda = min_squared_distance(cfg);
    prm.image_weight = stage_image_weight(sched, stage);
    minimize_stage(cfg, prm, sched);
    double rho = packing_fraction_of(cfg);
    if (rho > best_rho) {
      best_rho = rho;
      best = cfg;
    } else {
      cfg = best;  // revert-to-best: next stage restarts from the densest
    }
    s *= sched.growth;
    ++stage;
  }

  PackingResult res;
  res.spec = spec;
  res.centers = best.pts;
  res.r = 0.5 * std::sqrt(min_squared_distance(best));
  res.rho = best.size() * kPi * res.r * res.r / area(spec);
  res.seed = seed;
  res.trials = 1;
  res.schedule = sched;
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

}  // namespace detail

inline PackingResult pack(const DomainSpec& spec, int n, const Schedule& sched,
                          std::uint64_t seed) {
  if (n < 1) throw InvalidN(n);
  spec.validate();
  return detail::pack_from(detail::random_configuration(spec, n, seed), sched,
                           seed);
}

// Best of `trials` independent runs with seeds base_seed..base_seed+trials-1.
// Ties break toward the lower seed. Trials are independent; `jobs` > 1 runs
// them on worker threads, and the selected best is independent of `jobs`
// (deterministic max over a fixed seed set).
inline PackingResult multi_trial(const DomainSpec& spec, int n,
                                 const Schedule& sched, int trials,
                                 std::uint64_t base_seed, int jobs = 1) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  auto t0 = std::chrono::steady_clock::now();
  std::vector<PackingResult> results(trials);
  jobs = std::clamp(jobs, 1, trials);
  if (jobs == 1) {
    for (int k = 0; k < trials; ++k)
      results[k] = pack(spec, n, sched, base_seed + (std::uint64_t)k);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (int k = w; k < trials; k += jobs)
          results[k] = pack(spec, n, sched, base_seed + (std::uint64_t)k);
      });
    for (auto& t : workers) t.join();
  }
  PackingResult best = results[0];
  for (int k = 1; k < trials; ++k)
    if (results[k].rho > best.rho) best = results[k];
  best.trials = trials;
  best.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return best;
}

// Sweep the shape parameter a over a grid. Each grid point runs multi_trial
// plus one warm-started trial seeded from the previous best configuration
// (coordinates carried over verbatim into the new domain).
inline DensityCurve warm_start_sweep(Family family, int n, double a_from,
                                     double a_to, double step,
                                     const Schedule& sched, int trials_per_a,
                                     std::uint64_t seed, int jobs = 1) {
  if (step <= 0) throw std::invalid_argument("step must be > 0");
  if (a_from > a_to) throw std::invalid_argument("a_from must be <= a_to");
  DensityCurve curve;
  std::vector<Coords> prev_coords;
  int steps = (int)std::floor((a_to - a_from) / step + 1e-9) + 1;
  for (int k = 0; k < steps; ++k) {
    DomainSpec spec{family, a_from + k * step};
    spec.validate();
    PackingResult best = multi_trial(spec, n, sched, trials_per_a, seed, jobs);
    if (!prev_coords.empty()) {
      Configuration warm;
      warm.spec = spec;
      warm.coords = prev_coords;
      warm.refresh_cartesian();
      warm.refresh_images(default_tie_tol(spec));
      PackingResult wr = detail::pack_from(std::move(warm), sched, seed);
      if (wr.rho > best.rho) {
        wr.trials = best.trials;
        best = wr;
      }
    }
    // Remember the best coordinates for the next grid point.
    {
      prev_coords.resize(best.centers.size());
      for (size_t i = 0; i < best.centers.size(); ++i)
        prev_coords[i] = invert(spec, best.centers[i]);
    }
    curve.push_back({spec.a, best.rho, best.r, n, best.seed});
    seed += (std::uint64_t)trials_per_a;
  }
  return curve;
}

}  // namespace packgen
