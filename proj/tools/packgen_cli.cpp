// packgen command-line front end: pack runs, parameter sweeps, analysis,
// peak predictions, scaling fits and SVG rendering.

#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "packgen/analysis.hpp"
#include "packgen/geometry.hpp"
#include "packgen/packer.hpp"
#include "packgen/persistence.hpp"

namespace {

using namespace packgen;

void add_schedule_flags(CLI::App* cmd, Schedule& sched) {
  cmd->add_option("--s0", sched.s0, "initial potential exponent");
  cmd->add_option("--growth", sched.growth, "multiplicative stage factor")
      ->check(CLI::Range(1.0 + 1e-12, 1e9));
  cmd->add_option("--smax", sched.s_max, "termination exponent");
  cmd->add_option("--grad-tol", sched.grad_tol, "stage gradient tolerance");
  cmd->add_option("--inner-iters", sched.inner_max_iters,
                  "iteration cap per stage");
  cmd->add_option("--image-weight0", sched.image_weight0,
                  "initial image-charge multiplier");
  cmd->add_option("--image-decay-stages", sched.image_weight_decay_stages,
                  "stages over which the image weight decays to 1");
}

void print_summary(const PackingResult& r) {
  std::printf("%zu %.17g %.17g %.17g %llu\n", r.centers.size(), r.spec.a,
              r.rho, r.r, (unsigned long long)r.seed);
}

int run(int argc, char** argv) {
  CLI::App app{"packgen: dense disk packings in parametric planar domains"};
  app.require_subcommand(1);

  Schedule sched;
  int n = 1, trials = 1, jobs = (int)std::thread::hardware_concurrency();
  if (jobs < 1) jobs = 1;
  std::uint64_t seed = 1;
  std::string domain_str, out_path, in_path, mode_str = "contacts";
  double a_from = 0, a_to = 0, step = 0.01, contact_tol = 1e-6;
  bool timing = false;

  auto* cmd_pack = app.add_subcommand("pack", "pack N disks into a domain");
  cmd_pack->add_option("--domain", domain_str, "domain spec, family:a")
      ->required();
  cmd_pack->add_option("--n", n, "number of disks")->required();
  cmd_pack->add_option("--trials", trials, "independent trials");
  cmd_pack->add_option("--seed", seed, "base random seed");
  cmd_pack->add_option("--jobs", jobs, "concurrent trials");
  cmd_pack->add_option("--out", out_path, "output .pack file");
  cmd_pack->add_flag("--timing", timing, "record wall time in the header");
  add_schedule_flags(cmd_pack, sched);

  auto* cmd_sweep = app.add_subcommand("sweep", "density sweep over a");
  cmd_sweep->add_option("--domain", domain_str, "domain family name")
      ->required();
  cmd_sweep->add_option("--n", n, "number of disks")->required();
  cmd_sweep->add_option("--a-from", a_from, "first shape parameter")
      ->required();
  cmd_sweep->add_option("--a-to", a_to, "last shape parameter")->required();
  cmd_sweep->add_option("--step", step, "grid step");
  cmd_sweep->add_option("--trials", trials, "trials per grid point");
  cmd_sweep->add_option("--seed", seed, "base random seed");
  cmd_sweep->add_option("--jobs", jobs, "concurrent trials");
  cmd_sweep->add_option("--out", out_path, "output .csv file");
  add_schedule_flags(cmd_sweep, sched);

  auto* cmd_analyze = app.add_subcommand("analyze", "analyze a .pack file");
  cmd_analyze->add_option("--in", in_path, "input .pack file")->required();
  cmd_analyze->add_option("--contact-tol", contact_tol,
                          "contact tolerance relative to r");

  auto* cmd_peaks =
      app.add_subcommand("peaks", "closed-form rectangle peak predictions");
  int l_max = 8;
  cmd_peaks->add_option("--n", n, "number of disks")->required();
  cmd_peaks->add_option("--l-max", l_max, "maximum row count");

  auto* cmd_fit = app.add_subcommand("fit-kappa", "density scaling fit");
  cmd_fit->add_option("--in", in_path, "input .csv curve")->required();

  auto* cmd_render = app.add_subcommand("render", "render a .pack file as SVG");
  cmd_render->add_option("--in", in_path, "input .pack file")->required();
  cmd_render->add_option("--mode", mode_str, "contacts or voronoi")
      ->check(CLI::IsMember({"contacts", "voronoi"}));
  cmd_render->add_option("--out", out_path, "output .svg file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_pack->parsed()) {
      if (n < 1) {
        std::cerr << "error: --n must be >= 1\n" << cmd_pack->help();
        return 2;
      }
      DomainSpec spec = parse_domain(domain_str);
      PackingResult res = multi_trial(spec, n, sched, trials, seed, jobs);
      if (!out_path.empty()) write_result(res, out_path, timing);
      print_summary(res);
      return 0;
    }
    if (cmd_sweep->parsed()) {
      if (n < 1 || step <= 0 || a_from > a_to) {
        std::cerr << "error: invalid sweep grid\n" << cmd_sweep->help();
        return 2;
      }
      Family fam = parse_family(domain_str);
      DensityCurve curve = warm_start_sweep(fam, n, a_from, a_to, step, sched,
                                            trials, seed, jobs);
      if (!out_path.empty()) write_curve(curve, out_path);
      for (const auto& s : curve)
        std::printf("%.17g %.17g %.17g\n", s.a, s.rho, s.r);
      return 0;
    }
    if (cmd_analyze->parsed()) {
      PackingResult res = read_result(in_path);
      std::printf("domain %s\n", to_string(res.spec).c_str());
      std::printf("n %zu\n", res.centers.size());
      std::printf("r %.17g\n", res.r);
      std::printf("rho %.17g\n", res.rho);
      ContactGraph g = contact_graph(res, contact_tol);
      for (size_t i = 0; i < res.centers.size(); ++i)
        std::printf("disk %zu contacts %d border %d\n", i, g.disk_contacts[i],
                    g.border_contacts[i]);
      if (res.centers.size() >= 2) {
        auto cells = voronoi_cells(res);
        for (const auto& c : cells)
          std::printf("cell %d sides %d arcs %d charge %d\n", c.disk,
                      c.side_count, c.border_arcs, c.charge);
        std::printf("total_charge %d\n", total_topological_charge(cells));
      }
      return 0;
    }
    if (cmd_peaks->parsed()) {
      if (n < 1 || l_max < 1) {
        std::cerr << "error: --n and --l-max must be >= 1\n";
        return 2;
      }
      for (const auto& p : rect_peaks(n, l_max))
        std::printf("%d %s %.17g %.17g\n", p.l,
                    rect_peak_case_name(p.peak_case), p.a, p.rho);
      return 0;
    }
    if (cmd_fit->parsed()) {
      DensityCurve curve = read_curve(in_path);
      std::vector<std::pair<double, double>> samples;
      for (const auto& s : curve) samples.emplace_back(s.n, s.rho);
      ScalingFit fit = fit_kappa(samples);
      std::printf("kappa %.17g\n", fit.kappa);
      std::printf("residual_rms %.17g\n", fit.residual_rms);
      return 0;
    }
    if (cmd_render->parsed()) {
      PackingResult res = read_result(in_path);
      RenderMode mode = (mode_str == "voronoi") ? RenderMode::Voronoi
                                                : RenderMode::Contacts;
      render_svg(res, mode, out_path);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
