#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracle.hpp"
#include "packgen/persistence.hpp"

using namespace packgen;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("result file round trip is exact") {
  auto res = oracle::chp7_circle();
  res.seed = 424242;
  res.trials = 3;
  std::string path = tmp_path("pg_rt.pack");
  write_result(res, path);
  PackingResult back = read_result(path);
  REQUIRE(back.centers.size() == res.centers.size());
  for (size_t i = 0; i < res.centers.size(); ++i) {
    CHECK(back.centers[i].x == res.centers[i].x);
    CHECK(back.centers[i].y == res.centers[i].y);
  }
  CHECK(back.r == res.r);
  CHECK(back.rho == res.rho);
  CHECK(back.seed == res.seed);
  CHECK(back.trials == res.trials);
  CHECK(back.spec.family == res.spec.family);
  std::remove(path.c_str());
}

TEST_CASE("unknown header keys survive a rewrite") {
  auto res = oracle::two_disks_circle();
  std::string path = tmp_path("pg_extra.pack");
  write_result(res, path);
  // inject a foreign key
  {
    std::string body = slurp(path);
    auto pos = body.find("# domain");
    body.insert(pos, "# archive best-known-2024\n");
    std::ofstream(path, std::ios::binary) << body;
  }
  ResultFile file = read_result_file(path);
  REQUIRE(file.extra_header.size() == 1);
  CHECK(file.extra_header[0].first == "archive");
  CHECK(file.extra_header[0].second == "best-known-2024");
  std::string path2 = tmp_path("pg_extra2.pack");
  write_result_file(file, path2);
  CHECK(slurp(path2).find("# archive best-known-2024") != std::string::npos);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("truncated body raises FormatError naming the counts") {
  auto res = oracle::chp7_circle();
  std::string path = tmp_path("pg_trunc.pack");
  write_result(res, path);
  std::string body = slurp(path);
  body.erase(body.rfind('\n', body.size() - 2) + 1);  // drop last center
  std::ofstream(path, std::ios::binary) << body;
  try {
    read_result(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    std::string msg = e.what();
    CHECK(msg.find("7") != std::string::npos);
    CHECK(msg.find("6") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("inconsistent header rho raises FormatError") {
  auto res = oracle::two_disks_circle();
  res.rho += 1e-6;
  std::string path = tmp_path("pg_rho.pack");
  write_result(res, path);
  CHECK_THROWS_AS(read_result(path), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("version mismatch raises FormatError") {
  std::string path = tmp_path("pg_ver.pack");
  std::ofstream(path) << "# packgen/9\n# n 0\n";
  CHECK_THROWS_AS(read_result(path), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("curve round trip") {
  std::string path = tmp_path("pg_curve.csv");
  DensityCurve curve = {{1.0, 0.78539816339744828, 0.5, 2, 7},
                        {1.01, 0.77, 0.49, 2, 8},
                        {1.02, 0.76123456789012341, 0.48, 2, 9}};
  write_curve(curve, path);
  DensityCurve back = read_curve(path);
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(back[i].a == curve[i].a);
    CHECK(back[i].rho == curve[i].rho);
    CHECK(back[i].r == curve[i].r);
    CHECK(back[i].n == curve[i].n);
    CHECK(back[i].seed == curve[i].seed);
  }
  // empty curve is header-only
  write_curve({}, path);
  CHECK(slurp(path) == "a,rho,r,N,seed\n");
  CHECK(read_curve(path).empty());
  // non-numeric cell reports row and column
  std::ofstream(path) << "a,rho,r,N,seed\n1.0,oops,0.5,2,7\n";
  try {
    read_curve(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("svg rendering: content and determinism") {
  auto single =
      oracle::make_result({Family::Ellipse, 1.0}, {{0.0, 0.0}}, 1.0);
  std::string p1 = tmp_path("pg_a.svg"), p2 = tmp_path("pg_b.svg");
  render_svg(single, RenderMode::Contacts, p1);
  std::string svg = slurp(p1);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 3);
  // exactly one disk element plus the boundary path
  size_t circles = 0, pos = 0;
  while ((pos = svg.find("<circle", pos)) != std::string::npos) {
    ++circles;
    ++pos;
  }
  CHECK(circles == 1);
  CHECK(svg.find("<path") != std::string::npos);

  auto chp = oracle::chp7_circle();
  render_svg(chp, RenderMode::Contacts, p1);
  render_svg(chp, RenderMode::Contacts, p2);
  CHECK(slurp(p1) == slurp(p2));  // byte-identical

  // CHP has two contact-count classes: 6 (center) and 4 (ring)
  std::string chp_svg = slurp(p1);
  std::set<std::string> fills;
  pos = 0;
  while ((pos = chp_svg.find("<circle", pos)) != std::string::npos) {
    size_t f = chp_svg.find("fill=\"", pos) + 6;
    fills.insert(chp_svg.substr(f, chp_svg.find('"', f) - f));
    ++pos;
  }
  CHECK(fills.size() == 2);

  render_svg(chp, RenderMode::Voronoi, p2);
  CHECK(slurp(p2).find("<polygon") != std::string::npos);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}
