#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "collapse/coulomb.hpp"
#include "collapse/error.hpp"
#include "collapse/grid.hpp"
#include "collapse/io.hpp"
#include "collapse/parallel.hpp"
#include "collapse/rng.hpp"
#include "collapse/stats.hpp"

using namespace collapse;

TEST_CASE("Philox known-answer vectors") {
  // Reference outputs of Philox4x32-10 from the Random123 distribution.
  auto r = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  CHECK(r == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  r = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(r == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  r = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(r == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("noise streams are pure functions of their coordinates") {
  NoiseStream a(7, 3), b(7, 3);
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(a.normal());
  for (int i = 0; i < 100; ++i) CHECK(b.normal() == xs[static_cast<std::size_t>(i)]);
  NoiseStream c(7, 3, 50);
  CHECK(c.normal() == xs[50]);
  CHECK(a.counter() == 100);
}

TEST_CASE("uniform and exponential moments") {
  NoiseStream s(1, 2);
  const int n = 200000;
  double su = 0, se = 0, se2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double e = s.exponential();
    se += e;
    se2 += e * e;
  }
  CHECK(std::abs(su / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(se / n - 1.0) < 4 / std::sqrt(n));
  CHECK(std::abs(se2 / n - 2.0) < 4 * std::sqrt(20.0 / n));
}

TEST_CASE("stream ids do not collide across purposes") {
  CHECK(stream_id(purpose::grid, 5) != stream_id(purpose::jump, 5));
  CHECK(stream_id(purpose::grid, 5, 1) != stream_id(purpose::grid, 5, 0));
  CHECK(stream_id(purpose::grid, 6) != stream_id(purpose::grid, 5));
}

TEST_CASE("sample statistics") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(stats::mean_of(x).value == doctest::Approx(3.0));
  CHECK(stats::mean_of(x).std_err == doctest::Approx(std::sqrt(2.5 / 5)));
  CHECK(stats::variance_of(x).value == doctest::Approx(2.5));
  const std::vector<double> y{2, 4, 6, 8, 10};
  CHECK(stats::covariance_of(x, y).value == doctest::Approx(5.0));
  CHECK_THROWS_AS(stats::mean_of(std::vector<double>{1.0}), Error);
}

TEST_CASE("line fits recover their generator") {
  std::vector<double> x, y, s;
  for (int i = 0; i < 20; ++i) {
    x.push_back(i);
    y.push_back(3.0 - 0.5 * i);
    s.push_back(1.0);
  }
  const auto f = stats::fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK(f.intercept == doctest::Approx(3.0));
  std::vector<double> z;
  for (double v : x) z.push_back(2.0 * v);
  CHECK(stats::fit_proportional(x, z, s).value == doctest::Approx(2.0));
}

TEST_CASE("KS statistic on exponential samples") {
  NoiseStream s(3, 4);
  std::vector<double> e;
  for (int i = 0; i < 2000; ++i) e.push_back(s.exponential());
  CHECK(stats::ks_statistic_exponential(e) < stats::ks_critical_value(e.size(), 0.01));
  std::vector<double> shifted;
  for (double v : e) shifted.push_back(v * 1.5);
  CHECK(stats::ks_statistic_exponential(shifted) > stats::ks_critical_value(e.size(), 0.01));
  // Asymptotic 1% quantile 1.628 / sqrt(n).
  CHECK(stats::ks_critical_value(10000, 0.01) == doctest::Approx(1.628 / 100).scale(0).epsilon(0.01));
}

TEST_CASE("parallel results do not depend on the worker count") {
  std::vector<double> a(37), b(37);
  auto body = [](std::vector<double>& out) {
    return [&out](std::size_t i) {
      NoiseStream s(9, i);
      out[i] = s.normal();
    };
  };
  parallel::set_workers(1);
  parallel::for_each_index(a.size(), body(a));
  parallel::set_workers(4);
  parallel::for_each_index(b.size(), body(b));
  CHECK(a == b);
}

TEST_CASE("cube self-average of the Coulomb kernel") {
  // Independent midpoint estimate: E[1/|r-s|] for r, s uniform in the unit
  // cube equals E[1/|d|] with d having the triangular density prod(1-|d_i|).
  const int m = 60;
  double sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double x = (i + 0.5) / m, y = (j + 0.5) / m, z = (k + 0.5) / m;
        sum += 8.0 * (1 - x) * (1 - y) * (1 - z) / std::sqrt(x * x + y * y + z * z);
      }
  CHECK(coulomb::cell_self_average_unit() == doctest::Approx(sum / (m * m * m)).scale(0).epsilon(3e-3));
}

TEST_CASE("lattice Coulomb energy of two distant cells") {
  coulomb::Lattice3 l{Vec3::Zero(), 0.5, {20, 1, 1}};
  std::vector<double> q1(l.size(), 0.0), q2(l.size(), 0.0);
  q1[0] = 1.0;
  q2[19] = 1.0;
  const double h6 = std::pow(0.5, 6);
  CHECK(coulomb::lattice_coulomb(l, q1, q2) == doctest::Approx(h6 / (19 * 0.5)).scale(0).epsilon(1e-12));
}

TEST_CASE("ball fill fractions sum to the ball volume") {
  const double R = 1.0, h = 0.1;
  const auto l = coulomb::covering_lattice(Vec3::Constant(-R), Vec3::Constant(R), h, 1);
  const auto f = coulomb::ball_fill_fraction(l, Vec3::Zero(), R, 8);
  double v = 0.0;
  for (double w : f) v += w * h * h * h;
  CHECK(v == doctest::Approx(4.0 * std::numbers::pi / 3.0).scale(0).epsilon(2e-3));
}

TEST_CASE("grid moments of Gaussians") {
  const double s2 = std::sqrt(0.5);
  auto wf = gaussian_on_grid(512, 0.05, 0.0, 0.0, 0.0, {0.25 / s2, 0.0}, 1.0);
  auto m = moments(wf, 1.0);
  CHECK(std::abs(m.xbar) < 1e-8);
  CHECK(std::abs(m.pbar) < 1e-8);
  CHECK(std::abs(m.sigma_sq - s2) < 1e-8);
  CHECK(std::abs(m.norm - 1.0) < 1e-8);
  wf = gaussian_on_grid(512, 0.05, 0.0, 0.0, 2.0, {0.25 / s2, 0.0}, 1.0);
  CHECK(std::abs(moments(wf, 1.0).pbar - 2.0) < 1e-8);
  auto shifted = gaussian_on_grid(512, 0.05, 1.5, 1.5, 0.0, {0.25 / s2, 0.0}, 1.0);
  const auto ms = moments(shifted, 1.0);
  CHECK(std::abs(ms.xbar - 1.5 - m.xbar) < 1e-12);
  CHECK(std::abs(ms.sigma_sq - moments(gaussian_on_grid(512, 0.05, 0.0, 0.0, 0.0, {0.25 / s2, 0.0}, 1.0), 1.0).sigma_sq) < 1e-12);
}

TEST_CASE("widening keeps the state and the spacing") {
  auto wf = gaussian_on_grid(128, 0.1, 0.3, 0.5, 0.0, {1.0, 0.0}, 1.0);
  const auto w = widen(wf, 2);
  CHECK(w.size() == 256);
  CHECK(w.dx == wf.dx);
  CHECK(moments(w, 1.0).xbar == doctest::Approx(moments(wf, 1.0).xbar).scale(0).epsilon(1e-12));
  CHECK(norm_sq(w) == doctest::Approx(1.0).scale(0).epsilon(1e-12));
}

TEST_CASE("key=value configuration") {
  const auto kv = io::parse_key_values("# comment\n  T = 2.5 \n\nn=10\nflag=true\nlist=1, 2,3\n");
  CHECK(io::get_double(kv, "T") == 2.5);
  CHECK(io::get_int(kv, "n") == 10);
  CHECK(io::get_bool(kv, "flag"));
  CHECK(io::get_double_list(kv, "list") == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(io::get_double(kv, "missing"), Error);
  CHECK_THROWS_AS(io::get_int(io::parse_key_values("n=1.5"), "n"), Error);
  CHECK(io::sibling("out/run.csv", "jumps") == std::filesystem::path("out/run.jumps.csv"));
}

TEST_CASE("tables round-trip doubles exactly") {
  const auto dir = std::filesystem::temp_directory_path() / "collapse_io_test";
  std::filesystem::create_directories(dir);
  const double v = 0.1 + 0.2;
  {
    io::TableWriter w(dir / "t.csv", io::Format::csv, {{"a", "time"}, {"b", ""}, {"c", ""}});
    w.row({v, 3LL, std::string("x,y")});
  }
  std::ifstream in(dir / "t.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "a[time],b,c");
  CHECK(std::stod(row.substr(0, row.find(','))) == v);
  CHECK(row.substr(row.find(',')) == ",3,\"x,y\"");
  {
    io::TableWriter w(dir / "t.jsonl", io::Format::jsonl, {{"a", "time"}});
    w.row({v});
  }
  std::ifstream jin(dir / "t.jsonl");
  std::getline(jin, header);
  std::getline(jin, row);
  CHECK(header.find("\"columns\"") != std::string::npos);
  CHECK(row == "{\"a\":0.30000000000000004}");
  std::filesystem::remove_all(dir);
}
