// Copyright 2026 The Hotspot IPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <doctest.h>

#include "hotspot/error.hpp"
#include "hotspot/field.hpp"

using namespace hotspot;

namespace {

std::filesystem::path tmp_file(const std::string& name, const std::string& body) {
  std::filesystem::create_directories(HOTSPOT_TEST_TMP);
  const std::filesystem::path p = std::filesystem::path(HOTSPOT_TEST_TMP) / name;
  std::ofstream(p) << body;
  return p;
}

// Union of bumps written through logs, independent of the field's own loop.
double union_oracle(const std::vector<Bump>& bumps, Point2 p) {
  double log_miss = 0.0;
  for (const Bump& b : bumps) {
    const double d2 = (p.x - b.center.x) * (p.x - b.center.x) + (p.y - b.center.y) * (p.y - b.center.y);
    log_miss += std::log1p(-b.height * std::exp(-d2 / (2.0 * b.width * b.width)));
  }
  return -std::expm1(log_miss);
}

class ConstantField final : public SpatialField {
 public:
  explicit ConstantField(double c) : c_(c), region_(0, 1, 0, 1) {}
  double value(Point2) const override { return c_; }
  const Region& region() const override { return region_; }
  std::vector<Point2> maxima() const override { return {{0.5, 0.5}}; }

 private:
  double c_;
  Region region_;
};

class AffineField final : public SpatialField {
 public:
  AffineField(const SpatialField& base, double a, double b) : base_(base), a_(a), b_(b) {}
  double value(Point2 p) const override { return a_ * base_.value(p) + b_; }
  const Region& region() const override { return base_.region(); }
  std::vector<Point2> maxima() const override { return base_.maxima(); }

 private:
  const SpatialField& base_;
  double a_;
  double b_;
};

}  // namespace

TEST_CASE("region validates bounds") {
  CHECK_THROWS_AS(Region(1, 1, 0, 1), Error);
  CHECK_THROWS_AS(Region(0, 1, 2, 1), Error);
  const Region r(0, 3, 0, 4);
  CHECK(r.diagonal() == doctest::Approx(5.0));
  CHECK(r.contains({3, 4}));
  CHECK_FALSE(r.contains({3.0000001, 4}));
}

TEST_CASE("evaluation grid is row-major with pinned endpoints") {
  const Region r(-155.5, -129.5, 9, 35);
  const EvaluationGrid g(r, 130);
  REQUIRE(g.size() == 16900);
  CHECK(g[0] == Point2{-155.5, 9});
  CHECK(g[129] == Point2{-129.5, 9});
  CHECK(g[16899] == Point2{-129.5, 35});
  CHECK(g[130].y == doctest::Approx(9 + 26.0 / 129));
  for (const Point2& p : g.points()) REQUIRE(r.contains(p));
}

TEST_CASE("four-maxima field") {
  const SyntheticField f = make_four_maxima_field();
  const Region& r = f.region();
  CHECK(r == Region(-155.5, -129.5, 9, 35));
  CHECK(f.value({-135.6, 29}) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("matches an independent evaluation and stays in [0, 1]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(r.x_min(), r.x_max());
    std::uniform_real_distribution<double> uy(r.y_min(), r.y_max());
    for (int i = 0; i < 5000; ++i) {
      const Point2 p{ux(rng), uy(rng)};
      const double v = f.value(p);
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
      REQUIRE(v == doctest::Approx(union_oracle(f.bumps(), p)).epsilon(1e-12));
    }
  }

  SUBCASE("grid argmax is the node nearest the global maximum") {
    const EvaluationGrid g(r, 130);
    std::size_t best = 0;
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (f.value(g[i]) > f.value(g[best])) best = i;
      if (distance(g[i], {-135.6, 29}) < distance(g[nearest], {-135.6, 29})) nearest = i;
    }
    CHECK(best == nearest);
  }

  SUBCASE("three strictly lower local maxima, one near the start corner") {
    const std::vector<Point2> m = f.maxima();
    REQUIRE(m.size() == 4);
    CHECK(m[0] == Point2{-135.6, 29});
    bool near_start = false;
    for (std::size_t i = 1; i < m.size(); ++i) {
      const double v = f.value(m[i]);
      CHECK(v < 1.0 - 0.05);
      // local maximum: every neighbour on a small ring is lower
      for (int k = 0; k < 16; ++k) {
        const double a = 2.0 * M_PI * k / 16.0;
        CHECK(f.value({m[i].x + 0.05 * std::cos(a), m[i].y + 0.05 * std::sin(a)}) < v);
      }
      near_start = near_start || distance(m[i], {-149, 16}) <= 8.0;
    }
    CHECK(near_start);
  }

  SUBCASE("range over the evaluation grid") {
    const FieldStats s = field_stats(f, 130);
    CHECK(s.range == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s.min_value >= 0.0);
  }
}

TEST_CASE("synthetic field rejects invalid bumps") {
  const Region r(0, 10, 0, 10);
  CHECK_THROWS_AS(SyntheticField(r, {}), Error);
  CHECK_THROWS_AS(SyntheticField(r, {{{5, 5}, 0.5, 1}}), Error);
  CHECK_THROWS_AS(SyntheticField(r, {{{5, 5}, 1.0, 1}, {{2, 2}, 1.0, 1}}), Error);
  CHECK_THROWS_AS(SyntheticField(r, {{{15, 5}, 1.0, 1}}), Error);
  CHECK_THROWS_AS(SyntheticField(r, {{{5, 5}, 1.0, 0}}), Error);
}

TEST_CASE("gridded field interpolates through its nodes") {
  SUBCASE("constant grid") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(3, 3, 0.42);
    const GriddedField f({0, 1, 2}, {0, 1, 2}, v);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 2);
    for (int i = 0; i < 200; ++i) CHECK(f.value({u(rng), u(rng)}) == doctest::Approx(0.42).epsilon(1e-6));
  }
  SUBCASE("random grid nodes and overshoot bound") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> lon;
    std::vector<double> lat;
    for (int i = 0; i < 12; ++i) lon.push_back(0.5 * i);
    for (int i = 0; i < 9; ++i) lat.push_back(10 + 0.5 * i);
    Eigen::MatrixXd v(9, 12);
    for (int iy = 0; iy < 9; ++iy) {
      for (int ix = 0; ix < 12; ++ix) v(iy, ix) = 0.05 + 0.12 * (0.5 + 0.5 * std::sin(0.7 * ix) * std::cos(0.9 * iy));
    }
    const GriddedField f(lon, lat, v);
    for (int iy = 0; iy < 9; ++iy) {
      for (int ix = 0; ix < 12; ++ix) {
        REQUIRE(std::abs(f.value({lon[ix], lat[iy]}) - v(iy, ix)) < 1e-6);
      }
    }
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    const double range = hi - lo;
    for (int i = 0; i < 2000; ++i) {
      const double q = f.value({5.5 * u(rng), 10 + 4 * u(rng)});
      REQUIRE(q >= lo - 0.1 * range);
      REQUIRE(q <= hi + 0.1 * range);
    }
  }
  SUBCASE("axes must increase") {
    CHECK_THROWS_AS(GriddedField({0, 0, 1}, {0, 1}, Eigen::MatrixXd::Zero(2, 3)), Error);
    CHECK_THROWS_AS(GriddedField({0, 1, 2}, {0, 1}, Eigen::MatrixXd::Zero(3, 3)), Error);
  }
}

TEST_CASE("dataset loading") {
  SUBCASE("bundled stand-in grid") {
    const GriddedField f = load_gridded_field(std::string(HOTSPOT_SOURCE_DIR) + "/data/chlorophyll_standin.csv");
    CHECK(f.lon_axis().size() == 53);
    CHECK(f.lat_axis().size() == 53);
    CHECK(f.grid().maxCoeff() == doctest::Approx(0.17).epsilon(1e-4));
    CHECK(f.grid().minCoeff() == doctest::Approx(0.05).epsilon(1e-4));
    const FieldStats s = field_stats(f, 53);
    CHECK(std::abs(s.max_location.x - -148.67) <= 0.5);
    CHECK(std::abs(s.max_location.y - 32.11) <= 0.5);
    CHECK(f.maxima().front() == Point2{-148.5, 32.0});
  }
  SUBCASE("rows out of order, CRLF and BOM are accepted") {
    const auto p = tmp_file("ok.csv", "\xEF\xBB\xBFlon,lat,value\r\n1,0,2\r\n0,0,1\r\n0,1,3\r\n1,1,4\r\n");
    const GriddedField f = load_gridded_field(p);
    CHECK(f.value({1, 1}) == doctest::Approx(4).epsilon(1e-6));
    CHECK(f.value({0, 0}) == doctest::Approx(1).epsilon(1e-6));
  }
  SUBCASE("malformed rows report their row number") {
    const auto p = tmp_file("bad.csv", "lon,lat,value\n0,0,1\n1,0,abc\n");
    try {
      load_gridded_field(p);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
    CHECK_THROWS_AS(load_gridded_field(tmp_file("hdr.csv", "x,y,z\n0,0,1\n")), Error);
    CHECK_THROWS_AS(load_gridded_field(tmp_file("cols.csv", "lon,lat,value\n0,0\n")), Error);
  }
  SUBCASE("incomplete grids list the missing nodes") {
    const auto p = tmp_file("hole.csv", "lon,lat,value\n0,0,1\n1,0,1\n0,1,1\n");
    try {
      load_gridded_field(p);
      FAIL("expected a structural error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kStructure);
      CHECK(std::string(e.what()).find("(1, 1)") != std::string::npos);
    }
  }
}

TEST_CASE("sensor") {
  const SyntheticField f = make_four_maxima_field();
  SUBCASE("zero noise is exact") {
    Sensor s(0.0, 1);
    CHECK(s.measure(f, {-140, 20}) == f.value({-140, 20}));
    CHECK(measure(f, s, {-140, 20}) == f.value({-140, 20}));
  }
  SUBCASE("fixed seed reproduces the sequence") {
    Sensor a(0.05, 99);
    Sensor b(0.05, 99);
    for (int i = 0; i < 20; ++i) CHECK(a.measure(f, {-140, 20}) == b.measure(f, {-140, 20}));
  }
  SUBCASE("sample std matches noise_std") {
    Sensor s(0.05, 5);
    const Point2 p{-140, 20};
    double sum = 0;
    double sum2 = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const double e = s.measure(f, p) - f.value(p);
      sum += e;
      sum2 += e * e;
    }
    const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
    CHECK(std::abs(sd - 0.05) / 0.05 < 0.05);
  }
  SUBCASE("outside the region") {
    Sensor s(0.05, 5);
    try {
      s.measure(f, {0, 0});
      FAIL("expected out-of-bounds");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOutOfBounds);
    }
    CHECK_THROWS_AS(Sensor(-1.0, 0), Error);
  }
}

TEST_CASE("field stats") {
  SUBCASE("constant field ties resolve to the first grid point") {
    const ConstantField c(3.0);
    const FieldStats s = field_stats(c, 5);
    CHECK(s.range == 0.0);
    CHECK(s.max_location == Point2{0, 0});
  }
  SUBCASE("argmax is invariant under positive affine maps") {
    const SyntheticField f = make_four_maxima_field();
    const FieldStats a = field_stats(f, 60);
    const AffineField g(f, 3.5, -2.0);
    const FieldStats b = field_stats(g, 60);
    CHECK(a.max_location == b.max_location);
    CHECK(b.range == doctest::Approx(3.5 * a.range));
  }
  CHECK_THROWS_AS(field_stats(ConstantField(1), 1), Error);
}
