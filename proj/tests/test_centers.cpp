#include <gtest/gtest.h>

#include <random>

#include "ucenters/centers.hpp"
#include "ucenters/instances.hpp"

using namespace ucenters;

namespace {

UncertaintyBall iv(double s, double e) { return {Point{(s + e) / 2.0}, (e - s) / 2.0}; }

void expect_interval(const Interval& got, double s, double e) {
  EXPECT_NEAR(got.start, s, 1e-12);
  EXPECT_NEAR(got.end, e, 1e-12);
}

std::vector<UncertaintyBall> random_intervals(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> pos(-10.0, 10.0), rad(0.0, 4.0);
  std::vector<UncertaintyBall> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({Point{pos(rng)}, rng() % 5 == 0 ? 0.0 : rad(rng)});
  return out;
}

// Independent oracles for realized 1-D centers.
double oracle_kth(std::vector<double> xs, std::size_t k) {
  std::sort(xs.begin(), xs.end());
  return xs[k - 1];
}
double oracle_one_center(const std::vector<double>& xs) {
  return (*std::min_element(xs.begin(), xs.end()) + *std::max_element(xs.begin(), xs.end())) / 2.0;
}
double oracle_median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double sum_dist(std::span<const Point> pts, const Point& x) {
  double s = 0.0;
  for (const auto& p : pts) s += distance(p, x);
  return s;
}

// Brute-force smallest enclosing circle: every circle through two or three
// of the points, keep the smallest one that holds them all.
std::pair<Point, double> brute_circle(const std::vector<Point>& pts) {
  std::pair<Point, double> best{Point{0.0, 0.0}, std::numeric_limits<double>::infinity()};
  auto consider = [&](const Point& c, double r) {
    if (r >= best.second) return;
    for (const auto& p : pts) {
      if (distance(p, c) > r * (1 + 1e-9) + 1e-9) return;
    }
    best = {c, r};
  };
  const std::size_t n = pts.size();
  if (n == 1) return {pts[0], 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point c = (pts[i] + pts[j]) * 0.5;
      consider(c, distance(pts[i], c));
      for (std::size_t k = j + 1; k < n; ++k) {
        const double ax = pts[i][0], ay = pts[i][1], bx = pts[j][0], by = pts[j][1], cx = pts[k][0], cy = pts[k][1];
        const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        if (std::abs(d) < 1e-12) continue;
        const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
        const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
        const Point u{ux, uy};
        consider(u, distance(u, pts[i]));
      }
    }
  }
  return best;
}

}  // namespace

// --- order statistics ------------------------------------------------------

TEST(RegionMax, Examples) {
  std::vector<UncertaintyBall> a{iv(0, 2), iv(5, 7)};
  expect_interval(region_max_1d(a), 5, 7);
  std::vector<UncertaintyBall> b{iv(0, 10), iv(4, 6)};
  expect_interval(region_max_1d(b), 4, 10);
  std::vector<UncertaintyBall> c{iv(1, 3)};
  expect_interval(region_max_1d(c), 1, 3);
  EXPECT_THROW(region_max_1d(std::vector<UncertaintyBall>{}), InputError);
}

TEST(RegionMax, CornerEnumerationOracle) {
  // Both intervals at either end: the max ranges over exactly [4, 10].
  double lo = 1e9, hi = -1e9;
  for (double x : {0.0, 10.0}) {
    for (double y : {4.0, 6.0}) {
      lo = std::min(lo, std::max(x, y));
      hi = std::max(hi, std::max(x, y));
    }
  }
  std::vector<UncertaintyBall> b{iv(0, 10), iv(4, 6)};
  expect_interval(region_max_1d(b), lo, hi);
}

TEST(RegionMin, MirrorsMax) {
  std::vector<UncertaintyBall> a{iv(0, 2), iv(5, 7)};
  expect_interval(region_min_1d(a), 0, 2);
  std::vector<UncertaintyBall> b{iv(0, 10), iv(4, 6)};
  expect_interval(region_min_1d(b), 0, 6);
  std::vector<UncertaintyBall> c{iv(1, 3)};
  expect_interval(region_min_1d(c), 1, 3);
}

TEST(RegionOneCenter, Examples) {
  std::vector<UncertaintyBall> a{iv(0, 2), iv(5, 7)};
  expect_interval(region_one_center_1d(a), 2.5, 4.5);
  std::vector<UncertaintyBall> b{iv(0, 0), iv(10, 10)};
  expect_interval(region_one_center_1d(b), 5, 5);
}

TEST(RegionOneCenter, SteadyStateRoundRobinAtOrigin) {
  // Ages 0, 1, 2, 3 at the origin with v = 1.
  std::vector<UncertaintyBall> b{iv(0, 0), iv(-1, 1), iv(-2, 2), iv(-3, 3)};
  const auto r = region_one_center_1d(b);
  expect_interval(r, -1.5, 1.5);
  EXPECT_DOUBLE_EQ(r.size(), 3.0);
}

TEST(RegionKth, Examples) {
  std::vector<UncertaintyBall> b{iv(0, 1), iv(0.5, 2), iv(3, 4)};
  expect_interval(region_kth_smallest(b, 2), 0.5, 2);
  expect_interval(region_kth_smallest(b, 1), 0, 1);
  expect_interval(region_kth_smallest(b, 3), 3, 4);
  EXPECT_THROW(region_kth_smallest(b, 0), InputError);
  EXPECT_THROW(region_kth_smallest(b, 4), InputError);
}

TEST(RegionKth, MonteCarloContainmentAndApproach) {
  std::vector<UncertaintyBall> b{iv(0, 1), iv(0.5, 2), iv(3, 4)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto r = region_kth_smallest(b, k);
    double lo = 1e9, hi = -1e9;
    for (int s = 0; s < 10000; ++s) {
      std::vector<double> xs;
      for (const auto& ball : b) xs.push_back(ball.start() + unit(rng) * (ball.end() - ball.start()));
      const double x = oracle_kth(xs, k);
      ASSERT_TRUE(r.contains(x));
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    EXPECT_NEAR(lo, r.start, 0.05);
    EXPECT_NEAR(hi, r.end, 0.05);
  }
}

TEST(RegionOneMedian, Examples) {
  std::vector<UncertaintyBall> a{iv(0, 1), iv(0.5, 2), iv(3, 4)};
  expect_interval(region_one_median_1d(a), 0.5, 2);
  std::vector<UncertaintyBall> b{iv(0, 0), iv(0, 0), iv(2, 4), iv(6, 6)};
  const auto r = region_one_median_1d(b);
  expect_interval(r, 1, 2);
  EXPECT_DOUBLE_EQ(r.size(), 0.5 * (region_kth_smallest(b, 2).size() + region_kth_smallest(b, 3).size()));
  std::vector<UncertaintyBall> c{iv(0, 2), iv(10, 12)};
  expect_interval(region_one_median_1d(c), 5, 7);
}

// --- center of mass --------------------------------------------------------

TEST(RegionCenterOfMass, Examples) {
  std::vector<UncertaintyBall> b{{Point{0.0}, 1.0}, {Point{4.0}, 3.0}};
  auto r = region_center_of_mass(b, std::vector<double>{1, 1});
  EXPECT_DOUBLE_EQ(r.center[0], 2.0);
  EXPECT_DOUBLE_EQ(r.radius, 2.0);
  r = region_center_of_mass(b, std::vector<double>{1, 3});
  EXPECT_DOUBLE_EQ(r.center[0], 3.0);
  EXPECT_DOUBLE_EQ(r.radius, 2.5);
  std::vector<UncertaintyBall> one{{Point{1.0, 2.0}, 0.5}};
  r = region_center_of_mass(one, std::vector<double>{7});
  EXPECT_EQ(r.center, (Point{1.0, 2.0}));
  EXPECT_DOUBLE_EQ(r.radius, 0.5);
  EXPECT_THROW(region_center_of_mass(b, std::vector<double>{1, 0}), InputError);
  EXPECT_THROW(region_center_of_mass(b, std::vector<double>{1}), InputError);
}

TEST(RegionCenterOfMass, TightnessWitness) {
  // u_i = c_i + (r_i / R)(U - C) realizes U for any U on the predicted sphere.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<UncertaintyBall> balls;
    std::vector<double> w;
    for (int i = 0; i < 5; ++i) {
      balls.push_back({Point{g(rng), g(rng), g(rng)}, unit(rng)});
      w.push_back(unit(rng));
    }
    const auto pred = region_center_of_mass(balls, w);
    Point dir{g(rng), g(rng), g(rng)};
    const Point U = pred.center + dir * (pred.radius / dir.norm());
    std::vector<Point> pts;
    for (const auto& b : balls) {
      const Point u = b.center + (U - pred.center) * (b.radius / pred.radius);
      EXPECT_LE(distance(u, b.center), b.radius * (1 + 1e-12));
      pts.push_back(u);
    }
    EXPECT_LT(distance(center_of_mass(pts, w), U), 1e-9);
  }
}

// --- containment property across all four kinds ---------------------------

TEST(CenterRegionProperty, RealizationsStayInside1D) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto balls = random_intervals(rng, n);
    std::vector<double> w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(0.5 + unit(rng));
    const auto oc = region_one_center_1d(balls);
    const auto om = region_one_median_1d(balls);
    const auto cm = region_center_of_mass(balls, w);
    for (int s = 0; s < 200; ++s) {
      std::vector<double> xs;
      for (const auto& b : balls) {
        const double pick = s % 3 == 0 ? (unit(rng) < 0.5 ? 0.0 : 1.0) : unit(rng);
        xs.push_back(b.start() + pick * (b.end() - b.start()));
      }
      ASSERT_TRUE(oc.contains(oracle_one_center(xs)));
      ASSERT_TRUE(om.contains(oracle_median(xs)));
      double m = 0, W = 0;
      for (std::size_t i = 0; i < n; ++i) {
        m += w[i] * xs[i];
        W += w[i];
      }
      ASSERT_LE(std::abs(m / W - cm.center[0]), cm.radius + 1e-9);
    }
    // Order-statistic endpoints are attained by all-at-start / all-at-end.
    std::vector<double> starts, ends;
    for (const auto& b : balls) {
      starts.push_back(b.start());
      ends.push_back(b.end());
    }
    for (std::size_t k = 1; k <= n; ++k) {
      const auto r = region_kth_smallest(balls, k);
      EXPECT_DOUBLE_EQ(oracle_kth(starts, k), r.start);
      EXPECT_DOUBLE_EQ(oracle_kth(ends, k), r.end);
    }
    EXPECT_DOUBLE_EQ(region_max_1d(balls).start, oracle_kth(starts, n));
    EXPECT_DOUBLE_EQ(region_min_1d(balls).end, oracle_kth(ends, 1));
    EXPECT_NEAR(oc.size(), 0.5 * (region_max_1d(balls).size() + region_min_1d(balls).size()), 1e-12);
  }
}

TEST(CenterRegionProperty, CenterOfMassContainmentInPlane) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<UncertaintyBall> balls;
    std::vector<double> w;
    for (int i = 0; i < 4; ++i) {
      balls.push_back({Point{3 * g(rng), 3 * g(rng)}, 2 * unit(rng)});
      w.push_back(0.2 + unit(rng));
    }
    const auto reg = std::get<UncertaintyBall>(center_region(CenterKind::center_of_mass, balls, w));
    for (int s = 0; s < 200; ++s) {
      std::vector<Point> pts;
      for (const auto& b : balls) pts.push_back(detail::uniform_in_ball(b, rng));
      ASSERT_LE(distance(center_of_mass(pts, w), reg.center), reg.radius + 1e-9);
    }
  }
}

TEST(CenterRegion, DispatchAndDomain) {
  std::vector<UncertaintyBall> b{iv(0, 2), iv(5, 7)};
  std::vector<double> w{1, 1};
  EXPECT_DOUBLE_EQ(region_size(center_region(CenterKind::one_center, b, w)), 2.0);
  EXPECT_DOUBLE_EQ(region_size(center_region(CenterKind::centroid, b, w)), 2.0);
  std::vector<UncertaintyBall> planar{{Point{0.0, 0.0}, 1.0}, {Point{1.0, 0.0}, 1.0}};
  EXPECT_THROW(center_region(CenterKind::one_center, planar, w), InputError);
  EXPECT_THROW(center_region(CenterKind::one_median, planar, w), InputError);
  EXPECT_NO_THROW(center_region(CenterKind::centroid, planar, w));
}

// --- realized centers --------------------------------------------------------

TEST(SmallestEnclosingBall, MatchesBruteForceCircle) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point> pts;
    const int n = 1 + trial % 9;
    for (int i = 0; i < n; ++i) pts.push_back(Point{pos(rng), pos(rng)});
    if (trial % 10 == 0) pts.push_back(pts.front());
    const auto got = smallest_enclosing_ball(pts, trial);
    const auto [c, r] = brute_circle(pts);
    EXPECT_NEAR(got.radius, r, 1e-7);
    EXPECT_LT(distance(got.center, c), 1e-6);
    for (const auto& p : pts) EXPECT_TRUE(got.contains(p));
  }
}

TEST(SmallestEnclosingBall, ThreeDimensionsContainsAndIsTight) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(Point{g(rng), g(rng), g(rng)});
    const auto b = smallest_enclosing_ball(pts, trial);
    double far = 0.0;
    for (const auto& p : pts) {
      EXPECT_TRUE(b.contains(p));
      far = std::max(far, distance(p, b.center));
    }
    EXPECT_NEAR(far, b.radius, 1e-9);
    // No nudge of the center shrinks the ball.
    for (int k = 0; k < 3; ++k) {
      for (double s : {-1e-3, 1e-3}) {
        Point c = b.center;
        c[k] += s;
        double worst = 0.0;
        for (const auto& p : pts) worst = std::max(worst, distance(p, c));
        EXPECT_GE(worst, b.radius - 1e-12);
      }
    }
  }
}

TEST(SmallestEnclosingBall, CollinearAndDuplicatePoints) {
  std::vector<Point> pts{Point{0.0, 0.0}, Point{1.0, 1.0}, Point{3.0, 3.0}, Point{3.0, 3.0}};
  const auto b = smallest_enclosing_ball(pts);
  EXPECT_NEAR(b.center[0], 1.5, 1e-12);
  EXPECT_NEAR(b.radius, 1.5 * std::sqrt(2.0), 1e-12);
}

TEST(GeometricMedian, CollinearUsesMidpointRule) {
  std::vector<Point> even{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{3.0, 0.0}, Point{10.0, 0.0}};
  EXPECT_NEAR(geometric_median(even)[0], 2.0, 1e-12);
  std::vector<Point> odd{Point{0.0, 0.0}, Point{1.0, 1.0}, Point{5.0, 5.0}};
  EXPECT_NEAR(geometric_median(odd)[0], 1.0, 1e-12);
}

TEST(GeometricMedian, AnchorPointWhenOptimal) {
  std::vector<Point> pts{Point{0.0, 0.0}, Point{0.0, 0.0}, Point{100.0, 0.0}, Point{100.0, 1.0}};
  EXPECT_EQ(geometric_median(pts), (Point{0.0, 0.0}));
}

TEST(GeometricMedian, LocallyOptimalOnRandomSets) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 3 + trial % 6; ++i) pts.push_back(Point{g(rng), g(rng)});
    const Point m = geometric_median(pts);
    const double f = sum_dist(pts, m);
    for (const auto& p : pts) EXPECT_LE(f, sum_dist(pts, p) + 1e-9);
    for (int k = 0; k < 16; ++k) {
      const double a = 2.0 * M_PI * k / 16.0;
      EXPECT_LE(f, sum_dist(pts, m + Point{std::cos(a), std::sin(a)} * 1e-4) + 1e-9);
    }
  }
}

// --- sampled lower bound ----------------------------------------------------

TEST(SampledLowerBound, ZeroRadiiGiveZero) {
  std::vector<UncertaintyBall> b{{Point{0.0, 0.0}, 0.0}, {Point{3.0, 1.0}, 0.0}, {Point{1.0, 4.0}, 0.0}};
  EXPECT_DOUBLE_EQ(sampled_center_size_lower_bound(b, CenterKind::one_center, 100, 1), 0.0);
  EXPECT_DOUBLE_EQ(sampled_center_size_lower_bound(b, CenterKind::one_median, 100, 1), 0.0);
}

TEST(SampledLowerBound, NeverExceedsExactSizeIn1D) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto balls = random_intervals(rng, 2 + trial % 5);
    for (auto kind : {CenterKind::one_center, CenterKind::one_median, CenterKind::centroid}) {
      const double exact = region_size(center_region(kind, balls, std::vector<double>(balls.size(), 1.0)));
      const double lb = sampled_center_size_lower_bound(balls, kind, 200, trial);
      EXPECT_LE(lb, exact + 1e-9);
      // With the full corner product the order statistics hit both ends.
      if (kind != CenterKind::centroid) {
        EXPECT_NEAR(lb, exact, 1e-9);
      }
    }
  }
}

TEST(SampledLowerBound, Deterministic) {
  std::vector<UncertaintyBall> b{{Point{0.0, 0.0}, 1.0}, {Point{3.0, 1.0}, 2.0}, {Point{1.0, 4.0}, 0.5}};
  EXPECT_EQ(sampled_center_size_lower_bound(b, CenterKind::one_median, 500, 9),
            sampled_center_size_lower_bound(b, CenterKind::one_median, 500, 9));
  EXPECT_THROW(sampled_center_size_lower_bound(b, CenterKind::one_center, 1, 9), InputError);
}

TEST(SampledLowerBound, PlanarOneCenterProofRealizations) {
  const double L = 10.0, v = 1.0;
  const auto inst = instances::unbounded_1center_2d(L, v);
  const double G = inst.meta.params.at("G");
  // Query the object at (0, G); the other two may sit anywhere within v.
  std::vector<Point> r1{Point{-2 * L, 0.0}, Point{2 * L, 0.0}, Point{0.0, G}};
  std::vector<Point> r2{Point{-2 * L, 0.0}, Point{2 * L, -v}, Point{0.0, G}};
  const double explicit_gap = distance(smallest_enclosing_ball(r1).center, smallest_enclosing_ball(r2).center);
  EXPECT_GE(explicit_gap, L);
  std::vector<UncertaintyBall> balls{{Point{-2 * L, 0.0}, v}, {Point{2 * L, 0.0}, v}, {Point{0.0, G}, 0.0}};
  EXPECT_GE(sampled_center_size_lower_bound(balls, CenterKind::one_center, 1000, 1), explicit_gap - 1e-9);
}

TEST(SampledLowerBound, PlanarOneMedianProofRealizations) {
  const double L = 100.0, v = 1.0;
  // After querying (0, 0): pair up on x = 0, or pair up on x = L.
  std::vector<Point> left{Point{0.0, 0.0}, Point{0.0, 0.0}, Point{L, 0.0}, Point{L, v}};
  std::vector<Point> right{Point{0.0, 0.0}, Point{0.0, v}, Point{L, 0.0}, Point{L, 0.0}};
  const Point ml = geometric_median(left), mr = geometric_median(right);
  EXPECT_NEAR(ml[0], 0.0, 1e-9);
  EXPECT_NEAR(mr[0], L, 1e-9);
  std::vector<UncertaintyBall> balls{{Point{0.0, 0.0}, 0.0}, {Point{0.0, v}, v}, {Point{L, 0.0}, v}, {Point{L, v}, v}};
  EXPECT_GE(sampled_center_size_lower_bound(balls, CenterKind::one_median, 1000, 1), L);
}
