#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "imtrack/moments.hpp"
#include "imtrack/rng.hpp"
#include "imtrack/simulator.hpp"

using namespace imtrack;

namespace {

bool in_plus_body(double x, double y) {
  return (std::abs(x) <= 1.5 && std::abs(y) <= 0.25) ||
         (std::abs(x) <= 0.25 && std::abs(y) <= 1.0);
}

}  // namespace

TEST_CASE("ellipse samples have the analytic centroid and second moments") {
  const TargetShape shape = TargetShape::ellipse(15.0, 10.0);
  Rng rng(1);
  const int n = 1'000'000;
  const auto pts = sample_target(shape, Pose{}, n, rng);
  REQUIRE(static_cast<int>(pts.size()) == n);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= n;
  // CLT bound: std of the x-mean is sqrt(n20/n) = 7.5e-3; allow 4 sigma.
  CHECK(std::abs(mean.x()) < 4.0 * std::sqrt(56.25 / n));
  CHECK(std::abs(mean.y()) < 4.0 * std::sqrt(25.0 / n));

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    sxx += p.x() * p.x();
    syy += p.y() * p.y();
    sxy += p.x() * p.y();
  }
  CHECK(sxx / n == doctest::Approx(56.25).epsilon(0.01));
  CHECK(syy / n == doctest::Approx(25.0).epsilon(0.01));
  CHECK(std::abs(sxy / n) < 0.2);
}

TEST_CASE("plus-sign samples follow the union-area decomposition") {
  const TargetShape shape = TargetShape::plus_sign(3.0, 0.5, 0.5, 2.0);
  CHECK(shape.area() == doctest::Approx(1.5 + 1.0 - 0.25).epsilon(1e-12));
  Rng rng(2);
  const int n = 200'000;
  const auto pts = sample_target(shape, Pose{}, n, rng);
  int wide = 0, tall_only = 0;
  for (const auto& p : pts) {
    REQUIRE(in_plus_body(p.x(), p.y()));
    if (std::abs(p.y()) <= 0.25 && std::abs(p.x()) <= 1.5) {
      ++wide;
    } else {
      ++tall_only;
    }
  }
  // Wide bar 1.5 of 2.25 total; tall stubs 0.75 of 2.25.
  CHECK(static_cast<double>(wide) / n == doctest::Approx(1.5 / 2.25).epsilon(0.01));
  CHECK(static_cast<double>(tall_only) / n == doctest::Approx(0.75 / 2.25).epsilon(0.01));
}

TEST_CASE("plus-sign body moments match Monte Carlo integration") {
  const TargetShape shape = TargetShape::plus_sign(3.0, 0.5, 0.5, 2.0);
  const MomentVector m = shape.body_moments();
  Rng rng(3);
  const int n = 1'000'000;
  const auto pts = sample_target(shape, Pose{}, n, rng);
  double sxx = 0.0, syy = 0.0;
  for (const auto& p : pts) {
    sxx += p.x() * p.x();
    syy += p.y() * p.y();
  }
  CHECK(sxx / n == doctest::Approx(m.n20).epsilon(0.01));
  CHECK(syy / n == doctest::Approx(m.n02).epsilon(0.01));
  CHECK(std::abs(m.n11) < 1e-12);  // two axes of symmetry
}

TEST_CASE("posed moments rotate the body moments") {
  const TargetShape shape = TargetShape::ellipse(3.0, 2.0);
  const MomentVector m = posed_moments(shape, kPi / 4.0);
  CHECK(m.n11 == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(m.n20 == doctest::Approx(1.625).epsilon(1e-12));
  CHECK(m.n02 == doctest::Approx(1.625).epsilon(1e-12));
}

TEST_CASE("straight legs preserve speed and integrate position linearly") {
  const TargetShape shape = TargetShape::ellipse(1.5, 1.0);
  std::vector<TrajectorySegment> segs(1);
  segs[0].model = MotionModel::kConstantVelocity;
  segs[0].duration = 100.0;
  const Eigen::Vector2d v0(0.0, 250.0);
  const auto truth = generate_truth(shape, Pose{}, v0, segs, 10.0);
  REQUIRE(truth.size() == 11u);
  for (const auto& tp : truth) {
    CHECK(tp.state.vel.norm() == doctest::Approx(250.0).epsilon(1e-12));
  }
  CHECK(truth.back().time == doctest::Approx(100.0));
  CHECK(truth.back().state.pos.x() == doctest::Approx(0.0));
  CHECK(truth.back().state.pos.y() == doctest::Approx(25000.0).epsilon(1e-12));
}

TEST_CASE("a 90-second turn at 1 degree per second rotates the heading 90 degrees") {
  const TargetShape shape = TargetShape::ellipse(3.0, 2.0);
  std::vector<TrajectorySegment> segs(1);
  segs[0].model = MotionModel::kCoordinatedTurn;
  segs[0].duration = 90.0;
  segs[0].turn_rate = kPi / 180.0;
  const Eigen::Vector2d v0(5.0, 0.0);
  const auto truth = generate_truth(shape, Pose{}, v0, segs, 10.0);
  REQUIRE(truth.size() == 10u);
  const auto& last = truth.back();
  CHECK(last.state.vel.x() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(last.state.vel.y() == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(last.state.vel.norm() == doctest::Approx(5.0).epsilon(1e-12));
  // The extent rotates rigidly with the heading.
  CHECK(last.orientation == doctest::Approx(kPi / 2.0).epsilon(1e-9));
  const MomentVector want = posed_moments(shape, kPi / 2.0);
  CHECK(last.state.moments.n20 == doctest::Approx(want.n20).epsilon(1e-9));
  CHECK(last.state.moments.n02 == doctest::Approx(want.n02).epsilon(1e-9));
}

TEST_CASE("truth is independent of the sampling period across segment boundaries") {
  const TargetShape shape = TargetShape::ellipse(2.0, 1.0);
  std::vector<TrajectorySegment> segs(3);
  segs[0] = {MotionModel::kConstantVelocity, 15.0, 0.0};
  segs[1] = {MotionModel::kCoordinatedTurn, 85.0, 0.01};
  segs[2] = {MotionModel::kConstantVelocity, 20.0, 0.0};
  const Eigen::Vector2d v0(3.0, 1.0);
  const auto coarse = generate_truth(shape, Pose{}, v0, segs, 10.0);
  const auto fine = generate_truth(shape, Pose{}, v0, segs, 5.0);
  REQUIRE(coarse.size() == 13u);
  REQUIRE(fine.size() == 25u);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const auto& a = coarse[i];
    const auto& b = fine[2 * i];
    REQUIRE(a.time == doctest::Approx(b.time));
    CHECK((a.state.pos - b.state.pos).norm() < 1e-9);
    CHECK((a.state.vel - b.state.vel).norm() < 1e-9);
    CHECK(a.orientation == doctest::Approx(b.orientation).epsilon(1e-9));
  }
}

TEST_CASE("noise-free scans stay inside the true shape") {
  const TargetShape shape = TargetShape::ellipse(3.0, 2.0);
  std::vector<TrajectorySegment> segs(1);
  segs[0] = {MotionModel::kConstantVelocity, 30.0, 0.0};
  Pose pose;
  pose.orientation = 0.7;
  const auto truth = generate_truth(shape, pose, {1.0, 0.5}, segs, 10.0);
  ScanSpec spec;
  spec.law = CountLaw::kFixed;
  spec.count = 50;
  spec.noise = {0.0, 0.0};
  spec.period = 10.0;
  Rng rng(4);
  const auto scans = generate_scans(truth, shape, spec, rng);
  REQUIRE(scans.size() == truth.size());
  for (std::size_t k = 0; k < scans.size(); ++k) {
    REQUIRE(scans[k].points.size() == 50u);
    CHECK(scans[k].time == doctest::Approx(truth[k].time));
    ExtendedState st = truth[k].state;
    for (const auto& p : scans[k].points) {
      CHECK(implicit_value(p, st) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("poisson scan counts have the configured mean") {
  const TargetShape shape = TargetShape::ellipse(2.0, 2.0);
  std::vector<TrajectorySegment> segs(1);
  segs[0] = {MotionModel::kConstantVelocity, 9990.0, 0.0};
  const auto truth = generate_truth(shape, Pose{}, {0.0, 0.0}, segs, 10.0);
  REQUIRE(truth.size() == 1000u);
  ScanSpec spec;
  spec.law = CountLaw::kPoisson;
  spec.count = 10.0;
  spec.noise = {0.01, 0.01};
  spec.period = 10.0;
  Rng rng(8);
  const auto scans = generate_scans(truth, shape, spec, rng);
  double total = 0.0;
  for (const auto& s : scans) total += static_cast<double>(s.points.size());
  const double mean = total / static_cast<double>(scans.size());
  CHECK(mean > 9.7);
  CHECK(mean < 10.3);
}

TEST_CASE("scan generation is deterministic in the seed") {
  const TargetShape shape = TargetShape::ellipse(2.0, 1.0);
  std::vector<TrajectorySegment> segs(1);
  segs[0] = {MotionModel::kConstantVelocity, 50.0, 0.0};
  const auto truth = generate_truth(shape, Pose{}, {1.0, 0.0}, segs, 10.0);
  ScanSpec spec;
  spec.law = CountLaw::kPoisson;
  spec.count = 20.0;
  spec.noise = {0.25, 0.25};
  spec.period = 10.0;
  Rng r1(99), r2(99), r3(100);
  const auto a = generate_scans(truth, shape, spec, r1);
  const auto b = generate_scans(truth, shape, spec, r2);
  const auto c = generate_scans(truth, shape, spec, r3);
  REQUIRE(a.size() == b.size());
  bool identical = true, different = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].points.size() != b[k].points.size()) identical = false;
    for (std::size_t i = 0; identical && i < a[k].points.size(); ++i) {
      if (a[k].points[i] != b[k].points[i]) identical = false;
    }
    if (k < c.size() && a[k].points.size() != c[k].points.size()) different = true;
  }
  CHECK(identical);
  CHECK(different);  // a different seed takes a different path
}

TEST_CASE("implicit values of noiseless ellipse samples are uniform") {
  const TargetShape shape = TargetShape::ellipse(3.0, 1.5);
  Pose pose;
  pose.centroid = {2.0, -1.0};
  pose.orientation = 0.5;
  Rng rng(12);
  const int n = 100'000;
  const auto pts = sample_target(shape, pose, n, rng);
  ExtendedState st;
  st.moments = posed_moments(shape, pose.orientation);
  st.pos = pose.centroid;
  std::vector<double> vals(pts.size());
  std::transform(pts.begin(), pts.end(), vals.begin(),
                 [&](const Eigen::Vector2d& p) { return implicit_value(p, st); });
  std::sort(vals.begin(), vals.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max(d, std::max(vals[i] - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - vals[i]));
  }
  CHECK(d * std::sqrt(static_cast<double>(n)) < 1.63);
}

TEST_CASE("rng substreams differ and are reproducible") {
  Rng a = Rng::substream(1, 0);
  Rng b = Rng::substream(1, 0);
  Rng c = Rng::substream(1, 1);
  CHECK(a.next_u64() == b.next_u64());
  Rng d = Rng::substream(1, 0);
  CHECK(d.uniform() != c.uniform());
  // Uniform draws stay in [0, 1).
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
