#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "imtrack/metrics.hpp"
#include "imtrack/moments.hpp"
#include "imtrack/simulator.hpp"

using namespace imtrack;

namespace {

EllipseShape make_ellipse(double a1, double a2, double alpha, double cx = 0.0, double cy = 0.0) {
  EllipseShape e;
  e.a1 = a1;
  e.a2 = a2;
  e.alpha = alpha;
  e.centroid = {cx, cy};
  return e;
}

RunResult offset_run(const TargetShape& shape, int epochs, const Eigen::Vector2d& pos_off,
                     const Eigen::Vector2d& vel_off) {
  RunResult run;
  run.epochs.resize(epochs);
  for (int k = 0; k < epochs; ++k) {
    auto& ep = run.epochs[k];
    ep.time = 10.0 * k;
    ep.truth.moments = shape.body_moments();
    ep.truth.pos = {1.0 * k, 2.0 * k};
    ep.truth.vel = {0.1, 0.2};
    ep.truth_orientation = 0.0;
    ep.est = ep.truth;
    ep.est.pos += pos_off;
    ep.est.vel += vel_off;
  }
  score_run_iou(run, shape, TruthRegionMode::kPolygon);
  return run;
}

}  // namespace

TEST_CASE("polygon area and clipping basics") {
  const Polygon square = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  CHECK(polygon_area(square) == doctest::Approx(1.0).epsilon(1e-12));
  const Polygon shifted = {{0.5, 0.0}, {1.5, 0.0}, {1.5, 1.0}, {0.5, 1.0}};
  const Polygon overlap = clip_convex(square, shifted);
  CHECK(polygon_area(overlap) == doctest::Approx(0.5).epsilon(1e-12));
  const Polygon far = {{5.0, 5.0}, {6.0, 5.0}, {6.0, 6.0}, {5.0, 6.0}};
  CHECK(polygon_area(clip_convex(square, far)) == doctest::Approx(0.0));
}

TEST_CASE("inscribed polygon approximates the ellipse area") {
  const Region r = ellipse_region(make_ellipse(3.0, 2.0, 0.7));
  CHECK(region_area(r) == doctest::Approx(6.0 * kPi).epsilon(1e-4));
}

TEST_CASE("identical ellipses have unit overlap") {
  const EllipseShape e = make_ellipse(3.0, 2.0, 0.5, 1.0, -1.0);
  CHECK(iou(e, e) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("disjoint ellipses have zero overlap") {
  const EllipseShape a = make_ellipse(1.0, 1.0, 0.0, 0.0, 0.0);
  const EllipseShape b = make_ellipse(1.0, 1.0, 0.0, 5.0, 0.0);
  CHECK(iou(a, b) == doctest::Approx(0.0));
}

TEST_CASE("concentric circles overlap by the area ratio") {
  const EllipseShape a = make_ellipse(1.0, 1.0, 0.0);
  const EllipseShape b = make_ellipse(2.0, 2.0, 0.0);
  CHECK(iou(a, b) == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(iou(b, a) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("overlap is symmetric and rigid-transform invariant") {
  const EllipseShape a = make_ellipse(3.0, 1.5, 0.3, 0.5, 0.0);
  const EllipseShape b = make_ellipse(2.5, 2.0, -0.4, 1.2, 0.8);
  const double ref = iou(a, b);
  CHECK(iou(b, a) == doctest::Approx(ref).epsilon(1e-3));

  // Rotate both by phi about the origin and translate both by t.
  const double phi = 0.9;
  const Eigen::Rotation2Dd rot(phi);
  const Eigen::Vector2d t(10.0, -3.0);
  EllipseShape a2 = a, b2 = b;
  a2.alpha = normalize_orientation(a.alpha + phi);
  b2.alpha = normalize_orientation(b.alpha + phi);
  a2.centroid = rot * a.centroid + t;
  b2.centroid = rot * b.centroid + t;
  CHECK(iou(a2, b2) == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("plus-sign regions decompose into three disjoint rectangles") {
  const TargetShape shape = TargetShape::plus_sign(3.0, 0.5, 0.5, 2.0);
  const Region r = shape_region(shape, Pose{});
  REQUIRE(r.size() == 3u);
  CHECK(region_area(r) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(intersection_area(r, r) == doctest::Approx(2.25).epsilon(1e-9));
  CHECK(iou(r, r) == doctest::Approx(1.0).epsilon(1e-9));

  // The moment-equivalent ellipse of the plus covers it only partially.
  const EllipseShape fit = moments_to_ellipse(shape.body_moments());
  const double v = iou(ellipse_region(fit), r);
  CHECK(v > 0.3);
  CHECK(v < 0.9);
}

TEST_CASE("perfect estimates score zero error and unit overlap") {
  const TargetShape shape = TargetShape::ellipse(2.0, 1.0);
  std::vector<RunResult> runs = {offset_run(shape, 5, {0.0, 0.0}, {0.0, 0.0})};
  const MetricsReport rep = compute_metrics(runs);
  REQUIRE(rep.time.size() == 5u);
  CHECK(rep.overall_position_rmse == doctest::Approx(0.0));
  CHECK(rep.overall_velocity_rmse == doctest::Approx(0.0));
  CHECK(rep.overall_iou == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.runs == 1);
}

TEST_CASE("a constant 3-4 offset gives position error 5 at every epoch") {
  const TargetShape shape = TargetShape::ellipse(2.0, 1.0);
  std::vector<RunResult> runs = {offset_run(shape, 4, {3.0, 4.0}, {0.3, 0.4})};
  const MetricsReport rep = compute_metrics(runs);
  for (double v : rep.position_rmse) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rep.overall_position_rmse == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rep.overall_velocity_rmse == doctest::Approx(0.5).epsilon(1e-12));

  // Replicating the same run leaves every aggregate unchanged.
  std::vector<RunResult> many(7, runs[0]);
  const MetricsReport rep7 = compute_metrics(many);
  CHECK(rep7.overall_position_rmse == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rep7.overall_iou == doctest::Approx(rep.overall_iou).epsilon(1e-12));
  CHECK(rep7.runs == 7);
}

TEST_CASE("metrics are invariant to run order") {
  const TargetShape shape = TargetShape::ellipse(2.0, 1.0);
  std::vector<RunResult> runs = {offset_run(shape, 3, {1.0, 0.0}, {0.0, 0.0}),
                                 offset_run(shape, 3, {0.0, 2.0}, {0.1, 0.0}),
                                 offset_run(shape, 3, {-1.0, 1.0}, {0.0, -0.1})};
  const MetricsReport a = compute_metrics(runs);
  std::reverse(runs.begin(), runs.end());
  const MetricsReport b = compute_metrics(runs);
  for (std::size_t k = 0; k < a.position_rmse.size(); ++k) {
    CHECK(a.position_rmse[k] == doctest::Approx(b.position_rmse[k]).epsilon(1e-12));
    CHECK(a.mean_iou[k] == doctest::Approx(b.mean_iou[k]).epsilon(1e-12));
  }
}

TEST_CASE("degenerate moment estimates score zero overlap") {
  const TargetShape shape = TargetShape::ellipse(2.0, 1.0);
  RunResult run = offset_run(shape, 2, {0.0, 0.0}, {0.0, 0.0});
  run.epochs[1].est.moments = {2.0, 1.0, 1.0};  // not positive definite
  score_run_iou(run, shape, TruthRegionMode::kPolygon);
  CHECK(run.epochs[0].iou == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(run.epochs[1].iou == doctest::Approx(0.0));
}

TEST_CASE("ellipse truth scores the same under both truth-region modes") {
  const TargetShape shape = TargetShape::ellipse(2.0, 1.0);
  RunResult a = offset_run(shape, 3, {0.3, -0.2}, {0.0, 0.0});
  RunResult b = a;
  score_run_iou(a, shape, TruthRegionMode::kPolygon);
  score_run_iou(b, shape, TruthRegionMode::kMomentEllipse);
  for (int k = 0; k < 3; ++k) {
    CHECK(a.epochs[k].iou == doctest::Approx(b.epochs[k].iou).epsilon(1e-6));
  }
}
