#include "imtrack/metrics.hpp"

#include <cmath>

#include "imtrack/errors.hpp"

namespace imtrack {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

Polygon rect_polygon(double cx, double cy, double w, double h, const Pose& pose) {
  Polygon out;
  out.reserve(4);
  const double c = std::cos(pose.orientation);
  const double s = std::sin(pose.orientation);
  const double dx[4] = {-w / 2.0, w / 2.0, w / 2.0, -w / 2.0};
  const double dy[4] = {-h / 2.0, -h / 2.0, h / 2.0, h / 2.0};
  for (int i = 0; i < 4; ++i) {
    const double x = cx + dx[i];
    const double y = cy + dy[i];
    out.push_back(pose.centroid + Eigen::Vector2d(c * x - s * y, s * x + c * y));
  }
  return out;
}

}  // namespace

double polygon_area(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return std::max(0.0, 0.5 * twice);
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  Polygon in;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Eigen::Vector2d& a = clip[e];
    const Eigen::Vector2d& b = clip[(e + 1) % m];
    in.swap(out);
    out.clear();
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& p = in[i];
      const Eigen::Vector2d& q = in[(i + 1) % n];
      const double sp = cross(a, b, p);
      const double sq = cross(a, b, q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

Region ellipse_region(const EllipseShape& e, int vertices) {
  Polygon poly;
  poly.reserve(static_cast<std::size_t>(vertices));
  const double c = std::cos(e.alpha);
  const double s = std::sin(e.alpha);
  for (int k = 0; k < vertices; ++k) {
    const double phi = 2.0 * kPi * k / vertices;
    const double bx = e.a1 * std::cos(phi);
    const double by = e.a2 * std::sin(phi);
    poly.push_back(e.centroid + Eigen::Vector2d(c * bx - s * by, s * bx + c * by));
  }
  return {std::move(poly)};
}

Region shape_region(const TargetShape& shape, const Pose& pose, int vertices) {
  if (shape.kind == TargetShape::Kind::kEllipse) {
    return ellipse_region({shape.a1, shape.a2, pose.orientation, pose.centroid}, vertices);
  }
  // Disjoint decomposition: wide rectangle plus the two stubs of the tall one.
  const double stub = (shape.h2 - shape.h1) / 2.0;
  const double offset = (shape.h1 + shape.h2) / 4.0;
  Region out;
  out.push_back(rect_polygon(0.0, 0.0, shape.w1, shape.h1, pose));
  out.push_back(rect_polygon(0.0, offset, shape.w2, stub, pose));
  out.push_back(rect_polygon(0.0, -offset, shape.w2, stub, pose));
  return out;
}

double region_area(const Region& region) {
  double a = 0.0;
  for (const auto& poly : region) a += polygon_area(poly);
  return a;
}

double intersection_area(const Region& a, const Region& b) {
  double area = 0.0;
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      area += polygon_area(clip_convex(pa, pb));
    }
  }
  return area;
}

double iou(const Region& a, const Region& b) {
  const double inter = intersection_area(a, b);
  const double uni = region_area(a) + region_area(b) - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou(const EllipseShape& a, const EllipseShape& b) {
  return iou(ellipse_region(a), ellipse_region(b));
}

void score_run_iou(RunResult& run, const TargetShape& shape, TruthRegionMode mode) {
  for (auto& ep : run.epochs) {
    Region truth;
    if (mode == TruthRegionMode::kPolygon) {
      truth = shape_region(shape, {ep.truth.pos, ep.truth_orientation});
    } else {
      truth = ellipse_region(moments_to_ellipse(ep.truth.moments, ep.truth.pos));
    }
    try {
      const Region est = ellipse_region(moments_to_ellipse(ep.est.moments, ep.est.pos));
      ep.iou = iou(truth, est);
    } catch (const NumericalError&) {
      ep.iou = 0.0;  // degenerate extent estimate overlaps nothing
    }
  }
}

MetricsReport compute_metrics(std::span<const RunResult> runs) {
  if (runs.empty()) throw ConfigError("compute_metrics: no runs");
  const std::size_t epochs = runs[0].epochs.size();
  for (const auto& r : runs) {
    if (r.epochs.size() != epochs) {
      throw ConfigError("compute_metrics: runs have mismatched epoch counts");
    }
  }
  if (epochs == 0) throw ConfigError("compute_metrics: runs are empty");

  MetricsReport rep;
  rep.runs = static_cast<int>(runs.size());
  rep.time.resize(epochs);
  rep.mean_iou.assign(epochs, 0.0);
  rep.position_rmse.assign(epochs, 0.0);
  rep.velocity_rmse.assign(epochs, 0.0);

  for (std::size_t k = 0; k < epochs; ++k) {
    rep.time[k] = runs[0].epochs[k].time;
    double iou_sum = 0.0, pos_sq = 0.0, vel_sq = 0.0;
    for (const auto& r : runs) {
      const auto& ep = r.epochs[k];
      if (ep.iou < 0.0) throw ConfigError("compute_metrics: run has unscored IoU");
      iou_sum += ep.iou;
      pos_sq += (ep.est.pos - ep.truth.pos).squaredNorm();
      vel_sq += (ep.est.vel - ep.truth.vel).squaredNorm();
    }
    rep.mean_iou[k] = iou_sum / rep.runs;
    rep.position_rmse[k] = std::sqrt(pos_sq / rep.runs);
    rep.velocity_rmse[k] = std::sqrt(vel_sq / rep.runs);
    rep.overall_iou += rep.mean_iou[k];
    rep.overall_position_rmse += rep.position_rmse[k];
    rep.overall_velocity_rmse += rep.velocity_rmse[k];
  }
  rep.overall_iou /= static_cast<double>(epochs);
  rep.overall_position_rmse /= static_cast<double>(epochs);
  rep.overall_velocity_rmse /= static_cast<double>(epochs);
  return rep;
}

}  // namespace imtrack
