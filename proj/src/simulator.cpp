#include "imtrack/simulator.hpp"

#include <cmath>

#include "imtrack/errors.hpp"

namespace imtrack {

namespace {

// Centered axis-aligned rectangle moments: area and raw second moments.
struct RectMoments {
  double area, e20, e02;
};

RectMoments rect_moments(double w, double h) {
  return {w * h, w * w * w * h / 12.0, w * h * h * h / 12.0};
}

Eigen::Vector2d rotate(const Eigen::Vector2d& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

// In-step kinematic advance; exact for both segment kinds.
void advance(Eigen::Vector2d& pos, Eigen::Vector2d& vel, double& orientation,
             const TrajectorySegment& seg, double dt) {
  if (seg.model == MotionModel::kCoordinatedTurn && std::abs(seg.turn_rate) > 0.0) {
    const double w = seg.turn_rate;
    const double sw = std::sin(w * dt) / w;
    const double cw = (1.0 - std::cos(w * dt)) / w;
    const Eigen::Vector2d dp(sw * vel.x() - cw * vel.y(), cw * vel.x() + sw * vel.y());
    pos += dp;
    vel = rotate(vel, w * dt);
    orientation += w * dt;
  } else {
    pos += dt * vel;
  }
}

}  // namespace

TargetShape TargetShape::ellipse(double a1, double a2) {
  if (!(a2 > 0.0) || !(a1 >= a2)) {
    throw ConfigError("TargetShape::ellipse: require a1 >= a2 > 0");
  }
  TargetShape s;
  s.kind = Kind::kEllipse;
  s.a1 = a1;
  s.a2 = a2;
  return s;
}

TargetShape TargetShape::plus_sign(double w1, double h1, double w2, double h2) {
  if (!(w1 > 0.0) || !(h1 > 0.0) || !(w2 > 0.0) || !(h2 > 0.0)) {
    throw ConfigError("TargetShape::plus_sign: rectangle dimensions must be positive");
  }
  TargetShape s;
  s.kind = Kind::kPlusSign;
  s.w1 = w1;
  s.h1 = h1;
  s.w2 = w2;
  s.h2 = h2;
  if (s.w2 > s.w1) {
    std::swap(s.w1, s.w2);
    std::swap(s.h1, s.h2);
  }
  if (!(s.h2 > s.h1)) {
    throw ConfigError("TargetShape::plus_sign: rectangles must form a cross");
  }
  return s;
}

double TargetShape::area() const {
  if (kind == Kind::kEllipse) return kPi * a1 * a2;
  return w1 * h1 + w2 * h2 - w2 * h1;  // overlap is w2 x h1
}

MomentVector TargetShape::body_moments() const {
  if (kind == Kind::kEllipse) {
    return {0.0, a1 * a1 / 4.0, a2 * a2 / 4.0};
  }
  const RectMoments r1 = rect_moments(w1, h1);
  const RectMoments r2 = rect_moments(w2, h2);
  const RectMoments ov = rect_moments(w2, h1);
  const double a = r1.area + r2.area - ov.area;
  return {0.0, (r1.e20 + r2.e20 - ov.e20) / a, (r1.e02 + r2.e02 - ov.e02) / a};
}

MomentVector posed_moments(const TargetShape& shape, double orientation) {
  const MomentVector b = shape.body_moments();
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  // N' = R N R^T with N = [[n20, n11], [n11, n02]].
  MomentVector m;
  m.n20 = c * c * b.n20 - 2.0 * s * c * b.n11 + s * s * b.n02;
  m.n02 = s * s * b.n20 + 2.0 * s * c * b.n11 + c * c * b.n02;
  m.n11 = s * c * (b.n20 - b.n02) + (c * c - s * s) * b.n11;
  return m;
}

std::vector<Eigen::Vector2d> sample_target(const TargetShape& shape, const Pose& pose, int n,
                                           Rng& rng) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  if (shape.kind == TargetShape::Kind::kEllipse) {
    for (int i = 0; i < n; ++i) {
      const double r = std::sqrt(rng.uniform());
      const double phi = rng.uniform(0.0, 2.0 * kPi);
      const Eigen::Vector2d body(shape.a1 * r * std::cos(phi), shape.a2 * r * std::sin(phi));
      out.push_back(pose.centroid + rotate(body, pose.orientation));
    }
  } else {
    const double hw = shape.w1 / 2.0;  // bounding box of the union
    const double hh = shape.h2 / 2.0;
    while (static_cast<int>(out.size()) < n) {
      const double x = rng.uniform(-hw, hw);
      const double y = rng.uniform(-hh, hh);
      const bool in1 = std::abs(x) <= shape.w1 / 2.0 && std::abs(y) <= shape.h1 / 2.0;
      const bool in2 = std::abs(x) <= shape.w2 / 2.0 && std::abs(y) <= shape.h2 / 2.0;
      if (!in1 && !in2) continue;
      out.push_back(pose.centroid + rotate({x, y}, pose.orientation));
    }
  }
  return out;
}

std::vector<TruthPoint> generate_truth(const TargetShape& shape, const Pose& initial_pose,
                                       const Eigen::Vector2d& initial_vel,
                                       std::span<const TrajectorySegment> segments,
                                       double period) {
  if (!(period > 0.0)) throw ConfigError("generate_truth: period must be positive");
  double total = 0.0;
  for (const auto& seg : segments) {
    if (seg.duration < 0.0) throw ConfigError("generate_truth: segment duration must be >= 0");
    total += seg.duration;
  }
  const int epochs = static_cast<int>(std::floor(total / period + 1e-9)) + 1;

  std::vector<TruthPoint> out;
  out.reserve(static_cast<std::size_t>(epochs));

  Eigen::Vector2d pos = initial_pose.centroid;
  Eigen::Vector2d vel = initial_vel;
  double orientation = initial_pose.orientation;
  std::size_t seg_idx = 0;
  double into_seg = 0.0;

  auto active_rate = [&]() {
    if (seg_idx >= segments.size()) return 0.0;
    const auto& seg = segments[seg_idx];
    return seg.model == MotionModel::kCoordinatedTurn ? seg.turn_rate : 0.0;
  };

  for (int k = 0; k < epochs; ++k) {
    TruthPoint tp;
    tp.time = k * period;
    tp.state.moments = posed_moments(shape, orientation);
    tp.state.pos = pos;
    tp.state.vel = vel;
    tp.state.omega = active_rate();
    tp.orientation = orientation;
    out.push_back(tp);
    if (k + 1 == epochs) break;

    // Advance one period, splitting across segment boundaries.
    double remaining = period;
    while (remaining > 1e-12 && seg_idx < segments.size()) {
      const auto& seg = segments[seg_idx];
      const double left = seg.duration - into_seg;
      const double dt = std::min(remaining, left);
      advance(pos, vel, orientation, seg, dt);
      into_seg += dt;
      remaining -= dt;
      if (seg.duration - into_seg <= 1e-12) {
        ++seg_idx;
        into_seg = 0.0;
      }
    }
  }
  return out;
}

std::vector<MeasurementScan> generate_scans(std::span<const TruthPoint> truth,
                                            const TargetShape& shape, const ScanSpec& spec,
                                            Rng& rng) {
  if (spec.count < 0.0) throw ConfigError("generate_scans: count must be >= 0");
  if (spec.noise.sigma_x2 < 0.0 || spec.noise.sigma_y2 < 0.0) {
    throw ConfigError("generate_scans: noise variances must be >= 0");
  }
  const double sx = std::sqrt(spec.noise.sigma_x2);
  const double sy = std::sqrt(spec.noise.sigma_y2);

  std::vector<MeasurementScan> out;
  out.reserve(truth.size());
  for (const auto& tp : truth) {
    MeasurementScan scan;
    scan.time = tp.time;
    scan.noise = spec.noise;
    const int n = spec.law == CountLaw::kFixed
                      ? static_cast<int>(std::lround(spec.count))
                      : rng.poisson(spec.count);
    scan.points = sample_target(shape, {tp.state.pos, tp.orientation}, n, rng);
    for (auto& z : scan.points) {
      z.x() += sx * rng.normal();
      z.y() += sy * rng.normal();
    }
    out.push_back(std::move(scan));
  }
  return out;
}

}  // namespace imtrack
