#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "imtrack/dynamics.hpp"
#include "imtrack/measurement.hpp"
#include "imtrack/moments.hpp"
#include "imtrack/rng.hpp"

namespace imtrack {

//! True target extent: an ellipse (semi-axes) or a plus sign built from two
//! concentric axis-aligned rectangles (full width x height each). Plus signs
//! are normalized so rectangle 1 is the wide one and rectangle 2 the tall one.
struct TargetShape {
  enum class Kind { kEllipse, kPlusSign };

  Kind kind = Kind::kEllipse;
  double a1 = 1.0;  // ellipse semi-major
  double a2 = 1.0;  // ellipse semi-minor
  double w1 = 0.0, h1 = 0.0;  // wide rectangle
  double w2 = 0.0, h2 = 0.0;  // tall rectangle

  static TargetShape ellipse(double a1, double a2);
  static TargetShape plus_sign(double w1, double h1, double w2, double h2);

  double area() const;

  // Normalized centered moments in the body frame (inclusion-exclusion over
  // the two rectangles for the plus sign).
  MomentVector body_moments() const;
};

//! Rigid pose of the shape: centroid plus body orientation.
struct Pose {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double orientation = 0.0;
};

// Normalized moments of the posed shape (body moments rotated into the world
// frame through N' = R N R^T).
MomentVector posed_moments(const TargetShape& shape, double orientation);

// n i.i.d. points uniform over the shape interior: ellipses through the
// area-preserving disk map, plus signs by rejection over the union's
// bounding box.
std::vector<Eigen::Vector2d> sample_target(const TargetShape& shape, const Pose& pose, int n,
                                           Rng& rng);

//! One leg of the true trajectory. turn_rate is the signed rate in rad/s
//! (positive = counterclockwise) and is ignored for constant velocity.
struct TrajectorySegment {
  MotionModel model = MotionModel::kConstantVelocity;
  double duration = 0.0;
  double turn_rate = 0.0;
};

//! Ground truth at one epoch. state.moments describe the posed shape;
//! orientation is kept alongside so the exact region can be reconstructed.
struct TruthPoint {
  double time = 0.0;
  ExtendedState state;
  double orientation = 0.0;
};

// Exact truth at every scan epoch (t = 0, period, 2*period, ... up to the
// total duration). Straight legs translate; turns rotate velocity and shape
// at the segment rate. Segment boundaries may fall between epochs.
std::vector<TruthPoint> generate_truth(const TargetShape& shape, const Pose& initial_pose,
                                       const Eigen::Vector2d& initial_vel,
                                       std::span<const TrajectorySegment> segments, double period);

enum class CountLaw { kFixed, kPoisson };

//! Per-scan measurement generation law.
struct ScanSpec {
  CountLaw law = CountLaw::kFixed;
  double count = 1.0;  // fixed count or Poisson mean
  NoiseSpec noise;
  double period = 1.0;
};

// One scan per truth epoch: draw the count, sample the shape, add noise.
std::vector<MeasurementScan> generate_scans(std::span<const TruthPoint> truth,
                                            const TargetShape& shape, const ScanSpec& spec,
                                            Rng& rng);

}  // namespace imtrack
