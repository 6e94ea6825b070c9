#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "imtrack/moments.hpp"
#include "imtrack/simulator.hpp"

namespace imtrack {

// Vertex count of the inscribed polygon used to rasterize ellipses
// (relative area error about 1e-5, far below every IoU tolerance).
inline constexpr int kEllipseVertices = 720;

//! Convex polygon, counterclockwise vertex order.
using Polygon = std::vector<Eigen::Vector2d>;

//! Planar region as a union of disjoint convex parts.
using Region = std::vector<Polygon>;

double polygon_area(const Polygon& poly);

// Sutherland-Hodgman clip of a convex subject against a convex clip polygon.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

// Inscribed polygon approximation of an ellipse.
Region ellipse_region(const EllipseShape& e, int vertices = kEllipseVertices);

// Posed target shape as a region: one polygon for an ellipse, three disjoint
// rectangles for a plus sign.
Region shape_region(const TargetShape& shape, const Pose& pose, int vertices = kEllipseVertices);

double region_area(const Region& region);
double intersection_area(const Region& a, const Region& b);

// Intersection over union; 0 when the union is empty.
double iou(const Region& a, const Region& b);
double iou(const EllipseShape& a, const EllipseShape& b);

// How the true region is rasterized when scoring IoU: the actual polygon
// (default) or the moment-equivalent ellipse of the true shape.
enum class TruthRegionMode { kPolygon, kMomentEllipse };

//! One Monte Carlo run: per-epoch estimate, truth, mode probabilities, and
//! the IoU score (negative until filled in by score_run_iou).
struct RunResult {
  struct Epoch {
    double time = 0.0;
    ExtendedState est;
    ExtendedState truth;
    double truth_orientation = 0.0;
    Eigen::Vector2d mode_mu = Eigen::Vector2d::Zero();  // [cv, ct]
    double iou = -1.0;
  };
  std::vector<Epoch> epochs;
};

// Fills every epoch's IoU against the posed true shape. An estimate whose
// moment matrix is no longer positive definite scores 0.
void score_run_iou(RunResult& run, const TargetShape& shape, TruthRegionMode mode);

//! Scenario-level aggregation across runs.
struct MetricsReport {
  std::vector<double> time;
  std::vector<double> mean_iou;       // mean over runs, per epoch
  std::vector<double> position_rmse;  // sqrt(mean squared error over runs)
  std::vector<double> velocity_rmse;
  double overall_iou = 0.0;  // means over epochs of the per-epoch values
  double overall_position_rmse = 0.0;
  double overall_velocity_rmse = 0.0;
  int runs = 0;
};

// Per-epoch RMSE and mean IoU over aligned runs; requires every run to carry
// scored IoU values. Order-independent over runs.
MetricsReport compute_metrics(std::span<const RunResult> runs);

}  // namespace imtrack
