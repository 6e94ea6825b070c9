#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "imtrack/imm.hpp"
#include "imtrack/metrics.hpp"
#include "imtrack/simulator.hpp"

namespace imtrack {

//! Filter initialization: an elliptic extent prior (a circle when the axes
//! are equal) plus diagonal standard deviations. Configs may write either
//! "radius" (circle) or "semi_major"/"semi_minor"/"orientation_deg". The
//! kinematic mean sits at the configured state; the covariance magnitudes
//! are free choices and every built-in config states them explicitly.
struct InitialBelief {
  double semi_major = 1.0;
  double semi_minor = 1.0;
  double orientation = 0.0;  // rad
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d vel = Eigen::Vector2d::Zero();
  double omega = 0.0;  // rad/s
  double moment_std = 1.0;
  double position_std = 1.0;
  double velocity_std = 1.0;
  double omega_std = 0.0;  // rad/s
};

enum class FilterType { kUkfCv, kUkfCt, kUkfImm };

//! Everything needed to reproduce one tracking scenario.
struct ScenarioConfig {
  std::string name;
  TargetShape shape;
  Pose initial_pose;
  Eigen::Vector2d initial_vel = Eigen::Vector2d::Zero();
  std::vector<TrajectorySegment> segments;
  ScanSpec scan;
  FilterType filter = FilterType::kUkfCv;
  ModelConfig cv_model;
  ModelConfig ct_model;
  ModeSet modes;  // IMM only
  UtParams ut;
  InitialBelief init;
  int runs = 100;
  std::uint64_t seed = 1;
  TruthRegionMode truth_region = TruthRegionMode::kPolygon;
};

// Parse a scenario from JSON text (// comments allowed). Field errors throw
// ConfigError naming the offending path.
ScenarioConfig parse_scenario_text(const std::string& text);

// Canonical JSON serialization (comment-free, stable key order).
std::string serialize_scenario(const ScenarioConfig& cfg);

// Resolve a built-in scenario name or a config file path.
ScenarioConfig load_scenario(const std::string& name_or_path);

std::vector<std::string> builtin_scenario_names();

// Embedded config text for a built-in scenario; nullptr when unknown.
const char* builtin_scenario_text(const std::string& name);

// Gaussian belief over the 8-dim state described by the initialization block
// (circle moments n20 = n02 = radius^2/4; variances floored at 1e-12).
GaussianBelief initial_belief(const InitialBelief& init);

//! Monte Carlo output: aggregated metrics plus every scored run.
struct ScenarioResult {
  MetricsReport report;
  std::vector<RunResult> runs;
};

// Execute cfg.runs seeded runs (substream per run index) in a work pool and
// aggregate. When out_dir is non-empty, writes track.csv (first run),
// modes.csv (IMM only) and metrics.json; identical seeds give byte-identical
// artifacts. threads = 0 picks the hardware concurrency.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir = "",
                            unsigned threads = 0);

//! One detector bounding box: center, full width/height, orientation (rad).
struct BoundingBoxRecord {
  long frame = 0;
  double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0, theta = 0.0;
};

// Parse "frame,cx,cy,w,h,theta" CSV (exact header required).
std::vector<BoundingBoxRecord> parse_bbox_text(const std::string& text);
std::vector<BoundingBoxRecord> parse_bbox_file(const std::string& path);

// Replay a bounding-box log: per frame, sample uniform points inside the
// oriented box (count/noise law from cfg.scan), feed the configured filter,
// and score against the inscribed ellipse. The track initializes at the first
// box center with the configured circle radius. Truth velocity comes from
// finite differences of the box centers.
ScenarioResult replay_bboxes(std::span<const BoundingBoxRecord> records,
                             const ScenarioConfig& cfg, const std::string& out_dir = "",
                             unsigned threads = 0);

}  // namespace imtrack
