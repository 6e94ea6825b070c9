#include <array>
#include <string>
#include <vector>

#include "imtrack/scenario.hpp"

namespace imtrack {

namespace {

struct BuiltinEntry {
  const char* name;
  const char* text;
};

// Static targets: one scan of 400 points, estimate shape only. Units: cm.
constexpr const char* kStaticEllipseLow = R"json({
  // Stationary ellipse, low measurement noise.
  "name": "static-ellipse-low",
  "shape": { "type": "ellipse", "semi_major": 1.5, "semi_minor": 1.0 },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "orientation_deg": 0.0,
    "segments": []
  },
  "scan": {
    "count_law": "fixed",
    "count": 400,
    "period": 1.0,
    "noise": { "sigma_x2": 0.01, "sigma_y2": 0.01 }
  },
  "filter": {
    "type": "ukf-cv",
    // Process noise is irrelevant for a single-scan run but must be present.
    "cv": { "q": 0.01, "moment_var": [0.01, 0.01, 0.01] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    // Circle prior of roughly the target area (pi*1.5*1.0 ~= pi*0.89^2).
    "radius": 0.89,
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "moment_std": 0.1,
    "position_std": 0.05,
    "velocity_std": 0.01
  },
  "runs": 100,
  "seed": 1
})json";

constexpr const char* kStaticEllipseMedium = R"json({
  // Stationary ellipse, medium measurement noise.
  "name": "static-ellipse-medium",
  "shape": { "type": "ellipse", "semi_major": 1.5, "semi_minor": 1.0 },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "orientation_deg": 0.0,
    "segments": []
  },
  "scan": {
    "count_law": "fixed",
    "count": 400,
    "period": 1.0,
    "noise": { "sigma_x2": 0.25, "sigma_y2": 0.25 }
  },
  "filter": {
    "type": "ukf-cv",
    "cv": { "q": 0.01, "moment_var": [0.01, 0.01, 0.01] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 0.89,
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "moment_std": 0.8,
    "position_std": 0.05,
    "velocity_std": 0.01
  },
  "runs": 100,
  "seed": 1
})json";

constexpr const char* kStaticEllipseHigh = R"json({
  // Stationary ellipse, high measurement noise.
  "name": "static-ellipse-high",
  "shape": { "type": "ellipse", "semi_major": 1.5, "semi_minor": 1.0 },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "orientation_deg": 0.0,
    "segments": []
  },
  "scan": {
    "count_law": "fixed",
    "count": 400,
    "period": 1.0,
    "noise": { "sigma_x2": 1.0, "sigma_y2": 1.0 }
  },
  "filter": {
    "type": "ukf-cv",
    "cv": { "q": 0.01, "moment_var": [0.01, 0.01, 0.01] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 0.89,
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "moment_std": 0.8,
    "position_std": 0.05,
    "velocity_std": 0.01
  },
  "runs": 100,
  "seed": 1
})json";

constexpr const char* kStaticPlusLow = R"json({
  // Stationary plus sign, low measurement noise.
  "name": "static-plus-low",
  "shape": { "type": "plus", "rect1": [3.0, 0.5], "rect2": [0.5, 2.0] },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "orientation_deg": 0.0,
    "segments": []
  },
  "scan": {
    "count_law": "fixed",
    "count": 400,
    "period": 1.0,
    "noise": { "sigma_x2": 0.01, "sigma_y2": 0.01 }
  },
  "filter": {
    "type": "ukf-cv",
    "cv": { "q": 0.01, "moment_var": [0.01, 0.01, 0.01] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 0.89,
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "moment_std": 0.1,
    "position_std": 0.05,
    "velocity_std": 0.01
  },
  "runs": 100,
  "seed": 1
})json";

constexpr const char* kStaticPlusMedium = R"json({
  // Stationary plus sign, medium measurement noise.
  "name": "static-plus-medium",
  "shape": { "type": "plus", "rect1": [3.0, 0.5], "rect2": [0.5, 2.0] },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "orientation_deg": 0.0,
    "segments": []
  },
  "scan": {
    "count_law": "fixed",
    "count": 400,
    "period": 1.0,
    "noise": { "sigma_x2": 0.25, "sigma_y2": 0.25 }
  },
  "filter": {
    "type": "ukf-cv",
    "cv": { "q": 0.01, "moment_var": [0.01, 0.01, 0.01] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 0.89,
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "moment_std": 0.8,
    "position_std": 0.05,
    "velocity_std": 0.01
  },
  "runs": 100,
  "seed": 1
})json";

constexpr const char* kStaticPlusHigh = R"json({
  // Stationary plus sign, high measurement noise.
  "name": "static-plus-high",
  "shape": { "type": "plus", "rect1": [3.0, 0.5], "rect2": [0.5, 2.0] },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "orientation_deg": 0.0,
    "segments": []
  },
  "scan": {
    "count_law": "fixed",
    "count": 400,
    "period": 1.0,
    "noise": { "sigma_x2": 1.0, "sigma_y2": 1.0 }
  },
  "filter": {
    "type": "ukf-cv",
    "cv": { "q": 0.01, "moment_var": [0.01, 0.01, 0.01] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 0.89,
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "moment_std": 0.4,
    "position_std": 0.05,
    "velocity_std": 0.01
  },
  "runs": 100,
  "seed": 1
})json";

// Straight-line motion, UKF with the constant-velocity model. Units: cm, s.
constexpr const char* kLinearEllipse = R"json({
  "name": "linear-ellipse",
  "shape": { "type": "ellipse", "semi_major": 15.0, "semi_minor": 10.0 },
  "truth": {
    "position": [0.0, 80.0],
    "velocity": [4.0, 2.0],
    // Major axis aligned with the velocity direction, atan2(2, 4).
    "orientation_deg": 26.565051177078,
    "segments": [ { "model": "cv", "duration": 60.0 } ]
  },
  "scan": {
    "count_law": "fixed",
    "count": 100,
    "period": 10.0,
    "noise": { "sigma_x2": 1.0, "sigma_y2": 1.0 }
  },
  "filter": {
    "type": "ukf-cv",
    "cv": { "q": 0.2, "moment_var": [0.1, 0.1, 0.1] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    // Circle prior of roughly the target area.
    "radius": 8.9,
    "position": [0.0, 80.0],
    "velocity": [4.0, 2.0],
    "moment_std": 2.6,
    "position_std": 0.3,
    "velocity_std": 0.3
  },
  "runs": 100,
  "seed": 1
})json";

constexpr const char* kLinearPlus = R"json({
  "name": "linear-plus",
  "shape": { "type": "plus", "rect1": [30.0, 5.0], "rect2": [5.0, 20.0] },
  "truth": {
    "position": [0.0, 80.0],
    "velocity": [4.0, 2.0],
    "orientation_deg": 26.565051177078,
    "segments": [ { "model": "cv", "duration": 60.0 } ]
  },
  "scan": {
    "count_law": "fixed",
    "count": 100,
    "period": 10.0,
    "noise": { "sigma_x2": 1.0, "sigma_y2": 1.0 }
  },
  "filter": {
    "type": "ukf-cv",
    "cv": { "q": 0.2, "moment_var": [0.1, 0.1, 0.1] },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 8.9,
    "position": [0.0, 80.0],
    "velocity": [4.0, 2.0],
    "moment_std": 1.5,
    "position_std": 0.5,
    "velocity_std": 1.0
  },
  "runs": 100,
  "seed": 1
})json";

// Coordinated turn, UKF with the coordinated-turn model. Units: cm, s.
constexpr const char* kCtEllipse = R"json({
  "name": "ct-ellipse",
  "shape": { "type": "ellipse", "semi_major": 15.0, "semi_minor": 10.0 },
  "truth": {
    "position": [0.0, 80.0],
    "velocity": [5.0, 1.0],
    "orientation_deg": 11.30993247402,
    "segments": [ { "model": "ct", "duration": 60.0, "turn_rate_deg": 3.0 } ]
  },
  "scan": {
    "count_law": "fixed",
    "count": 100,
    "period": 10.0,
    "noise": { "sigma_x2": 1.0, "sigma_y2": 1.0 }
  },
  "filter": {
    "type": "ukf-ct",
    "ct": { "moment_var": [0.1, 0.1, 0.1], "accel_var": [0.01, 0.01],
            "turn_rate_std_deg": 0.5 },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 7.8,
    "position": [0.0, 80.0],
    "velocity": [5.0, 1.0],
    "omega_deg": 3.0,
    "moment_std": 8.0,
    "position_std": 0.5,
    "velocity_std": 1.0,
    "omega_std_deg": 3.0
  },
  "runs": 100,
  "seed": 1
})json";

constexpr const char* kCtPlus = R"json({
  "name": "ct-plus",
  "shape": { "type": "plus", "rect1": [30.0, 5.0], "rect2": [5.0, 20.0] },
  "truth": {
    "position": [0.0, 80.0],
    "velocity": [5.0, 1.0],
    "orientation_deg": 11.30993247402,
    "segments": [ { "model": "ct", "duration": 60.0, "turn_rate_deg": 1.0 } ]
  },
  "scan": {
    "count_law": "fixed",
    "count": 100,
    "period": 10.0,
    "noise": { "sigma_x2": 1.0, "sigma_y2": 1.0 }
  },
  "filter": {
    "type": "ukf-ct",
    "ct": { "moment_var": [0.1, 0.1, 0.1], "accel_var": [0.01, 0.01],
            "turn_rate_std_deg": 0.05 },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 7.8,
    "position": [0.0, 80.0],
    "velocity": [5.0, 1.0],
    "omega_deg": 1.0,
    "moment_std": 1.5,
    "position_std": 0.5,
    "velocity_std": 1.0,
    "omega_std_deg": 0.5
  },
  "runs": 100,
  "seed": 1
})json";

// Slowly maneuvering extended target tracked by the IMM. Units: m, s.
constexpr const char* kSlowManeuver = R"json({
  "name": "slow-maneuver",
  "shape": { "type": "ellipse", "semi_major": 170.0, "semi_minor": 40.0 },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [9.8, -9.8],
    "orientation_deg": -45.0,
    "segments": [
      { "model": "cv", "duration": 260.0 },
      { "model": "ct", "duration": 100.0, "turn_rate_deg": 0.46 },
      { "model": "cv", "duration": 210.0 },
      { "model": "ct", "duration": 100.0, "turn_rate_deg": 0.90 },
      { "model": "cv", "duration": 160.0 },
      { "model": "ct", "duration": 100.0, "turn_rate_deg": 0.90 },
      { "model": "cv", "duration": 70.0 }
    ]
  },
  "scan": {
    "count_law": "poisson",
    "count": 10,
    "period": 10.0,
    "noise": { "sigma_x2": 100.0, "sigma_y2": 100.0 }
  },
  "filter": {
    "type": "ukf-imm",
    "cv": { "q": 0.01, "moment_var": [1.0, 1.0, 1.0] },
    "ct": { "moment_var": [0.01, 0.01, 0.01], "accel_var": [0.0001, 0.0001],
            "turn_rate_std_deg": 0.02 },
    "modes": {
      "mu0": [0.5, 0.5],
      "transition": [[0.90, 0.10], [0.25, 0.75]]
    },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    // With only ~10 points per scan and point noise comparable to the minor
    // axis, a diffuse circular prior lets the extent absorb measurement noise
    // before the shape is pinned down; start from the known ellipse instead.
    "semi_major": 170.0,
    "semi_minor": 40.0,
    "orientation_deg": -45.0,
    "position": [0.0, 0.0],
    "velocity": [9.8, -9.8],
    "moment_std": 100.0,
    "position_std": 10.0,
    "velocity_std": 2.0,
    "omega_std_deg": 0.5
  },
  "runs": 100,
  "seed": 1
})json";

// Fast aircraft-like maneuvers tracked by the IMM. Units: m, s.
constexpr const char* kFastManeuver = R"json({
  "name": "fast-maneuver",
  "shape": { "type": "ellipse", "semi_major": 150.0, "semi_minor": 75.0 },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 250.0],
    "orientation_deg": 90.0,
    "segments": [
      { "model": "cv", "duration": 100.0 },
      { "model": "ct", "duration": 30.0, "turn_rate_deg": 2.0 },
      { "model": "cv", "duration": 70.0 },
      { "model": "ct", "duration": 45.0, "turn_rate_deg": -1.0 },
      { "model": "ct", "duration": 90.0, "turn_rate_deg": 1.0 },
      { "model": "ct", "duration": 45.0, "turn_rate_deg": -1.0 },
      { "model": "cv", "duration": 120.0 }
    ]
  },
  "scan": {
    "count_law": "poisson",
    "count": 50,
    "period": 10.0,
    "noise": { "sigma_x2": 9.0, "sigma_y2": 9.0 }
  },
  "filter": {
    "type": "ukf-imm",
    "cv": { "q": 0.05, "moment_var": [50000.0, 50000.0, 50000.0] },
    "ct": { "moment_var": [1000.0, 1000.0, 1000.0], "accel_var": [0.5, 0.5],
            "turn_rate_std_deg": 0.05 },
    "modes": {
      "mu0": [0.5, 0.5],
      "transition": [[0.85, 0.15], [0.90, 0.10]]
    },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "semi_major": 150.0,
    "semi_minor": 75.0,
    "orientation_deg": 90.0,
    "position": [0.0, 0.0],
    "velocity": [0.0, 250.0],
    "moment_std": 500.0,
    "position_std": 10.0,
    "velocity_std": 5.0,
    "omega_std_deg": 1.0
  },
  "runs": 100,
  "seed": 1
})json";

// Template for replaying a recorded bounding-box log. Units: px, frames.
// Shape and truth sections are placeholders; the replayed log provides both.
constexpr const char* kReplayVideo = R"json({
  "name": "replay-video",
  "shape": { "type": "ellipse", "semi_major": 20.0, "semi_minor": 20.0 },
  "truth": {
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "orientation_deg": 0.0,
    "segments": []
  },
  "scan": {
    "count_law": "poisson",
    "count": 10,
    "period": 1.0,
    "noise": { "sigma_x2": 100.0, "sigma_y2": 100.0 }
  },
  "filter": {
    "type": "ukf-imm",
    "cv": { "q": 0.1, "moment_var": [0.01, 0.01, 0.01] },
    "ct": { "moment_var": [0.01, 0.01, 0.01], "accel_var": [0.01, 0.01],
            "turn_rate_std_deg": 0.1 },
    "modes": {
      "mu0": [0.5, 0.5],
      "transition": [[0.9, 0.1], [0.1, 0.9]]
    },
    "ut": { "alpha": 0.1, "beta": 2.0, "kappa": 0.0 }
  },
  "init": {
    "radius": 20.0,
    "position": [0.0, 0.0],
    "velocity": [0.0, 0.0],
    "moment_std": 100.0,
    "position_std": 10.0,
    "velocity_std": 5.0,
    "omega_std_deg": 0.5
  },
  "runs": 1,
  "seed": 1
})json";

constexpr std::array<BuiltinEntry, 13> kBuiltins = {{
    {"static-ellipse-low", kStaticEllipseLow},
    {"static-ellipse-medium", kStaticEllipseMedium},
    {"static-ellipse-high", kStaticEllipseHigh},
    {"static-plus-low", kStaticPlusLow},
    {"static-plus-medium", kStaticPlusMedium},
    {"static-plus-high", kStaticPlusHigh},
    {"linear-ellipse", kLinearEllipse},
    {"linear-plus", kLinearPlus},
    {"ct-ellipse", kCtEllipse},
    {"ct-plus", kCtPlus},
    {"slow-maneuver", kSlowManeuver},
    {"fast-maneuver", kFastManeuver},
    {"replay-video", kReplayVideo},
}};

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  names.reserve(kBuiltins.size());
  for (const auto& e : kBuiltins) names.emplace_back(e.name);
  return names;
}

const char* builtin_scenario_text(const std::string& name) {
  for (const auto& e : kBuiltins) {
    if (name == e.name) return e.text;
  }
  return nullptr;
}

}  // namespace imtrack
