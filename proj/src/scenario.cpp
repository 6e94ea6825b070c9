#include "imtrack/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "imtrack/errors.hpp"

namespace imtrack {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// config parsing

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + " " + what);
}

const json& req(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "is required");
  return *it;
}

double req_num(const json& j, const std::string& path, const char* key) {
  const json& v = req(j, path, key);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  return v.get<double>();
}

double opt_num(const json& j, const std::string& path, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(path + "." + key, "must be a number");
  return it->get<double>();
}

std::string req_str(const json& j, const std::string& path, const char* key) {
  const json& v = req(j, path, key);
  if (!v.is_string()) fail(path + "." + key, "must be a string");
  return v.get<std::string>();
}

Eigen::Vector2d req_vec2(const json& j, const std::string& path, const char* key) {
  const json& v = req(j, path, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(path + "." + key, "must be a 2-element number array");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Eigen::Vector3d req_vec3(const json& j, const std::string& path, const char* key) {
  const json& v = req(j, path, key);
  if (!v.is_array() || v.size() != 3) fail(path + "." + key, "must be a 3-element array");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

TargetShape parse_shape(const json& j) {
  const std::string type = req_str(j, "shape", "type");
  if (type == "ellipse") {
    return TargetShape::ellipse(req_num(j, "shape", "semi_major"),
                                req_num(j, "shape", "semi_minor"));
  }
  if (type == "plus") {
    const Eigen::Vector2d r1 = req_vec2(j, "shape", "rect1");
    const Eigen::Vector2d r2 = req_vec2(j, "shape", "rect2");
    return TargetShape::plus_sign(r1.x(), r1.y(), r2.x(), r2.y());
  }
  fail("shape.type", "must be \"ellipse\" or \"plus\"");
}

ModelConfig parse_cv(const json& j) {
  ModelConfig m;
  m.model = MotionModel::kConstantVelocity;
  m.cv.q = req_num(j, "filter.cv", "q");
  if (m.cv.q < 0.0) fail("filter.cv.q", "must be >= 0");
  m.cv.moment_cov = req_vec3(j, "filter.cv", "moment_var").asDiagonal();
  return m;
}

ModelConfig parse_ct(const json& j) {
  ModelConfig m;
  m.model = MotionModel::kCoordinatedTurn;
  const Eigen::Vector3d mv = req_vec3(j, "filter.ct", "moment_var");
  const Eigen::Vector2d av = req_vec2(j, "filter.ct", "accel_var");
  const double ts = deg2rad(req_num(j, "filter.ct", "turn_rate_std_deg"));
  m.ct.w_var << mv.x(), mv.y(), mv.z(), av.x(), av.y(), ts * ts;
  if (m.ct.w_var.minCoeff() < 0.0) fail("filter.ct", "variances must be >= 0");
  return m;
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  cfg.name = req_str(j, "config", "name");
  cfg.shape = parse_shape(req(j, "config", "shape"));

  const json& truth = req(j, "config", "truth");
  cfg.initial_pose.centroid = req_vec2(truth, "truth", "position");
  cfg.initial_vel = req_vec2(truth, "truth", "velocity");
  cfg.initial_pose.orientation = deg2rad(opt_num(truth, "truth", "orientation_deg", 0.0));
  for (const json& s : req(truth, "truth", "segments")) {
    TrajectorySegment seg;
    const std::string model = req_str(s, "truth.segments[]", "model");
    if (model == "cv") {
      seg.model = MotionModel::kConstantVelocity;
    } else if (model == "ct") {
      seg.model = MotionModel::kCoordinatedTurn;
      seg.turn_rate = deg2rad(req_num(s, "truth.segments[]", "turn_rate_deg"));
    } else {
      fail("truth.segments[].model", "must be \"cv\" or \"ct\"");
    }
    seg.duration = req_num(s, "truth.segments[]", "duration");
    if (seg.duration < 0.0) fail("truth.segments[].duration", "must be >= 0");
    cfg.segments.push_back(seg);
  }

  const json& scan = req(j, "config", "scan");
  const std::string law = req_str(scan, "scan", "count_law");
  if (law == "fixed") {
    cfg.scan.law = CountLaw::kFixed;
  } else if (law == "poisson") {
    cfg.scan.law = CountLaw::kPoisson;
  } else {
    fail("scan.count_law", "must be \"fixed\" or \"poisson\"");
  }
  cfg.scan.count = req_num(scan, "scan", "count");
  if (cfg.scan.count < 0.0) fail("scan.count", "must be >= 0");
  cfg.scan.period = req_num(scan, "scan", "period");
  if (!(cfg.scan.period > 0.0)) fail("scan.period", "must be > 0");
  const json& noise = req(scan, "scan", "noise");
  cfg.scan.noise.sigma_x2 = req_num(noise, "scan.noise", "sigma_x2");
  cfg.scan.noise.sigma_y2 = req_num(noise, "scan.noise", "sigma_y2");
  if (cfg.scan.noise.sigma_x2 < 0.0 || cfg.scan.noise.sigma_y2 < 0.0) {
    fail("scan.noise", "variances must be >= 0");
  }

  const json& filter = req(j, "config", "filter");
  const std::string type = req_str(filter, "filter", "type");
  if (type == "ukf-cv") {
    cfg.filter = FilterType::kUkfCv;
    cfg.cv_model = parse_cv(req(filter, "filter", "cv"));
  } else if (type == "ukf-ct") {
    cfg.filter = FilterType::kUkfCt;
    cfg.ct_model = parse_ct(req(filter, "filter", "ct"));
  } else if (type == "ukf-imm") {
    cfg.filter = FilterType::kUkfImm;
    cfg.cv_model = parse_cv(req(filter, "filter", "cv"));
    cfg.ct_model = parse_ct(req(filter, "filter", "ct"));
    const json& modes = req(filter, "filter", "modes");
    const json& mu0 = req(modes, "filter.modes", "mu0");
    const json& tr = req(modes, "filter.modes", "transition");
    if (!mu0.is_array() || mu0.size() != 2) fail("filter.modes.mu0", "must have 2 entries");
    if (!tr.is_array() || tr.size() != 2) fail("filter.modes.transition", "must be 2x2");
    cfg.modes.mu.resize(2);
    cfg.modes.transition.resize(2, 2);
    for (int i = 0; i < 2; ++i) {
      cfg.modes.mu[i] = mu0[i].get<double>();
      if (!tr[i].is_array() || tr[i].size() != 2) fail("filter.modes.transition", "must be 2x2");
      for (int k = 0; k < 2; ++k) cfg.modes.transition(i, k) = tr[i][k].get<double>();
    }
  } else {
    fail("filter.type", "must be \"ukf-cv\", \"ukf-ct\" or \"ukf-imm\"");
  }
  if (filter.contains("ut")) {
    const json& ut = filter["ut"];
    cfg.ut.alpha = opt_num(ut, "filter.ut", "alpha", 1.0);
    cfg.ut.beta = opt_num(ut, "filter.ut", "beta", 2.0);
    cfg.ut.kappa = opt_num(ut, "filter.ut", "kappa", 0.0);
  }

  const json& init = req(j, "config", "init");
  const bool has_radius = init.contains("radius");
  const bool has_axes = init.contains("semi_major") || init.contains("semi_minor");
  if (has_radius == has_axes) {
    fail("init", "give either radius (circle) or semi_major/semi_minor, not both");
  }
  if (has_radius) {
    const double r = req_num(init, "init", "radius");
    if (!(r > 0.0)) fail("init.radius", "must be > 0");
    cfg.init.semi_major = cfg.init.semi_minor = r;
    cfg.init.orientation = 0.0;
  } else {
    cfg.init.semi_major = req_num(init, "init", "semi_major");
    cfg.init.semi_minor = req_num(init, "init", "semi_minor");
    if (!(cfg.init.semi_major > 0.0) || !(cfg.init.semi_minor > 0.0)) {
      fail("init", "semi_major and semi_minor must be > 0");
    }
    cfg.init.orientation = deg2rad(opt_num(init, "init", "orientation_deg", 0.0));
  }
  cfg.init.pos = req_vec2(init, "init", "position");
  cfg.init.vel = req_vec2(init, "init", "velocity");
  cfg.init.omega = deg2rad(opt_num(init, "init", "omega_deg", 0.0));
  cfg.init.moment_std = req_num(init, "init", "moment_std");
  cfg.init.position_std = req_num(init, "init", "position_std");
  cfg.init.velocity_std = req_num(init, "init", "velocity_std");
  cfg.init.omega_std = deg2rad(opt_num(init, "init", "omega_std_deg", 0.0));
  if (cfg.init.moment_std < 0.0 || cfg.init.position_std < 0.0 ||
      cfg.init.velocity_std < 0.0 || cfg.init.omega_std < 0.0) {
    fail("init", "standard deviations must be >= 0");
  }

  const double runs = req_num(j, "config", "runs");
  if (runs < 1.0 || runs != std::floor(runs)) fail("runs", "must be a positive integer");
  cfg.runs = static_cast<int>(runs);
  const double seed = req_num(j, "config", "seed");
  if (seed < 0.0 || seed != std::floor(seed)) fail("seed", "must be a non-negative integer");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (j.contains("truth_region")) {
    const std::string mode = j["truth_region"].get<std::string>();
    if (mode == "polygon") {
      cfg.truth_region = TruthRegionMode::kPolygon;
    } else if (mode == "moment-ellipse") {
      cfg.truth_region = TruthRegionMode::kMomentEllipse;
    } else {
      fail("truth_region", "must be \"polygon\" or \"moment-ellipse\"");
    }
  }
  return cfg;
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  if (cfg.shape.kind == TargetShape::Kind::kEllipse) {
    j["shape"] = {{"type", "ellipse"}, {"semi_major", cfg.shape.a1}, {"semi_minor", cfg.shape.a2}};
  } else {
    j["shape"] = {{"type", "plus"},
                  {"rect1", {cfg.shape.w1, cfg.shape.h1}},
                  {"rect2", {cfg.shape.w2, cfg.shape.h2}}};
  }
  json segs = json::array();
  for (const auto& s : cfg.segments) {
    json seg;
    seg["model"] = s.model == MotionModel::kConstantVelocity ? "cv" : "ct";
    seg["duration"] = s.duration;
    if (s.model == MotionModel::kCoordinatedTurn) seg["turn_rate_deg"] = rad2deg(s.turn_rate);
    segs.push_back(seg);
  }
  j["truth"] = {{"position", {cfg.initial_pose.centroid.x(), cfg.initial_pose.centroid.y()}},
                {"velocity", {cfg.initial_vel.x(), cfg.initial_vel.y()}},
                {"orientation_deg", rad2deg(cfg.initial_pose.orientation)},
                {"segments", segs}};
  j["scan"] = {{"count_law", cfg.scan.law == CountLaw::kFixed ? "fixed" : "poisson"},
               {"count", cfg.scan.count},
               {"period", cfg.scan.period},
               {"noise", {{"sigma_x2", cfg.scan.noise.sigma_x2},
                          {"sigma_y2", cfg.scan.noise.sigma_y2}}}};

  json filter;
  filter["type"] = cfg.filter == FilterType::kUkfCv   ? "ukf-cv"
                   : cfg.filter == FilterType::kUkfCt ? "ukf-ct"
                                                      : "ukf-imm";
  auto cv_json = [&]() {
    return json{{"q", cfg.cv_model.cv.q},
                {"moment_var",
                 {cfg.cv_model.cv.moment_cov(0, 0), cfg.cv_model.cv.moment_cov(1, 1),
                  cfg.cv_model.cv.moment_cov(2, 2)}}};
  };
  auto ct_json = [&]() {
    const auto& w = cfg.ct_model.ct.w_var;
    return json{{"moment_var", {w[0], w[1], w[2]}},
                {"accel_var", {w[3], w[4]}},
                {"turn_rate_std_deg", rad2deg(std::sqrt(w[5]))}};
  };
  if (cfg.filter != FilterType::kUkfCt) filter["cv"] = cv_json();
  if (cfg.filter != FilterType::kUkfCv) filter["ct"] = ct_json();
  if (cfg.filter == FilterType::kUkfImm) {
    filter["modes"] = {{"mu0", {cfg.modes.mu[0], cfg.modes.mu[1]}},
                       {"transition",
                        {{cfg.modes.transition(0, 0), cfg.modes.transition(0, 1)},
                         {cfg.modes.transition(1, 0), cfg.modes.transition(1, 1)}}}};
  }
  filter["ut"] = {{"alpha", cfg.ut.alpha}, {"beta", cfg.ut.beta}, {"kappa", cfg.ut.kappa}};
  j["filter"] = filter;

  j["init"] = {{"semi_major", cfg.init.semi_major},
               {"semi_minor", cfg.init.semi_minor},
               {"orientation_deg", rad2deg(cfg.init.orientation)},
               {"position", {cfg.init.pos.x(), cfg.init.pos.y()}},
               {"velocity", {cfg.init.vel.x(), cfg.init.vel.y()}},
               {"omega_deg", rad2deg(cfg.init.omega)},
               {"moment_std", cfg.init.moment_std},
               {"position_std", cfg.init.position_std},
               {"velocity_std", cfg.init.velocity_std},
               {"omega_std_deg", rad2deg(cfg.init.omega_std)}};
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  j["truth_region"] =
      cfg.truth_region == TruthRegionMode::kPolygon ? "polygon" : "moment-ellipse";
  return j.dump(2) + "\n";
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
  if (const char* text = builtin_scenario_text(name_or_path)) {
    return parse_scenario_text(text);
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw ConfigError("config: \"" + name_or_path +
                      "\" is neither a built-in scenario nor a readable file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

GaussianBelief initial_belief(const InitialBelief& init) {
  ExtendedState s;
  s.moments = posed_moments(TargetShape::ellipse(init.semi_major, init.semi_minor),
                            init.orientation);
  s.pos = init.pos;
  s.vel = init.vel;
  s.omega = init.omega;

  GaussianBelief b;
  b.mean = s.vec();
  Eigen::VectorXd var(kStateDim);
  var[kN11] = var[kN20] = var[kN02] = init.moment_std * init.moment_std;
  var[kXc] = var[kYc] = init.position_std * init.position_std;
  var[kVx] = var[kVy] = init.velocity_std * init.velocity_std;
  var[kOmega] = init.omega_std * init.omega_std;
  b.cov = var.cwiseMax(kOmegaFloorVariance).asDiagonal();
  return b;
}

// ---------------------------------------------------------------------------
// runner

namespace {

struct FilterSetup {
  FilterType type = FilterType::kUkfCv;
  std::vector<ModelConfig> models;
  ModeSet modes;
  UtParams ut;
  GaussianBelief init;
  double period = 1.0;
};

FilterSetup make_setup(const ScenarioConfig& cfg) {
  FilterSetup fs;
  fs.type = cfg.filter;
  fs.ut = cfg.ut;
  fs.init = initial_belief(cfg.init);
  fs.period = cfg.scan.period;
  switch (cfg.filter) {
    case FilterType::kUkfCv:
      fs.models = {cfg.cv_model};
      break;
    case FilterType::kUkfCt:
      fs.models = {cfg.ct_model};
      break;
    case FilterType::kUkfImm:
      fs.models = {cfg.cv_model, cfg.ct_model};
      break;
  }
  if (cfg.filter == FilterType::kUkfImm) {
    fs.modes = cfg.modes;
  } else {
    fs.modes.mu = Eigen::VectorXd::Ones(1);
    fs.modes.transition = Eigen::MatrixXd::Ones(1, 1);
  }
  return fs;
}

Eigen::Vector2d mode_record(const FilterSetup& fs, const Eigen::VectorXd& mu) {
  switch (fs.type) {
    case FilterType::kUkfCv:
      return {1.0, 0.0};
    case FilterType::kUkfCt:
      return {0.0, 1.0};
    default:
      return {mu[0], mu[1]};
  }
}

RunResult run_single(const FilterSetup& fs, std::span<const TruthPoint> truth,
                     const std::vector<MeasurementScan>& scans) {
  const int n_models = static_cast<int>(fs.models.size());
  std::vector<GaussianBelief> beliefs(n_models, fs.init);
  Eigen::VectorXd mu = fs.modes.mu;

  RunResult run;
  run.epochs.reserve(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const MeasurementScan& scan = scans[k];
    if (k == 0) {
      // No time has elapsed: measurement-only step.
      Eigen::VectorXd avg_lik(n_models);
      for (int j = 0; j < n_models; ++j) {
        if (n_models > 1) {
          avg_lik[j] = model_likelihood(beliefs[j], scan, scan.noise, fs.ut).avg_lik;
        }
        beliefs[j] = ukf_update_scan(beliefs[j], scan, scan.noise, fs.ut);
      }
      if (n_models > 1) mu = mode_update(mu, avg_lik);
    } else if (n_models == 1) {
      beliefs[0] = predict(beliefs[0], fs.models[0], fs.period, fs.ut);
      beliefs[0] = ukf_update_scan(beliefs[0], scan, scan.noise, fs.ut);
    } else {
      ImmStepResult step = imm_step(beliefs, {mu, fs.modes.transition}, fs.models, scan,
                                    scan.noise, fs.period, fs.ut);
      beliefs = std::move(step.beliefs);
      mu = step.modes.mu;
    }

    const GaussianBelief combined = n_models == 1 ? beliefs[0] : moment_match(beliefs, mu);
    RunResult::Epoch ep;
    ep.time = truth[k].time;
    ep.est = ExtendedState::from_vec(combined.mean);
    ep.truth = truth[k].state;
    ep.truth_orientation = truth[k].orientation;
    ep.mode_mu = mode_record(fs, mu);
    run.epochs.push_back(std::move(ep));
  }
  return run;
}

void parallel_for_runs(int runs, unsigned threads, const std::function<void(int)>& body) {
  unsigned n = threads ? threads : std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  n = std::min<unsigned>(n, static_cast<unsigned>(runs));
  if (n <= 1) {
    for (int i = 0; i < runs; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_track_csv(const std::string& path, const RunResult& run) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << "epoch,time,xc,vx,yc,vy,omega,n11,n20,n02,a1,a2,alpha,mode_mu_cv,mode_mu_ct\n";
  for (std::size_t k = 0; k < run.epochs.size(); ++k) {
    const auto& ep = run.epochs[k];
    double a1 = std::nan(""), a2 = std::nan(""), alpha = std::nan("");
    try {
      const EllipseShape e = moments_to_ellipse(ep.est.moments);
      a1 = e.a1;
      a2 = e.a2;
      alpha = e.alpha;
    } catch (const NumericalError&) {
      // degenerate extent: leave the axes as nan
    }
    out << k << ',' << fmt(ep.time) << ',' << fmt(ep.est.pos.x()) << ',' << fmt(ep.est.vel.x())
        << ',' << fmt(ep.est.pos.y()) << ',' << fmt(ep.est.vel.y()) << ',' << fmt(ep.est.omega)
        << ',' << fmt(ep.est.moments.n11) << ',' << fmt(ep.est.moments.n20) << ','
        << fmt(ep.est.moments.n02) << ',' << fmt(a1) << ',' << fmt(a2) << ',' << fmt(alpha)
        << ',' << fmt(ep.mode_mu.x()) << ',' << fmt(ep.mode_mu.y()) << '\n';
  }
}

void write_modes_csv(const std::string& path, std::span<const RunResult> runs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << "epoch,time,mean_mu_cv,mean_mu_ct\n";
  if (runs.empty()) return;
  const std::size_t epochs = runs[0].epochs.size();
  for (std::size_t k = 0; k < epochs; ++k) {
    double cv = 0.0, ct = 0.0;
    for (const auto& r : runs) {
      cv += r.epochs[k].mode_mu.x();
      ct += r.epochs[k].mode_mu.y();
    }
    out << k << ',' << fmt(runs[0].epochs[k].time) << ',' << fmt(cv / runs.size()) << ','
        << fmt(ct / runs.size()) << '\n';
  }
}

void write_metrics_json(const std::string& path, const std::string& name,
                        const MetricsReport& rep) {
  json j;
  j["scenario"] = name;
  j["runs"] = rep.runs;
  j["epochs"] = rep.time.size();
  j["mean_iou"] = rep.overall_iou;
  j["mean_position_rmse"] = rep.overall_position_rmse;
  j["mean_velocity_rmse"] = rep.overall_velocity_rmse;
  j["per_epoch"] = {{"time", rep.time},
                    {"iou", rep.mean_iou},
                    {"position_rmse", rep.position_rmse},
                    {"velocity_rmse", rep.velocity_rmse}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_artifacts(const std::string& out_dir, const std::string& name, bool imm,
                     const ScenarioResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir);
  write_track_csv((fs::path(out_dir) / "track.csv").string(), result.runs.front());
  if (imm) write_modes_csv((fs::path(out_dir) / "modes.csv").string(), result.runs);
  write_metrics_json((fs::path(out_dir) / "metrics.json").string(), name, result.report);
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                            unsigned threads) {
  const std::vector<TruthPoint> truth = generate_truth(
      cfg.shape, cfg.initial_pose, cfg.initial_vel, cfg.segments, cfg.scan.period);
  const FilterSetup fs = make_setup(cfg);

  ScenarioResult result;
  result.runs.resize(cfg.runs);
  parallel_for_runs(cfg.runs, threads, [&](int i) {
    Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
    const std::vector<MeasurementScan> scans = generate_scans(truth, cfg.shape, cfg.scan, rng);
    result.runs[i] = run_single(fs, truth, scans);
    score_run_iou(result.runs[i], cfg.shape, cfg.truth_region);
  });
  result.report = compute_metrics(result.runs);

  if (!out_dir.empty()) {
    write_artifacts(out_dir, cfg.name, cfg.filter == FilterType::kUkfImm, result);
  }
  return result;
}

// ---------------------------------------------------------------------------
// bounding-box replay

std::vector<BoundingBoxRecord> parse_bbox_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("bbox csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "frame,cx,cy,w,h,theta") {
    throw ConfigError("bbox csv: header must be \"frame,cx,cy,w,h,theta\"");
  }
  std::vector<BoundingBoxRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    BoundingBoxRecord r;
    char extra;
    std::istringstream row(line);
    char c1, c2, c3, c4, c5;
    if (!(row >> r.frame >> c1 >> r.cx >> c2 >> r.cy >> c3 >> r.w >> c4 >> r.h >> c5 >>
          r.theta) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',' || (row >> extra)) {
      throw ConfigError("bbox csv: malformed row at line " + std::to_string(line_no));
    }
    if (!(r.w > 0.0) || !(r.h > 0.0)) {
      throw ConfigError("bbox csv: non-positive box size at line " + std::to_string(line_no));
    }
    if (!out.empty() && r.frame <= out.back().frame) {
      throw ConfigError("bbox csv: frames must increase at line " + std::to_string(line_no));
    }
    out.push_back(r);
  }
  if (out.empty()) throw ConfigError("bbox csv: no records");
  return out;
}

std::vector<BoundingBoxRecord> parse_bbox_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("bbox csv: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bbox_text(buf.str());
}

ScenarioResult replay_bboxes(std::span<const BoundingBoxRecord> records,
                             const ScenarioConfig& cfg, const std::string& out_dir,
                             unsigned threads) {
  const double period = cfg.scan.period;
  const std::size_t n = records.size();

  // Truth from the box log: inscribed ellipse, finite-difference velocity.
  std::vector<TruthPoint> truth(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = records[k];
    const double a = std::max(r.w, r.h) / 2.0;
    const double b = std::min(r.w, r.h) / 2.0;
    const double alpha = r.w >= r.h ? r.theta : r.theta + kPi / 2.0;
    truth[k].time = static_cast<double>(records[k].frame - records[0].frame) * period;
    truth[k].state.moments = ellipse_to_moments({a, b, normalize_orientation(alpha)});
    truth[k].state.pos = {r.cx, r.cy};
    truth[k].orientation = r.theta;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t prev = k == 0 ? 0 : k - 1;
    const std::size_t next = k + 1 == n ? k : k + 1;
    const double dt = truth[next].time - truth[prev].time;
    truth[k].state.vel = dt > 0.0
                             ? ((truth[next].state.pos - truth[prev].state.pos) / dt).eval()
                             : Eigen::Vector2d::Zero();
  }

  // The track starts on the first box with the configured circle prior.
  ScenarioConfig replay_cfg = cfg;
  replay_cfg.init.pos = truth[0].state.pos;
  replay_cfg.init.vel = truth[0].state.vel;
  const FilterSetup fs = make_setup(replay_cfg);

  const double sx = std::sqrt(cfg.scan.noise.sigma_x2);
  const double sy = std::sqrt(cfg.scan.noise.sigma_y2);

  ScenarioResult result;
  result.runs.resize(cfg.runs);
  parallel_for_runs(cfg.runs, threads, [&](int i) {
    Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
    std::vector<MeasurementScan> scans(n);
    for (std::size_t k = 0; k < n; ++k) {
      scans[k].time = truth[k].time;
      scans[k].noise = cfg.scan.noise;
      const int count = cfg.scan.law == CountLaw::kFixed
                            ? static_cast<int>(std::lround(cfg.scan.count))
                            : rng.poisson(cfg.scan.count);
      const auto& r = records[k];
      const double c = std::cos(r.theta);
      const double s = std::sin(r.theta);
      for (int p = 0; p < count; ++p) {
        const double bx = rng.uniform(-r.w / 2.0, r.w / 2.0);
        const double by = rng.uniform(-r.h / 2.0, r.h / 2.0);
        scans[k].points.emplace_back(r.cx + c * bx - s * by + sx * rng.normal(),
                                     r.cy + s * bx + c * by + sy * rng.normal());
      }
    }
    result.runs[i] = run_single(fs, truth, scans);
    // Score against the inscribed ellipse of each box.
    for (auto& ep : result.runs[i].epochs) {
      const Region truth_region = ellipse_region(moments_to_ellipse(
          ep.truth.moments, ep.truth.pos));
      try {
        const Region est = ellipse_region(moments_to_ellipse(ep.est.moments, ep.est.pos));
        ep.iou = iou(truth_region, est);
      } catch (const NumericalError&) {
        ep.iou = 0.0;
      }
    }
  });
  result.report = compute_metrics(result.runs);

  if (!out_dir.empty()) {
    write_artifacts(out_dir, cfg.name, cfg.filter == FilterType::kUkfImm, result);
  }
  return result;
}

}  // namespace imtrack
