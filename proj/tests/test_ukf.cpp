#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "imtrack/errors.hpp"
#include "imtrack/metrics.hpp"
#include "imtrack/moments.hpp"
#include "imtrack/simulator.hpp"
#include "imtrack/ukf.hpp"

using namespace imtrack;

namespace {

GaussianBelief random_belief(int dim, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = nd(gen);
  GaussianBelief b;
  b.mean = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) { return nd(gen); });
  b.cov = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(dim, dim);
  return b;
}

GaussianBelief static_circle_belief(double radius, double moment_std, double pos_std,
                                    double vel_std) {
  ExtendedState st;
  st.moments = {0.0, radius * radius / 4.0, radius * radius / 4.0};
  GaussianBelief b;
  b.mean = st.vec();
  Eigen::VectorXd d(kStateDim);
  d << moment_std, moment_std, moment_std, pos_std, vel_std, pos_std, vel_std, 1e-6;
  b.cov = d.array().square().matrix().asDiagonal();
  return b;
}

}  // namespace

TEST_CASE("sigma point weights sum to one and reproduce the input moments") {
  for (double alpha : {1.0, 0.5, 0.1}) {
    const UtParams ut{alpha, 2.0, 0.0};
    const GaussianBelief b = random_belief(5, 13);
    const SigmaPoints sp = sigma_points(b, ut);
    REQUIRE(sp.count() == 11);
    CHECK(sp.w_mean.sum() == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
    for (int i = 0; i < sp.count(); ++i) mean += sp.w_mean[i] * sp.points.col(i);
    CHECK((mean - b.mean).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < sp.count(); ++i) {
      const Eigen::VectorXd d = sp.points.col(i) - b.mean;
      cov += sp.w_cov[i] * d * d.transpose();
    }
    CHECK((cov - b.cov).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("sigma point generation validates its inputs") {
  const GaussianBelief b = random_belief(3, 5);
  CHECK_THROWS_AS((void)sigma_points(b, UtParams{0.0, 2.0, 0.0}), ConfigError);
  CHECK_THROWS_AS((void)sigma_points(b, UtParams{1.5, 2.0, 0.0}), ConfigError);
  GaussianBelief bad = b;
  bad.cov = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS((void)sigma_points(bad, UtParams{}), NumericalError);
}

TEST_CASE("augmented sigma points accept zero extra variance") {
  const GaussianBelief core = random_belief(4, 19);
  Eigen::VectorXd em(2), ev(2);
  em << 0.5, -1.0;
  ev << 0.0, 0.3;
  const SigmaPoints sp = augmented_sigma_points(core, em, ev, UtParams{0.5, 2.0, 0.0});
  REQUIRE(sp.count() == 13);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(6);
  for (int i = 0; i < sp.count(); ++i) mean += sp.w_mean[i] * sp.points.col(i);
  CHECK((mean.head(4) - core.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(mean[4] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mean[5] == doctest::Approx(-1.0).epsilon(1e-12));
  // The zero-variance coordinate never deviates from its mean.
  for (int i = 0; i < sp.count(); ++i) CHECK(sp.points(4, i) == doctest::Approx(0.5));
}

TEST_CASE("unscented transform is exact on the identity and affine maps") {
  const GaussianBelief b = random_belief(6, 29);
  const UtParams ut{0.7, 2.0, 0.0};

  const UtResult id = unscented_transform(b, ut, [](const Eigen::VectorXd& x) { return x; });
  CHECK((id.belief.mean - b.mean).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((id.belief.cov - b.cov).cwiseAbs().maxCoeff() < 1e-10);

  std::mt19937_64 gen(31);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd a(3, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 6; ++j) a(i, j) = nd(gen);
  const Eigen::Vector3d off(1.0, -2.0, 0.5);
  const UtResult affine = unscented_transform(
      b, ut, [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x + off; });
  CHECK((affine.belief.mean - (a * b.mean + off)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((affine.belief.cov - a * b.cov * a.transpose()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((affine.cross_cov - b.cov * a.transpose()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((affine.belief.cov - affine.belief.cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("unscented transform captures the quadratic mean of a Gaussian") {
  GaussianBelief b;
  b.mean = Eigen::VectorXd::Constant(1, 1.7);
  b.cov = Eigen::MatrixXd::Constant(1, 1, 0.49);
  const UtResult r = unscented_transform(b, UtParams{1.0, 2.0, 0.0},
                                         [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
                                           return x.array().square().matrix();
                                         });
  // E[x^2] = mu^2 + sigma^2.
  CHECK(r.belief.mean[0] == doctest::Approx(1.7 * 1.7 + 0.49).epsilon(1e-8));
}

TEST_CASE("covariance conditioning repairs tiny asymmetry and rejects real damage") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(3, 3);
  c(0, 1) = 1e-13;  // slightly asymmetric
  condition_covariance(c, "test");
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(2, 2) = -1.0;
  CHECK_THROWS_AS(condition_covariance(bad, "test"), NumericalError);
}

TEST_CASE("pseudo-measurement moments reduce to the scale statistics for a sharp state") {
  // With a near-delta state belief and zero sensor noise the only remaining
  // randomness is the boundary scale: mean = g(z) - 2/3, variance = 1/18.
  GaussianBelief b = static_circle_belief(2.0, 1e-9, 1e-9, 1e-9);
  const Eigen::Vector2d z(1.0, 0.0);  // g = (1/4)/(4*1) ... implicit value 0.25
  ExtendedState st = ExtendedState::from_vec(b.mean);
  const double g = implicit_value(z, st);
  const PseudoMeasurementMoments pm =
      pseudo_measurement_moments(b, z, FMoments{0.0, 0.0}, UtParams{0.5, 2.0, 0.0});
  CHECK(pm.mean == doctest::Approx(g - 2.0 / 3.0).epsilon(1e-6));
  CHECK(pm.variance == doctest::Approx(1.0 / 18.0).epsilon(1e-6));
}

TEST_CASE("empty scans leave the belief untouched") {
  const GaussianBelief b = static_circle_belief(0.89, 0.1, 0.05, 0.01);
  MeasurementScan scan;
  scan.noise = {0.01, 0.01};
  const GaussianBelief out = ukf_update_scan(b, scan, scan.noise, UtParams{0.1, 2.0, 0.0});
  CHECK(out.mean == b.mean);
  CHECK(out.cov == b.cov);
}

TEST_CASE("a single boundary point contracts the covariance") {
  const GaussianBelief prior = static_circle_belief(2.0, 0.2, 0.5, 0.01);
  MeasurementScan scan;
  scan.noise = {1e-4, 1e-4};
  scan.points = {Eigen::Vector2d(2.0, 0.0)};
  const GaussianBelief post = ukf_update_scan(prior, scan, scan.noise, UtParams{0.5, 2.0, 0.0});
  // The x-position variance shrinks: the point constrains the radial direction.
  CHECK(post.cov(kXc, kXc) < prior.cov(kXc, kXc));
  // A scalar Kalman update never inflates the total variance.
  CHECK(post.cov.trace() <= prior.cov.trace() + 1e-9);
  CHECK((post.cov - post.cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("updates are deterministic and order sensitive") {
  const GaussianBelief prior = static_circle_belief(0.89, 0.3, 0.2, 0.01);
  Rng rng(77);
  const TargetShape shape = TargetShape::ellipse(1.5, 1.0);
  MeasurementScan scan;
  scan.noise = {0.05, 0.05};
  scan.points = sample_target(shape, Pose{}, 40, rng);
  const UtParams ut{0.1, 2.0, 0.0};

  const GaussianBelief a = ukf_update_scan(prior, scan, scan.noise, ut);
  const GaussianBelief b = ukf_update_scan(prior, scan, scan.noise, ut);
  CHECK(a.mean == b.mean);  // bit-identical rerun
  CHECK(a.cov == b.cov);

  MeasurementScan reversed = scan;
  std::reverse(reversed.points.begin(), reversed.points.end());
  const GaussianBelief c = ukf_update_scan(prior, reversed, reversed.noise, ut);
  CHECK((a.mean - c.mean).cwiseAbs().maxCoeff() > 1e-12);  // sequential, not batch
  // Both orders still land near each other (same information).
  CHECK((a.mean - c.mean).cwiseAbs().maxCoeff() < 0.5);
}

TEST_CASE("one dense low-noise scan recovers a static ellipse from a circle prior") {
  const TargetShape shape = TargetShape::ellipse(1.5, 1.0);
  const GaussianBelief prior = static_circle_belief(0.89, 0.1, 0.05, 0.01);
  const UtParams ut{0.1, 2.0, 0.0};
  double iou_sum = 0.0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(100 + rep);
    MeasurementScan scan;
    scan.noise = {0.01, 0.01};
    scan.points = sample_target(shape, Pose{}, 400, rng);
    for (auto& p : scan.points) {
      p.x() += rng.normal(0.0, 0.1);
      p.y() += rng.normal(0.0, 0.1);
    }
    const GaussianBelief post = ukf_update_scan(prior, scan, scan.noise, ut);
    const ExtendedState est = ExtendedState::from_vec(post.mean);
    const EllipseShape est_e = moments_to_ellipse(est.moments, est.pos);
    EllipseShape truth;
    truth.a1 = 1.5;
    truth.a2 = 1.0;
    iou_sum += iou(truth, est_e);
  }
  CHECK(iou_sum / reps >= 0.85);
}
