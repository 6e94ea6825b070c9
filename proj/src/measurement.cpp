#include "imtrack/measurement.hpp"

#include "imtrack/errors.hpp"

namespace imtrack {

double pseudo_measurement(const Eigen::Vector2d& z, const ExtendedState& state,
                          double f_value, double scale) {
  return implicit_value(z, state) - f_value - scale * scale;
}

FMoments noise_poly_moments(const Eigen::Vector2d& z, const ExtendedState& state,
                            const NoiseSpec& noise) {
  const MomentVector& m = state.moments;
  if (!m.valid()) {
    throw NumericalError("noise_poly_moments: moment matrix not positive definite");
  }
  const double rho = 1.0 / (4.0 * m.det());
  const double sx2 = noise.sigma_x2;
  const double sy2 = noise.sigma_y2;
  const double dx = z.x() - state.pos.x();
  const double dy = z.y() - state.pos.y();
  const double ax = m.n02 * dx - m.n11 * dy;
  const double ay = m.n20 * dy - m.n11 * dx;

  FMoments out;
  out.mean = rho * (m.n02 * sx2 + m.n20 * sy2);
  out.variance = rho * rho *
                 (2.0 * m.n02 * m.n02 * sx2 * sx2 + 2.0 * m.n20 * m.n20 * sy2 * sy2 +
                  4.0 * m.n11 * m.n11 * sx2 * sy2 + 4.0 * ax * ax * sx2 + 4.0 * ay * ay * sy2);
  return out;
}

double noise_poly_sample(const Eigen::Vector2d& z, const ExtendedState& state,
                         const Eigen::Vector2d& nu) {
  const MomentVector& m = state.moments;
  if (!m.valid()) {
    throw NumericalError("noise_poly_sample: moment matrix not positive definite");
  }
  const double rho = 1.0 / (4.0 * m.det());
  const double dx = z.x() - state.pos.x();
  const double dy = z.y() - state.pos.y();
  const double quad = nu.x() * nu.x() * m.n02 + nu.y() * nu.y() * m.n20 +
                      2.0 * nu.x() * nu.y() * m.n11;
  const double lin = 2.0 * (m.n02 * nu.x() - m.n11 * nu.y()) * dx +
                     2.0 * (m.n20 * nu.y() - m.n11 * nu.x()) * dy;
  return rho * (quad + lin);
}

}  // namespace imtrack
