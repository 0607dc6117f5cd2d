#pragma once

#include <cmath>

#include "isoblock/inclusion/integrate.hpp"

namespace isoblock {

/// A posteriori closeness certificate between a solution path `u` and a
/// candidate path `z` of the same model on a shared grid.
///
///   rho(t)  = 2 * dist(g_z(t), F(z(t)))       admissibility defect of z
///   xi(t)   = d(u_0, z_0) e^{2Ct} + int_0^t e^{2C(t-s)} rho(s) ds
///
/// The certificate holds when the observed gap d(u(t), z(t)) stays below
/// xi(t) plus a discretization slack proportional to dt and the magnitude of
/// the realized right-hand sides.  `u` should be a genuine solution tracking
/// z's selections (see integrate_tracking); for such pairs validity is the
/// discrete analogue of the defect-integral bound.
template <typename Scalar>
struct FilippovCertificate {
  VecX<Scalar> rho;           ///< per grid node
  VecX<Scalar> xi;            ///< per grid node
  VecX<Scalar> observed_gap;  ///< per grid node
  Scalar lipschitz_C = 0;
  Scalar slack = 0;
  bool valid = false;

  Eigen::Index nodes() const { return xi.size(); }
};

template <typename Scalar>
FilippovCertificate<Scalar> filippov_certificate(const InclusionModel<Scalar>& model,
                                                 const Trajectory<Scalar>& u,
                                                 const Trajectory<Scalar>& z) {
  model.validate();
  if (model.lipschitz_C <= 0)
    throw config_error("certificate: model must carry lipschitz_C > 0");
  if (u.dim() != z.dim() || u.steps() != z.steps() ||
      std::abs(u.dt - z.dt) > Scalar(1e-12) || std::abs(u.t0 - z.t0) > Scalar(1e-12))
    throw config_error("certificate: trajectories must share the time grid");
  if (!(u.metric_weights.array() == z.metric_weights.array()).all())
    throw config_error("certificate: metric weights mismatch");

  const Eigen::Index m = u.steps();
  const Scalar dt = u.dt;
  const Scalar C = model.lipschitz_C;
  const VecX<Scalar>& w = u.metric_weights;

  FilippovCertificate<Scalar> cert;
  cert.lipschitz_C = C;
  cert.rho.resize(m + 1);
  cert.xi.resize(m + 1);
  cert.observed_gap.resize(m + 1);

  for (Eigen::Index j = 0; j < m; ++j) {
    const IntervalBox<Scalar> box = model.selection_set(z.states.col(j));
    const VecX<Scalar> g = effective_selection(model, z, j);
    cert.rho[j] = 2 * dist_to_box<Scalar>(g, box, w);
  }
  cert.rho[m] = m > 0 ? cert.rho[m - 1] : Scalar(0);

  // Trapezoid accumulation of the exponential convolution.
  const Scalar growth = std::exp(2 * C * dt);
  cert.xi[0] = weighted_norm<Scalar>(w, VecX<Scalar>(u.states.col(0) - z.states.col(0)));
  for (Eigen::Index j = 0; j < m; ++j)
    cert.xi[j + 1] = growth * cert.xi[j] + dt / 2 * (growth * cert.rho[j] + cert.rho[j + 1]);

  Scalar rhs_inf = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    rhs_inf = std::max(
        rhs_inf, weighted_norm<Scalar>(
                     w, VecX<Scalar>((u.states.col(j + 1) - u.states.col(j)) / dt)));
    rhs_inf = std::max(
        rhs_inf, weighted_norm<Scalar>(
                     w, VecX<Scalar>((z.states.col(j + 1) - z.states.col(j)) / dt)));
  }
  cert.slack = 10 * dt * rhs_inf;

  cert.valid = true;
  for (Eigen::Index j = 0; j <= m; ++j) {
    cert.observed_gap[j] =
        weighted_norm<Scalar>(w, VecX<Scalar>(u.states.col(j) - z.states.col(j)));
    if (cert.observed_gap[j] > cert.xi[j] + cert.slack) cert.valid = false;
  }
  return cert;
}

}  // namespace isoblock
