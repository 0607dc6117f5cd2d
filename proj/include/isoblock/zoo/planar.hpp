#pragma once

#include <cmath>

#include "isoblock/inclusion/model.hpp"

namespace isoblock {

/// Planar Lipschitz inclusion used to exercise closeness certificates:
///   u' in R u + [-sigma(u), sigma(u)]^2,
/// with R the rotation generator scaled by `rotation` and
/// sigma(u) = amplitude * (2 + sin u1 + cos u2)  (nonnegative, Lipschitz).
///
/// Value-set Lipschitz bound: per component the interval endpoints move by at
/// most |R dx| + |d sigma|, so
///   dist_H(F(x), F(z)) <= (rotation + sqrt(2) * Lip(sigma)) * d(x, z)
/// and Lip(sigma) <= amplitude * sqrt(2); the model records
///   C = rotation + 2 * amplitude.
template <typename Scalar>
InclusionModel<Scalar> make_planar_model(Scalar rotation = Scalar(0.5),
                                         Scalar amplitude = Scalar(0.3)) {
  if (rotation < 0 || amplitude <= 0)
    throw config_error("planar inclusion: rotation must be >= 0 and amplitude > 0");
  InclusionModel<Scalar> model;
  model.dimension = 2;
  model.metric_weights = VecX<Scalar>::Ones(2);
  model.selection_set = [rotation, amplitude](const VecX<Scalar>& u) {
    const Scalar r1 = -rotation * u[1];
    const Scalar r2 = rotation * u[0];
    const Scalar sigma = amplitude * (2 + std::sin(u[0]) + std::cos(u[1]));
    IntervalBox<Scalar> box(2);
    box[0] = {r1 - sigma, r1 + sigma};
    box[1] = {r2 - sigma, r2 + sigma};
    return box;
  };
  model.lipschitz_C = rotation + 2 * amplitude;
  model.single_valued = false;
  model.id = "planar-lipschitz";
  return model;
}

}  // namespace isoblock
