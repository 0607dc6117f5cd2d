#pragma once

#include <cmath>
#include <vector>

#include "isoblock/core/generator.hpp"

namespace isoblock {

/// Exact linear-saddle flow: (x, y) -> (x e^{a t}, y e^{-b t}).  The x-axis
/// is expanded, the y-axis contracted, the origin is the unique rest point.
template <typename Scalar>
StateVec<Scalar> saddle_exact(const StateVec<Scalar>& x0, Scalar t, Scalar a = 1, Scalar b = 1) {
  if (x0.dim() != 2) throw config_error("saddle flow: dimension must be 2");
  VecX<Scalar> c(2);
  c[0] = x0.coords[0] * std::exp(a * t);
  c[1] = x0.coords[1] * std::exp(-b * t);
  return StateVec<Scalar>(std::move(c), x0.metric_weights);
}

/// Closed-form bundle generator for the saddle (single member, exact flow
/// sampled on the grid).  Supports exact backward stepping.
template <typename Scalar>
BundleGenerator<Scalar> make_saddle_generator(Scalar a = 1, Scalar b = 1) {
  if (a <= 0 || b <= 0) throw config_error("saddle flow: rates must be positive");
  BundleGenerator<Scalar> gen;
  gen.id = "linear-saddle";
  gen.single_valued = true;
  gen.equilibria.emplace_back(VecX<Scalar>::Zero(2));

  gen.make_bundle = [a, b](const StateVec<Scalar>& x0, Scalar T, Scalar dt) {
    if (x0.dim() != 2) throw config_error("saddle flow: dimension must be 2");
    const Eigen::Index m = step_count(T, dt);
    Trajectory<Scalar> traj;
    traj.t0 = 0;
    traj.dt = dt;
    traj.metric_weights = x0.metric_weights;
    traj.states.resize(2, m + 1);
    const Scalar ga = std::exp(a * dt);
    const Scalar gb = std::exp(-b * dt);
    Scalar x = x0.coords[0], y = x0.coords[1];
    traj.states(0, 0) = x;
    traj.states(1, 0) = y;
    for (Eigen::Index j = 1; j <= m; ++j) {
      x *= ga;
      y *= gb;
      traj.states(0, j) = x;
      traj.states(1, j) = y;
    }
    Bundle<Scalar> bundle;
    bundle.origin = x0;
    bundle.members.push_back(std::move(traj));
    bundle.seed = 0;
    return bundle;
  };

  gen.step_residual = [a, b](const StateVec<Scalar>& from, const StateVec<Scalar>& to,
                             const VecX<Scalar>*, Scalar dt) {
    VecX<Scalar> image(2);
    image[0] = from.coords[0] * std::exp(a * dt);
    image[1] = from.coords[1] * std::exp(-b * dt);
    return weighted_norm<Scalar>(from.metric_weights, VecX<Scalar>(to.coords - image));
  };

  gen.flow_backward = [a, b](const StateVec<Scalar>& x, Scalar s) {
    return saddle_exact(x, -s, a, b);
  };
  return gen;
}

/// The saddle as a discretized inclusion (degenerate singleton value sets),
/// for the integrator-facing paths: convergence-order measurements and
/// endpoint comparisons against the closed form.
template <typename Scalar>
InclusionModel<Scalar> make_saddle_model(Scalar a = 1, Scalar b = 1) {
  if (a <= 0 || b <= 0) throw config_error("saddle flow: rates must be positive");
  InclusionModel<Scalar> model;
  model.dimension = 2;
  model.metric_weights = VecX<Scalar>::Ones(2);
  model.selection_set = [a, b](const VecX<Scalar>& u) {
    IntervalBox<Scalar> box(2);
    box[0] = {a * u[0], a * u[0]};
    box[1] = {-b * u[1], -b * u[1]};
    return box;
  };
  model.lipschitz_C = std::max(a, b);
  model.single_valued = true;
  model.equilibria.push_back(VecX<Scalar>::Zero(2));
  model.id = "linear-saddle";
  return model;
}

}  // namespace isoblock
