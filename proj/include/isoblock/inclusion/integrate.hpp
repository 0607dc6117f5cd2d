#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "isoblock/core/rng.hpp"
#include "isoblock/core/trajectory.hpp"
#include "isoblock/inclusion/model.hpp"
#include "isoblock/inclusion/selection.hpp"

namespace isoblock {

/// Number of steps of size dt covering [0, T]; dt must divide T up to
/// rounding.
template <typename Scalar>
Eigen::Index step_count(Scalar T, Scalar dt) {
  if (dt <= 0) throw config_error("dt must be positive");
  if (T <= 0) throw config_error("horizon T must be positive");
  const auto m = static_cast<Eigen::Index>(std::llround(static_cast<double>(T / dt)));
  if (m < 1 || std::abs(static_cast<Scalar>(m) * dt - T) > Scalar(1e-9) * std::max(T, Scalar(1)))
    throw config_error("dt must divide the horizon T");
  return m;
}

namespace detail {

/// Factorization of (I - dt*A) for the implicit half of a step, or the
/// identity when the model has no stiff linear part.
template <typename Scalar>
class ImplicitStep {
 public:
  ImplicitStep(const InclusionModel<Scalar>& model, Scalar dt) {
    if (!model.linear_part) return;
    Eigen::SparseMatrix<Scalar> M(model.dimension, model.dimension);
    M.setIdentity();
    M -= dt * (*model.linear_part);
    lu_.compute(M);
    if (lu_.info() != Eigen::Success)
      throw numeric_error("implicit step: (I - dt*A) could not be factorized");
    active_ = true;
  }

  VecX<Scalar> solve(const VecX<Scalar>& rhs) const {
    if (!active_) return rhs;
    VecX<Scalar> out = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success) throw numeric_error("implicit step: solve failed");
    return out;
  }

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu_;
  bool active_ = false;
};

template <typename Scalar>
void check_state_compatible(const InclusionModel<Scalar>& model, const StateVec<Scalar>& x0) {
  if (x0.dim() != model.dimension) throw config_error("initial state: dimension mismatch");
  if (x0.metric_weights.size() != model.metric_weights.size() ||
      !(x0.metric_weights.array() == model.metric_weights.array()).all())
    throw config_error("initial state: metric weights do not match the model");
}

template <typename Scalar>
void check_stability(const InclusionModel<Scalar>& model, Scalar dt) {
  if (model.lipschitz_C > 0 && dt * model.lipschitz_C > Scalar(1))
    throw numeric_error("dt exceeds the stability limit of the explicit selection term");
}

}  // namespace detail

/// One IMEX Euler path of the inclusion: the linear part is implicit, the
/// selection (frozen per step by the strategy) and the nonstiff term are
/// explicit:
///   (I - dt*A) u_{j+1} = u_j + dt*(h_j + b(u_j)),   h_j in F(u_j).
template <typename Scalar>
Trajectory<Scalar> integrate(const InclusionModel<Scalar>& model, const StateVec<Scalar>& x0,
                             const SelectionStrategy& strategy, Scalar T, Scalar dt) {
  model.validate();
  detail::check_state_compatible(model, x0);
  detail::check_stability(model, dt);
  const Eigen::Index m = step_count(T, dt);
  detail::ImplicitStep<Scalar> implicit_step(model, dt);
  SelectionEngine<Scalar> engine(strategy);

  Trajectory<Scalar> traj;
  traj.t0 = 0;
  traj.dt = dt;
  traj.metric_weights = model.metric_weights;
  traj.states.resize(model.dimension, m + 1);
  if (!model.single_valued) traj.selection.resize(model.dimension, m);

  VecX<Scalar> u = x0.coords;
  traj.states.col(0) = u;
  for (Eigen::Index j = 0; j < m; ++j) {
    const IntervalBox<Scalar> box = model.selection_set(u);
    const VecX<Scalar> h = engine.pick(box, traj.time(j));
    VecX<Scalar> rhs = u + dt * (h + model.explicit_term(u));
    u = implicit_step.solve(rhs);
    if (!u.allFinite()) throw numeric_error("integration diverged (non-finite state)");
    traj.states.col(j + 1) = u;
    if (!model.single_valued) traj.selection.col(j) = h;
  }
  return traj;
}

/// Selection value the trajectory effectively used on step j: the stored
/// record when present, otherwise backed out of the step formula
///   g_j = (u_{j+1} - u_j)/dt - A u_{j+1} - b(u_j).
template <typename Scalar>
VecX<Scalar> effective_selection(const InclusionModel<Scalar>& model,
                                 const Trajectory<Scalar>& traj, Eigen::Index j) {
  if (traj.has_selection()) return traj.selection.col(j);
  VecX<Scalar> g = (traj.states.col(j + 1) - traj.states.col(j)) / traj.dt;
  if (model.linear_part) g -= (*model.linear_part) * traj.states.col(j + 1);
  g -= model.explicit_term(traj.states.col(j));
  return g;
}

/// Defect of step j against the step formula, in the metric norm.
template <typename Scalar>
Scalar step_residual(const InclusionModel<Scalar>& model, const Trajectory<Scalar>& traj,
                     Eigen::Index j) {
  VecX<Scalar> r = (traj.states.col(j + 1) - traj.states.col(j)) / traj.dt;
  if (model.linear_part) r -= (*model.linear_part) * traj.states.col(j + 1);
  r -= model.explicit_term(traj.states.col(j));
  if (traj.has_selection()) {
    r -= traj.selection.col(j);
  } else {
    // Single-valued models: the selection is pinned by the state.
    const IntervalBox<Scalar> box = model.selection_set(traj.states.col(j));
    for (Eigen::Index i = 0; i < traj.dim(); ++i)
      r[i] -= box[static_cast<std::size_t>(i)].lo;
  }
  return weighted_norm<Scalar>(traj.metric_weights, r);
}

template <typename Scalar>
Scalar max_residual(const InclusionModel<Scalar>& model, const Trajectory<Scalar>& traj) {
  Scalar worst = 0;
  for (Eigen::Index j = 0; j < traj.steps(); ++j)
    worst = std::max(worst, step_residual(model, traj, j));
  return worst;
}

/// Largest admissibility defect of the recorded selections:
/// max_j dist(h_j, F(u_j)).  Zero for every strategy-integrated path.
template <typename Scalar>
Scalar max_selection_defect(const InclusionModel<Scalar>& model, const Trajectory<Scalar>& traj) {
  Scalar worst = 0;
  for (Eigen::Index j = 0; j < traj.steps(); ++j) {
    const IntervalBox<Scalar> box = model.selection_set(traj.states.col(j));
    const VecX<Scalar> g = effective_selection(model, traj, j);
    worst = std::max(worst, dist_to_box<Scalar>(g, box, traj.metric_weights));
  }
  return worst;
}

/// Integrate while tracking a reference path's selections: on each step the
/// reference's selection value is projected onto the admissible set at the
/// current state.  This is the construction that realizes the
/// defect-integral bound: the tracked path stays within xi of the reference.
template <typename Scalar>
Trajectory<Scalar> integrate_tracking(const InclusionModel<Scalar>& model,
                                      const StateVec<Scalar>& x0,
                                      const Trajectory<Scalar>& reference) {
  model.validate();
  detail::check_state_compatible(model, x0);
  const Eigen::Index m = reference.steps();
  if (m < 1) throw config_error("tracking: reference has no steps");
  detail::ImplicitStep<Scalar> implicit_step(model, reference.dt);

  Trajectory<Scalar> traj;
  traj.t0 = reference.t0;
  traj.dt = reference.dt;
  traj.metric_weights = model.metric_weights;
  traj.states.resize(model.dimension, m + 1);
  traj.selection.resize(model.dimension, m);

  VecX<Scalar> u = x0.coords;
  traj.states.col(0) = u;
  for (Eigen::Index j = 0; j < m; ++j) {
    const IntervalBox<Scalar> box = model.selection_set(u);
    const VecX<Scalar> g = effective_selection(model, reference, j);
    const VecX<Scalar> h = project_to_box<Scalar>(g, box);
    VecX<Scalar> rhs = u + traj.dt * (h + model.explicit_term(u));
    u = implicit_step.solve(rhs);
    if (!u.allFinite()) throw numeric_error("tracking integration diverged");
    traj.states.col(j + 1) = u;
    traj.selection.col(j) = h;
  }
  return traj;
}

/// Integrate with the strategy's selection offset by `offset(t)` WITHOUT
/// clamping back into the admissible set.  The result is a consistent
/// discrete path whose recorded selections generally violate admissibility;
/// used to exercise the defect (rho > 0) branch of certificates.
template <typename Scalar>
Trajectory<Scalar> integrate_with_offset(const InclusionModel<Scalar>& model,
                                         const StateVec<Scalar>& x0,
                                         const SelectionStrategy& strategy, Scalar T, Scalar dt,
                                         const std::function<VecX<Scalar>(Scalar)>& offset) {
  model.validate();
  detail::check_state_compatible(model, x0);
  detail::check_stability(model, dt);
  const Eigen::Index m = step_count(T, dt);
  detail::ImplicitStep<Scalar> implicit_step(model, dt);
  SelectionEngine<Scalar> engine(strategy);

  Trajectory<Scalar> traj;
  traj.t0 = 0;
  traj.dt = dt;
  traj.metric_weights = model.metric_weights;
  traj.states.resize(model.dimension, m + 1);
  traj.selection.resize(model.dimension, m);

  VecX<Scalar> u = x0.coords;
  traj.states.col(0) = u;
  for (Eigen::Index j = 0; j < m; ++j) {
    const IntervalBox<Scalar> box = model.selection_set(u);
    VecX<Scalar> h = engine.pick(box, traj.time(j)) + offset(traj.time(j));
    VecX<Scalar> rhs = u + dt * (h + model.explicit_term(u));
    u = implicit_step.solve(rhs);
    if (!u.allFinite()) throw numeric_error("integration diverged (non-finite state)");
    traj.states.col(j + 1) = u;
    traj.selection.col(j) = h;
  }
  return traj;
}

/// Integrate one path per strategy and merge near-duplicates (sup-distance
/// <= dedup_tol).  Deterministic: members keep the order of the surviving
/// strategies, and the bundle records a seed folded from the strategy seeds.
template <typename Scalar>
Bundle<Scalar> make_bundle(const InclusionModel<Scalar>& model, const StateVec<Scalar>& x0,
                           const std::vector<SelectionStrategy>& strategies, Scalar T, Scalar dt,
                           Scalar dedup_tol = Scalar(defaults::dedup_tol)) {
  if (strategies.empty()) throw config_error("make_bundle: needs at least one strategy");
  Bundle<Scalar> bundle;
  bundle.origin = x0;
  std::uint64_t seed = 0;
  for (std::size_t s = 0; s < strategies.size(); ++s)
    seed = hash_seed(seed ^ strategies[s].seed, s);
  bundle.seed = seed;
  for (const auto& strategy : strategies) {
    Trajectory<Scalar> traj = integrate(model, x0, strategy, T, dt);
    bool duplicate = false;
    for (const auto& existing : bundle.members) {
      if (sup_distance(existing, traj) <= dedup_tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) bundle.members.push_back(std::move(traj));
  }
  return bundle;
}

}  // namespace isoblock
