#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "isoblock/core/state.hpp"

namespace isoblock {

/// A sampled orbit on the uniform grid t0 + j*dt, j = 0..steps().
///
/// States are stored as columns of a dense matrix (one column per grid node)
/// and share a single weight vector; `state(j)` materializes a StateVec view.
/// For differential inclusions, `selection` column j records the selection
/// value h(t_j) used on step j -> j+1 (single-valued models leave it empty).
template <typename Scalar>
struct Trajectory {
  Scalar t0 = 0;
  Scalar dt = 0;
  MatX<Scalar> states;     ///< n x (steps()+1)
  MatX<Scalar> selection;  ///< n x steps(), or 0 x 0
  VecX<Scalar> metric_weights;

  Eigen::Index dim() const { return states.rows(); }
  Eigen::Index steps() const { return states.cols() > 0 ? states.cols() - 1 : 0; }
  Scalar duration() const { return static_cast<Scalar>(steps()) * dt; }
  Scalar time(Eigen::Index j) const { return t0 + static_cast<Scalar>(j) * dt; }

  bool has_selection() const { return selection.cols() > 0; }

  StateVec<Scalar> state(Eigen::Index j) const {
    return StateVec<Scalar>(states.col(j), metric_weights);
  }
  StateVec<Scalar> last_state() const { return state(steps()); }

  /// State at an arbitrary time in [t0, t0 + duration], linearly interpolated
  /// between grid nodes (clamped at the ends).
  StateVec<Scalar> state_at(Scalar t) const {
    const Scalar s = (t - t0) / dt;
    if (s <= 0) return state(0);
    const auto m = steps();
    if (s >= static_cast<Scalar>(m)) return state(m);
    const auto j = static_cast<Eigen::Index>(std::floor(s));
    const Scalar frac = s - static_cast<Scalar>(j);
    VecX<Scalar> c = (1 - frac) * states.col(j) + frac * states.col(j + 1);
    return StateVec<Scalar>(std::move(c), metric_weights);
  }

  void validate() const {
    if (dt <= 0) throw config_error("Trajectory: dt must be positive");
    if (states.cols() < 1) throw config_error("Trajectory: needs at least one state");
    if (metric_weights.size() != states.rows())
      throw config_error("Trajectory: weight length must match state dimension");
    if (selection.cols() > 0 &&
        (selection.cols() != states.cols() - 1 || selection.rows() != states.rows()))
      throw config_error("Trajectory: selection must have one column per step");
  }
};

/// Largest node-wise metric distance between two trajectories on the shared
/// grid prefix [0, j_end] (defaults to the full shared range).
template <typename Scalar>
Scalar sup_distance(const Trajectory<Scalar>& a, const Trajectory<Scalar>& b,
                    Eigen::Index j_end = -1) {
  if (a.dim() != b.dim()) throw config_error("sup_distance: dimension mismatch");
  const Eigen::Index shared = std::min(a.steps(), b.steps());
  const Eigen::Index last = (j_end < 0) ? shared : std::min(j_end, shared);
  Scalar best = 0;
  for (Eigen::Index j = 0; j <= last; ++j) {
    const Scalar d =
        weighted_norm<Scalar>(a.metric_weights, VecX<Scalar>(a.states.col(j) - b.states.col(j)));
    best = std::max(best, d);
  }
  return best;
}

/// The solution sheaf from one origin: every member starts at `origin` and is
/// residual-valid for the generating model.  Regeneration with the same seed
/// reproduces the bundle bit for bit.
template <typename Scalar>
struct Bundle {
  StateVec<Scalar> origin;
  std::vector<Trajectory<Scalar>> members;
  std::uint64_t seed = 0;
};

}  // namespace isoblock
