#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "isoblock/core/common.hpp"

namespace isoblock {

/// A point of the ambient space together with the diagonal weights of the
/// weighted-l2 metric it lives in.  For PDE discretizations the weights carry
/// the quadrature (w_i = h), so distances approximate the L2 norm; finite
/// dimensional models use unit weights.
template <typename Scalar>
struct StateVec {
  VecX<Scalar> coords;
  VecX<Scalar> metric_weights;

  StateVec() = default;

  /// Unit-weight state.
  explicit StateVec(VecX<Scalar> c)
      : coords(std::move(c)), metric_weights(VecX<Scalar>::Ones(coords.size())) {}

  StateVec(VecX<Scalar> c, VecX<Scalar> w) : coords(std::move(c)), metric_weights(std::move(w)) {
    if (coords.size() != metric_weights.size())
      throw config_error("StateVec: coords and metric_weights must have equal length");
    if ((metric_weights.array() <= Scalar(0)).any())
      throw config_error("StateVec: metric weights must be strictly positive");
  }

  Eigen::Index dim() const { return coords.size(); }
};

template <typename Scalar>
bool same_metric(const StateVec<Scalar>& a, const StateVec<Scalar>& b) {
  return a.metric_weights.size() == b.metric_weights.size() &&
         (a.metric_weights.array() == b.metric_weights.array()).all();
}

/// Weighted norm sqrt(sum w_i v_i^2).
template <typename Scalar>
Scalar weighted_norm(const VecX<Scalar>& weights, const VecX<Scalar>& v) {
  return std::sqrt((weights.array() * v.array().square()).sum());
}

/// Metric distance between two states.  Defined only for matching dimension
/// and matching weights.
template <typename Scalar>
Scalar distance(const StateVec<Scalar>& a, const StateVec<Scalar>& b) {
  if (a.dim() != b.dim())
    throw config_error("distance: dimension mismatch");
  if (!same_metric(a, b))
    throw config_error("distance: metric weights mismatch");
  return weighted_norm<Scalar>(a.metric_weights, a.coords - b.coords);
}

/// Role tag for a finite point sample of an invariant-structure set.
enum class CloudLabel { K_approx, A_plus, A_minus };

inline const char* to_string(CloudLabel label) {
  switch (label) {
    case CloudLabel::K_approx: return "K_approx";
    case CloudLabel::A_plus: return "A_plus";
    case CloudLabel::A_minus: return "A_minus";
  }
  return "?";
}

/// Finite sample standing in for a set (candidate invariant set, forward- or
/// backward-admissible set).  Distances to the set are approximated by the
/// minimum over the sample.
template <typename Scalar>
struct PointCloudSet {
  std::vector<StateVec<Scalar>> points;
  CloudLabel label = CloudLabel::K_approx;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

/// min over cloud points of d(x, p).  The cloud must be nonempty.
template <typename Scalar>
Scalar distance(const StateVec<Scalar>& x, const PointCloudSet<Scalar>& cloud) {
  if (cloud.empty())
    throw config_error("distance to point cloud: cloud is empty");
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (const auto& p : cloud.points) best = std::min(best, distance(x, p));
  return best;
}

/// Greedy clustering: walk the points in order, open a new cluster whenever a
/// point is farther than `tol` from every existing representative.
/// Representatives are the first member of each cluster, so the result is
/// deterministic in the input order.
template <typename Scalar>
std::vector<StateVec<Scalar>> cluster_points(const std::vector<StateVec<Scalar>>& points,
                                             Scalar tol) {
  std::vector<StateVec<Scalar>> reps;
  for (const auto& p : points) {
    bool merged = false;
    for (const auto& r : reps) {
      if (distance(p, r) <= tol) {
        merged = true;
        break;
      }
    }
    if (!merged) reps.push_back(p);
  }
  return reps;
}

}  // namespace isoblock
