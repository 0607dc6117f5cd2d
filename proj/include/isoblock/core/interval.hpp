#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "isoblock/core/common.hpp"

namespace isoblock {

/// Closed interval [lo, hi].  Degenerate (lo == hi) intervals are singletons;
/// they are how single-valued right-hand sides travel through the
/// differential-inclusion machinery.
template <typename Scalar>
struct Interval {
  Scalar lo{0};
  Scalar hi{0};

  Scalar width() const { return hi - lo; }
  bool contains(Scalar x, Scalar tol = 0) const { return x >= lo - tol && x <= hi + tol; }
  Scalar clamp(Scalar x) const { return std::min(hi, std::max(lo, x)); }
  /// Distance from a point to the interval (0 inside).
  Scalar dist(Scalar x) const { return std::max({lo - x, x - hi, Scalar(0)}); }
};

/// A product of per-component intervals: the value set of a selection map at
/// one state.
template <typename Scalar>
using IntervalBox = std::vector<Interval<Scalar>>;

/// Distance from a point to an interval box in the weighted-l2 metric.
template <typename Scalar>
Scalar dist_to_box(const VecX<Scalar>& x, const IntervalBox<Scalar>& box,
                   const VecX<Scalar>& weights) {
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar d = box[static_cast<std::size_t>(i)].dist(x[i]);
    acc += weights[i] * d * d;
  }
  return std::sqrt(acc);
}

/// Project a point onto an interval box (componentwise clamp).
template <typename Scalar>
VecX<Scalar> project_to_box(const VecX<Scalar>& x, const IntervalBox<Scalar>& box) {
  VecX<Scalar> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = box[static_cast<std::size_t>(i)].clamp(x[i]);
  return out;
}

/// One-sided deviation sup_{a in A} d(a, B) for intervals; attained at an
/// endpoint of A.
template <typename Scalar>
Scalar interval_deviation(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return std::max(b.dist(a.lo), b.dist(a.hi));
}

/// Hausdorff distance between two interval boxes in the weighted-l2 metric.
template <typename Scalar>
Scalar hausdorff_box(const IntervalBox<Scalar>& a, const IntervalBox<Scalar>& b,
                     const VecX<Scalar>& weights) {
  Scalar forward = 0, backward = 0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.size()); ++i) {
    const auto& ai = a[static_cast<std::size_t>(i)];
    const auto& bi = b[static_cast<std::size_t>(i)];
    const Scalar f = interval_deviation(ai, bi);
    const Scalar g = interval_deviation(bi, ai);
    forward += weights[i] * f * f;
    backward += weights[i] * g * g;
  }
  return std::sqrt(std::max(forward, backward));
}

}  // namespace isoblock
