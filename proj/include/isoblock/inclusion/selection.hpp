#pragma once

#include <cstdint>
#include <string>

#include "isoblock/core/interval.hpp"
#include "isoblock/core/rng.hpp"
#include "isoblock/core/state.hpp"

namespace isoblock {

enum class SelectionKind {
  Maximal,                  ///< componentwise sup of the value set
  Minimal,                  ///< componentwise inf of the value set
  Zero,                     ///< 0 clamped into the value set
  RandomPiecewiseConstant,  ///< redraw uniformly every `dwell` time units
  DelayedDeparture,         ///< Zero until t = delay, then extremal of `depart_sign`
};

inline const char* to_string(SelectionKind k) {
  switch (k) {
    case SelectionKind::Maximal: return "maximal";
    case SelectionKind::Minimal: return "minimal";
    case SelectionKind::Zero: return "zero";
    case SelectionKind::RandomPiecewiseConstant: return "random";
    case SelectionKind::DelayedDeparture: return "delayed";
  }
  return "?";
}

/// Recipe for picking one admissible selection value per step.  Strategies
/// are deterministic given their seed.
struct SelectionStrategy {
  SelectionKind kind = SelectionKind::Maximal;
  std::uint64_t seed = 0;
  double dwell = 0.05;    ///< RandomPiecewiseConstant: hold time between redraws
  double delay = 0.0;     ///< DelayedDeparture: switch time
  int depart_sign = +1;   ///< DelayedDeparture: +1 -> Maximal side, -1 -> Minimal

  static SelectionStrategy maximal() { return {SelectionKind::Maximal, 0, 0.05, 0.0, +1}; }
  static SelectionStrategy minimal() { return {SelectionKind::Minimal, 0, 0.05, 0.0, -1}; }
  static SelectionStrategy zero() { return {SelectionKind::Zero, 0, 0.05, 0.0, +1}; }
  static SelectionStrategy random(std::uint64_t seed, double dwell = 0.05) {
    return {SelectionKind::RandomPiecewiseConstant, seed, dwell, 0.0, +1};
  }
  static SelectionStrategy delayed(double delay, int sign) {
    return {SelectionKind::DelayedDeparture, 0, 0.05, delay, sign};
  }
};

/// The value set of the sign nonlinearity: {-1} below zero, [-1, 1] at zero,
/// {+1} above.
template <typename Scalar>
Interval<Scalar> heaviside_interval(Scalar u) {
  if (u < Scalar(0)) return {Scalar(-1), Scalar(-1)};
  if (u > Scalar(0)) return {Scalar(1), Scalar(1)};
  return {Scalar(-1), Scalar(1)};
}

/// Componentwise sign value set of a state.
template <typename Scalar>
IntervalBox<Scalar> heaviside_selection(const StateVec<Scalar>& u) {
  IntervalBox<Scalar> box(static_cast<std::size_t>(u.dim()));
  for (Eigen::Index i = 0; i < u.dim(); ++i)
    box[static_cast<std::size_t>(i)] = heaviside_interval(u.coords[i]);
  return box;
}

/// The eps-regularized envelope of the sign nonlinearity:
///   u <= -eps : {-1}
///   -eps..0   : [-1, 2u/eps + 1]
///   0..eps    : [2u/eps - 1, 1]
///   u >= eps  : {+1}
/// It contains the sign value set for every u, and the two coincide outside
/// the band |u| < eps.
template <typename Scalar>
Interval<Scalar> regularized_interval(Scalar u, Scalar eps) {
  if (eps <= Scalar(0)) throw config_error("regularized selection: eps must be positive");
  if (u <= -eps) return {Scalar(-1), Scalar(-1)};
  if (u >= eps) return {Scalar(1), Scalar(1)};
  if (u <= Scalar(0)) return {Scalar(-1), Scalar(2) * u / eps + Scalar(1)};
  return {Scalar(2) * u / eps - Scalar(1), Scalar(1)};
}

template <typename Scalar>
IntervalBox<Scalar> regularized_selection(const StateVec<Scalar>& u, Scalar eps) {
  IntervalBox<Scalar> box(static_cast<std::size_t>(u.dim()));
  for (Eigen::Index i = 0; i < u.dim(); ++i)
    box[static_cast<std::size_t>(i)] = regularized_interval(u.coords[i], eps);
  return box;
}

/// Stateful per-trajectory selector.  RandomPiecewiseConstant draws a target
/// value per component at every dwell boundary and clamps the held target
/// into the current value set each step, so stored selections are always
/// admissible at the state where they are applied.
template <typename Scalar>
class SelectionEngine {
 public:
  explicit SelectionEngine(const SelectionStrategy& strategy)
      : strategy_(strategy), rng_(strategy.seed) {}

  VecX<Scalar> pick(const IntervalBox<Scalar>& box, Scalar t) {
    const auto n = static_cast<Eigen::Index>(box.size());
    VecX<Scalar> h(n);
    switch (strategy_.kind) {
      case SelectionKind::Maximal:
        for (Eigen::Index i = 0; i < n; ++i) h[i] = box[static_cast<std::size_t>(i)].hi;
        break;
      case SelectionKind::Minimal:
        for (Eigen::Index i = 0; i < n; ++i) h[i] = box[static_cast<std::size_t>(i)].lo;
        break;
      case SelectionKind::Zero:
        for (Eigen::Index i = 0; i < n; ++i) h[i] = box[static_cast<std::size_t>(i)].clamp(0);
        break;
      case SelectionKind::DelayedDeparture:
        for (Eigen::Index i = 0; i < n; ++i) {
          const auto& I = box[static_cast<std::size_t>(i)];
          if (t < static_cast<Scalar>(strategy_.delay))
            h[i] = I.clamp(0);
          else
            h[i] = strategy_.depart_sign > 0 ? I.hi : I.lo;
        }
        break;
      case SelectionKind::RandomPiecewiseConstant: {
        if (!held_initialized_ || t >= next_resample_ - Scalar(1e-12)) {
          if (held_.size() != n) held_.resize(n);
          for (Eigen::Index i = 0; i < n; ++i) {
            const auto& I = box[static_cast<std::size_t>(i)];
            held_[i] = static_cast<Scalar>(rng_.uniform(static_cast<double>(I.lo),
                                                        static_cast<double>(I.hi)));
          }
          held_initialized_ = true;
          next_resample_ = t + static_cast<Scalar>(strategy_.dwell);
        }
        for (Eigen::Index i = 0; i < n; ++i) h[i] = box[static_cast<std::size_t>(i)].clamp(held_[i]);
        break;
      }
    }
    return h;
  }

 private:
  SelectionStrategy strategy_;
  Rng rng_;
  VecX<Scalar> held_;
  bool held_initialized_ = false;
  Scalar next_resample_ = 0;
};

}  // namespace isoblock
