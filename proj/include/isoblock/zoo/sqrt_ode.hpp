#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "isoblock/core/generator.hpp"

namespace isoblock {

/// Branch families of the scalar square-root-growth flow x' = sqrt(|x|):
///  - Unique:   the closed-form branch through x0 != 0,
///  - Constant: the rest solution from 0,
///  - Depart:   rest until tau, then leave 0 along the sign branch.
enum class SqrtFamily { Unique, Constant, Depart };

/// Closed-form branch value at time t, exactly as the branch formulas read:
///   x0 > 0 : ( t/2 + sqrt(x0))^2
///   x0 < 0 : -(-t/2 + sqrt(-x0))^2            (negative branch)
///   Depart : 0 for t <= tau, sign*(t-tau)^2/4 after
/// Family and x0 must match: Unique needs x0 != 0, the others need x0 == 0.
template <typename Scalar>
Scalar sqrt_ode_exact(Scalar x0, SqrtFamily family, Scalar t, Scalar tau = 0, int sign = +1) {
  switch (family) {
    case SqrtFamily::Unique: {
      if (x0 == Scalar(0))
        throw config_error("sqrt flow: the branch through x0 = 0 is not unique");
      if (x0 > 0) {
        const Scalar s = t / 2 + std::sqrt(x0);
        return s * s;
      }
      const Scalar s = -t / 2 + std::sqrt(-x0);
      return -(s * s);
    }
    case SqrtFamily::Constant:
      if (x0 != Scalar(0)) throw config_error("sqrt flow: constant branch needs x0 = 0");
      return Scalar(0);
    case SqrtFamily::Depart: {
      if (x0 != Scalar(0)) throw config_error("sqrt flow: departure branch needs x0 = 0");
      if (sign != 1 && sign != -1) throw config_error("sqrt flow: sign must be +1 or -1");
      if (tau < 0) throw config_error("sqrt flow: departure time must be nonnegative");
      if (t <= tau) return Scalar(0);
      const Scalar s = t - tau;
      return static_cast<Scalar>(sign) * s * s / 4;
    }
  }
  throw config_error("sqrt flow: unknown family");
}

namespace detail {

/// Distance from `to` to the set of states reachable from `from` in one step
/// of size dt along the branch families (both continuations are admissible
/// from a negative state, and a full departure interval from zero).
template <typename Scalar>
Scalar sqrt_step_defect(Scalar from, Scalar to, Scalar dt) {
  if (from > 0) {
    const Scalar s = std::sqrt(from) + dt / 2;
    return std::abs(to - s * s);
  }
  if (from == Scalar(0)) {
    const Scalar cap = dt * dt / 4;
    return Interval<Scalar>{-cap, cap}.dist(to);
  }
  const Scalar c = std::sqrt(-from);
  const Scalar desc = -(c + dt / 2) * (c + dt / 2);
  Scalar best = std::abs(to - desc);
  if (dt < 2 * c) {
    const Scalar asc = -(c - dt / 2) * (c - dt / 2);
    best = std::min(best, std::abs(to - asc));
  } else {
    const Scalar r = dt - 2 * c;
    const Scalar cap = r * r / 4;
    best = std::min(best, Interval<Scalar>{-cap, cap}.dist(to));
  }
  return best;
}

}  // namespace detail

/// Bundle generator for the square-root-growth flow.  From x0 != 0 the
/// bundle holds the single closed-form branch; from 0 the strategies map
/// onto the departure family:
///   Maximal -> depart upward at once, Minimal -> downward at once,
///   Zero -> rest, DelayedDeparture(tau, s) -> depart at tau along s,
///   RandomPiecewiseConstant -> seeded random departure time and sign.
template <typename Scalar>
BundleGenerator<Scalar> make_sqrt_generator() {
  BundleGenerator<Scalar> gen;
  gen.id = "sqrt-growth";
  gen.single_valued = false;
  gen.equilibria.emplace_back(VecX<Scalar>::Zero(1));

  gen.make_bundle = [](const StateVec<Scalar>& x0, Scalar T, Scalar dt) {
    if (x0.dim() != 1) throw config_error("sqrt flow: dimension must be 1");
    const Eigen::Index m = step_count(T, dt);
    const Scalar v0 = x0.coords[0];
    Bundle<Scalar> bundle;
    bundle.origin = x0;

    auto sample = [&](SqrtFamily family, Scalar tau, int sign) {
      Trajectory<Scalar> traj;
      traj.t0 = 0;
      traj.dt = dt;
      traj.metric_weights = x0.metric_weights;
      traj.states.resize(1, m + 1);
      for (Eigen::Index j = 0; j <= m; ++j)
        traj.states(0, j) = sqrt_ode_exact<Scalar>(v0, family, traj.time(j), tau, sign);
      return traj;
    };

    if (v0 != Scalar(0)) {
      bundle.members.push_back(sample(SqrtFamily::Unique, 0, +1));
      bundle.seed = 0;
      return bundle;
    }
    const auto strategies = default_strategy_roster();
    std::uint64_t seed = 0;
    for (const auto& strategy : strategies) {
      Scalar tau = 0;
      int sign = +1;
      SqrtFamily family = SqrtFamily::Depart;
      switch (strategy.kind) {
        case SelectionKind::Maximal: tau = 0; sign = +1; break;
        case SelectionKind::Minimal: tau = 0; sign = -1; break;
        case SelectionKind::Zero: family = SqrtFamily::Constant; break;
        case SelectionKind::DelayedDeparture:
          tau = static_cast<Scalar>(strategy.delay);
          sign = strategy.depart_sign;
          break;
        case SelectionKind::RandomPiecewiseConstant: {
          Rng rng(strategy.seed);
          tau = static_cast<Scalar>(rng.uniform(0, static_cast<double>(T) / 2));
          sign = rng.uniform01() < 0.5 ? -1 : +1;
          seed = hash_seed(seed, strategy.seed);
          break;
        }
      }
      Trajectory<Scalar> traj = sample(family, tau, sign);
      bool duplicate = false;
      for (const auto& existing : bundle.members)
        if (sup_distance(existing, traj) <= Scalar(defaults::dedup_tol)) {
          duplicate = true;
          break;
        }
      if (!duplicate) bundle.members.push_back(std::move(traj));
    }
    bundle.seed = seed;
    return bundle;
  };

  gen.step_residual = [](const StateVec<Scalar>& from, const StateVec<Scalar>& to,
                         const VecX<Scalar>*, Scalar dt) {
    return detail::sqrt_step_defect<Scalar>(from.coords[0], to.coords[0], dt);
  };
  return gen;
}

}  // namespace isoblock
