#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "isoblock/core/generator.hpp"
#include "isoblock/core/region.hpp"

namespace isoblock {

template <typename Scalar>
struct ExitTime {
  Scalar time = 0;
  bool truncated = false;  ///< never left within the sampled duration
};

enum class RegionVariant { Open, Closed };

/// First time the trajectory leaves the region: the first grid node outside,
/// refined by bisection on the linear interpolant down to a fraction of a
/// step.  Open variant measures exit from the strict interior (a boundary
/// start exits at 0); closed variant from the closed region.  Starting
/// outside the closed region is an error.
template <typename Scalar>
ExitTime<Scalar> exit_time(const Trajectory<Scalar>& traj, const RegionOracle<Scalar>& region,
                           RegionVariant variant,
                           Scalar refine_frac = Scalar(defaults::exit_refine_frac)) {
  const bool open_variant = (variant == RegionVariant::Open);
  if (!region.inside(traj.state(0), false))
    throw config_error("exit time: trajectory starts outside the region");
  if (open_variant && !region.inside(traj.state(0), true)) return {Scalar(0), false};

  for (Eigen::Index j = 1; j <= traj.steps(); ++j) {
    if (region.inside(traj.state(j), open_variant)) continue;
    Scalar lo = traj.time(j - 1);
    Scalar hi = traj.time(j);
    const Scalar width_target = traj.dt * refine_frac;
    while (hi - lo > width_target) {
      const Scalar mid = (lo + hi) / 2;
      if (region.inside(traj.state_at(mid), open_variant))
        lo = mid;
      else
        hi = mid;
    }
    return {(lo + hi) / 2, false};
  }
  return {traj.duration(), true};
}

/// Golden-section refinement of a scalar objective on [lo, hi] (fixed
/// iteration count, deterministic).  Returns (argmin, min).
template <typename Scalar, typename Fn>
std::pair<Scalar, Scalar> golden_minimize(Fn&& fn, Scalar lo, Scalar hi, int iterations = 40) {
  const Scalar inv_phi = Scalar(0.6180339887498948482);
  Scalar a = lo, b = hi;
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = fn(c), fd = fn(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

/// The ingredients of the sublevel functionals: the candidate invariant set
/// K (as a cloud), the backward-admissible cloud inside N, the ambient
/// region N whose interior is the working open set U, and the neighborhood O
/// of K on which tube dependence is trusted.
template <typename Scalar>
struct BlockFunctionals {
  PointCloudSet<Scalar> K_cloud;
  PointCloudSet<Scalar> A_minus_cloud;
  RegionOracle<Scalar> region_N;
  RegionOracle<Scalar> region_O;

  /// Time weight 2 - 1/(1+t): equals 1 at t = 0 and increases to 2.
  static Scalar alpha(Scalar t) { return Scalar(2) - Scalar(1) / (Scalar(1) + t); }

  void validate() const {
    if (K_cloud.empty()) throw config_error("block functionals: K cloud is empty");
    if (!region_N.inside || !region_N.dist_to_complement || !region_O.inside)
      throw config_error("block functionals: region oracles missing");
  }

  /// Normalized proximity to K relative to N: d(x,K) / (d(x,K) + d(x, X\N)).
  /// Zero exactly on K, approaching 1 toward the boundary of N.  Defined for
  /// x in the closed region N.
  Scalar D(const StateVec<Scalar>& x) const {
    if (!region_N.inside(x, false))
      throw config_error("proximity functional: x lies outside N");
    const Scalar dK = distance(x, K_cloud);
    if (dK <= Scalar(0)) return Scalar(0);
    const Scalar dC = region_N.dist_to_complement(x);
    return dK / (dK + dC);
  }

  /// Capped distance to the backward-admissible cloud: min(1, d(x, A-)).
  Scalar F(const StateVec<Scalar>& x) const {
    if (A_minus_cloud.empty())
      throw config_error("exit-proximity functional: backward cloud is empty");
    return std::min(Scalar(1), distance(x, A_minus_cloud));
  }
};

/// Bundle-based estimate of one of the sublevel functionals.
template <typename Scalar>
struct GEstimate {
  Scalar value = 0;
  int bundle_size = 0;
  Scalar horizon = 0;
  Scalar arg_time = 0;     ///< where the winning member attains the value
  bool truncated = false;  ///< some member never left within the horizon
};

/// inf over members, inf over the member's time window [0, t+), of
/// D(phi(t)) / (1 + t), where t+ is the exit from the interior of N.  Grid
/// scan plus golden-section refinement on the interpolated states.
/// Precondition: x lies in the interior of N and in O.
template <typename Scalar>
GEstimate<Scalar> estimate_g_plus(const BundleGenerator<Scalar>& gen,
                                  const BlockFunctionals<Scalar>& f, const StateVec<Scalar>& x,
                                  Scalar T, Scalar dt) {
  f.validate();
  if (!f.region_N.inside(x, true) || !f.region_O.inside(x, true))
    throw config_error("g+ estimate: x must lie in the open working region");
  Bundle<Scalar> bundle = gen.make_bundle(x, T, dt);
  if (bundle.members.empty()) throw numeric_error("g+ estimate: empty bundle");

  GEstimate<Scalar> est;
  est.bundle_size = static_cast<int>(bundle.members.size());
  est.horizon = T;
  est.value = std::numeric_limits<Scalar>::infinity();

  for (const auto& member : bundle.members) {
    const ExitTime<Scalar> exit = exit_time(member, f.region_N, RegionVariant::Open);
    est.truncated = est.truncated || exit.truncated;
    const Scalar window_end =
        exit.truncated ? member.duration() : exit.time - member.dt * Scalar(1e-6);
    auto objective = [&](Scalar t) {
      return f.D(member.state_at(t)) / (Scalar(1) + t);
    };
    // Grid argmin over nodes strictly inside the window.
    Scalar best_t = 0;
    Scalar best_v = objective(Scalar(0));
    for (Eigen::Index j = 1; j <= member.steps(); ++j) {
      const Scalar t = member.time(j);
      if (t > window_end) break;
      const Scalar v = objective(t);
      if (v < best_v) {
        best_v = v;
        best_t = t;
      }
    }
    const Scalar lo = std::max(Scalar(0), best_t - dt);
    const Scalar hi = std::min(window_end, best_t + dt);
    if (hi > lo) {
      auto [t_ref, v_ref] = golden_minimize(objective, lo, hi);
      if (v_ref < best_v) {
        best_v = v_ref;
        best_t = t_ref;
      }
    }
    if (best_v < est.value) {
      est.value = best_v;
      est.arg_time = best_t;
    }
  }
  return est;
}

/// sup over members, sup over the member's closed time window [0, s+], of
/// alpha(t) * F(phi(t)), where s+ is the exit from the closed region N (the
/// whole sampled duration if the member never leaves, flagged truncated).
/// Precondition: x lies in the closed region N.
template <typename Scalar>
GEstimate<Scalar> estimate_g_minus(const BundleGenerator<Scalar>& gen,
                                   const BlockFunctionals<Scalar>& f, const StateVec<Scalar>& x,
                                   Scalar T, Scalar dt) {
  f.validate();
  if (!f.region_N.inside(x, false))
    throw config_error("g- estimate: x must lie in the closed region N");
  Bundle<Scalar> bundle = gen.make_bundle(x, T, dt);
  if (bundle.members.empty()) throw numeric_error("g- estimate: empty bundle");

  GEstimate<Scalar> est;
  est.bundle_size = static_cast<int>(bundle.members.size());
  est.horizon = T;
  est.value = 0;
  est.arg_time = 0;

  bool first = true;
  for (const auto& member : bundle.members) {
    const ExitTime<Scalar> exit = exit_time(member, f.region_N, RegionVariant::Closed);
    est.truncated = est.truncated || exit.truncated;
    const Scalar window_end = exit.truncated ? member.duration() : exit.time;
    auto objective = [&](Scalar t) {
      return BlockFunctionals<Scalar>::alpha(t) * f.F(member.state_at(t));
    };
    Scalar best_t = 0;
    Scalar best_v = objective(Scalar(0));
    for (Eigen::Index j = 1; j <= member.steps(); ++j) {
      const Scalar t = member.time(j);
      if (t > window_end) break;
      const Scalar v = objective(t);
      if (v > best_v) {
        best_v = v;
        best_t = t;
      }
    }
    {  // the exit state itself belongs to the closed window
      const Scalar v = objective(window_end);
      if (v > best_v) {
        best_v = v;
        best_t = window_end;
      }
    }
    const Scalar lo = std::max(Scalar(0), best_t - dt);
    const Scalar hi = std::min(window_end, best_t + dt);
    if (hi > lo) {
      auto neg = [&](Scalar t) { return -objective(t); };
      auto [t_ref, v_ref] = golden_minimize(neg, lo, hi);
      if (-v_ref > best_v) {
        best_v = -v_ref;
        best_t = t_ref;
      }
    }
    if (first || best_v > est.value) {
      est.value = best_v;
      est.arg_time = best_t;
      first = false;
    }
  }
  return est;
}

}  // namespace isoblock
