#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "isoblock/core/state.hpp"

namespace isoblock {

enum class RegionKind { Box, Ball };

/// Axis-aligned box or metric ball, with a membership tolerance that defines
/// the boundary band: strict interior means signed_distance < -membership_tol,
/// the boundary band is |signed_distance| <= membership_tol.
///
/// Signed distances are measured in the weighted-l2 metric carried by the
/// center state, so a Ball is a genuine metric ball and Box faces are scaled
/// by sqrt(w_i) along each axis.
template <typename Scalar>
struct RegionSpec {
  RegionKind kind = RegionKind::Box;
  StateVec<Scalar> center;
  VecX<Scalar> radii;  ///< per-axis half-widths (Box) or radii[0] (Ball)
  Scalar membership_tol = Scalar(1e-9);

  void validate() const {
    if (kind == RegionKind::Ball) {
      if (radii.size() < 1 || radii[0] <= Scalar(0))
        throw config_error("RegionSpec: ball radius must be positive");
    } else {
      if (radii.size() != center.dim())
        throw config_error("RegionSpec: box needs one half-width per axis");
      if ((radii.array() <= Scalar(0)).any())
        throw config_error("RegionSpec: box half-widths must be positive");
    }
    if (membership_tol < Scalar(0))
      throw config_error("RegionSpec: membership_tol must be nonnegative");
  }

  /// Negative inside, positive outside, zero on the boundary.
  Scalar signed_distance(const StateVec<Scalar>& x) const {
    if (x.dim() != center.dim())
      throw config_error("RegionSpec: dimension mismatch");
    if (kind == RegionKind::Ball) return distance(x, center) - radii[0];
    // Box: per-axis gap in metric units.
    Scalar outside = 0;
    Scalar inside = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < x.dim(); ++i) {
      const Scalar s = std::sqrt(x.metric_weights[i]);
      const Scalar gap = (std::abs(x.coords[i] - center.coords[i]) - radii[i]) * s;
      if (gap > 0) outside += gap * gap;
      inside = std::min(inside, -gap);
    }
    if (outside > 0) return std::sqrt(outside);
    return -inside;
  }

  bool contains_interior(const StateVec<Scalar>& x) const {
    return signed_distance(x) < -membership_tol;
  }
  bool contains_closed(const StateVec<Scalar>& x) const {
    return signed_distance(x) <= membership_tol;
  }
  bool on_boundary_band(const StateVec<Scalar>& x) const {
    return std::abs(signed_distance(x)) <= membership_tol;
  }
};

/// A region known only through samples: `members` were found inside, and
/// `non_members` outside, on a common grid of resolution `cell_radius`
/// (metric half-diagonal of one cell).  Membership is decided by a
/// nearest-sample classifier, optionally intersected with an analytic
/// envelope.  Reliable at grid resolution; intended for low-dimensional
/// sweeps or for contracting neighborhoods where exit events stay far from
/// the sampled shell.
template <typename Scalar>
struct SampledRegion {
  std::vector<StateVec<Scalar>> members;
  std::vector<StateVec<Scalar>> non_members;
  Scalar cell_radius = 0;
  /// Analytic envelope (the region is known to lie inside all of these).
  std::vector<RegionSpec<Scalar>> envelope;

  Scalar dist_to_members(const StateVec<Scalar>& x) const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& p : members) best = std::min(best, distance(x, p));
    return best;
  }
  Scalar dist_to_non_members(const StateVec<Scalar>& x) const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& p : non_members) best = std::min(best, distance(x, p));
    return best;
  }

  bool inside(const StateVec<Scalar>& x, bool open_variant) const {
    for (const auto& env : envelope) {
      if (open_variant ? !env.contains_interior(x) : !env.contains_closed(x)) return false;
    }
    const Scalar dm = dist_to_members(x);
    const Scalar dn = dist_to_non_members(x);
    // Open variant: leave as soon as a complement sample is at least as
    // close; closed variant keeps ties.
    return open_variant ? (dm < dn) : (dm <= dn);
  }

  /// d(x, complement): capped by the analytic envelope's boundary and by the
  /// nearest known complement sample pulled in by the cell radius — the true
  /// boundary lies between the member and non-member shells, so the raw
  /// nearest-sample distance systematically overshoots by up to one cell.
  Scalar dist_to_complement(const StateVec<Scalar>& x) const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& env : envelope) {
      const Scalar sd = env.signed_distance(x);
      best = std::min(best, std::max(Scalar(0), -sd));
    }
    if (!non_members.empty())
      best = std::min(best, std::max(Scalar(0), dist_to_non_members(x) - cell_radius));
    return best;
  }
};

/// Type-erased region view used by exit times and the sublevel functionals,
/// so analytic and sampled regions flow through the same estimators.
template <typename Scalar>
struct RegionOracle {
  /// Membership; `open_variant` selects the strict interior.
  std::function<bool(const StateVec<Scalar>&, bool open_variant)> inside;
  /// d(x, complement of the region); 0 outside.
  std::function<Scalar(const StateVec<Scalar>&)> dist_to_complement;

  static RegionOracle from_spec(RegionSpec<Scalar> spec) {
    spec.validate();
    RegionOracle o;
    o.inside = [spec](const StateVec<Scalar>& x, bool open_variant) {
      return open_variant ? spec.contains_interior(x) : spec.contains_closed(x);
    };
    o.dist_to_complement = [spec](const StateVec<Scalar>& x) {
      return std::max(Scalar(0), -spec.signed_distance(x));
    };
    return o;
  }

  static RegionOracle from_sampled(SampledRegion<Scalar> region) {
    RegionOracle o;
    auto shared = std::make_shared<SampledRegion<Scalar>>(std::move(region));
    o.inside = [shared](const StateVec<Scalar>& x, bool open_variant) {
      return shared->inside(x, open_variant);
    };
    o.dist_to_complement = [shared](const StateVec<Scalar>& x) {
      return shared->dist_to_complement(x);
    };
    return o;
  }
};

}  // namespace isoblock
