#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace isoblock {

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Bad or inconsistent user-supplied configuration / arguments.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation ran but failed numerically (instability, residual blow-up,
/// verification failure).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The neighborhood-selection stage of the block pipeline could not produce a
/// usable sublevel set.
struct block_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A verification suite was requested for a model it does not apply to.
struct suite_mismatch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace defaults {
/// Accepted one-step defect for a trajectory to count as a discrete solution.
inline constexpr double residual_tol = 1e-8;
/// Members of a bundle closer than this in sup-distance are merged.
inline constexpr double dedup_tol = 1e-9;
/// Cluster radius used when merging harvested / tail point clouds.
inline constexpr double cluster_tol = 1e-3;
/// Below this value the strict-monotonicity clauses of the sublevel
/// functionals are not enforced (the zero set is reached up to noise).
inline constexpr double strictness_floor = 1e-4;
/// Slack allowed on monotonicity comparisons of bundle-based estimates.
inline constexpr double monotonicity_slack = 1e-3;
/// Floor of the boundary-band half width used when labeling block samples.
inline constexpr double band_floor = 1e-3;
/// Exit times are refined by bisection down to this fraction of a time step.
inline constexpr double exit_refine_frac = 0.01;
/// Duration of backward-harvest runs used to approximate backward-admissible
/// sets.
inline constexpr double horizon_back = 10.0;
}  // namespace defaults

}  // namespace isoblock
