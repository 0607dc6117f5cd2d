#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "isoblock/core/generator.hpp"
#include "isoblock/core/region.hpp"

namespace isoblock {

struct CheckResult {
  bool passed = false;
  std::string detail;
};

/// Finite-sample diagnostics of the solution-system axioms: existence of
/// members, translation of tails, concatenation at a shared state, and a
/// compactness surrogate (uniform Cauchy chain toward the last sample's
/// bundle).  All verdicts are sample-resolution evidence, not proofs; the
/// notes record the caveats.
template <typename Scalar>
struct AxiomReport {
  CheckResult existence;      ///< bundles nonempty, anchored, residual-valid
  CheckResult translation;    ///< shifted tails pass the one-step residual test
  CheckResult concatenation;  ///< spliced members pass the residual test
  CheckResult compactness;    ///< uniform-Cauchy chain within tolerance
  int sample_count = 0;
  Scalar horizon = 0;
  std::vector<std::string> notes;

  bool all_passed() const {
    return existence.passed && translation.passed && concatenation.passed && compactness.passed;
  }
};

namespace detail {

template <typename Scalar>
bool residual_valid(const BundleGenerator<Scalar>& gen, const Trajectory<Scalar>& traj,
                    Scalar* worst = nullptr) {
  Scalar w = 0;
  for (Eigen::Index j = 0; j < traj.steps(); ++j) {
    VecX<Scalar> h;
    const VecX<Scalar>* hp = nullptr;
    if (traj.has_selection()) {
      h = traj.selection.col(j);
      hp = &h;
    }
    const Scalar r = gen.step_residual(traj.state(j), traj.state(j + 1), hp, traj.dt);
    w = std::max(w, r);
  }
  if (worst) *worst = w;
  return w <= gen.residual_tol;
}

}  // namespace detail

template <typename Scalar>
AxiomReport<Scalar> check_axioms(const BundleGenerator<Scalar>& gen,
                                 const std::vector<StateVec<Scalar>>& samples, Scalar horizon,
                                 Scalar dt, Scalar k4_tol = Scalar(0.05)) {
  if (samples.size() < 2) throw config_error("check_axioms: needs at least two sample points");
  AxiomReport<Scalar> report;
  report.sample_count = static_cast<int>(samples.size());
  report.horizon = horizon;

  std::vector<Bundle<Scalar>> bundles;
  bundles.reserve(samples.size());
  for (const auto& x : samples) bundles.push_back(gen.make_bundle(x, horizon, dt));

  // --- existence: nonempty bundles of anchored, residual-valid members.
  {
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t i = 0; i < bundles.size() && ok; ++i) {
      const auto& b = bundles[i];
      if (b.members.empty()) {
        ok = false;
        detail << "empty bundle at sample " << i;
        break;
      }
      for (const auto& member : b.members) {
        if (distance(member.state(0), samples[i]) > Scalar(1e-9)) {
          ok = false;
          detail << "member not anchored at sample " << i;
          break;
        }
        Scalar worst = 0;
        if (!detail::residual_valid(gen, member, &worst)) {
          ok = false;
          detail << "residual " << worst << " above tolerance at sample " << i;
          break;
        }
      }
    }
    if (ok) detail << "all bundles nonempty, anchored, residual-valid";
    report.existence = {ok, detail.str()};
  }

  // --- translation: tails of members, shifted to start at phi(tau), still
  // pass the one-step residual test from their new anchor.
  {
    bool ok = report.existence.passed;
    std::ostringstream detail;
    if (!ok) {
      detail << "skipped (existence failed)";
    } else {
      for (std::size_t i = 0; i < bundles.size() && ok; ++i) {
        for (const auto& member : bundles[i].members) {
          const Eigen::Index split = member.steps() / 2;
          for (Eigen::Index j = split; j < member.steps() && ok; ++j) {
            VecX<Scalar> h;
            const VecX<Scalar>* hp = nullptr;
            if (member.has_selection()) {
              h = member.selection.col(j);
              hp = &h;
            }
            if (gen.step_residual(member.state(j), member.state(j + 1), hp, member.dt) >
                gen.residual_tol) {
              ok = false;
              detail << "shifted tail fails the residual test at sample " << i;
            }
          }
        }
      }
      if (ok) detail << "shifted tails residual-valid from their new anchors";
    }
    report.translation = {ok, detail.str()};
  }

  // --- concatenation: splice the head of one member with a member launched
  // from the junction state and re-run the residual test across the splice.
  {
    bool ok = report.existence.passed;
    std::ostringstream detail;
    if (!ok) {
      detail << "skipped (existence failed)";
    } else {
      int spliced = 0;
      for (std::size_t i = 0; i < bundles.size() && ok; ++i) {
        const auto& head = bundles[i].members.front();
        const Eigen::Index split = std::max<Eigen::Index>(1, head.steps() / 2);
        const StateVec<Scalar> junction = head.state(split);
        Bundle<Scalar> onward = gen.make_bundle(junction, horizon / 2, dt);
        if (onward.members.empty()) {
          ok = false;
          detail << "no continuation bundle at the junction of sample " << i;
          break;
        }
        for (const auto& tail : onward.members) {
          // Junction step: from head(split) into tail(1) with tail's record.
          VecX<Scalar> h;
          const VecX<Scalar>* hp = nullptr;
          if (tail.has_selection()) {
            h = tail.selection.col(0);
            hp = &h;
          }
          if (gen.step_residual(head.state(split), tail.state(1), hp, dt) > gen.residual_tol) {
            ok = false;
            detail << "splice at sample " << i << " fails the junction residual test";
            break;
          }
          ++spliced;
        }
      }
      if (ok) detail << spliced << " splices residual-valid across the junction";
    }
    report.concatenation = {ok, detail.str()};
  }

  // --- compactness surrogate: treat the samples as an ordered approach and
  // look for a member of the last bundle that earlier bundles approximate
  // uniformly on [0, horizon], with nearly monotone gaps.
  {
    bool ok = false;
    std::ostringstream detail;
    if (!report.existence.passed) {
      detail << "skipped (existence failed)";
    } else {
      const auto& last = bundles.back();
      Scalar best_final = std::numeric_limits<Scalar>::infinity();
      for (const auto& limit_member : last.members) {
        std::vector<Scalar> gaps;
        for (std::size_t i = 0; i + 1 < bundles.size(); ++i) {
          Scalar gap = std::numeric_limits<Scalar>::infinity();
          for (const auto& member : bundles[i].members)
            gap = std::min(gap, sup_distance(member, limit_member));
          gaps.push_back(gap);
        }
        int violations = 0;
        for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
          if (gaps[i + 1] > gaps[i] * Scalar(1.2) + Scalar(1e-12)) ++violations;
        const bool monotone_enough = violations * 5 <= static_cast<int>(gaps.size());
        if (monotone_enough && gaps.back() <= k4_tol) {
          ok = true;
          best_final = std::min(best_final, gaps.back());
        }
      }
      if (ok)
        detail << "uniform Cauchy chain reaches gap " << best_final << " <= " << k4_tol;
      else
        detail << "no member chain stays uniformly Cauchy within " << k4_tol;
    }
    report.compactness = {ok, detail.str()};
  }

  report.notes.push_back("finite-sample diagnostic at the stated horizon and resolution");
  return report;
}

/// Tube test for lower-semicontinuous dependence near the limit point: for a
/// sequence of origins approaching x, some bundle member from each origin
/// must shadow the target member from x uniformly on the window.  The final
/// time step is excluded from the window (interpolation there reflects grid
/// truncation, not dynamics) and flagged.
template <typename Scalar>
struct K5Report {
  std::vector<Scalar> approach_distance;  ///< d(a_n, x), strictly decreasing
  std::vector<Scalar> min_sup_gap;        ///< per origin: min over members of the sup gap
  Scalar tube_tol = 0;
  Scalar window_end = 0;
  bool final_window_excluded = true;
  bool passed = false;
  std::string note;
};

template <typename Scalar>
K5Report<Scalar> check_k5(const BundleGenerator<Scalar>& gen, const StateVec<Scalar>& x,
                          const Trajectory<Scalar>& target,
                          const std::vector<StateVec<Scalar>>& approach, Scalar horizon,
                          Scalar tube_tol) {
  if (approach.empty()) throw config_error("tube test: empty approach sequence");
  if (target.steps() < 2) throw config_error("tube test: target needs at least two steps");
  if (distance(target.state(0), x) > Scalar(1e-9))
    throw config_error("tube test: target must start at the limit point");

  K5Report<Scalar> report;
  report.tube_tol = tube_tol;
  for (const auto& a : approach) report.approach_distance.push_back(distance(a, x));
  for (std::size_t i = 0; i + 1 < report.approach_distance.size(); ++i)
    if (report.approach_distance[i + 1] >= report.approach_distance[i])
      throw config_error("tube test: approach distances must decrease strictly");

  const Scalar dt = target.dt;
  const auto horizon_nodes = static_cast<Eigen::Index>(std::floor(horizon / dt + 1e-9));
  const Eigen::Index j_end = std::min(target.steps(), horizon_nodes) - 1;  // drop final window
  if (j_end < 1) throw config_error("tube test: window too short");
  report.window_end = static_cast<Scalar>(j_end) * dt;

  for (const auto& a : approach) {
    Bundle<Scalar> bundle = gen.make_bundle(a, static_cast<Scalar>(j_end) * dt, dt);
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& member : bundle.members) {
      Scalar gap = 0;
      for (Eigen::Index j = 0; j <= j_end; ++j)
        gap = std::max(gap, distance(member.state(j), target.state(j)));
      best = std::min(best, gap);
    }
    report.min_sup_gap.push_back(best);
  }
  report.passed = report.min_sup_gap.back() <= tube_tol;
  report.note = "final time step excluded from the comparison window";
  return report;
}

/// Grid points from which some bundle member stays in the region (closed
/// variant) up to the horizon.
template <typename Scalar>
PointCloudSet<Scalar> estimate_A_plus(const BundleGenerator<Scalar>& gen,
                                      const RegionOracle<Scalar>& region,
                                      const std::vector<StateVec<Scalar>>& grid, Scalar horizon,
                                      Scalar dt) {
  PointCloudSet<Scalar> cloud;
  cloud.label = CloudLabel::A_plus;
  for (const auto& x : grid) {
    if (!region.inside(x, false)) continue;
    Bundle<Scalar> bundle = gen.make_bundle(x, horizon, dt);
    for (const auto& member : bundle.members) {
      bool stays = true;
      for (Eigen::Index j = 0; j <= member.steps(); ++j) {
        if (!region.inside(member.state(j), false)) {
          stays = false;
          break;
        }
      }
      if (stays) {
        cloud.points.push_back(x);
        break;
      }
    }
  }
  return cloud;
}

/// Endpoint harvest for the backward-admissible set: members that stayed in
/// the region for the whole backward horizon contribute their endpoint state
/// phi(horizon_back) — a point with an in-region backward history of that
/// duration.  Known equilibria inside the region are appended, and the cloud
/// is thinned with the cluster tolerance.
template <typename Scalar>
PointCloudSet<Scalar> estimate_A_minus(const BundleGenerator<Scalar>& gen,
                                       const RegionOracle<Scalar>& region,
                                       const std::vector<StateVec<Scalar>>& grid,
                                       Scalar horizon_back, Scalar dt,
                                       Scalar cluster_tol = Scalar(defaults::cluster_tol)) {
  std::vector<StateVec<Scalar>> harvest;
  for (const auto& e : gen.equilibria)
    if (region.inside(e, false)) harvest.push_back(e);
  for (const auto& x : grid) {
    if (!region.inside(x, false)) continue;
    Bundle<Scalar> bundle = gen.make_bundle(x, horizon_back, dt);
    for (const auto& member : bundle.members) {
      bool stays = true;
      for (Eigen::Index j = 0; j <= member.steps(); ++j) {
        if (!region.inside(member.state(j), false)) {
          stays = false;
          break;
        }
      }
      if (stays) harvest.push_back(member.last_state());
    }
  }
  PointCloudSet<Scalar> cloud;
  cloud.label = CloudLabel::A_minus;
  cloud.points = cluster_points(harvest, cluster_tol);
  return cloud;
}

/// Cluster representatives of the trajectory's tail (at least 10 samples).
template <typename Scalar>
PointCloudSet<Scalar> omega_limit(const Trajectory<Scalar>& traj, Scalar tail_fraction,
                                  Scalar cluster_tol = Scalar(defaults::cluster_tol)) {
  if (tail_fraction <= 0 || tail_fraction > 1)
    throw config_error("omega limit: tail fraction must be in (0, 1]");
  const Eigen::Index m = traj.steps();
  const auto start = static_cast<Eigen::Index>(
      std::ceil(static_cast<double>(m) * (1.0 - static_cast<double>(tail_fraction))));
  if (m - start + 1 < 10)
    throw config_error("omega limit: tail must contain at least 10 samples");
  std::vector<StateVec<Scalar>> tail;
  tail.reserve(static_cast<std::size_t>(m - start + 1));
  for (Eigen::Index j = start; j <= m; ++j) tail.push_back(traj.state(j));
  PointCloudSet<Scalar> cloud;
  cloud.label = CloudLabel::K_approx;
  cloud.points = cluster_points(tail, cluster_tol);
  return cloud;
}

template <typename Scalar>
struct InvarianceReport {
  bool invariant = false;
  std::vector<StateVec<Scalar>> failures;  ///< grid points with no staying member
  Scalar horizon = 0;
};

/// Sample-resolution weak positive invariance: every grid point must launch
/// at least one member whose whole sampled orbit stays in the set.  Verdicts
/// are specific to the horizon (a set can hold orbits for a while and leak
/// later).
template <typename Scalar>
InvarianceReport<Scalar> is_weakly_positively_invariant(
    const BundleGenerator<Scalar>& gen,
    const std::function<bool(const StateVec<Scalar>&)>& in_set,
    const std::vector<StateVec<Scalar>>& grid, Scalar horizon, Scalar dt) {
  InvarianceReport<Scalar> report;
  report.horizon = horizon;
  for (const auto& x : grid) {
    if (!in_set(x)) continue;
    Bundle<Scalar> bundle = gen.make_bundle(x, horizon, dt);
    bool some_member_stays = false;
    for (const auto& member : bundle.members) {
      bool stays = true;
      for (Eigen::Index j = 0; j <= member.steps(); ++j) {
        if (!in_set(member.state(j))) {
          stays = false;
          break;
        }
      }
      if (stays) {
        some_member_stays = true;
        break;
      }
    }
    if (!some_member_stays) report.failures.push_back(x);
  }
  report.invariant = report.failures.empty();
  return report;
}

}  // namespace isoblock
