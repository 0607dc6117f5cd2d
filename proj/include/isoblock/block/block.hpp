#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "isoblock/block/functionals.hpp"
#include "isoblock/semiflow/checks.hpp"

namespace isoblock {

/// Classification of a sample relative to the constructed block B: interior
/// sublevel points, the three boundary types, and near-boundary samples that
/// fall outside B at the working resolution.
enum class BoundaryLabel { Interior, Egress, Ingress, BounceOff, Dropped };

inline const char* to_string(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::Interior: return "interior";
    case BoundaryLabel::Egress: return "egress";
    case BoundaryLabel::Ingress: return "ingress";
    case BoundaryLabel::BounceOff: return "bounce_off";
    case BoundaryLabel::Dropped: return "dropped";
  }
  return "?";
}

template <typename Scalar>
struct BlockSample {
  StateVec<Scalar> point;
  Scalar g_plus = 0;   ///< refined-stage sublevel functional (entrance side)
  Scalar g_minus = 0;  ///< refined-stage sublevel functional (exit side)
  BoundaryLabel label = BoundaryLabel::Dropped;
  bool flagged = false;  ///< functional jumps across neighbors exceed resolution
};

/// Cached functional values on a sample set (one stage of the construction).
template <typename Scalar>
struct StageField {
  std::vector<StateVec<Scalar>> points;
  std::vector<Scalar> g_plus;
  std::vector<Scalar> g_minus;

  std::size_t size() const { return points.size(); }
};

template <typename Scalar>
struct BlockInputs {
  BlockFunctionals<Scalar> functionals;  ///< first-stage ingredients (K, A-, N, O)
  std::vector<StateVec<Scalar>> grid;    ///< sample grid covering N
  /// Analytic sets known to contain the refined neighborhood (used as the
  /// envelope of the sampled region); may be empty.
  std::vector<RegionSpec<Scalar>> envelope;
  Scalar cell_radius = 0;  ///< covering radius of the grid
  Scalar horizon = 0;      ///< bundle horizon for the functional estimates
  Scalar dt = 0;
  Scalar epsilon_init = 1;
  int max_halvings = 20;
  Scalar cluster_tol = Scalar(defaults::cluster_tol);
  Scalar band_floor = Scalar(defaults::band_floor);

  void validate() const {
    functionals.validate();
    if (grid.empty()) throw config_error("block inputs: empty grid");
    if (cell_radius <= Scalar(0)) throw config_error("block inputs: cell_radius must be positive");
    if (horizon <= Scalar(0) || dt <= Scalar(0))
      throw config_error("block inputs: horizon and dt must be positive");
    if (epsilon_init <= Scalar(0))
      throw config_error("block inputs: epsilon_init must be positive");
  }
};

template <typename Scalar>
struct EpsilonChoice {
  Scalar epsilon = 0;
  std::vector<char> member_mask;  ///< per stage-1 point: inside the sublevel set
  int attempts = 0;
};

namespace detail {

template <typename Scalar>
Scalar median_of(std::vector<Scalar> v) {
  if (v.empty()) return Scalar(0);
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  Scalar m = v[mid];
  if (v.size() % 2 == 0) {
    auto lower = std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = (m + *lower) / 2;
  }
  return m;
}

/// Indices of the k nearest other points (brute force).
template <typename Scalar>
std::vector<std::size_t> k_nearest(const std::vector<StateVec<Scalar>>& pts, std::size_t i,
                                   int k) {
  std::vector<std::pair<Scalar, std::size_t>> d;
  d.reserve(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == i) continue;
    d.emplace_back(distance(pts[i], pts[j]), j);
  }
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
  std::vector<std::size_t> idx;
  idx.reserve(kk);
  for (std::size_t j = 0; j < kk; ++j) idx.push_back(d[j].second);
  return idx;
}

/// Sampling resolution of a functional on a point cloud: per sample, the
/// largest |value difference| across its k nearest neighbors (the largest,
/// so directions in which the functional is flat cannot hide the real
/// per-step variation), summarized by the median over samples.
template <typename Scalar>
Scalar neighbor_resolution(const std::vector<StateVec<Scalar>>& points,
                           const std::vector<Scalar>& values, int k) {
  if (points.size() < 2) return Scalar(0);
  std::vector<Scalar> local;
  local.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Scalar worst = 0;
    for (std::size_t j : k_nearest(points, i, k))
      worst = std::max(worst, std::abs(values[i] - values[j]));
    local.push_back(worst);
  }
  return median_of(std::move(local));
}

}  // namespace detail

/// Threshold scan: starting from epsilon_init and halving, accept the first
/// threshold whose sublevel sample (both functionals below epsilon) still
/// covers the candidate invariant set and sits at least one cell diameter
/// away from the complements of N and O.  Coverage loss or an exhausted scan
/// means the working region cannot isolate the candidate set at this
/// resolution.
template <typename Scalar>
EpsilonChoice<Scalar> choose_epsilon(const StageField<Scalar>& stage1,
                                     const PointCloudSet<Scalar>& K_cloud,
                                     const RegionOracle<Scalar>& region_N,
                                     const RegionOracle<Scalar>& region_O, Scalar cell_radius,
                                     Scalar epsilon_init = Scalar(1), int max_halvings = 20) {
  if (stage1.size() == 0) throw block_error("threshold scan: no evaluated sample points");
  const Scalar cover_radius = Scalar(1.5) * cell_radius;
  const Scalar clearance = Scalar(2) * cell_radius;

  EpsilonChoice<Scalar> choice;
  Scalar eps = epsilon_init;
  for (int attempt = 0; attempt <= max_halvings; ++attempt, eps /= 2) {
    choice.attempts = attempt + 1;
    std::vector<char> mask(stage1.size(), 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < stage1.size(); ++i) {
      if (stage1.g_plus[i] < eps && stage1.g_minus[i] < eps) {
        mask[i] = 1;
        ++count;
      }
    }
    if (count == 0)
      throw block_error("threshold scan: sublevel sample became empty before isolating");

    // Coverage: every candidate-set point needs a sublevel sample nearby.
    bool covered = true;
    for (const auto& k : K_cloud.points) {
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (std::size_t i = 0; i < stage1.size() && best > cover_radius; ++i)
        if (mask[i]) best = std::min(best, distance(k, stage1.points[i]));
      if (best > cover_radius) {
        covered = false;
        break;
      }
    }
    if (!covered)
      throw block_error(
          "threshold scan: sublevel sample no longer covers the candidate invariant set");

    // Dilated containment: sublevel samples keep a cell diameter of clearance
    // from the complements of N and O.
    bool contained = true;
    for (std::size_t i = 0; i < stage1.size() && contained; ++i) {
      if (!mask[i]) continue;
      if (region_N.dist_to_complement(stage1.points[i]) <= clearance) contained = false;
      if (contained && region_O.dist_to_complement &&
          region_O.dist_to_complement(stage1.points[i]) <= clearance)
        contained = false;
    }
    if (contained) {
      choice.epsilon = eps;
      choice.member_mask = std::move(mask);
      return choice;
    }
  }
  throw block_error(
      "threshold scan: isolating neighborhood too tight, no admissible threshold found");
}

/// The constructed block: thresholds, resolution band, labeled samples, the
/// refined-stage functionals, and sampled membership regions for the block
/// and its interior (used by verification and point classification).
template <typename Scalar>
struct BlockResult {
  Scalar epsilon = 0;
  Scalar delta = 0;
  Scalar band = 0;
  Scalar cell_radius = 0;
  Scalar horizon = 0;
  Scalar dt = 0;

  StageField<Scalar> stage1;                 ///< first-stage values on the working grid
  std::vector<BlockSample<Scalar>> samples;  ///< labeled refined-stage samples
  BlockFunctionals<Scalar> refined;          ///< functionals w.r.t. the refined neighborhood
  SampledRegion<Scalar> region_block;        ///< sampled membership of B
  SampledRegion<Scalar> region_interior;     ///< sampled membership of int B

  int dropped = 0;
  int flagged = 0;

  int count(BoundaryLabel label) const {
    int c = 0;
    for (const auto& s : samples)
      if (s.label == label) ++c;
    return c;
  }
};

/// Two-stage construction.  Stage 1 evaluates both sublevel functionals on
/// the working grid inside int N and O and scans for an admissible threshold
/// epsilon.  Stage 2 replaces N by the sampled sublevel neighborhood, rebuilds
/// the backward-admissible cloud inside it, re-evaluates the functionals at
/// half the threshold, and labels the samples: entrance-side level in band ->
/// egress, exit-side level in band -> ingress, both -> bounce-off, both below
/// -> interior.
template <typename Scalar>
BlockResult<Scalar> build_block(const BundleGenerator<Scalar>& gen,
                                const BlockInputs<Scalar>& in) {
  in.validate();
  const auto& f1 = in.functionals;

  // ---- Stage 1: evaluate on the working grid restricted to int N and O.
  StageField<Scalar> stage1;
  std::vector<StateVec<Scalar>> excluded;  // grid points outside the working region
  for (const auto& p : in.grid) {
    if (!f1.region_N.inside(p, true) || !f1.region_O.inside(p, true)) {
      excluded.push_back(p);
      continue;
    }
    stage1.points.push_back(p);
    stage1.g_plus.push_back(estimate_g_plus(gen, f1, p, in.horizon, in.dt).value);
    stage1.g_minus.push_back(estimate_g_minus(gen, f1, p, in.horizon, in.dt).value);
  }
  if (stage1.size() == 0)
    throw block_error("block construction: no grid points inside the open working region");

  const EpsilonChoice<Scalar> choice =
      choose_epsilon(stage1, f1.K_cloud, f1.region_N, f1.region_O, in.cell_radius,
                     in.epsilon_init, in.max_halvings);
  const Scalar delta = choice.epsilon / 2;

  // ---- Stage 2: sampled refined neighborhood and its functionals.
  SampledRegion<Scalar> refined_region;
  refined_region.cell_radius = in.cell_radius;
  refined_region.envelope = in.envelope;
  for (std::size_t i = 0; i < stage1.size(); ++i) {
    if (choice.member_mask[i])
      refined_region.members.push_back(stage1.points[i]);
    else
      refined_region.non_members.push_back(stage1.points[i]);
  }
  for (const auto& p : excluded) refined_region.non_members.push_back(p);
  const RegionOracle<Scalar> refined_oracle = RegionOracle<Scalar>::from_sampled(refined_region);

  for (const auto& k : f1.K_cloud.points)
    if (!refined_oracle.inside(k, true))
      throw block_error(
          "block construction: candidate invariant set escapes the refined neighborhood");

  // Backward-admissible cloud inside the refined neighborhood: first-stage
  // points that still qualify, a fresh endpoint harvest, and equilibria.
  PointCloudSet<Scalar> refined_back;
  refined_back.label = CloudLabel::A_minus;
  for (const auto& a : f1.A_minus_cloud.points)
    if (refined_oracle.inside(a, false)) refined_back.points.push_back(a);
  {
    const PointCloudSet<Scalar> harvest = estimate_A_minus(
        gen, refined_oracle, refined_region.members, in.horizon, in.dt, in.cluster_tol);
    for (const auto& p : harvest.points) refined_back.points.push_back(p);
    refined_back.points = cluster_points(refined_back.points, in.cluster_tol);
  }
  if (refined_back.points.empty())
    throw block_error(
        "block construction: no backward-admissible states inside the refined neighborhood");

  BlockFunctionals<Scalar> f2;
  f2.K_cloud = f1.K_cloud;
  f2.A_minus_cloud = refined_back;
  f2.region_N = refined_oracle;
  f2.region_O = f1.region_O;

  // Refined-stage values on the sublevel samples.
  StageField<Scalar> stage2;
  for (const auto& p : refined_region.members) {
    if (!refined_oracle.inside(p, true) || !f2.region_O.inside(p, true)) continue;
    stage2.points.push_back(p);
    stage2.g_plus.push_back(estimate_g_plus(gen, f2, p, in.horizon, in.dt).value);
    stage2.g_minus.push_back(estimate_g_minus(gen, f2, p, in.horizon, in.dt).value);
  }
  if (stage2.size() == 0)
    throw block_error("block construction: refined neighborhood has no interior samples");

  // Resolution band: the level sets can only be located as precisely as one
  // grid step moves the sampled functional values.
  const Scalar band =
      std::max({detail::neighbor_resolution(stage2.points, stage2.g_plus, 4),
                detail::neighbor_resolution(stage2.points, stage2.g_minus, 4), in.band_floor});

  BlockResult<Scalar> result;
  result.epsilon = choice.epsilon;
  result.delta = delta;
  result.band = band;
  result.cell_radius = in.cell_radius;
  result.horizon = in.horizon;
  result.dt = in.dt;
  result.stage1 = std::move(stage1);
  result.refined = f2;

  const auto in_band = [&](Scalar g) { return std::abs(g - delta) <= band; };
  const auto below = [&](Scalar g) { return g < delta - band; };
  for (std::size_t i = 0; i < stage2.size(); ++i) {
    BlockSample<Scalar> s;
    s.point = stage2.points[i];
    s.g_plus = stage2.g_plus[i];
    s.g_minus = stage2.g_minus[i];
    const bool bp = in_band(s.g_plus), bm = in_band(s.g_minus);
    const bool lp = below(s.g_plus), lm = below(s.g_minus);
    if (bp && bm)
      s.label = BoundaryLabel::BounceOff;
    else if (bp && lm)
      s.label = BoundaryLabel::Egress;
    else if (bm && lp)
      s.label = BoundaryLabel::Ingress;
    else if (lp && lm)
      s.label = BoundaryLabel::Interior;
    else
      s.label = BoundaryLabel::Dropped;
    result.samples.push_back(std::move(s));
  }

  // Neighbor-jump flag: a boundary sample whose functional values jump by
  // more than ten bands across its nearest neighbors is under-resolved.
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    auto& s = result.samples[i];
    if (s.label != BoundaryLabel::Egress && s.label != BoundaryLabel::Ingress &&
        s.label != BoundaryLabel::BounceOff)
      continue;
    for (std::size_t j : detail::k_nearest(stage2.points, i, 4)) {
      if (std::abs(s.g_plus - result.samples[j].g_plus) > Scalar(10) * band ||
          std::abs(s.g_minus - result.samples[j].g_minus) > Scalar(10) * band) {
        s.flagged = true;
        break;
      }
    }
    if (s.flagged) ++result.flagged;
  }
  result.dropped = result.count(BoundaryLabel::Dropped);

  // Sampled membership of B (non-dropped samples) and of its interior.
  result.region_block.cell_radius = in.cell_radius;
  result.region_block.envelope = in.envelope;
  result.region_interior.cell_radius = in.cell_radius;
  result.region_interior.envelope = in.envelope;
  for (const auto& s : result.samples) {
    if (s.label == BoundaryLabel::Dropped)
      result.region_block.non_members.push_back(s.point);
    else
      result.region_block.members.push_back(s.point);
    if (s.label == BoundaryLabel::Interior)
      result.region_interior.members.push_back(s.point);
    else
      result.region_interior.non_members.push_back(s.point);
  }
  for (const auto& p : refined_region.non_members) {
    result.region_block.non_members.push_back(p);
    result.region_interior.non_members.push_back(p);
  }
  return result;
}

/// Sample-resolution verification of the constructed block.
template <typename Scalar>
struct BlockVerification {
  CheckResult labels_complete;       ///< every in-band sample carries a label
  CheckResult exit_set_closed;       ///< egress/ingress contact is mediated by bounce-off
  CheckResult monotone_along_orbits; ///< functional monotonicity along probe orbits
  CheckResult core_well_inside;      ///< candidate set sits strictly below the threshold
  CheckResult exit_times_agree;      ///< open/closed exit times coincide (no tangency)
  std::vector<std::string> failures;

  bool passed() const {
    return labels_complete.passed && exit_set_closed.passed && monotone_along_orbits.passed &&
           core_well_inside.passed && exit_times_agree.passed;
  }
};

template <typename Scalar>
BlockVerification<Scalar> verify_block(const BundleGenerator<Scalar>& gen,
                                       const BlockResult<Scalar>& block, Scalar probe_T = -1,
                                       Scalar probe_dt = -1) {
  BlockVerification<Scalar> report;
  if (probe_dt <= 0) probe_dt = block.dt;
  if (probe_T <= 0) probe_T = std::max(Scalar(20) * probe_dt, block.horizon / 4);

  // (a) Every sample with both values at or below delta + band is labeled.
  {
    int unlabeled = 0;
    for (const auto& s : block.samples) {
      if (s.g_plus <= block.delta + block.band && s.g_minus <= block.delta + block.band &&
          s.label == BoundaryLabel::Dropped)
        ++unlabeled;
    }
    std::ostringstream os;
    os << unlabeled << " in-band samples without a label";
    report.labels_complete = {unlabeled == 0, os.str()};
    if (unlabeled != 0) report.failures.push_back(report.labels_complete.detail);
  }

  // (b) Closed exit set: an ingress sample close to an egress sample must
  // have a bounce-off sample at least as close (the transition region is
  // resolved).
  {
    const Scalar contact = Scalar(2.2) * block.cell_radius;
    int violations = 0;
    for (const auto& si : block.samples) {
      if (si.label != BoundaryLabel::Ingress) continue;
      Scalar nearest_egress = std::numeric_limits<Scalar>::infinity();
      for (const auto& se : block.samples)
        if (se.label == BoundaryLabel::Egress)
          nearest_egress = std::min(nearest_egress, distance(si.point, se.point));
      if (nearest_egress > contact) continue;
      Scalar nearest_bounce = std::numeric_limits<Scalar>::infinity();
      for (const auto& sb : block.samples)
        if (sb.label == BoundaryLabel::BounceOff)
          nearest_bounce = std::min(nearest_bounce, distance(si.point, sb.point));
      if (nearest_bounce > nearest_egress + Scalar(1e-12)) ++violations;
    }
    std::ostringstream os;
    os << violations << " ingress samples touch egress without a mediating bounce-off sample";
    report.exit_set_closed = {violations == 0, os.str()};
    if (violations != 0) report.failures.push_back(report.exit_set_closed.detail);
  }

  // (c) Monotonicity along probe orbits from interior samples: the entrance
  // functional may not decrease and the exit functional may not increase
  // (within slack), with net strictness when the start value is meaningful.
  {
    const Scalar slack = Scalar(defaults::monotonicity_slack);
    const Scalar floor = Scalar(defaults::strictness_floor);
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < block.samples.size(); ++i)
      if (block.samples[i].label == BoundaryLabel::Interior) starts.push_back(i);
    const std::size_t stride = std::max<std::size_t>(1, starts.size() / 20);
    int probed = 0, violations = 0;
    for (std::size_t si = 0; si < starts.size(); si += stride) {
      const auto& start = block.samples[starts[si]].point;
      Bundle<Scalar> bundle = gen.make_bundle(start, probe_T, probe_dt);
      if (bundle.members.empty()) continue;
      const auto& member = bundle.members.front();
      std::vector<Scalar> gp, gm;
      for (int node = 0; node <= 4; ++node) {
        const Scalar t = probe_T * static_cast<Scalar>(node) / 4;
        const StateVec<Scalar> y = member.state_at(t);
        if (!block.refined.region_N.inside(y, true) || !block.refined.region_O.inside(y, true))
          break;
        gp.push_back(estimate_g_plus(gen, block.refined, y, block.horizon, block.dt).value);
        gm.push_back(estimate_g_minus(gen, block.refined, y, block.horizon, block.dt).value);
      }
      if (gp.size() < 2) continue;
      ++probed;
      bool ok = true;
      for (std::size_t k = 0; k + 1 < gp.size(); ++k) {
        if (gp[k + 1] < gp[k] - slack) ok = false;
        if (gm[k + 1] > gm[k] + slack) ok = false;
      }
      if (gp.size() >= 3) {
        if (gp.front() >= floor && gp.back() < gp.front() - slack / 10) ok = false;
        if (gm.front() >= floor && gm.back() > gm.front() + slack / 10) ok = false;
      }
      if (!ok) ++violations;
    }
    std::ostringstream os;
    os << violations << " of " << probed << " probe orbits violate functional monotonicity";
    report.monotone_along_orbits = {violations == 0 && probed > 0, os.str()};
    if (!report.monotone_along_orbits.passed)
      report.failures.push_back(report.monotone_along_orbits.detail);
  }

  // (d) The candidate invariant set sits strictly below the threshold.
  {
    bool ok = true;
    std::ostringstream os;
    for (const auto& k : block.refined.K_cloud.points) {
      if (!block.refined.region_N.inside(k, true)) {
        ok = false;
        os << "candidate-set point outside the refined neighborhood; ";
        continue;
      }
      const Scalar gp = estimate_g_plus(gen, block.refined, k, block.horizon, block.dt).value;
      const Scalar gm = estimate_g_minus(gen, block.refined, k, block.horizon, block.dt).value;
      if (gp >= block.delta - block.band || gm >= block.delta - block.band) {
        ok = false;
        os << "candidate-set point at levels (" << gp << ", " << gm << "); ";
      }
    }
    if (ok) os << "candidate set strictly below the threshold";
    report.core_well_inside = {ok, os.str()};
    if (!ok) report.failures.push_back(report.core_well_inside.detail);
  }

  // (e) Open and closed exit times from the block coincide along bundle
  // members launched at boundary samples (no sliding along the boundary).
  {
    const RegionOracle<Scalar> block_oracle =
        RegionOracle<Scalar>::from_sampled(block.region_block);
    const Scalar tol = std::max(Scalar(3) * probe_dt, Scalar(0.02) * probe_T);
    std::vector<std::size_t> boundary;
    for (std::size_t i = 0; i < block.samples.size(); ++i) {
      const auto label = block.samples[i].label;
      if (label == BoundaryLabel::Egress || label == BoundaryLabel::Ingress ||
          label == BoundaryLabel::BounceOff)
        boundary.push_back(i);
    }
    const std::size_t stride = std::max<std::size_t>(1, boundary.size() / 10);
    int probed = 0, violations = 0;
    for (std::size_t bi = 0; bi < boundary.size(); bi += stride) {
      const auto& x = block.samples[boundary[bi]].point;
      Bundle<Scalar> bundle = gen.make_bundle(x, probe_T, probe_dt);
      for (const auto& member : bundle.members) {
        const ExitTime<Scalar> open_exit = exit_time(member, block_oracle, RegionVariant::Open);
        const ExitTime<Scalar> closed_exit =
            exit_time(member, block_oracle, RegionVariant::Closed);
        const Scalar t = open_exit.truncated ? member.duration() : open_exit.time;
        const Scalar s = closed_exit.truncated ? member.duration() : closed_exit.time;
        ++probed;
        if (std::abs(t - s) > tol) ++violations;
      }
    }
    std::ostringstream os;
    os << violations << " of " << probed
       << " probed members leave the open and closed block at different times";
    report.exit_times_agree = {violations == 0 && probed > 0, os.str()};
    if (!report.exit_times_agree.passed)
      report.failures.push_back(report.exit_times_agree.detail);
  }

  return report;
}

/// Classification of a single point against a constructed block, with a
/// dynamic consistency probe: egress and bounce-off points should launch a
/// member that leaves the block before reaching its interior, ingress points
/// a member that reaches the interior first.  When the generator carries an
/// exact backward flow, a short backward slide must not raise the entrance
/// level (egress is reached from deeper inside) and must not lower the exit
/// level (ingress and bounce-off are reached from further outside).
template <typename Scalar>
struct PointClassification {
  Scalar g_plus = 0;
  Scalar g_minus = 0;
  BoundaryLabel label = BoundaryLabel::Dropped;
  bool probe_consistent = true;
  std::string note;
};

template <typename Scalar>
PointClassification<Scalar> classify_boundary_point(const BundleGenerator<Scalar>& gen,
                                                    const BlockResult<Scalar>& block,
                                                    const StateVec<Scalar>& x,
                                                    Scalar probe_T = -1, Scalar probe_dt = -1) {
  if (probe_dt <= 0) probe_dt = block.dt;
  if (probe_T <= 0) probe_T = std::max(Scalar(20) * probe_dt, block.horizon / 4);
  if (!block.refined.region_N.inside(x, true) || !block.refined.region_O.inside(x, true))
    throw config_error("classification: point lies outside the open refined neighborhood");

  PointClassification<Scalar> out;
  out.g_plus = estimate_g_plus(gen, block.refined, x, block.horizon, block.dt).value;
  out.g_minus = estimate_g_minus(gen, block.refined, x, block.horizon, block.dt).value;

  const auto in_band = [&](Scalar g) { return std::abs(g - block.delta) <= block.band; };
  const auto below = [&](Scalar g) { return g < block.delta - block.band; };
  const bool bp = in_band(out.g_plus), bm = in_band(out.g_minus);
  const bool lp = below(out.g_plus), lm = below(out.g_minus);
  if (bp && bm)
    out.label = BoundaryLabel::BounceOff;
  else if (bp && lm)
    out.label = BoundaryLabel::Egress;
  else if (bm && lp)
    out.label = BoundaryLabel::Ingress;
  else if (lp && lm)
    out.label = BoundaryLabel::Interior;
  else
    out.label = BoundaryLabel::Dropped;

  if (out.label == BoundaryLabel::Interior || out.label == BoundaryLabel::Dropped) {
    out.note = "no boundary probe for a non-boundary point";
    return out;
  }

  const RegionOracle<Scalar> block_oracle = RegionOracle<Scalar>::from_sampled(block.region_block);
  const RegionOracle<Scalar> interior_oracle =
      RegionOracle<Scalar>::from_sampled(block.region_interior);

  // Forward probe: per member, which comes first — leaving the block or
  // reaching its sampled interior?
  Bundle<Scalar> bundle = gen.make_bundle(x, probe_T, probe_dt);
  bool some_exits_first = false;
  bool some_enters_first = false;
  for (const auto& member : bundle.members) {
    for (Eigen::Index j = 0; j <= member.steps(); ++j) {
      const StateVec<Scalar> y = member.state(j);
      if (!block_oracle.inside(y, false)) {
        some_exits_first = true;
        break;
      }
      if (interior_oracle.inside(y, true)) {
        some_enters_first = true;
        break;
      }
    }
  }
  std::ostringstream note;
  if (out.label == BoundaryLabel::Ingress) {
    out.probe_consistent = some_enters_first;
    note << (some_enters_first ? "a member reaches the interior first"
                               : "no member reaches the interior before leaving");
  } else {
    out.probe_consistent = some_exits_first;
    note << (some_exits_first ? "a member leaves the block before reaching the interior"
                              : "no member leaves the block before reaching the interior");
  }

  // Backward probe, when an exact backward flow is available.  Levels are
  // compared instead of sampled set membership, so the probe stays meaningful
  // for points anywhere within the resolution band: sliding backward along
  // the orbit can only lower the entrance level and raise the exit level.
  if (gen.flow_backward) {
    const StateVec<Scalar> back = gen.flow_backward(x, Scalar(5) * probe_dt);
    const Scalar slack = Scalar(defaults::monotonicity_slack);
    if (!block.refined.region_N.inside(back, true) || !block.refined.region_O.inside(back, true)) {
      if (out.label == BoundaryLabel::Egress) {
        out.probe_consistent = false;
        note << "; backward state left the refined neighborhood (egress should be reached from "
                "inside)";
      }
    } else if (out.label == BoundaryLabel::Egress) {
      const Scalar gp_back =
          estimate_g_plus(gen, block.refined, back, block.horizon, block.dt).value;
      if (gp_back > out.g_plus + slack) {
        out.probe_consistent = false;
        note << "; entrance level rose along the backward slide";
      }
    } else {
      const Scalar gm_back =
          estimate_g_minus(gen, block.refined, back, block.horizon, block.dt).value;
      if (gm_back < out.g_minus - slack) {
        out.probe_consistent = false;
        note << "; exit level fell along the backward slide";
      }
    }
  }
  out.note = note.str();
  return out;
}

}  // namespace isoblock
