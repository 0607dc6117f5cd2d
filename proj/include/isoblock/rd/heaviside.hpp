#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "isoblock/core/generator.hpp"
#include "isoblock/inclusion/integrate.hpp"
#include "isoblock/inclusion/model.hpp"

namespace isoblock {

/// Scalar parabolic problem with a sign-switch source on (0,1m), zero boundary
/// values:  u_t in u_xx + sgn-set(u) + omega*u,  discretized on n interior
/// nodes with the 3-point Laplacian and trapezoid-consistent node weights
/// w_i = h, so state distances approximate the L2(0,1) norm.
template <typename Scalar>
struct RDConfig {
  int n = 19;               ///< interior grid nodes; h = 1/(n+1)
  Scalar omega = 0;         ///< linear growth rate, 0 <= omega < pi^2
  Scalar epsilon_reg = 0;   ///< 0: sharp switch; > 0: regularized envelope width
  Scalar dt = Scalar(1e-3);
  Scalar T = Scalar(1);

  Scalar h() const { return Scalar(1) / static_cast<Scalar>(n + 1); }

  /// Smallest eigenvalue of the discrete -u_xx on this grid.
  Scalar lambda1_discrete() const {
    const Scalar hh = h();
    return Scalar(2) / (hh * hh) *
           (Scalar(1) - std::cos(Scalar(EIGEN_PI) * hh));
  }

  void validate() const {
    if (n < 3) throw config_error("rd config: need at least 3 interior nodes");
    if (omega < Scalar(0)) throw config_error("rd config: rate must be nonnegative");
    if (omega >= Scalar(EIGEN_PI) * Scalar(EIGEN_PI))
      throw config_error("rd config: rate must stay below pi^2");
    if (omega >= lambda1_discrete())
      throw config_error(
          "rd config: rate reaches the discrete principal eigenvalue; refine the grid");
    if (epsilon_reg < Scalar(0))
      throw config_error("rd config: regularization width must be nonnegative");
    if (dt <= Scalar(0) || T <= Scalar(0))
      throw config_error("rd config: dt and T must be positive");
  }

  Scalar grid_x(int i) const { return static_cast<Scalar>(i) * h(); }  ///< i = 1..n
};

template <typename Scalar>
Eigen::SparseMatrix<Scalar> laplacian_matrix(const RDConfig<Scalar>& config) {
  const Scalar h = config.h();
  const Scalar inv_h2 = Scalar(1) / (h * h);
  Eigen::SparseMatrix<Scalar> A(config.n, config.n);
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(static_cast<std::size_t>(3 * config.n));
  for (int i = 0; i < config.n; ++i) {
    trip.emplace_back(i, i, Scalar(-2) * inv_h2);
    if (i > 0) trip.emplace_back(i, i - 1, inv_h2);
    if (i + 1 < config.n) trip.emplace_back(i, i + 1, inv_h2);
  }
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

/// State on the RD grid (coords = nodal values, weights = h).
template <typename Scalar>
StateVec<Scalar> rd_state(const RDConfig<Scalar>& config, VecX<Scalar> coords) {
  if (coords.size() != config.n) throw config_error("rd state: wrong number of nodal values");
  return StateVec<Scalar>(std::move(coords),
                          VecX<Scalar>::Constant(config.n, config.h()));
}

template <typename Scalar>
StateVec<Scalar> rd_zero_state(const RDConfig<Scalar>& config) {
  return rd_state(config, VecX<Scalar>::Zero(config.n));
}

template <typename Scalar>
InclusionModel<Scalar> make_rd_model(const RDConfig<Scalar>& config) {
  config.validate();
  InclusionModel<Scalar> model;
  model.dimension = config.n;
  model.metric_weights = VecX<Scalar>::Constant(config.n, config.h());
  model.linear_part = laplacian_matrix(config);
  const Scalar omega = config.omega;
  const Scalar eps = config.epsilon_reg;
  model.selection_set = [omega, eps](const VecX<Scalar>& u) {
    IntervalBox<Scalar> box(static_cast<std::size_t>(u.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      Interval<Scalar> I =
          eps > Scalar(0) ? regularized_interval(u[i], eps) : heaviside_interval(u[i]);
      const Scalar shift = omega * u[i];
      box[static_cast<std::size_t>(i)] = {I.lo + shift, I.hi + shift};
    }
    return box;
  };
  // The sharp switch has no Hausdorff-Lipschitz bound; the regularized
  // envelope moves at rate 2/eps, plus the linear shift.
  model.lipschitz_C = eps > Scalar(0) ? Scalar(2) / eps + omega : Scalar(0);
  model.single_valued = false;
  std::ostringstream id;
  id << "rd-switch-n" << config.n << "-w" << omega;
  if (eps > Scalar(0)) id << "-reg" << eps;
  model.id = id.str();
  return model;
}

/// Stationary profile with k lobes of alternating sign (`sign` = sign of the
/// first lobe), its interior zeros, boundary slope, and energy.
template <typename Scalar>
struct Equilibrium {
  int k = 1;
  int sign = +1;
  StateVec<Scalar> profile;
  std::vector<Scalar> zeros;   ///< interior zeros (k - 1 of them)
  Scalar gamma0 = 0;           ///< boundary slope of the continuum profile
  Scalar energy = 0;
  Scalar stationary_residual = 0;  ///< worst nodal defect from the value set
};

/// Discrete energy: sum over cells of (u_{i+1}-u_i)^2 / (2h) minus
/// sum over nodes of h (|u_i| + omega u_i^2 / 2), with zero boundary values.
template <typename Scalar>
Scalar lyapunov_energy(const RDConfig<Scalar>& config, const StateVec<Scalar>& u) {
  if (u.dim() != config.n) throw config_error("energy: state size mismatch");
  const Scalar h = config.h();
  Scalar grad = 0;
  Scalar prev = 0;
  for (int i = 0; i < config.n; ++i) {
    const Scalar d = u.coords[i] - prev;
    grad += d * d;
    prev = u.coords[i];
  }
  grad += prev * prev;  // last cell down to the boundary zero
  grad /= Scalar(2) * h;
  Scalar potential = 0;
  for (int i = 0; i < config.n; ++i) {
    const Scalar ui = u.coords[i];
    potential += h * (std::abs(ui) + config.omega * ui * ui / Scalar(2));
  }
  return grad - potential;
}

/// Worst nodal distance of -(A u)_i - omega u_i from the switch value set at
/// u_i — the defect of u as a stationary state of the inclusion.
template <typename Scalar>
Scalar stationary_residual(const RDConfig<Scalar>& config, const StateVec<Scalar>& u) {
  if (u.dim() != config.n) throw config_error("stationary residual: state size mismatch");
  const Eigen::SparseMatrix<Scalar> A = laplacian_matrix(config);
  const VecX<Scalar> lhs = -(A * u.coords) - config.omega * u.coords;
  Scalar worst = 0;
  for (int i = 0; i < config.n; ++i)
    worst = std::max(worst, heaviside_interval(u.coords[i]).dist(lhs[i]));
  return worst;
}

/// Closed-form peak height of the k-lobe continuum profile.
template <typename Scalar>
Scalar continuum_peak(const RDConfig<Scalar>& config, int k) {
  const Scalar L = Scalar(1) / static_cast<Scalar>(k);
  if (config.omega <= Scalar(1e-12)) return L * L / Scalar(8);
  const Scalar r = std::sqrt(config.omega);
  return (Scalar(1) / std::cos(r * L / Scalar(2)) - Scalar(1)) / config.omega;
}

/// Boundary slope of the continuum lobe (the nodal slope at every zero).
template <typename Scalar>
Scalar continuum_boundary_slope(const RDConfig<Scalar>& config, int k) {
  const Scalar L = Scalar(1) / static_cast<Scalar>(k);
  if (config.omega <= Scalar(1e-12)) return L / Scalar(2);
  const Scalar r = std::sqrt(config.omega);
  return std::tan(r * L / Scalar(2)) / r;
}

/// Discrete k-lobe stationary profile.  Seeded by the continuum lobes, then
/// solved exactly: rows of (-A - omega I) u = sigma with the per-node lobe
/// sign, identity rows pinning u to zero at grid-aligned lobe boundaries.
/// The sign pattern is iterated to a fixed point so the solved profile is
/// sign-consistent with its own forcing.
template <typename Scalar>
Equilibrium<Scalar> equilibrium_profile(const RDConfig<Scalar>& config, int k, int sign) {
  config.validate();
  if (sign != 1 && sign != -1) throw config_error("equilibrium: sign must be +1 or -1");
  if (k < 1 || 8 * k > config.n)
    throw config_error("equilibrium: need at least eight interior nodes per lobe");

  const int n = config.n;
  const Scalar h = config.h();
  const Scalar L = Scalar(1) / static_cast<Scalar>(k);
  const Scalar omega = config.omega;

  // Continuum seed and initial sign pattern.  sigma = 0 marks nodes pinned to
  // zero (grid-aligned lobe boundaries).
  std::vector<int> sigma(static_cast<std::size_t>(n), 0);
  for (int i = 1; i <= n; ++i) {
    const Scalar x = config.grid_x(i);
    const Scalar boundary_index = x * static_cast<Scalar>(k);
    const Scalar nearest = std::round(boundary_index);
    if (nearest >= Scalar(1) && nearest <= Scalar(k - 1) &&
        std::abs(boundary_index - nearest) < Scalar(1e-9)) {
      sigma[static_cast<std::size_t>(i - 1)] = 0;
      continue;
    }
    const int lobe = std::min(k - 1, static_cast<int>(std::floor(boundary_index)));
    sigma[static_cast<std::size_t>(i - 1)] = (lobe % 2 == 0) ? sign : -sign;
  }

  const Scalar inv_h2 = Scalar(1) / (h * h);
  VecX<Scalar> u;
  bool fixed_point = false;
  for (int iter = 0; iter < 40 && !fixed_point; ++iter) {
    // Assemble (-A - omega I) u = sigma with identity rows at pinned nodes.
    Eigen::SparseMatrix<Scalar> M(n, n);
    std::vector<Eigen::Triplet<Scalar>> trip;
    VecX<Scalar> rhs = VecX<Scalar>::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (sigma[static_cast<std::size_t>(i)] == 0) {
        trip.emplace_back(i, i, Scalar(1));
        continue;
      }
      trip.emplace_back(i, i, Scalar(2) * inv_h2 - omega);
      if (i > 0) trip.emplace_back(i, i - 1, -inv_h2);
      if (i + 1 < n) trip.emplace_back(i, i + 1, -inv_h2);
      rhs[i] = static_cast<Scalar>(sigma[static_cast<std::size_t>(i)]);
    }
    M.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> solver;
    solver.compute(M);
    if (solver.info() != Eigen::Success)
      throw numeric_error("equilibrium: stationary solve failed");
    u = solver.solve(rhs);

    fixed_point = true;
    for (int i = 0; i < n; ++i) {
      auto& s = sigma[static_cast<std::size_t>(i)];
      if (s == 0) continue;  // pinned nodes stay pinned
      const int observed = u[i] > Scalar(0) ? 1 : (u[i] < Scalar(0) ? -1 : s);
      if (observed != s) {
        s = observed;
        fixed_point = false;
      }
    }
  }
  if (!fixed_point)
    throw numeric_error("equilibrium: no sign-consistent profile at this resolution");

  Equilibrium<Scalar> eq;
  eq.k = k;
  eq.sign = sign;
  eq.profile = rd_state(config, u);

  // Interior zeros: pinned nodes and interpolated sign changes.
  for (int i = 0; i < n; ++i)
    if (sigma[static_cast<std::size_t>(i)] == 0)
      eq.zeros.push_back(config.grid_x(i + 1));
  for (int i = 0; i + 1 < n; ++i) {
    const Scalar a = u[i], b = u[i + 1];
    if (a * b < Scalar(0))
      eq.zeros.push_back(config.grid_x(i + 1) + h * a / (a - b));
  }
  std::sort(eq.zeros.begin(), eq.zeros.end());
  if (static_cast<int>(eq.zeros.size()) != k - 1)
    throw numeric_error("equilibrium: profile has the wrong nodal count");

  eq.gamma0 = continuum_boundary_slope(config, k);
  eq.energy = lyapunov_energy(config, eq.profile);
  eq.stationary_residual = stationary_residual(config, eq.profile);
  return eq;
}

/// Bundle generator for the discretized problem, carrying the one-lobe rest
/// points of both signs and the zero state as known equilibria.
template <typename Scalar>
BundleGenerator<Scalar> make_rd_generator(const RDConfig<Scalar>& config,
                                          std::uint64_t seed = 12345) {
  InclusionModel<Scalar> model = make_rd_model(config);
  const Equilibrium<Scalar> plus = equilibrium_profile(config, 1, +1);
  const Equilibrium<Scalar> minus = equilibrium_profile(config, 1, -1);
  model.equilibria.push_back(plus.profile.coords);
  model.equilibria.push_back(minus.profile.coords);
  model.equilibria.push_back(VecX<Scalar>::Zero(config.n));
  return make_generator(std::move(model), default_strategy_roster(seed));
}

// ---------------------------------------------------------------------------
// Structure checks
// ---------------------------------------------------------------------------

template <typename Scalar>
struct EnergyOrderingReport {
  std::vector<Scalar> energies;   ///< E(v_k), k = 1..k_max
  std::vector<Scalar> sup_norms;  ///< max nodal value of v_k
  bool strictly_ordered = false;  ///< E(v_1) < ... < E(v_kmax) < 0
  bool symmetric_pairs = false;   ///< E of the two signs agrees exactly
  bool peaks_match = false;       ///< sup norms track the continuum peaks
  std::string detail;

  bool passed() const { return strictly_ordered && symmetric_pairs && peaks_match; }
};

template <typename Scalar>
EnergyOrderingReport<Scalar> check_energy_ordering(const RDConfig<Scalar>& config, int k_max,
                                                   Scalar peak_rel_tol = Scalar(0.02)) {
  if (k_max < 1) throw config_error("energy ordering: k_max must be >= 1");
  EnergyOrderingReport<Scalar> report;
  std::ostringstream detail;

  report.strictly_ordered = true;
  report.symmetric_pairs = true;
  report.peaks_match = true;
  Scalar prev_energy = -std::numeric_limits<Scalar>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    const Equilibrium<Scalar> plus = equilibrium_profile(config, k, +1);
    const Equilibrium<Scalar> minus = equilibrium_profile(config, k, -1);
    report.energies.push_back(plus.energy);
    const Scalar sup = plus.profile.coords.cwiseAbs().maxCoeff();
    report.sup_norms.push_back(sup);

    if (!(plus.energy > prev_energy) || !(plus.energy < Scalar(0))) {
      report.strictly_ordered = false;
      detail << "energy order breaks at k=" << k << " (E=" << plus.energy << "); ";
    }
    prev_energy = plus.energy;

    if (plus.energy != minus.energy) {
      report.symmetric_pairs = false;
      detail << "sign pair at k=" << k << " has unequal energies; ";
    }

    const Scalar peak = continuum_peak(config, k);
    if (std::abs(sup - peak) > peak_rel_tol * peak) {
      report.peaks_match = false;
      detail << "peak at k=" << k << " is " << sup << ", expected about " << peak << "; ";
    }
  }
  if (report.passed()) detail << "energies strictly ordered below zero, peaks on the curve";
  report.detail = detail.str();
  return report;
}

template <typename Scalar>
struct LyapunovReport {
  Scalar worst_increase = 0;  ///< max per-step energy gain over all trajectories
  Scalar slack = 0;
  int trajectories = 0;
  bool passed = false;
};

/// The discrete energy must not increase along any strategy's trajectory
/// beyond a per-step slack proportional to dt.
template <typename Scalar>
LyapunovReport<Scalar> check_lyapunov_decrease(const RDConfig<Scalar>& config,
                                               const StateVec<Scalar>& u0,
                                               const std::vector<SelectionStrategy>& strategies,
                                               Scalar T, Scalar dt) {
  const InclusionModel<Scalar> model = make_rd_model(config);
  LyapunovReport<Scalar> report;
  report.slack = Scalar(10) * dt * (Scalar(1) + config.omega);
  report.worst_increase = -std::numeric_limits<Scalar>::infinity();
  for (const auto& s : strategies) {
    const Trajectory<Scalar> traj = integrate(model, u0, s, T, dt);
    Scalar prev = lyapunov_energy(config, traj.state(0));
    for (Eigen::Index j = 1; j <= traj.steps(); ++j) {
      const Scalar e = lyapunov_energy(config, traj.state(j));
      report.worst_increase = std::max(report.worst_increase, e - prev);
      prev = e;
    }
    ++report.trajectories;
  }
  report.passed = report.worst_increase <= report.slack;
  return report;
}

/// Exact measure of {x in [0,1] : |u_PL(x)| <= alpha} for the piecewise
/// linear interpolant through the nodal values (zero at both boundaries).
template <typename Scalar>
Scalar sublevel_measure(const RDConfig<Scalar>& config, const StateVec<Scalar>& u,
                        Scalar alpha) {
  if (u.dim() != config.n) throw config_error("sublevel measure: state size mismatch");
  if (alpha < Scalar(0)) throw config_error("sublevel measure: alpha must be nonnegative");
  const Scalar h = config.h();
  Scalar total = 0;
  Scalar a = 0;  // boundary value
  for (int cell = 0; cell <= config.n; ++cell) {
    const Scalar b = (cell < config.n) ? u.coords[cell] : Scalar(0);
    if (a == b) {
      if (std::abs(a) <= alpha) total += h;
    } else {
      // |a + (b-a) s| <= alpha for s in [0,1]
      Scalar s1 = (-alpha - a) / (b - a);
      Scalar s2 = (alpha - a) / (b - a);
      if (s1 > s2) std::swap(s1, s2);
      const Scalar lo = std::max(Scalar(0), s1);
      const Scalar hi = std::min(Scalar(1), s2);
      if (hi > lo) total += (hi - lo) * h;
    }
    a = b;
  }
  return total;
}

template <typename Scalar>
struct NondegeneracyReport {
  Scalar C_estimate = 0;  ///< max over tested alphas of measure / alpha
  Scalar C_theory = 0;    ///< 4k / gamma0
  std::vector<Scalar> alphas;
  std::vector<Scalar> ratios;
  bool passed = false;
};

/// Linear smallness of the near-zero set: measure{|v| <= alpha} <= C alpha,
/// with C controlled by the nodal count and the boundary slope.  A profile
/// whose sup norm is not well above the tested alphas (or with a flat segment
/// pinned near zero) is degenerate and rejected.
template <typename Scalar>
NondegeneracyReport<Scalar> check_nondegeneracy(const RDConfig<Scalar>& config,
                                                const Equilibrium<Scalar>& eq, int levels = 8) {
  NondegeneracyReport<Scalar> report;
  report.C_theory = Scalar(4) * static_cast<Scalar>(eq.k) / eq.gamma0;
  const Scalar sup = eq.profile.coords.cwiseAbs().maxCoeff();
  const Scalar alpha0 = sup / 2;
  if (!(alpha0 > Scalar(0)))
    throw config_error("nondegeneracy: degenerate profile (vanishing sup norm)");
  // Flat segment pinned near zero (consecutive equal nodal values inside the
  // smallest tested level) defeats the linear bound.
  const Scalar alpha_min = alpha0 / static_cast<Scalar>(1 << (levels - 1));
  for (int i = 0; i + 1 < config.n; ++i) {
    if (eq.profile.coords[i] == eq.profile.coords[i + 1] &&
        std::abs(eq.profile.coords[i]) <= alpha_min)
      throw config_error("nondegeneracy: degenerate profile (flat segment at zero)");
  }
  Scalar alpha = alpha0;
  for (int j = 0; j < levels; ++j, alpha /= 2) {
    const Scalar mu = sublevel_measure(config, eq.profile, alpha);
    report.alphas.push_back(alpha);
    report.ratios.push_back(mu / alpha);
    report.C_estimate = std::max(report.C_estimate, mu / alpha);
  }
  report.passed = report.C_estimate <= report.C_theory;
  return report;
}

template <typename Scalar>
struct ComparisonReport {
  Scalar worst_violation = 0;  ///< max over time and nodes of (lower - upper)
  Scalar slack = 0;
  int pairs = 0;
  bool precondition_ok = true;  ///< the ordered pair is not degenerate (equal)
  bool passed = false;
};

/// Order preservation: trajectories driven by the same strategy from ordered
/// states stay ordered.  The implicit step matrix is inverse-positive and
/// every strategy picks its value monotonically from the value set, so the
/// violation should be at rounding level; the slack is a generous dt-scale
/// cap.
template <typename Scalar>
ComparisonReport<Scalar> check_comparison(const RDConfig<Scalar>& config,
                                          const StateVec<Scalar>& lower,
                                          const StateVec<Scalar>& upper,
                                          const std::vector<SelectionStrategy>& strategies,
                                          Scalar T, Scalar dt) {
  if ((lower.coords.array() > upper.coords.array()).any())
    throw config_error("comparison: initial states must be ordered (lower <= upper)");
  const InclusionModel<Scalar> model = make_rd_model(config);
  ComparisonReport<Scalar> report;
  report.slack = Scalar(10) * dt * (Scalar(1) + config.omega);
  report.precondition_ok = (upper.coords - lower.coords).maxCoeff() > Scalar(0);
  for (const auto& s : strategies) {
    const Trajectory<Scalar> lo = integrate(model, lower, s, T, dt);
    const Trajectory<Scalar> hi = integrate(model, upper, s, T, dt);
    for (Eigen::Index j = 0; j <= lo.steps(); ++j) {
      const Scalar v = (lo.states.col(j) - hi.states.col(j)).maxCoeff();
      report.worst_violation = std::max(report.worst_violation, v);
    }
    ++report.pairs;
  }
  report.passed = report.worst_violation <= report.slack;
  return report;
}

template <typename Scalar>
struct UniquenessReport {
  Scalar max_pairwise_gap = 0;
  Scalar tol = 0;
  int trajectories = 0;
  bool passed = false;
};

/// At a one-lobe rest point every nodal value set is a singleton, so all
/// strategies must produce the same trajectory.
template <typename Scalar>
UniquenessReport<Scalar> uniqueness_at_equilibrium(const RDConfig<Scalar>& config,
                                                   const Equilibrium<Scalar>& eq,
                                                   const std::vector<SelectionStrategy>& strategies,
                                                   Scalar T, Scalar dt) {
  const InclusionModel<Scalar> model = make_rd_model(config);
  UniquenessReport<Scalar> report;
  report.tol = Scalar(10) * dt * (Scalar(1) + config.omega);
  std::vector<Trajectory<Scalar>> trajs;
  for (const auto& s : strategies) trajs.push_back(integrate(model, eq.profile, s, T, dt));
  report.trajectories = static_cast<int>(trajs.size());
  for (std::size_t a = 0; a < trajs.size(); ++a)
    for (std::size_t b = a + 1; b < trajs.size(); ++b)
      report.max_pairwise_gap = std::max(report.max_pairwise_gap,
                                         sup_distance(trajs[a], trajs[b]));
  report.passed = report.max_pairwise_gap <= report.tol;
  return report;
}

template <typename Scalar>
struct SeparationReport {
  Scalar distance = 0;  ///< metric distance of the two extremal states at time T
  Scalar time = 0;
  StateVec<Scalar> max_state;
  StateVec<Scalar> min_state;
};

/// From the zero state the extremal selections drive apart: the maximal
/// selection grows a positive profile, the minimal a negative one.  Their
/// distance at time T witnesses genuine branching of the solution set.
template <typename Scalar>
SeparationReport<Scalar> separation_from_zero(const RDConfig<Scalar>& config, Scalar T,
                                              Scalar dt) {
  const InclusionModel<Scalar> model = make_rd_model(config);
  const StateVec<Scalar> origin = rd_zero_state(config);
  const Trajectory<Scalar> up = integrate(model, origin, SelectionStrategy::maximal(), T, dt);
  const Trajectory<Scalar> down = integrate(model, origin, SelectionStrategy::minimal(), T, dt);
  SeparationReport<Scalar> report;
  report.time = T;
  report.max_state = up.last_state();
  report.min_state = down.last_state();
  report.distance = distance(report.max_state, report.min_state);
  return report;
}

/// Candidate invariant cloud near a rest point for block construction.  With
/// a sharp switch the rest point itself is the cloud.  With a regularized
/// envelope the nearby invariant structure thickens: tails of all strategy
/// trajectories launched at the rest point are harvested and clustered.  A
/// tail state farther than half the ball radius means the ball no longer
/// isolates and is an error.
template <typename Scalar>
PointCloudSet<Scalar> invariant_cloud_near(const RDConfig<Scalar>& config,
                                           const Equilibrium<Scalar>& eq, Scalar ball_radius,
                                           const std::vector<SelectionStrategy>& strategies,
                                           Scalar T, Scalar dt,
                                           Scalar cluster_tol = Scalar(defaults::cluster_tol)) {
  PointCloudSet<Scalar> cloud;
  cloud.label = CloudLabel::K_approx;
  cloud.points.push_back(eq.profile);
  if (config.epsilon_reg <= Scalar(0)) return cloud;

  const InclusionModel<Scalar> model = make_rd_model(config);
  std::vector<StateVec<Scalar>> harvest;
  harvest.push_back(eq.profile);
  for (const auto& s : strategies) {
    const Trajectory<Scalar> traj = integrate(model, eq.profile, s, T, dt);
    const Eigen::Index start = (traj.steps() * 4) / 5;
    for (Eigen::Index j = start; j <= traj.steps(); ++j) {
      const StateVec<Scalar> y = traj.state(j);
      if (distance(y, eq.profile) > ball_radius / 2)
        throw block_error(
            "invariant cloud: regularized dynamics leave the candidate ball");
      harvest.push_back(y);
    }
  }
  cloud.points = cluster_points(harvest, cluster_tol);
  return cloud;
}

}  // namespace isoblock
