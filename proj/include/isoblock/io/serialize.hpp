#pragma once

#include <string>
#include <vector>

#include "isoblock/block/block.hpp"
#include "isoblock/core/state.hpp"
#include "isoblock/inclusion/certificate.hpp"
#include "isoblock/io/json.hpp"
#include "isoblock/rd/heaviside.hpp"
#include "isoblock/semiflow/checks.hpp"

namespace isoblock {
namespace io {

template <typename Scalar>
json::Value to_json(const StateVec<Scalar>& x) {
  auto arr = json::Value::array();
  for (Eigen::Index i = 0; i < x.dim(); ++i) arr.push(json::Value::number(static_cast<double>(x.coords[i])));
  return arr;
}

template <typename Scalar>
json::Value to_json(const std::vector<Scalar>& xs) {
  auto arr = json::Value::array();
  for (const Scalar v : xs) arr.push(json::Value::number(static_cast<double>(v)));
  return arr;
}

inline json::Value to_json(const CheckResult& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed));
  obj.set("detail", json::Value::string(r.detail));
  return obj;
}

template <typename Scalar>
json::Value to_json(const AxiomReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.all_passed()));
  obj.set("existence", to_json(r.existence));
  obj.set("translation", to_json(r.translation));
  obj.set("concatenation", to_json(r.concatenation));
  obj.set("compactness", to_json(r.compactness));
  obj.set("sample_count", json::Value::integer(r.sample_count));
  obj.set("horizon", json::Value::number(static_cast<double>(r.horizon)));
  auto notes = json::Value::array();
  for (const auto& n : r.notes) notes.push(json::Value::string(n));
  obj.set("notes", std::move(notes));
  return obj;
}

template <typename Scalar>
json::Value to_json(const K5Report<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed));
  obj.set("approach_distance", to_json(r.approach_distance));
  obj.set("min_sup_gap", to_json(r.min_sup_gap));
  obj.set("tube_tol", json::Value::number(static_cast<double>(r.tube_tol)));
  obj.set("window_end", json::Value::number(static_cast<double>(r.window_end)));
  obj.set("final_window_excluded", json::Value::boolean(r.final_window_excluded));
  obj.set("note", json::Value::string(r.note));
  return obj;
}

template <typename Scalar>
json::Value to_json(const FilippovCertificate<Scalar>& c) {
  auto obj = json::Value::object();
  obj.set("valid", json::Value::boolean(c.valid));
  obj.set("nodes", json::Value::integer(c.nodes()));
  obj.set("lipschitz_constant", json::Value::number(static_cast<double>(c.lipschitz_C)));
  obj.set("slack", json::Value::number(static_cast<double>(c.slack)));
  obj.set("rho_max", json::Value::number(c.rho.size() ? static_cast<double>(c.rho.maxCoeff()) : 0.0));
  obj.set("xi_final", json::Value::number(c.xi.size() ? static_cast<double>(c.xi(c.xi.size() - 1)) : 0.0));
  obj.set("observed_gap_max",
          json::Value::number(c.observed_gap.size() ? static_cast<double>(c.observed_gap.maxCoeff()) : 0.0));
  return obj;
}

template <typename Scalar>
json::Value to_json(const InvarianceReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("invariant", json::Value::boolean(r.invariant));
  obj.set("failure_count", json::Value::integer(static_cast<long long>(r.failures.size())));
  obj.set("horizon", json::Value::number(static_cast<double>(r.horizon)));
  return obj;
}

template <typename Scalar>
json::Value to_json(const BlockVerification<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed()));
  obj.set("labels_complete", to_json(r.labels_complete));
  obj.set("exit_set_closed", to_json(r.exit_set_closed));
  obj.set("monotone_along_orbits", to_json(r.monotone_along_orbits));
  obj.set("core_well_inside", to_json(r.core_well_inside));
  obj.set("exit_times_agree", to_json(r.exit_times_agree));
  auto failures = json::Value::array();
  for (const auto& f : r.failures) failures.push(json::Value::string(f));
  obj.set("failures", std::move(failures));
  return obj;
}

/// Scalar summary of a built block; the per-sample data goes to CSV instead.
template <typename Scalar>
json::Value block_summary_json(const BlockResult<Scalar>& block) {
  auto obj = json::Value::object();
  obj.set("epsilon", json::Value::number(static_cast<double>(block.epsilon)));
  obj.set("delta", json::Value::number(static_cast<double>(block.delta)));
  obj.set("band", json::Value::number(static_cast<double>(block.band)));
  obj.set("cell_radius", json::Value::number(static_cast<double>(block.cell_radius)));
  obj.set("horizon", json::Value::number(static_cast<double>(block.horizon)));
  obj.set("dt", json::Value::number(static_cast<double>(block.dt)));
  obj.set("stage1_points", json::Value::integer(static_cast<long long>(block.stage1.size())));
  obj.set("refined_samples", json::Value::integer(static_cast<long long>(block.samples.size())));
  auto counts = json::Value::object();
  counts.set("interior", json::Value::integer(block.count(BoundaryLabel::Interior)));
  counts.set("egress", json::Value::integer(block.count(BoundaryLabel::Egress)));
  counts.set("ingress", json::Value::integer(block.count(BoundaryLabel::Ingress)));
  counts.set("bounce_off", json::Value::integer(block.count(BoundaryLabel::BounceOff)));
  counts.set("dropped", json::Value::integer(block.count(BoundaryLabel::Dropped)));
  obj.set("label_counts", std::move(counts));
  obj.set("flagged", json::Value::integer(block.flagged));
  return obj;
}

template <typename Scalar>
json::Value to_json(const PointClassification<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("label", json::Value::string(to_string(r.label)));
  obj.set("g_plus", json::Value::number(static_cast<double>(r.g_plus)));
  obj.set("g_minus", json::Value::number(static_cast<double>(r.g_minus)));
  obj.set("probe_consistent", json::Value::boolean(r.probe_consistent));
  obj.set("note", json::Value::string(r.note));
  return obj;
}

template <typename Scalar>
json::Value to_json(const Equilibrium<Scalar>& eq) {
  auto obj = json::Value::object();
  obj.set("lobes", json::Value::integer(eq.k));
  obj.set("sign", json::Value::integer(eq.sign));
  obj.set("energy", json::Value::number(static_cast<double>(eq.energy)));
  obj.set("sup_norm",
          json::Value::number(eq.profile.dim() ? static_cast<double>(eq.profile.coords.cwiseAbs().maxCoeff()) : 0.0));
  obj.set("boundary_slope", json::Value::number(static_cast<double>(eq.gamma0)));
  obj.set("stationary_residual", json::Value::number(static_cast<double>(eq.stationary_residual)));
  obj.set("interior_zeros", to_json(eq.zeros));
  obj.set("profile", to_json(eq.profile));
  return obj;
}

template <typename Scalar>
json::Value to_json(const EnergyOrderingReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed()));
  obj.set("strictly_ordered", json::Value::boolean(r.strictly_ordered));
  obj.set("symmetric_pairs", json::Value::boolean(r.symmetric_pairs));
  obj.set("peaks_match", json::Value::boolean(r.peaks_match));
  obj.set("energies", to_json(r.energies));
  obj.set("sup_norms", to_json(r.sup_norms));
  obj.set("detail", json::Value::string(r.detail));
  return obj;
}

template <typename Scalar>
json::Value to_json(const LyapunovReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed));
  obj.set("worst_increase", json::Value::number(static_cast<double>(r.worst_increase)));
  obj.set("slack", json::Value::number(static_cast<double>(r.slack)));
  obj.set("trajectories", json::Value::integer(r.trajectories));
  return obj;
}

template <typename Scalar>
json::Value to_json(const NondegeneracyReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed));
  obj.set("growth_estimate", json::Value::number(static_cast<double>(r.C_estimate)));
  obj.set("growth_bound", json::Value::number(static_cast<double>(r.C_theory)));
  obj.set("alphas", to_json(r.alphas));
  obj.set("ratios", to_json(r.ratios));
  return obj;
}

template <typename Scalar>
json::Value to_json(const ComparisonReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed));
  obj.set("worst_violation", json::Value::number(static_cast<double>(r.worst_violation)));
  obj.set("slack", json::Value::number(static_cast<double>(r.slack)));
  obj.set("pairs", json::Value::integer(r.pairs));
  obj.set("precondition_ok", json::Value::boolean(r.precondition_ok));
  return obj;
}

template <typename Scalar>
json::Value to_json(const UniquenessReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("passed", json::Value::boolean(r.passed));
  obj.set("max_pairwise_gap", json::Value::number(static_cast<double>(r.max_pairwise_gap)));
  obj.set("tolerance", json::Value::number(static_cast<double>(r.tol)));
  obj.set("trajectories", json::Value::integer(r.trajectories));
  return obj;
}

template <typename Scalar>
json::Value to_json(const SeparationReport<Scalar>& r) {
  auto obj = json::Value::object();
  obj.set("distance", json::Value::number(static_cast<double>(r.distance)));
  obj.set("time", json::Value::number(static_cast<double>(r.time)));
  obj.set("max_state", to_json(r.max_state));
  obj.set("min_state", to_json(r.min_state));
  return obj;
}

}  // namespace io
}  // namespace isoblock
