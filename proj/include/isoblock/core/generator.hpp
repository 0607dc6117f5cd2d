#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isoblock/inclusion/integrate.hpp"

namespace isoblock {

/// Eight-strategy default roster used when a caller does not supply one:
/// both extremal selections, the zero selection, two delayed departures and
/// three independent random piecewise-constant streams.
inline std::vector<SelectionStrategy> default_strategy_roster(std::uint64_t seed = 12345) {
  return {
      SelectionStrategy::maximal(),
      SelectionStrategy::minimal(),
      SelectionStrategy::zero(),
      SelectionStrategy::delayed(0.1, +1),
      SelectionStrategy::delayed(0.1, -1),
      SelectionStrategy::random(hash_seed(seed, 1)),
      SelectionStrategy::random(hash_seed(seed, 2)),
      SelectionStrategy::random(hash_seed(seed, 3)),
  };
}

/// Extended roster (doubled cardinality) for sensitivity checks of
/// bundle-based estimates.
inline std::vector<SelectionStrategy> extended_strategy_roster(std::uint64_t seed = 12345) {
  auto roster = default_strategy_roster(seed);
  roster.push_back(SelectionStrategy::delayed(0.25, +1));
  roster.push_back(SelectionStrategy::delayed(0.25, -1));
  roster.push_back(SelectionStrategy::random(hash_seed(seed, 4)));
  roster.push_back(SelectionStrategy::random(hash_seed(seed, 5)));
  roster.push_back(SelectionStrategy::random(hash_seed(seed, 6), 0.02));
  roster.push_back(SelectionStrategy::random(hash_seed(seed, 7), 0.02));
  roster.push_back(SelectionStrategy::delayed(0.5, +1));
  roster.push_back(SelectionStrategy::delayed(0.5, -1));
  return roster;
}

/// Type-erased source of solution bundles.  Everything downstream (axiom
/// checks, admissible-set estimation, sublevel functionals, block building)
/// consumes this interface, so discretized inclusions and closed-form
/// reference flows are interchangeable.
template <typename Scalar>
struct BundleGenerator {
  /// Generate the solution bundle from x0 on the grid [0, T] with step dt.
  std::function<Bundle<Scalar>(const StateVec<Scalar>&, Scalar, Scalar)> make_bundle;

  /// Distance of `to` from the set of states reachable from `from` in one
  /// step of size dt (given the recorded selection h, which may be null).
  /// Used by the translation/concatenation checks.
  std::function<Scalar(const StateVec<Scalar>& from, const StateVec<Scalar>& to,
                       const VecX<Scalar>* h, Scalar dt)>
      step_residual;

  /// Known rest points of the model (possibly empty).
  std::vector<StateVec<Scalar>> equilibria;

  /// Trajectories are unique: bundles always carry one member.
  bool single_valued = false;

  /// Exact backward flow, when the model has one (closed-form references).
  /// `flow_backward(x, s)` is the state time s BEFORE x.
  std::function<StateVec<Scalar>(const StateVec<Scalar>&, Scalar)> flow_backward;

  Scalar residual_tol = Scalar(defaults::residual_tol);
  std::string id;
};

/// Wrap a discretized inclusion and a strategy roster as a bundle generator.
template <typename Scalar>
BundleGenerator<Scalar> make_generator(InclusionModel<Scalar> model,
                                       std::vector<SelectionStrategy> strategies) {
  model.validate();
  if (strategies.empty()) throw config_error("generator: empty strategy roster");
  auto shared_model = std::make_shared<InclusionModel<Scalar>>(std::move(model));
  auto shared_strategies =
      std::make_shared<std::vector<SelectionStrategy>>(std::move(strategies));

  BundleGenerator<Scalar> gen;
  gen.id = shared_model->id;
  gen.single_valued = shared_model->single_valued;
  for (const auto& e : shared_model->equilibria)
    gen.equilibria.emplace_back(e, shared_model->metric_weights);
  gen.make_bundle = [shared_model, shared_strategies](const StateVec<Scalar>& x0, Scalar T,
                                                      Scalar dt) {
    return make_bundle(*shared_model, x0, *shared_strategies, T, dt);
  };
  gen.step_residual = [shared_model](const StateVec<Scalar>& from, const StateVec<Scalar>& to,
                                     const VecX<Scalar>* h, Scalar dt) {
    // Rebuild the one-step formula and measure the defect of `to`.
    VecX<Scalar> r = (to.coords - from.coords) / dt;
    if (shared_model->linear_part) r -= (*shared_model->linear_part) * to.coords;
    r -= shared_model->explicit_term(from.coords);
    if (h != nullptr) {
      r -= *h;
    } else {
      const IntervalBox<Scalar> box = shared_model->selection_set(from.coords);
      // Without a record, measure against the nearest admissible selection.
      for (Eigen::Index i = 0; i < from.dim(); ++i)
        r[i] -= box[static_cast<std::size_t>(i)].clamp(r[i]);
      return weighted_norm<Scalar>(from.metric_weights, r);
    }
    return weighted_norm<Scalar>(from.metric_weights, r);
  };
  return gen;
}

}  // namespace isoblock
