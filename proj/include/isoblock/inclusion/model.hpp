#pragma once

#include <Eigen/SparseCore>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isoblock/core/interval.hpp"
#include "isoblock/core/state.hpp"

namespace isoblock {

/// A differential inclusion  u' in A u + F(u) + b(u)  with
///   A    an optional stiff linear part (treated implicitly),
///   F    the set-valued selection map (componentwise closed intervals,
///        treated explicitly via a per-step selection),
///   b    an optional explicit single-valued term.
///
/// `lipschitz_C` bounds the Hausdorff distance of the value sets,
/// dist_H(F(x), F(z)) <= C d(x, z); 0 means unknown/not supplied.
template <typename Scalar>
struct InclusionModel {
  Eigen::Index dimension = 0;
  VecX<Scalar> metric_weights;
  std::function<IntervalBox<Scalar>(const VecX<Scalar>&)> selection_set;
  std::optional<Eigen::SparseMatrix<Scalar>> linear_part;
  std::function<VecX<Scalar>(const VecX<Scalar>&)> nonstiff;
  Scalar lipschitz_C = 0;
  bool single_valued = false;  ///< value sets are singletons; selections are not stored
  std::vector<VecX<Scalar>> equilibria;  ///< known rest points, if any
  std::string id;

  void validate() const {
    if (dimension < 1) throw config_error("InclusionModel: dimension must be >= 1");
    if (metric_weights.size() != dimension)
      throw config_error("InclusionModel: weight length must match dimension");
    if (!selection_set) throw config_error("InclusionModel: selection_set is required");
    if (linear_part &&
        (linear_part->rows() != dimension || linear_part->cols() != dimension))
      throw config_error("InclusionModel: linear_part must be dimension x dimension");
  }

  VecX<Scalar> explicit_term(const VecX<Scalar>& u) const {
    if (nonstiff) return nonstiff(u);
    return VecX<Scalar>::Zero(dimension);
  }
};

}  // namespace isoblock
