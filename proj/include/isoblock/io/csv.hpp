#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "isoblock/block/block.hpp"
#include "isoblock/core/common.hpp"
#include "isoblock/core/trajectory.hpp"

namespace isoblock {
namespace io {

namespace detail {

inline void append_g17(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace detail

/// Renders a trajectory as CSV with header `t,x_1,...,x_n`, one row per grid
/// node, all numbers at full double precision.
template <typename Scalar>
std::string trajectory_csv(const Trajectory<Scalar>& traj) {
  std::string out = "t";
  for (Eigen::Index i = 0; i < traj.dim(); ++i) out += ",x_" + std::to_string(i + 1);
  out.push_back('\n');
  for (Eigen::Index j = 0; j <= traj.steps(); ++j) {
    detail::append_g17(out, static_cast<double>(traj.time(j)));
    for (Eigen::Index i = 0; i < traj.dim(); ++i) {
      out.push_back(',');
      detail::append_g17(out, static_cast<double>(traj.states(j, i)));
    }
    out.push_back('\n');
  }
  return out;
}

/// Renders labeled block boundary samples as CSV with header
/// `x_1,...,x_n,g_plus,g_minus,label,flagged`.
template <typename Scalar>
std::string block_samples_csv(const std::vector<BlockSample<Scalar>>& samples) {
  std::string out;
  if (samples.empty()) return "\n";
  const Eigen::Index n = samples.front().point.dim();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) out.push_back(',');
    out += "x_" + std::to_string(i + 1);
  }
  out += ",g_plus,g_minus,label,flagged\n";
  for (const auto& s : samples) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i > 0) out.push_back(',');
      detail::append_g17(out, static_cast<double>(s.point.coords[i]));
    }
    out.push_back(',');
    detail::append_g17(out, static_cast<double>(s.g_plus));
    out.push_back(',');
    detail::append_g17(out, static_cast<double>(s.g_minus));
    out.push_back(',');
    out += to_string(s.label);
    out.push_back(',');
    out += s.flagged ? "1" : "0";
    out.push_back('\n');
  }
  return out;
}

}  // namespace io
}  // namespace isoblock
