#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "agrnn/basis.hpp"
#include "agrnn/geometry.hpp"
#include "agrnn/nonlinear.hpp"
#include "agrnn/pde.hpp"

namespace agrnn {

enum class PartitionMode { PilotRange, BoundaryMidpoint, UserIndicator };

/// Maps a point to a 0-based segment index.
using SegmentIndicator = std::function<int(const Vec&)>;

/// Segments I_j = [v_{j-1}, v_j) by pilot value, or an explicit indicator.
///
/// A pilot value equal to an interior threshold v_j belongs to the lower
/// segment; values outside [v_0, v_R] go to the nearest end segment.
struct RangePartition {
  PartitionMode mode = PartitionMode::PilotRange;
  std::vector<double> thresholds;  // v_0 < ... < v_R (empty for UserIndicator)
  SegmentIndicator indicator;
  int segments = 2;

  int segment_of_value(double v) const;
};

RangePartition build_partition(const Solution& pilot, const PdeProblem& problem, const CollocationSet& colloc,
                               int R, PartitionMode mode);
RangePartition indicator_partition(SegmentIndicator indicator, int R);

struct SegmentAssignment {
  std::vector<CollocationSet> segments;
  std::vector<std::vector<int>> interior_indices;
  std::vector<PointSet> theta;  // R - 1 interface sets (empty in indicator mode)
};

/// Routes interior and boundary points; Theta_j = probe points with
/// |u0 - v_j| <= eps_r. Throws empty-segment when a segment gets no interior point.
SegmentAssignment assign_points(const RangePartition& partition, const Solution* pilot,
                                const CollocationSet& colloc, double eps_r, const PointSet* probe = nullptr);

struct SplitOptions {
  bool continuous = false;  // interface rows eta (u_j - u_{j+1}) = 0 on Theta_j
  bool joint = false;       // one block-diagonal solve even without coupling
  double eps_r = 0.0;       // 0 selects 0.05 (v_max - v_min)
  const PointSet* probe = nullptr;
  SolveOptions solve;
};

struct SplitModel {
  std::optional<Solution> pilot;
  RangePartition partition;
  std::vector<Solution> segments;
  std::vector<PointSet> theta;
  double eps_r = 0.0;
  bool continuous = false;
  std::vector<IterationLog> logs;

  int route(const Vec& x) const;
  double predict(const Vec& x) const;
  Vec predict(const PointSet& points) const;
};

double default_eps_r(const RangePartition& partition);

/// `spaces[j]` is the trial space of segment j.
SplitModel solve_split(const PdeProblem& problem, const RangePartition& partition, const Solution* pilot,
                       const CollocationSet& colloc, const std::vector<RnnSpace>& spaces,
                       const SplitOptions& opts = {});
SplitModel solve_split(const PdeProblem& problem, const RangePartition& partition, const Solution* pilot,
                       const SegmentAssignment& assignment, const std::vector<RnnSpace>& spaces,
                       const SplitOptions& opts = {});

double predict_split(const SplitModel& model, const Vec& x);

}  // namespace agrnn
