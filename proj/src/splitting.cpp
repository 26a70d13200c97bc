#include "agrnn/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agrnn/assembly.hpp"
#include "agrnn/error.hpp"

namespace agrnn {

int RangePartition::segment_of_value(double v) const {
  for (int j = 1; j < segments; ++j) {
    if (v <= thresholds[static_cast<size_t>(j)]) return j - 1;
  }
  return segments - 1;
}

namespace {

std::vector<double> equal_thresholds(double lo, double hi, int R) {
  std::vector<double> v(static_cast<size_t>(R + 1));
  for (int j = 0; j <= R; ++j) v[static_cast<size_t>(j)] = lo + (hi - lo) * j / R;
  v.back() = hi;
  return v;
}

}  // namespace

RangePartition build_partition(const Solution& pilot, const PdeProblem& problem, const CollocationSet& colloc,
                               int R, PartitionMode mode) {
  if (R < 2) throw Error(ErrorKind::InvalidConfig, "a split needs R >= 2 segments");
  RangePartition p;
  p.mode = mode;
  p.segments = R;
  if (mode == PartitionMode::UserIndicator)
    throw Error(ErrorKind::InvalidConfig, "indicator partitions are built with indicator_partition");
  if (mode == PartitionMode::PilotRange) {
    const Vec v = pilot.predict(colloc.interior);
    const double lo = v.minCoeff(), hi = v.maxCoeff();
    if (!(hi > lo)) throw Error(ErrorKind::DegenerateRange, "pilot solution is constant on the interior points");
    p.thresholds = equal_thresholds(lo, hi, R);
    return p;
  }
  if (R != 2) throw Error(ErrorKind::InvalidConfig, "boundary-midpoint partitions have exactly two segments");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& bp : colloc.boundary) {
    const auto& bc = problem.condition(bp.segment_id);
    for (Eigen::Index j = 0; j < bp.points.rows(); ++j) {
      const double g = bc.g(bp.points.row(j).transpose());
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
  }
  if (!(hi > lo)) throw Error(ErrorKind::DegenerateRange, "boundary data is constant");
  p.thresholds = equal_thresholds(lo, hi, 2);
  return p;
}

RangePartition indicator_partition(SegmentIndicator indicator, int R) {
  if (R < 2) throw Error(ErrorKind::InvalidConfig, "a split needs R >= 2 segments");
  if (!indicator) throw Error(ErrorKind::InvalidConfig, "indicator partition needs an indicator");
  RangePartition p;
  p.mode = PartitionMode::UserIndicator;
  p.indicator = std::move(indicator);
  p.segments = R;
  return p;
}

double default_eps_r(const RangePartition& partition) {
  if (partition.thresholds.size() < 2) return 0.0;
  return 0.05 * (partition.thresholds.back() - partition.thresholds.front());
}

namespace {

int route_point(const RangePartition& partition, const Solution* pilot, const Vec& x) {
  int s = 0;
  if (partition.mode == PartitionMode::UserIndicator) {
    s = partition.indicator(x);
  } else {
    if (!pilot) throw Error(ErrorKind::InvalidConfig, "range partitions need a pilot solution");
    s = partition.segment_of_value(pilot->predict(x));
  }
  if (s < 0 || s >= partition.segments)
    throw Error(ErrorKind::InvalidConfig, "indicator returned segment " + std::to_string(s));
  return s;
}

PointSet gather(const PointSet& pts, const std::vector<int>& idx) {
  PointSet out(static_cast<Eigen::Index>(idx.size()), pts.cols());
  for (size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = pts.row(idx[k]);
  return out;
}

}  // namespace

SegmentAssignment assign_points(const RangePartition& partition, const Solution* pilot,
                                const CollocationSet& colloc, double eps_r, const PointSet* probe) {
  const int R = partition.segments;
  SegmentAssignment out;
  out.segments.resize(static_cast<size_t>(R));
  out.interior_indices.resize(static_cast<size_t>(R));
  for (int i = 0; i < colloc.interior_count(); ++i)
    out.interior_indices[static_cast<size_t>(route_point(partition, pilot, colloc.interior.row(i).transpose()))]
        .push_back(i);
  for (int j = 0; j < R; ++j) {
    auto& seg = out.segments[static_cast<size_t>(j)];
    seg.epsilon_c = colloc.epsilon_c;
    seg.interior = gather(colloc.interior, out.interior_indices[static_cast<size_t>(j)]);
    if (seg.interior.rows() == 0)
      throw Error(ErrorKind::EmptySegment,
                  "segment " + std::to_string(j) + " received no interior points; try a smaller R");
  }
  for (const auto& bp : colloc.boundary) {
    std::vector<std::vector<int>> idx(static_cast<size_t>(R));
    for (Eigen::Index k = 0; k < bp.points.rows(); ++k)
      idx[static_cast<size_t>(route_point(partition, pilot, bp.points.row(k).transpose()))].push_back(
          static_cast<int>(k));
    for (int j = 0; j < R; ++j)
      out.segments[static_cast<size_t>(j)].boundary.push_back({bp.segment_id, gather(bp.points, idx[static_cast<size_t>(j)])});
  }

  out.theta.resize(static_cast<size_t>(R - 1));
  if (partition.mode == PartitionMode::UserIndicator) {
    for (auto& t : out.theta) t.resize(0, colloc.interior.cols());
    return out;
  }
  const PointSet& pts = probe ? *probe : colloc.interior;
  const Vec v = pilot->predict(pts);
  for (int j = 1; j < R; ++j) {
    const double vj = partition.thresholds[static_cast<size_t>(j)];
    std::vector<int> idx;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (v[k] >= vj - eps_r && v[k] <= vj + eps_r) idx.push_back(static_cast<int>(k));
    }
    out.theta[static_cast<size_t>(j - 1)] = gather(pts, idx);
  }
  return out;
}

int SplitModel::route(const Vec& x) const { return route_point(partition, pilot ? &*pilot : nullptr, x); }

double SplitModel::predict(const Vec& x) const { return segments[static_cast<size_t>(route(x))].predict(x); }

Vec SplitModel::predict(const PointSet& points) const {
  Vec out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out[i] = predict(Vec(points.row(i).transpose()));
  return out;
}

double predict_split(const SplitModel& model, const Vec& x) { return model.predict(x); }

namespace {

// Block-diagonal system over all segments, plus interface rows when coupled.
void solve_joint(const PdeProblem& problem, const SegmentAssignment& asg, const std::vector<RnnSpace>& spaces,
                 const SplitOptions& opts, bool coupled, SplitModel& model) {
  const int R = static_cast<int>(spaces.size());
  const bool nonlinear = is_nonlinear(problem.op);
  const int iterations = nonlinear ? opts.solve.picard + opts.solve.newton : 1;
  if (iterations < 1) throw Error(ErrorKind::InvalidConfig, "need It_P + It_N >= 1");

  std::vector<int> col0(static_cast<size_t>(R + 1), 0);
  for (int j = 0; j < R; ++j) col0[static_cast<size_t>(j + 1)] = col0[static_cast<size_t>(j)] + spaces[static_cast<size_t>(j)].size();
  int interface_rows = 0;
  if (coupled) {
    for (const auto& t : asg.theta) interface_rows += static_cast<int>(t.rows());
  }

  IterationLog log;
  Vec prev = Vec::Zero(col0.back());
  model.segments.clear();
  for (int it = 0; it < iterations; ++it) {
    const Linearization kind = it < opts.solve.picard || !nonlinear ? Linearization::Picard : Linearization::Newton;
    std::vector<LsqSystem> systems;
    int rows = interface_rows;
    for (int j = 0; j < R; ++j) {
      const auto& seg = asg.segments[static_cast<size_t>(j)];
      const Solution* state = model.segments.empty() ? opts.solve.initial : &model.segments[static_cast<size_t>(j)];
      systems.push_back(assemble(problem, linearize(problem, seg.interior, state, kind), spaces[static_cast<size_t>(j)], seg));
      rows += systems.back().row_count();
    }
    Mat A = Mat::Zero(rows, col0.back());
    Vec b = Vec::Zero(rows);
    int r = 0;
    for (int j = 0; j < R; ++j) {
      auto& s = systems[static_cast<size_t>(j)];
      A.block(r, col0[static_cast<size_t>(j)], s.row_count(), s.col_count()) = s.A;
      b.segment(r, s.row_count()) = s.rhs;
      r += s.row_count();
      s.A.resize(0, 0);
    }
    if (coupled) {
      for (int j = 0; j + 1 < R; ++j) {
        const PointSet& theta = asg.theta[static_cast<size_t>(j)];
        for (Eigen::Index k = 0; k < theta.rows(); ++k, ++r) {
          const Vec x = theta.row(k).transpose();
          A.row(r).segment(col0[static_cast<size_t>(j)], spaces[static_cast<size_t>(j)].size()) =
              problem.eta * spaces[static_cast<size_t>(j)].eval_values(x).transpose();
          A.row(r).segment(col0[static_cast<size_t>(j + 1)], spaces[static_cast<size_t>(j + 1)].size()) =
              -problem.eta * spaces[static_cast<size_t>(j + 1)].eval_values(x).transpose();
        }
      }
    }
    SolveReport rep;
    try {
      rep = solve_least_squares(std::move(A), std::move(b));
    } catch (const Error& e) {
      throw IterationError(e, log);
    }
    model.segments.clear();
    double loss = 0.0;
    for (int j = 0; j < R; ++j) {
      model.segments.emplace_back(spaces[static_cast<size_t>(j)],
                                  rep.coeffs.segment(col0[static_cast<size_t>(j)], spaces[static_cast<size_t>(j)].size()));
      loss += loss_eta(problem, model.segments.back(), asg.segments[static_cast<size_t>(j)]).loss;
    }
    log.records.push_back({kind, loss, (rep.coeffs - prev).norm()});
    prev = rep.coeffs;
  }
  model.logs = {std::move(log)};
}

}  // namespace

SplitModel solve_split(const PdeProblem& problem, const RangePartition& partition, const Solution* pilot,
                       const SegmentAssignment& assignment, const std::vector<RnnSpace>& spaces,
                       const SplitOptions& opts) {
  if (static_cast<int>(spaces.size()) != partition.segments)
    throw Error(ErrorKind::InvalidConfig, "one trial space per segment is required");
  SplitModel model;
  if (pilot) model.pilot = *pilot;
  model.partition = partition;
  model.theta = assignment.theta;
  model.continuous = opts.continuous;
  model.eps_r = opts.eps_r > 0.0 ? opts.eps_r : default_eps_r(partition);

  if (opts.continuous || opts.joint) {
    solve_joint(problem, assignment, spaces, opts, opts.continuous, model);
    return model;
  }
  for (int j = 0; j < partition.segments; ++j) {
    SolveOutcome out = solve_problem(problem, spaces[static_cast<size_t>(j)],
                                     assignment.segments[static_cast<size_t>(j)], opts.solve);
    model.segments.push_back(std::move(out.solution));
    model.logs.push_back(std::move(out.log));
  }
  return model;
}

SplitModel solve_split(const PdeProblem& problem, const RangePartition& partition, const Solution* pilot,
                       const CollocationSet& colloc, const std::vector<RnnSpace>& spaces, const SplitOptions& opts) {
  const double eps_r = opts.eps_r > 0.0 ? opts.eps_r : default_eps_r(partition);
  const SegmentAssignment asg = assign_points(partition, pilot, colloc, eps_r, opts.probe);
  return solve_split(problem, partition, pilot, asg, spaces, opts);
}

}  // namespace agrnn
