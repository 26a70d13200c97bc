#include "agrnn/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "agrnn/error.hpp"

namespace agrnn {

RowKind LsqSystem::kind_of(int row) const {
  for (const auto& b : rows) {
    if (row >= b.begin && row < b.begin + b.count) return b.kind;
  }
  throw Error(ErrorKind::InvalidConfig, "row index out of range");
}

namespace {

constexpr int kChunk = 128;

}  // namespace

void fill_operator_rows(Eigen::Ref<Mat> A, int row0, const LinearizedOperator& lin,
                        const RnnSpace& space, const PointSet& points) {
  const int order = lin.order();
  if (order > space.max_order())
    throw Error(ErrorKind::UnsupportedDerivative,
                "operator needs derivatives of order " + std::to_string(order) +
                    " but the trial space provides only " + std::to_string(space.max_order()));
  const int M = space.size();
  const auto n = points.rows();
  Mat buf(M, kChunk);
  PointJets pj;
  for (Eigen::Index i0 = 0; i0 < n; i0 += kChunk) {
    const auto nb = std::min<Eigen::Index>(kChunk, n - i0);
    for (Eigen::Index k = 0; k < nb; ++k) {
      const auto i = i0 + k;
      space.eval_point(points.row(i).transpose(), order, pj);
      auto col = buf.col(k);
      col = lin.c_val[i] * pj.value;
      for (Eigen::Index t = 0; t < points.cols(); ++t) {
        if (order >= 1 && lin.c_grad(i, t) != 0.0) col.noalias() += lin.c_grad(i, t) * pj.gradient.col(t);
        if (order >= 2 && lin.c_lap(i, t) != 0.0) col.noalias() += lin.c_lap(i, t) * pj.second_diag.col(t);
      }
    }
    A.middleRows(row0 + i0, nb) = buf.leftCols(nb).transpose();
  }
}

void fill_value_rows(Eigen::Ref<Mat> A, int row0, double scale, const RnnSpace& space,
                     const PointSet& points) {
  PointJets pj;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    space.eval_point(points.row(i).transpose(), 0, pj);
    A.row(row0 + i) = scale * pj.value.transpose();
  }
}

LsqSystem assemble(const PdeProblem& problem, const LinearizedOperator& lin, const RnnSpace& space,
                   const CollocationSet& colloc) {
  const int NI = colloc.interior_count();
  if (lin.size() != NI)
    throw Error(ErrorKind::InvalidConfig, "linearized operator must cover every interior point");
  const int N = NI + colloc.boundary_count();
  LsqSystem sys{Mat(N, space.size()), Vec(N), {}, problem.eta};
  fill_operator_rows(sys.A, 0, lin, space, colloc.interior);
  for (int i = 0; i < NI; ++i)
    sys.rhs[i] = problem.rhs(colloc.interior.row(i).transpose()) + lin.rhs_correction[i];
  sys.rows.push_back({RowKind::Interior, "interior", 0, NI});

  int row = NI;
  for (const auto& bp : colloc.boundary) {
    const auto& bc = problem.condition(bp.segment_id);
    const int nb = static_cast<int>(bp.points.rows());
    fill_value_rows(sys.A, row, problem.eta, space, bp.points);
    for (int j = 0; j < nb; ++j) sys.rhs[row + j] = problem.eta * bc.g(bp.points.row(j).transpose());
    sys.rows.push_back({RowKind::Boundary, bp.segment_id, row, nb});
    row += nb;
  }
  return sys;
}

namespace {

// Column-pivoted QR of a small (or wide) system; `extra_sq` is residual mass
// already eliminated by an outer factorization.
SolveReport pivoted_solve(const Mat& R, const Vec& c, double extra_sq) {
  const auto M = R.cols();
  Eigen::ColPivHouseholderQR<Mat> qr(R);
  const Mat& F = qr.matrixQR();
  const auto kmax = std::min(F.rows(), F.cols());
  double dmax = 0.0;
  for (Eigen::Index k = 0; k < kmax; ++k) dmax = std::max(dmax, std::abs(F(k, k)));
  if (!std::isfinite(dmax)) throw Error(ErrorKind::SolverFailure, "non-finite entries in the system");
  Eigen::Index r = 0;
  while (r < kmax && dmax > 0.0 && std::abs(F(r, r)) >= kRankTolerance * dmax) ++r;
  if (r == 0) throw Error(ErrorKind::SingularSystem, "every column fell below the rank tolerance");

  const Vec qc = qr.householderQ().adjoint() * c;
  const Vec y = F.topLeftCorner(r, r).triangularView<Eigen::Upper>().solve(qc.head(r));
  SolveReport rep;
  rep.coeffs = Vec::Zero(M);
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = 0; k < r; ++k) rep.coeffs[perm[k]] = y[k];
  rep.residual_norm = std::sqrt(extra_sq + qc.tail(qc.size() - r).squaredNorm());
  rep.effective_rank = static_cast<int>(r);
  rep.dropped_columns = static_cast<int>(M - r);
  return rep;
}

SolveReport factor_and_solve(Eigen::Ref<Mat> A, Vec b) {
  const auto N = A.rows(), M = A.cols();
  if (N <= M) return pivoted_solve(A, b, 0.0);
  Eigen::HouseholderQR<Eigen::Ref<Mat>> qr(A);
  b.applyOnTheLeft(qr.householderQ().adjoint());
  const Mat R = qr.matrixQR().topRows(M).triangularView<Eigen::Upper>();
  return pivoted_solve(R, b.head(M), b.tail(N - M).squaredNorm());
}

// Columns are scaled to unit norm first so the rank decision does not depend
// on how individual basis functions happen to be scaled.
SolveReport solve_in_place(Eigen::Ref<Mat> A, Vec b) {
  const auto N = A.rows(), M = A.cols();
  if (N < 1 || M < 1) throw Error(ErrorKind::InvalidConfig, "empty least-squares system");
  if (b.size() != N) throw Error(ErrorKind::InvalidConfig, "rhs length must equal the row count");
  if (!A.allFinite() || !b.allFinite()) throw Error(ErrorKind::SolverFailure, "non-finite entries in the system");
  Vec scale = A.colwise().norm().transpose();
  for (Eigen::Index k = 0; k < M; ++k) {
    if (!(scale[k] > 0.0) || !std::isfinite(scale[k])) scale[k] = 1.0;
    A.col(k) /= scale[k];
  }
  SolveReport rep = factor_and_solve(A, std::move(b));
  rep.coeffs.array() /= scale.array();
  return rep;
}

}  // namespace

SolveReport solve_least_squares(Mat A, Vec rhs) { return solve_in_place(A, std::move(rhs)); }

SolveReport solve_qr(const LsqSystem& system) { return solve_least_squares(system.A, system.rhs); }

SolveReport solve_qr(LsqSystem&& system) { return solve_in_place(system.A, std::move(system.rhs)); }

SolveReport solve_qr_frozen(LsqSystem&& system, const Vec& fixed) {
  const auto nf = fixed.size();
  const auto M = system.A.cols();
  if (nf < 0 || nf >= M) throw Error(ErrorKind::InvalidConfig, "frozen columns must leave at least one free column");
  Vec b = system.rhs - system.A.leftCols(nf) * fixed;
  SolveReport inner = solve_in_place(system.A.rightCols(M - nf), std::move(b));
  SolveReport rep = inner;
  rep.coeffs.resize(M);
  rep.coeffs << fixed, inner.coeffs;
  return rep;
}

LossReport loss_eta(const PdeProblem& problem, const Vec& interior_residual, const Solution& u,
                    const CollocationSet& colloc) {
  LossReport r;
  if (interior_residual.size() > 0)
    r.interior_rms = std::sqrt(interior_residual.squaredNorm() / static_cast<double>(interior_residual.size()));
  double sq = 0.0;
  int count = 0;
  for (const auto& bp : colloc.boundary) {
    const auto& bc = problem.condition(bp.segment_id);
    const Vec v = u.predict(bp.points);
    for (Eigen::Index j = 0; j < bp.points.rows(); ++j) {
      const double e = v[j] - bc.g(bp.points.row(j).transpose());
      sq += e * e;
    }
    count += static_cast<int>(bp.points.rows());
  }
  if (count > 0) r.boundary_rms = std::sqrt(sq / count);
  r.loss = r.interior_rms + problem.eta * r.boundary_rms;
  return r;
}

LossReport loss_eta(const PdeProblem& problem, const Solution& u, const CollocationSet& colloc) {
  return loss_eta(problem, operator_residual(problem, u, colloc.interior), u, colloc);
}

double relative_l2_error(const Vec& approx, const Vec& exact, const Vec& weights) {
  const double den = weights.dot(exact.cwiseAbs2());
  if (!(den > 0.0)) throw Error(ErrorKind::DivisionByZero, "exact solution vanishes on every quadrature node");
  return std::sqrt(weights.dot((approx - exact).cwiseAbs2()) / den);
}

Vec evaluate(const ScalarField& f, const PointSet& points) {
  Vec v(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) v[i] = f(points.row(i).transpose());
  return v;
}

double relative_l2_error(const Solution& u, const ScalarField& exact, const QuadratureRule& rule) {
  return relative_l2_error(u.predict(rule.nodes), evaluate(exact, rule.nodes), rule.weights);
}

double relative_l2_error(const ScalarField& approx, const ScalarField& exact, const QuadratureRule& rule) {
  return relative_l2_error(evaluate(approx, rule.nodes), evaluate(exact, rule.nodes), rule.weights);
}

double l1_difference(const Vec& a, const Vec& b, const Vec& weights) {
  return weights.dot((a - b).cwiseAbs());
}

}  // namespace agrnn
