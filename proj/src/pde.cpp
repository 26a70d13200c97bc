#include "agrnn/pde.hpp"

#include "agrnn/error.hpp"

namespace agrnn {

bool is_nonlinear(const OperatorDescriptor& op) { return std::holds_alternative<BurgersViscous>(op); }

int operator_order(const OperatorDescriptor& op) {
  if (std::holds_alternative<Poisson>(op)) return 2;
  if (std::holds_alternative<AdvectionReaction>(op)) return 1;
  return std::get<BurgersViscous>(op).eps != 0.0 ? 2 : 1;
}

double PointCoeffs::apply(double value, const Vec& grad, const Vec& second_diag) const {
  double r = c_val * value;
  if (c_grad.size() > 0) r += c_grad.dot(grad);
  if (c_lap.size() > 0 && !c_lap.isZero(0.0)) r += c_lap.dot(second_diag);
  return r;
}

int PointCoeffs::order() const {
  if (c_lap.size() > 0 && !c_lap.isZero(0.0)) return 2;
  if (c_grad.size() > 0 && !c_grad.isZero(0.0)) return 1;
  return 0;
}

PointCoeffs linear_coeffs(const OperatorDescriptor& op, const Vec& x) {
  const auto d = x.size();
  PointCoeffs c;
  c.c_grad = Vec::Zero(d);
  c.c_lap = Vec::Zero(d);
  if (std::holds_alternative<Poisson>(op)) {
    c.c_lap.setConstant(-1.0);
  } else if (const auto* ar = std::get_if<AdvectionReaction>(&op)) {
    c.c_grad = ar->beta(x);
    c.c_val = (ar->div_beta ? ar->div_beta(x) : 0.0) + ar->gamma;
  } else {
    throw Error(ErrorKind::InvalidConfig, "Burgers operator must be linearized around a state");
  }
  return c;
}

PointCoeffs burgers_coeffs(const BurgersViscous& op, double u, const Vec& grad_u, Linearization kind) {
  PointCoeffs c;
  c.c_grad = Vec(2);
  c.c_grad << 1.0, u;
  c.c_lap = Vec(2);
  c.c_lap << 0.0, -op.eps;
  if (kind == Linearization::Newton) {
    c.c_val = grad_u[1];
    c.rhs_correction = u * grad_u[1];
  }
  return c;
}

PointCoeffs LinearizedOperator::at(int i) const {
  return PointCoeffs{c_val[i], c_grad.row(i).transpose(), c_lap.row(i).transpose(), rhs_correction[i]};
}

int LinearizedOperator::order() const {
  if (!c_lap.isZero(0.0)) return 2;
  if (!c_grad.isZero(0.0)) return 1;
  return 0;
}

namespace {

LinearizedOperator allocate(const PointSet& points) {
  const auto n = points.rows(), d = points.cols();
  return LinearizedOperator{Vec::Zero(n), Mat::Zero(n, d), Mat::Zero(n, d), Vec::Zero(n)};
}

void store(LinearizedOperator& lin, Eigen::Index i, const PointCoeffs& c) {
  lin.c_val[i] = c.c_val;
  lin.c_grad.row(i) = c.c_grad.transpose();
  lin.c_lap.row(i) = c.c_lap.transpose();
  lin.rhs_correction[i] = c.rhs_correction;
}

}  // namespace

LinearizedOperator LinearizedOperator::from_linear(const OperatorDescriptor& op, const PointSet& points) {
  auto lin = allocate(points);
  for (Eigen::Index i = 0; i < points.rows(); ++i) store(lin, i, linear_coeffs(op, points.row(i).transpose()));
  return lin;
}

LinearizedOperator LinearizedOperator::burgers(const BurgersViscous& op, const PointSet& points,
                                               const Solution* state, Linearization kind) {
  if (points.cols() != 2)
    throw Error(ErrorKind::InvalidConfig, "Burgers operator is defined on (t, x) only");
  auto lin = allocate(points);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double u = 0.0;
    Vec g = Vec::Zero(2);
    if (state) {
      const Jet2 j = state->jet(points.row(i).transpose(), 1);
      u = j.value;
      g = j.gradient;
    }
    store(lin, i, burgers_coeffs(op, u, g, kind));
  }
  return lin;
}

LinearizedOperator LinearizedOperator::identity(const PointSet& points) {
  auto lin = allocate(points);
  lin.c_val.setOnes();
  return lin;
}

std::vector<BoundarySegment> PdeProblem::segments() const {
  std::vector<BoundarySegment> out;
  for (const auto& bc : boundary) out.push_back(bc.segment);
  return out;
}

const BoundaryCondition& PdeProblem::condition(const std::string& segment_id) const {
  for (const auto& bc : boundary) {
    if (bc.segment.id == segment_id) return bc;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown boundary segment '" + segment_id + "'");
}

LinearizedOperator linearize(const PdeProblem& problem, const PointSet& points, const Solution* state,
                             Linearization kind) {
  if (const auto* b = std::get_if<BurgersViscous>(&problem.op))
    return LinearizedOperator::burgers(*b, points, state, kind);
  return LinearizedOperator::from_linear(problem.op, points);
}

double operator_residual(const PdeProblem& problem, const Solution& u, const Vec& x) {
  const int order = operator_order(problem.op);
  const Jet2 j = u.jet(x, order);
  double g = 0.0;
  if (std::holds_alternative<Poisson>(problem.op)) {
    g = -j.laplacian();
  } else if (const auto* ar = std::get_if<AdvectionReaction>(&problem.op)) {
    g = ar->beta(x).dot(j.gradient) + ((ar->div_beta ? ar->div_beta(x) : 0.0) + ar->gamma) * j.value;
  } else {
    const auto& b = std::get<BurgersViscous>(problem.op);
    g = j.gradient[0] + j.value * j.gradient[1];
    if (order == 2) g -= b.eps * j.second(1, 0);
  }
  return g - problem.rhs(x);
}

Vec operator_residual(const PdeProblem& problem, const Solution& u, const PointSet& points) {
  Vec r(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) r[i] = operator_residual(problem, u, Vec(points.row(i).transpose()));
  return r;
}

}  // namespace agrnn
