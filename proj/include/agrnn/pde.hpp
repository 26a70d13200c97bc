#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agrnn/basis.hpp"
#include "agrnn/geometry.hpp"
#include "agrnn/types.hpp"

namespace agrnn {

/// G u = -lap u.
struct Poisson {};

/// G u = div(beta u) + gamma u = beta . grad u + (div beta + gamma) u.
struct AdvectionReaction {
  std::function<Vec(const Vec&)> beta;
  ScalarField div_beta;
  double gamma = 0.0;
};

/// G u = u_t + (u^2/2)_x - eps u_xx on (t, x).
struct BurgersViscous {
  double eps = 0.0;
};

using OperatorDescriptor = std::variant<Poisson, AdvectionReaction, BurgersViscous>;

bool is_nonlinear(const OperatorDescriptor& op);
/// Derivative order the operator needs from the trial space.
int operator_order(const OperatorDescriptor& op);

enum class Linearization { Picard, Newton };

/// Row action c_val phi + c_grad . grad phi + sum_t c_lap_t d_tt phi at one point.
struct PointCoeffs {
  double c_val = 0.0;
  Vec c_grad;
  Vec c_lap;
  double rhs_correction = 0.0;

  double apply(double value, const Vec& grad, const Vec& second_diag) const;
  int order() const;
};

/// Coefficients of a linear operator at x. Throws invalid-config for Burgers.
PointCoeffs linear_coeffs(const OperatorDescriptor& op, const Vec& x);
/// Burgers linearized around a state with jet (u, grad u) at the point.
PointCoeffs burgers_coeffs(const BurgersViscous& op, double u, const Vec& grad_u, Linearization kind);

/// Per-point coefficients over a point set.
struct LinearizedOperator {
  Vec c_val;           // n
  Mat c_grad;          // n x d
  Mat c_lap;           // n x d
  Vec rhs_correction;  // n

  int size() const { return static_cast<int>(c_val.size()); }
  PointCoeffs at(int i) const;
  /// Highest derivative order with a nonzero coefficient.
  int order() const;

  static LinearizedOperator from_linear(const OperatorDescriptor& op, const PointSet& points);
  /// Burgers around `state`; a missing state means the zero function.
  static LinearizedOperator burgers(const BurgersViscous& op, const PointSet& points,
                                    const Solution* state, Linearization kind);
  static LinearizedOperator identity(const PointSet& points);
};

struct BoundaryCondition {
  BoundarySegment segment;
  ScalarField g;
};

struct PdeProblem {
  std::string id;
  OperatorDescriptor op;
  Domain domain;
  ScalarField rhs;
  std::vector<BoundaryCondition> boundary;
  double eta = 1.0;
  std::optional<ScalarField> exact;

  int dim() const { return domain.dim(); }
  std::vector<BoundarySegment> segments() const;
  const BoundaryCondition& condition(const std::string& segment_id) const;
};

/// Linearized operator for `problem` at `points`: linear operators ignore the
/// state; Burgers uses it (zero when null).
LinearizedOperator linearize(const PdeProblem& problem, const PointSet& points, const Solution* state,
                             Linearization kind = Linearization::Picard);

/// True operator residual G(u)(x) - f(x), nonlinear terms included.
double operator_residual(const PdeProblem& problem, const Solution& u, const Vec& x);
Vec operator_residual(const PdeProblem& problem, const Solution& u, const PointSet& points);

// Catalog of the reference problems.

double poisson_exact(int case_id, const Vec& x);
/// -lap of poisson_exact, differentiated by hand.
double poisson_rhs(int case_id, const Vec& x);

/// Viscous Burgers with u0 = -sin(pi x) via Cole-Hopf (composite Gauss-Legendre).
double cole_hopf(double eps, double t, double x, int panels = 64, int nodes = 8);
double burgers_exact(int case_id, double t, double x);

struct ProblemSetup {
  double eta = 0.0;                 // 0 selects the catalog default
  std::vector<int> boundary_counts; // per segment, grid count on each free axis; empty = default
};

/// Ids: poisson-1..4, ar-1, ar-2, burgers-1..4.
PdeProblem make_problem(const std::string& id, const ProblemSetup& setup = {});
std::vector<std::string> problem_ids();

}  // namespace agrnn
