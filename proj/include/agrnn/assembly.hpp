#pragma once

#include <string>
#include <vector>

#include "agrnn/basis.hpp"
#include "agrnn/geometry.hpp"
#include "agrnn/pde.hpp"

namespace agrnn {

enum class RowKind { Interior, Boundary, Interface };

/// Contiguous run of rows sharing one provenance.
struct RowBlock {
  RowKind kind = RowKind::Interior;
  std::string label;  // segment id for boundary rows, interface index for interface rows
  int begin = 0;
  int count = 0;
};

struct LsqSystem {
  Mat A;
  Vec rhs;
  std::vector<RowBlock> rows;
  double eta = 1.0;

  int row_count() const { return static_cast<int>(A.rows()); }
  int col_count() const { return static_cast<int>(A.cols()); }
  RowKind kind_of(int row) const;
};

struct SolveReport {
  Vec coeffs;
  double residual_norm = 0.0;
  int effective_rank = 0;
  int dropped_columns = 0;
};

inline constexpr double kRankTolerance = 1e-12;

/// Interior rows: lin applied to the basis jets, rhs f + rhs_correction.
/// Boundary rows: eta * phi, rhs eta * g.
LsqSystem assemble(const PdeProblem& problem, const LinearizedOperator& lin, const RnnSpace& space,
                   const CollocationSet& colloc);

/// Fills rows [row0, row0 + points.rows()) of `A` with lin applied to the basis at `points`.
void fill_operator_rows(Eigen::Ref<Mat> A, int row0, const LinearizedOperator& lin,
                        const RnnSpace& space, const PointSet& points);
/// Fills rows with scale * phi(points).
void fill_value_rows(Eigen::Ref<Mat> A, int row0, double scale, const RnnSpace& space,
                     const PointSet& points);

/// Least squares on unit-norm columns by Householder QR followed by
/// column-pivoted QR of the square factor; columns whose pivoted R diagonal falls below kRankTolerance times the
/// largest are dropped (coefficient 0).
SolveReport solve_qr(const LsqSystem& system);
/// Same, factorizing the system's storage in place.
SolveReport solve_qr(LsqSystem&& system);
SolveReport solve_least_squares(Mat A, Vec rhs);

/// Keeps the first fixed.size() coefficients at `fixed` and solves for the rest
/// against rhs - A_fixed * fixed. The report covers all columns.
SolveReport solve_qr_frozen(LsqSystem&& system, const Vec& fixed);

struct LossReport {
  double interior_rms = 0.0;
  double boundary_rms = 0.0;
  double loss = 0.0;  // interior_rms + eta * boundary_rms
};

LossReport loss_eta(const PdeProblem& problem, const Solution& u, const CollocationSet& colloc);
/// Same, from precomputed interior residuals G(u) - f.
LossReport loss_eta(const PdeProblem& problem, const Vec& interior_residual, const Solution& u,
                    const CollocationSet& colloc);

/// ||approx - exact||_2 / ||exact||_2 with quadrature weights. Throws
/// division-by-zero when exact vanishes on every node.
double relative_l2_error(const Vec& approx, const Vec& exact, const Vec& weights);
double relative_l2_error(const Solution& u, const ScalarField& exact, const QuadratureRule& rule);
double relative_l2_error(const ScalarField& approx, const ScalarField& exact, const QuadratureRule& rule);

/// Quadrature L1 norm of a - b.
double l1_difference(const Vec& a, const Vec& b, const Vec& weights);

Vec evaluate(const ScalarField& f, const PointSet& points);

}  // namespace agrnn
