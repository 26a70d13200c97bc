#include "doctest.h"

#include "agrnn/assembly.hpp"
#include "agrnn/error.hpp"
#include "support.hpp"

using namespace agrnn;
using agrnn::test::vec;

namespace {

PdeProblem poisson1d(double eta = 1.0) {
  PdeProblem p = make_problem("poisson-1");
  p.eta = eta;
  return p;
}

CollocationSet colloc1d(const PdeProblem& p, int n) {
  return make_collocation(p.domain, {n}, p.segments());
}

}  // namespace

TEST_CASE("tiny least-squares systems") {
  Mat A(2, 1);
  A << 1, 1;
  SolveReport r = solve_least_squares(A, vec({1, 1}));
  CHECK(r.coeffs[0] == doctest::Approx(1.0));
  CHECK(r.residual_norm == doctest::Approx(0.0));
  r = solve_least_squares(A, vec({0, 2}));
  CHECK(r.coeffs[0] == doctest::Approx(1.0));
  CHECK(r.residual_norm == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.effective_rank == 1);
}

TEST_CASE("QR matches the normal equations") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat A = test::random_matrix(rng, 200, 50);
    const Vec b = test::random_vec(rng, 200);
    const Vec oracle = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    const SolveReport r = solve_least_squares(A, b);
    CHECK((r.coeffs - oracle).norm() <= 1e-8 * oracle.norm());
    CHECK(r.residual_norm == doctest::Approx((A * oracle - b).norm()).epsilon(1e-10));
    CHECK(r.dropped_columns == 0);
  }
}

TEST_CASE("rank-deficient columns get zero coefficients") {
  Rng rng(8);
  Mat A = test::random_matrix(rng, 40, 6);
  A.col(4) = 2.0 * A.col(1) - A.col(2);
  A.col(5).setZero();
  const Vec b = test::random_vec(rng, 40);
  const SolveReport r = solve_least_squares(A, b);
  CHECK(r.effective_rank == 4);
  CHECK(r.dropped_columns == 2);
  CHECK(r.coeffs[5] == 0.0);
  const Mat Af = A.leftCols(4);
  const Vec full = (Af.transpose() * Af).ldlt().solve(Af.transpose() * b);
  CHECK((A * r.coeffs - b).norm() == doctest::Approx((Af * full - b).norm()).epsilon(1e-10));
}

TEST_CASE("badly scaled columns") {
  Rng rng(12);
  Mat A = test::random_matrix(rng, 60, 5);
  A.col(0) *= 1e6;
  A.col(3) *= 1e-6;
  Vec x = test::random_vec(rng, 5);
  x[0] *= 1e-6;
  x[3] *= 1e6;
  const SolveReport r = solve_least_squares(A, A * x);
  CHECK(r.dropped_columns == 0);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(r.coeffs[k] - x[k]) <= 1e-9 * std::abs(x[k]));
}

TEST_CASE("frozen leading coefficients") {
  Rng rng(6);
  const Mat A = test::random_matrix(rng, 30, 5);
  const Vec b = test::random_vec(rng, 30);
  LsqSystem sys{A, b, {}, 1.0};
  const Vec fixed = vec({0.5, -0.25});
  const SolveReport r = solve_qr_frozen(std::move(sys), fixed);
  CHECK(r.coeffs.head(2) == fixed);
  const Mat Ar = A.rightCols(3);
  const Vec oracle = (Ar.transpose() * Ar).ldlt().solve(Ar.transpose() * (b - A.leftCols(2) * fixed));
  CHECK((r.coeffs.tail(3) - oracle).norm() <= 1e-10 * oracle.norm());
  CHECK_THROWS_AS(solve_qr_frozen(LsqSystem{A, b, {}, 1.0}, Vec::Zero(5)), Error);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_least_squares(Mat(0, 0), Vec()), Error);
  CHECK_THROWS_AS(solve_least_squares(Mat::Ones(3, 2), Vec::Ones(2)), Error);
  Mat bad = Mat::Ones(3, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(solve_least_squares(bad, Vec::Ones(3)), Error);
}

TEST_CASE("Poisson rows of a Gaussian basis function") {
  const PdeProblem p = poisson1d(3000.0);
  CollocationSet c;
  c.interior = PointSet::Zero(1, 1);
  c.boundary = sample_boundary(p.domain, p.segments());
  const RnnSpace space(DenseLayerBlock(Mat::Ones(1, 1), Vec::Zero(1), Activation(ActivationKind::Gaussian)));
  const LsqSystem sys = assemble(p, linearize(p, c.interior, nullptr), space, c);
  REQUIRE(sys.row_count() == 3);
  CHECK(sys.A(0, 0) == doctest::Approx(1.0));
  CHECK(sys.A(1, 0) == 3000.0 * std::exp(-0.0));
  CHECK(sys.A(2, 0) == doctest::Approx(3000.0 * std::exp(-0.5)));
  CHECK(sys.rhs[1] == 3000.0 * p.condition(sys.rows[1].label).g(vec({0.0})));
  CHECK(sys.kind_of(0) == RowKind::Interior);
  CHECK(sys.kind_of(2) == RowKind::Boundary);
}

TEST_CASE("advection rows are directional derivatives") {
  const PdeProblem p = make_problem("ar-2");
  Rng rng(3);
  const RnnSpace space(test::random_dense(rng, 4, 2, 2.0, ActivationKind::Tanh));
  CollocationSet c;
  c.interior = test::random_matrix(rng, 5, 2, 0.0, 1.0);
  const LsqSystem sys = assemble(p, linearize(p, c.interior, nullptr), space, c);
  for (int i = 0; i < 5; ++i) {
    const auto jets = space.eval_point_jets(c.interior.row(i).transpose(), 1, JetMode::Laplacian);
    for (int k = 0; k < 4; ++k) CHECK(sys.A(i, k) == doctest::Approx(jets[k].gradient[1]));
  }
}

TEST_CASE("loss of exact and zero solutions") {
  const PdeProblem p = poisson1d();
  const CollocationSet c = colloc1d(p, 50);
  const RnnSpace space(DenseLayerBlock(Mat::Ones(1, 1), Vec::Zero(1), Activation(ActivationKind::Tanh)));
  const LossReport zero = loss_eta(p, Solution(space, Vec::Zero(1)), c);
  double f2 = 0.0;
  for (int i = 0; i < c.interior_count(); ++i) f2 += std::pow(p.rhs(c.interior.row(i).transpose()), 2);
  CHECK(zero.interior_rms == doctest::Approx(std::sqrt(f2 / c.interior_count())));
  CHECK(zero.boundary_rms == doctest::Approx(0.0));

  // u = sin(pi x) is represented exactly by one sine neuron
  PdeProblem sine = p;
  sine.rhs = [](const Vec& x) { return M_PI * M_PI * std::sin(M_PI * x[0]); };
  for (auto& bc : sine.boundary) bc.g = [](const Vec& x) { return std::sin(M_PI * x[0]); };
  const RnnSpace one(DenseLayerBlock(Mat::Constant(1, 1, M_PI), Vec::Zero(1), Activation(ActivationKind::Sine)));
  CHECK(loss_eta(sine, Solution(one, vec({1.0})), c).loss <= 1e-6);
  const SolveReport r = solve_qr(assemble(sine, linearize(sine, c.interior, nullptr), one, c));
  CHECK(r.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("relative L2 error") {
  const QuadratureRule q = tensor_quadrature(Hypercube::unit(1), 8);
  ScalarField u = [](const Vec& x) { return std::sin(3 * x[0]) + 2; };
  CHECK(relative_l2_error(u, u, q) == 0.0);
  CHECK(relative_l2_error([&](const Vec& x) { return 2 * u(x); }, u, q) == doctest::Approx(1.0));
  ScalarField one = [](const Vec&) { return 1.0; };
  CHECK(std::abs(relative_l2_error([](const Vec&) { return 1.1; }, one, q) - 0.1) < 1e-12);
  ScalarField zero = [](const Vec&) { return 0.0; };
  CHECK_THROWS_AS(relative_l2_error(one, zero, q), Error);
  CHECK(l1_difference(Vec::Ones(q.size()), Vec::Zero(q.size()), q.weights) == doctest::Approx(1.0));
}

TEST_CASE("enriching the space never raises the residual") {
  const PdeProblem p = poisson1d();
  const CollocationSet c = colloc1d(p, 200);
  Rng rng(31);
  DenseLayerBlock block = test::random_dense(rng, 10, 1, 30.0, ActivationKind::Tanh);
  double prev = std::numeric_limits<double>::infinity();
  for (int stage = 0; stage < 5; ++stage) {
    const RnnSpace space(block);
    const double res = solve_qr(assemble(p, linearize(p, c.interior, nullptr), space, c)).residual_norm;
    CHECK(res <= prev + 1e-10);
    prev = res;
    block = block.append(test::random_dense(rng, 10, 1, 60.0, ActivationKind::Tanh));
  }
}

TEST_CASE("larger eta tightens the boundary fit") {
  Rng rng(2);
  const RnnSpace space(test::random_dense(rng, 15, 1, 40.0, ActivationKind::Tanh));
  double prev = std::numeric_limits<double>::infinity();
  for (double eta : {1.0, 1e2, 1e4}) {
    const PdeProblem p = poisson1d(eta);
    const CollocationSet c = colloc1d(p, 100);
    const SolveReport r = solve_qr(assemble(p, linearize(p, c.interior, nullptr), space, c));
    const double b = loss_eta(p, Solution(space, r.coeffs), c).boundary_rms;
    CHECK(b <= prev);
    prev = b;
  }
}
