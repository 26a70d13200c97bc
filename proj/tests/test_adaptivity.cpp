#include "doctest.h"

#include "agrnn/adaptivity.hpp"
#include "agrnn/assembly.hpp"
#include "agrnn/error.hpp"
#include "agrnn/nonlinear.hpp"
#include "support.hpp"

using namespace agrnn;
using agrnn::test::vec;

namespace {

FreqInitConfig case1_freq(int m) {
  FreqInitConfig cfg;
  cfg.r_max = 400;
  cfg.lambda = 50;
  cfg.m1 = m;
  return cfg;
}

Solution solve_on(const PdeProblem& p, const CollocationSet& c, const RnnSpace& space) {
  return solve_problem(p, space, c).solution;
}

}  // namespace

TEST_CASE("portable RNG stream") {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  Rng c(1);
  const double v = c.uniform(-3, 5);
  CHECK(v >= -3.0);
  CHECK(v < 5.0);
}

TEST_CASE("dense blocks are anchored") {
  Rng rng(1);
  const Domain box = Domain::box(Hypercube::unit(2));
  const DenseLayerBlock blk = draw_dense_block(box, vec({3, 7}), 200, AnchorMode::BoxUniform,
                                               Activation(ActivationKind::Tanh), rng);
  CHECK(blk.size() == 200);
  CHECK((blk.weights.col(0).array().abs() <= 3.0).all());
  CHECK((blk.weights.col(1).array().abs() <= 7.0).all());
  // the bias places each hyperplane through a point of the box
  for (int i = 0; i < blk.size(); ++i) {
    const double s = blk.bias[i];
    const double w0 = blk.weights(i, 0), w1 = blk.weights(i, 1);
    const double lo = std::min(0.0, w0) + std::min(0.0, w1), hi = std::max(0.0, w0) + std::max(0.0, w1);
    CHECK(-s >= lo - 1e-12);
    CHECK(-s <= hi + 1e-12);
  }

  const DenseLayerBlock one(vec({2, -1}).transpose(), vec({-(2 * 0.5 - 0.25)}), Activation(ActivationKind::Gaussian));
  CHECK(one.bias[0] == -0.75);
  CHECK(RnnSpace(one).eval_values(vec({0.5, 0.25}))[0] == Activation(ActivationKind::Gaussian).value(0.0));
}

TEST_CASE("anchor modes") {
  Rng rng(3);
  const Domain disk = Domain::circle(vec({0, 0}), 1.0);
  const PointSet in = draw_anchors(disk, 50, AnchorMode::DomainUniform, rng);
  for (int i = 0; i < 50; ++i) CHECK(disk.contains(in.row(i).transpose()));
  const PointSet gl = draw_anchors(Domain::box(Hypercube::unit(2)), 10, AnchorMode::GaussLegendre, rng);
  CHECK(gl.rows() == 10);
  // smallest tensor grid with at least 10 points is 4 x 4, taken lexicographically
  const QuadratureRule q = tensor_quadrature(Hypercube::unit(2), 4);
  CHECK(gl.isApprox(q.nodes.topRows(10)));
}

TEST_CASE("frequency initialization on the Poisson 1-D problem") {
  const PdeProblem p = make_problem("poisson-1");
  SpectralCache cache;
  Rng rng(1);
  const GrowthStep step = freq_init(p, case1_freq(200), cache, rng);
  CHECK(step.choice.xi0[0] == 32.0);
  CHECK(step.choice.r_opt[0] == 152.0);
  CHECK(step.block.size() == 200);
  CHECK(step.block.weights.cwiseAbs().maxCoeff() <= 152.0);
  CHECK(step.block.weights.cwiseAbs().maxCoeff() > 140.0);
  CHECK(step.block.activation.kind() == ActivationKind::Gaussian);

  Rng again(1);
  SpectralCache cache2;
  const GrowthStep twin = freq_init(p, case1_freq(200), cache2, again);
  CHECK((twin.block.weights.array() == step.block.weights.array()).all());
  CHECK((twin.block.bias.array() == step.block.bias.array()).all());
}

TEST_CASE("zero right-hand side is refused") {
  PdeProblem p = make_problem("poisson-1");
  p.rhs = [](const Vec&) { return 0.0; };
  SpectralCache cache;
  Rng rng(1);
  CHECK_THROWS_AS(freq_init(p, case1_freq(10), cache, rng), Error);
}

TEST_CASE("neuron growth stops on an exact solution") {
  PdeProblem p = make_problem("poisson-1");
  p.rhs = [](const Vec& x) { return M_PI * M_PI * std::sin(M_PI * x[0]); };
  const RnnSpace one(DenseLayerBlock(Mat::Constant(1, 1, M_PI), Vec::Zero(1), Activation(ActivationKind::Sine)));
  SpectralCache cache;
  Rng rng(1);
  CHECK_FALSE(neuron_growth(p, Solution(one, vec({1.0})), 10, case1_freq(10), cache, rng).has_value());
  CHECK(neuron_growth(p, Solution(one, vec({0.5})), 10, case1_freq(10), cache, rng).has_value());
}

TEST_CASE("neuron growth keeps old columns and lowers the residual") {
  const PdeProblem p = make_problem("poisson-1");
  const CollocationSet c = make_collocation(p.domain, {2000}, p.segments());
  SpectralCache cache;
  Rng rng(1);
  const FreqInitConfig cfg = case1_freq(100);
  GrowthStep init = freq_init(p, cfg, cache, rng);
  DenseLayerBlock block = init.block;
  Solution u = solve_on(p, c, RnnSpace(block));
  double prev = solve_problem(p, RnnSpace(block), c).report.residual_norm;
  for (int k = 0; k < 5; ++k) {
    auto step = neuron_growth(p, u, 40, cfg, cache, rng);
    REQUIRE(step.has_value());
    const DenseLayerBlock grown = block.append(step->block);
    CHECK(grown.weights.topRows(block.size()) == block.weights);
    CHECK(grown.bias.head(block.size()) == block.bias);
    const SolveOutcome out = solve_problem(p, RnnSpace(grown), c);
    CHECK(out.report.residual_norm <= prev + 1e-10);
    prev = out.report.residual_norm;
    block = grown;
    u = out.solution;
  }
}

TEST_CASE("error points") {
  const PdeProblem p = make_problem("poisson-1");
  const CollocationSet c = make_collocation(p.domain, {101}, p.segments());

  // a steep tanh pilot: gradient norm peaks at its center
  const RnnSpace step(DenseLayerBlock(Mat::Constant(1, 1, 100.0), Vec::Constant(1, -50.0),
                                      Activation(ActivationKind::Tanh)));
  const ErrorPoints g = select_error_points(p, c, Solution(step, vec({1.0})), 5, Indicator::GradientNorm);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(g.points(k, 0) - 0.5) < 0.03);
  for (int k = 1; k < 5; ++k) CHECK(g.values[k] <= g.values[k - 1]);

  // constant indicator: ties resolved by point index
  PdeProblem flat = p;
  flat.rhs = [](const Vec&) { return 0.0; };
  const RnnSpace zero(DenseLayerBlock(Mat::Zero(1, 1), Vec::Zero(1), Activation(ActivationKind::Tanh)));
  const ErrorPoints t = select_error_points(flat, c, Solution(zero, vec({1.0})), 4, Indicator::Residual);
  CHECK(t.indices == std::vector<int>{0, 1, 2, 3});

  const ErrorPoints all = select_error_points(p, c, Solution(step, vec({1.0})), 101, Indicator::Residual);
  CHECK(all.points.rows() == 101);
  CHECK_THROWS_AS(select_error_points(p, c, Solution(step, vec({1.0})), 102, Indicator::Residual), Error);
  CHECK_THROWS_AS(select_error_points(p, c, Solution(step, vec({1.0})), 0, Indicator::Residual), Error);
}

TEST_CASE("layer growth from the gradient") {
  // u0(x) = 1000 tanh(0.003 x - 0.004 y) has gradient (3, -4) at the origin
  const DenseLayerBlock dense(vec({0.003, -0.004}).transpose(), Vec::Zero(1), Activation(ActivationKind::Tanh));
  const Solution pilot(RnnSpace(dense), vec({1000.0}));
  LayerGrowthConfig cfg;
  cfg.h0_mode = H0Mode::Gradient;
  cfg.m2 = 1;
  Rng rng(1);
  PointSet x(1, 2);
  x << 0.0, 0.0;
  const CompositeLayerBlock blk = layer_growth(pilot, x, cfg, rng);
  CHECK(blk.scale[0] == doctest::Approx(7.0));
  CHECK(blk.loc_rows.row(0).isApprox(vec({3, -4}).transpose()));
  CHECK(blk.anchor_values[0] == 0.0);

  // anchor bias -H u0(x_j): u0 = 0.2 at x_j gives -1.4 with H = 7
  const DenseLayerBlock shifted(vec({0.003, -0.004}).transpose(), Vec::Constant(1, std::atanh(0.2 / 1000.0)),
                                Activation(ActivationKind::Tanh));
  const Solution p2(RnnSpace(shifted), vec({1000.0}));
  const CompositeLayerBlock b2 = layer_growth(p2, x, cfg, rng);
  CHECK(b2.anchor_values[0] == doctest::Approx(0.2));
  CHECK(-b2.scale[0] * b2.anchor_values[0] == doctest::Approx(-1.4).epsilon(1e-6));
  const Vec v = RnnSpace(shifted).with_block(b2).eval_values(vec({0.0, 0.0}));
  CHECK(v[1] == cfg.activation.value(0.0));
}

TEST_CASE("layer growth with random H0") {
  Rng rng(8);
  const DenseLayerBlock dense = test::random_dense(rng, 20, 2, 3.0, ActivationKind::Tanh);
  const Solution pilot(RnnSpace(dense), test::random_vec(rng, 20));
  LayerGrowthConfig cfg;
  cfg.r2 = vec({10, 2});
  const PointSet x = test::random_matrix(rng, 30, 2, 0, 1);
  Rng r1(4), r2(4);
  const CompositeLayerBlock a = layer_growth(pilot, x, cfg, r1);
  const CompositeLayerBlock b = layer_growth(pilot, x, cfg, r2);
  CHECK(a.size() == 30);
  CHECK(a.loc_rows == b.loc_rows);
  CHECK((a.loc_rows.col(0).array().abs() <= 10.0).all());
  CHECK((a.loc_rows.col(1).array().abs() <= 2.0).all());
  for (int j = 0; j < 30; ++j) CHECK(a.scale[j] == doctest::Approx(a.loc_rows.row(j).cwiseAbs().sum()));
  const RnnSpace grown = RnnSpace(dense).with_block(a);
  for (int j = 0; j < 30; ++j) CHECK(grown.eval_values(x.row(j).transpose())[20 + j] == cfg.activation.value(0.0));

  cfg.r2 = vec({1});
  CHECK_THROWS_AS(layer_growth(pilot, x, cfg, r1), Error);
  cfg.r2 = vec({1, 0});
  CHECK_THROWS_AS(layer_growth(pilot, x, cfg, r1), Error);
}

TEST_CASE("gradient H0 drops flat anchors") {
  const DenseLayerBlock dense(Mat::Zero(1, 1), Vec::Zero(1), Activation(ActivationKind::Tanh));
  const Solution flat(RnnSpace(dense), vec({1.0}));
  LayerGrowthConfig cfg;
  cfg.h0_mode = H0Mode::Gradient;
  Rng rng(1);
  CHECK_THROWS_AS(layer_growth(flat, PointSet::Constant(3, 1, 0.5), cfg, rng), Error);
}
