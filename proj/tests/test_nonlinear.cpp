#include "doctest.h"

#include "agrnn/adaptivity.hpp"
#include "agrnn/nonlinear.hpp"
#include "support.hpp"

using namespace agrnn;
using agrnn::test::vec;

namespace {

RnnSpace burgers_space(int m, std::uint64_t seed) {
  const PdeProblem p = make_problem("burgers-1");
  Rng rng(seed);
  return RnnSpace(draw_dense_block(p.domain, vec({2, 4}), m, AnchorMode::BoxUniform,
                                   Activation(ActivationKind::Tanh), rng));
}

}  // namespace

TEST_CASE("a linear problem is a fixed point of the iteration") {
  const PdeProblem p = make_problem("poisson-1");
  const CollocationSet c = make_collocation(p.domain, {300}, p.segments());
  Rng rng(2);
  const RnnSpace space(test::random_dense(rng, 30, 1, 40.0, ActivationKind::Tanh));
  SolveOptions opts;
  opts.picard = 2;
  const SolveOutcome out = picard_newton_solve(p, space, c, opts);
  REQUIRE(out.log.records.size() == 2);
  CHECK(out.log.records[1].coeff_change <= 1e-10 * out.solution.coeffs.norm());
  const SolveOutcome once = solve_problem(p, space, c);
  CHECK(once.log.records.size() == 1);
  CHECK((once.solution.coeffs - out.solution.coeffs).norm() <= 1e-10 * once.solution.coeffs.norm());
}

TEST_CASE("iteration log follows the schedule") {
  const PdeProblem p = make_problem("burgers-1");
  const CollocationSet c = make_collocation(p.domain, {20, 20}, p.segments());
  SolveOptions opts;
  opts.picard = 3;
  opts.newton = 2;
  const SolveOutcome out = solve_problem(p, burgers_space(60, 1), c, opts);
  REQUIRE(out.log.records.size() == 5);
  for (int k = 0; k < 5; ++k)
    CHECK(out.log.records[k].kind == (k < 3 ? Linearization::Picard : Linearization::Newton));
  opts.picard = opts.newton = 0;
  CHECK_THROWS_AS(solve_problem(p, burgers_space(10, 1), c, opts), Error);
}

TEST_CASE("Picard contracts for strong viscosity") {
  PdeProblem p = make_problem("burgers-1");
  p.op = BurgersViscous{1.0};
  const CollocationSet c = make_collocation(p.domain, {20, 20}, p.segments());
  SolveOptions opts;
  opts.picard = 8;
  const SolveOutcome out = solve_problem(p, burgers_space(80, 3), c, opts);
  const auto& r = out.log.records;
  CHECK(r.back().coeff_change < 1e-3 * r[1].coeff_change);
}

TEST_CASE("Newton reaches a fixed point") {
  PdeProblem p = make_problem("burgers-1");
  p.op = BurgersViscous{1.0};
  const CollocationSet c = make_collocation(p.domain, {20, 20}, p.segments());
  const RnnSpace space = burgers_space(80, 3);
  SolveOptions opts;
  opts.picard = 3;
  opts.newton = 12;
  const SolveOutcome conv = solve_problem(p, space, c, opts);
  CHECK(conv.log.records.back().coeff_change <= 1e-6 * conv.solution.coeffs.norm());

  // one more Newton step from the converged state
  SolveOptions step;
  step.picard = 0;
  step.newton = 1;
  step.initial = &conv.solution;
  const SolveOutcome n = solve_problem(p, space, c, step);
  CHECK((n.solution.coeffs - conv.solution.coeffs).norm() <= 1e-6 * conv.solution.coeffs.norm());
}

TEST_CASE("Newton converges on the Cole-Hopf problem") {
  const PdeProblem p = make_problem("burgers-1");
  const CollocationSet c = make_collocation(p.domain, {30, 30}, p.segments());
  SolveOptions opts;
  opts.picard = 2;
  opts.newton = 5;
  const SolveOutcome out = solve_problem(p, burgers_space(300, 7), c, opts);
  const auto& r = out.log.records;
  CHECK(r.back().coeff_change < r[2].coeff_change);
  CHECK(r.back().loss < r.front().loss);
}
