#include "doctest.h"

#include "agrnn/splitting.hpp"
#include "support.hpp"

using namespace agrnn;
using agrnn::test::vec;

namespace {

RangePartition manual(std::vector<double> v) {
  RangePartition p;
  p.segments = static_cast<int>(v.size()) - 1;
  p.thresholds = std::move(v);
  return p;
}

// u0(x) close to x on [0, 1], monotone.
Solution linear_pilot() {
  const RnnSpace s(DenseLayerBlock(Mat::Constant(1, 1, 1e-3), Vec::Zero(1), Activation(ActivationKind::Tanh)));
  return Solution(s, vec({1.0 / std::tanh(1e-3)}));
}

PdeProblem laplace_line() {
  PdeProblem p = make_problem("poisson-1");
  p.rhs = [](const Vec&) { return 0.0; };
  for (auto& bc : p.boundary) bc.g = [](const Vec& x) { return x[0]; };
  return p;
}

}  // namespace

TEST_CASE("segment lookup") {
  const RangePartition p = manual({0.0, 0.5, 1.0});
  CHECK(p.segment_of_value(0.2) == 0);
  CHECK(p.segment_of_value(0.5) == 0);
  CHECK(p.segment_of_value(0.50001) == 1);
  CHECK(p.segment_of_value(-3.0) == 0);
  CHECK(p.segment_of_value(7.0) == 1);
  const RangePartition q = manual({0, 1, 2, 3});
  CHECK(q.segment_of_value(1.0) == 0);
  CHECK(q.segment_of_value(1.5) == 1);
  CHECK(q.segment_of_value(2.0) == 1);
  CHECK(q.segment_of_value(2.5) == 2);
}

TEST_CASE("partition thresholds") {
  const PdeProblem ar = make_problem("ar-1");
  const CollocationSet c = make_collocation(ar.domain, {20, 20}, ar.segments());
  const RnnSpace dummy(DenseLayerBlock(Mat::Zero(1, 2), Vec::Zero(1), Activation(ActivationKind::Gaussian)));
  const RangePartition mid = build_partition(Solution(dummy, vec({1.0})), ar, c, 2, PartitionMode::BoundaryMidpoint);
  REQUIRE(mid.thresholds.size() == 3);
  CHECK(mid.thresholds[1] == 0.0);
  CHECK_THROWS_AS(build_partition(Solution(dummy, vec({1.0})), ar, c, 3, PartitionMode::BoundaryMidpoint), Error);
  // constant pilot has no range
  CHECK_THROWS_AS(build_partition(Solution(dummy, vec({1.0})), ar, c, 2, PartitionMode::PilotRange), Error);

  const PdeProblem p = laplace_line();
  const CollocationSet line = make_collocation(p.domain, {11}, p.segments());
  const Solution u0 = linear_pilot();
  const RangePartition r = build_partition(u0, p, line, 2, PartitionMode::PilotRange);
  const Vec v = u0.predict(line.interior);
  CHECK(r.thresholds[1] == doctest::Approx(0.5 * (v.minCoeff() + v.maxCoeff())));
  CHECK(default_eps_r(r) == doctest::Approx(0.05 * (v.maxCoeff() - v.minCoeff())));
  CHECK_THROWS_AS(build_partition(u0, p, line, 1, PartitionMode::PilotRange), Error);
}

TEST_CASE("point assignment is a disjoint cover") {
  const PdeProblem p = make_problem("ar-1");
  const CollocationSet c = make_collocation(p.domain, {30, 30}, p.segments());
  Rng rng(4);
  const Solution pilot(RnnSpace(test::random_dense(rng, 8, 2, 3.0, ActivationKind::Tanh)), test::random_vec(rng, 8));
  const RangePartition part = build_partition(pilot, p, c, 3, PartitionMode::PilotRange);
  const SegmentAssignment a = assign_points(part, &pilot, c, default_eps_r(part));
  std::vector<int> seen(static_cast<size_t>(c.interior_count()), 0);
  int total = 0;
  for (int j = 0; j < 3; ++j) {
    for (int i : a.interior_indices[static_cast<size_t>(j)]) {
      ++seen[static_cast<size_t>(i)];
      CHECK(part.segment_of_value(pilot.predict(Vec(c.interior.row(i).transpose()))) == j);
    }
    total += a.segments[static_cast<size_t>(j)].interior_count();
  }
  CHECK(total == c.interior_count());
  CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
  for (size_t b = 0; b < c.boundary.size(); ++b) {
    Eigen::Index n = 0;
    for (const auto& seg : a.segments) n += seg.boundary[b].points.rows();
    CHECK(n == c.boundary[b].points.rows());
  }
  REQUIRE(a.theta.size() == 2);
  for (int j = 1; j <= 2; ++j) {
    const PointSet& t = a.theta[static_cast<size_t>(j - 1)];
    for (Eigen::Index k = 0; k < t.rows(); ++k)
      CHECK(std::abs(pilot.predict(Vec(t.row(k).transpose())) - part.thresholds[static_cast<size_t>(j)]) <=
            default_eps_r(part) + 1e-14);
  }
}

TEST_CASE("interface band") {
  const PdeProblem p = laplace_line();
  const CollocationSet c = make_collocation(p.domain, {101}, p.segments());
  const Solution u0 = linear_pilot();
  const RangePartition part = manual({0.0, 0.5, 1.0});
  const SegmentAssignment a = assign_points(part, &u0, c, 0.05);
  const PointSet& t = a.theta[0];
  CHECK(t.rows() > 0);
  CHECK(t.col(0).minCoeff() >= 0.45 - 1e-9);
  CHECK(t.col(0).maxCoeff() <= 0.55 + 1e-9);

  const SegmentAssignment ind = assign_points(indicator_partition([](const Vec& x) { return x[0] < 0.5 ? 0 : 1; }, 2),
                                              nullptr, c, 0.05);
  CHECK(ind.theta[0].rows() == 0);
}

TEST_CASE("empty segments are reported") {
  const PdeProblem p = laplace_line();
  const CollocationSet c = make_collocation(p.domain, {20}, p.segments());
  const RangePartition part = indicator_partition([](const Vec&) { return 0; }, 2);
  try {
    assign_points(part, nullptr, c, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptySegment);
  }
  CHECK_THROWS_AS(assign_points(indicator_partition([](const Vec&) { return 2; }, 2), nullptr, c, 0.0), Error);
}

TEST_CASE("joint and independent solves agree") {
  const PdeProblem p = make_problem("poisson-1");
  const CollocationSet c = make_collocation(p.domain, {400}, p.segments());
  const RangePartition part = indicator_partition([](const Vec& x) { return x[0] < 0.4 ? 0 : 1; }, 2);
  Rng rng(10);
  const std::vector<RnnSpace> spaces{RnnSpace(test::random_dense(rng, 6, 1, 5.0, ActivationKind::Tanh)),
                                     RnnSpace(test::random_dense(rng, 8, 1, 5.0, ActivationKind::Tanh))};
  const SplitModel indep = solve_split(p, part, nullptr, c, spaces);
  SplitOptions joint;
  joint.joint = true;
  const SplitModel both = solve_split(p, part, nullptr, c, spaces, joint);
  // compared as fitted values: the coefficients of an ill-conditioned basis are not
  const Vec a = indep.predict(c.interior), b = both.predict(c.interior);
  CHECK((a - b).norm() <= 1e-10 * a.norm());
}

TEST_CASE("continuity rows close the jump") {
  const PdeProblem p = laplace_line();
  const CollocationSet c = make_collocation(p.domain, {200}, p.segments());
  const Solution u0 = linear_pilot();
  const RangePartition part = manual({0.0, 0.5, 1.0});
  // each segment alone sees one boundary condition, so only continuity fixes its slope
  const RnnSpace seg_space(DenseLayerBlock((Mat(2, 1) << 1e-3, 0.0).finished(), vec({0.0, 1.0}),
                                           Activation(ActivationKind::Tanh)));
  SplitOptions opts;
  opts.continuous = true;
  const SplitModel m = solve_split(p, part, &u0, c, {seg_space, seg_space}, opts);
  CHECK(m.continuous);
  const Vec x = vec({0.5});
  const double jump = m.segments[0].predict(x) - m.segments[1].predict(x);
  CHECK(std::abs(jump) < 1e-6);
  for (double t : {0.1, 0.3, 0.7, 0.95}) CHECK(m.predict(vec({t})) == doctest::Approx(t).epsilon(1e-6));
}

TEST_CASE("piecewise constant data is reproduced") {
  const PdeProblem p = make_problem("ar-2");
  const CollocationSet c = make_collocation(p.domain, {40, 40}, p.segments());
  const RangePartition part =
      indicator_partition([&](const Vec& x) { return (*p.exact)(x) > 0.5 ? 1 : 0; }, 2);
  const RnnSpace one(DenseLayerBlock(Mat::Zero(1, 2), Vec::Zero(1), Activation(ActivationKind::Gaussian)));
  const SplitModel m = solve_split(p, part, nullptr, c, {one, one});
  CHECK(std::abs(m.segments[0].coeffs[0]) < 1e-14);
  CHECK(m.segments[1].coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Vec x = test::random_vec(rng, 2, 0.0, 1.0);
    CHECK(std::abs(m.predict(x) - (*p.exact)(x)) < 1e-12);
  }
}
