#include "doctest.h"

#include <sstream>

#include "agrnn/error.hpp"
#include "agrnn/spectral.hpp"
#include "support.hpp"

using namespace agrnn;
using agrnn::test::vec;

namespace {

ScalarField tone(double k) {
  return [k](const Vec& x) { return std::sin(2 * M_PI * k * x[0]); };
}

}  // namespace

TEST_CASE("sampling grids") {
  const Hypercube unit = Hypercube::unit(1);
  SpectrumSample s = sample_on_grid([](const Vec&) { return 1.0; }, unit, 16);
  CHECK(s.values.size() == 16);
  CHECK((s.values.array() == 1.0).all());

  s = sample_on_grid(tone(5), unit, 100);
  CHECK(s.sizes == std::vector<int>{100});
  CHECK(s.values[25] == doctest::Approx(std::sin(2 * M_PI * 5 * 0.25)));

  s = sample_on_grid([](const Vec& x) { return x[0] * x[1]; }, Hypercube::unit(2), 100);
  CHECK(s.values.size() == 10000);
  CHECK(spectral_grid_sizes(Hypercube::unit(2), 2.0) == std::vector<int>{8, 8});
  CHECK(spectral_grid_sizes(Hypercube(vec({0, 0}), vec({2, 0.5})), 100) == std::vector<int>{200, 50});
}

TEST_CASE("pure tone peaks") {
  const Hypercube unit = Hypercube::unit(1);
  CHECK(peak_frequency(sample_on_grid(tone(5), unit, 100)).xi[0] == 5.0);
  CHECK(peak_frequency(sample_on_grid(tone(32), unit, 1e4)).xi[0] == 32.0);
  ScalarField t2 = [](const Vec& x) { return std::sin(2 * M_PI * 3 * x[0]) * std::sin(2 * M_PI * 7 * x[1]); };
  const PeakFrequency p = peak_frequency(sample_on_grid(t2, Hypercube::unit(2), 100));
  CHECK(p.xi[0] == 3.0);
  CHECK(p.xi[1] == 7.0);
  CHECK(p.bin == std::vector<int>{3, 7});
}

TEST_CASE("peaks are measured in cycles per unit length") {
  const Hypercube wide(vec({0}), vec({4}));
  ScalarField f = [](const Vec& x) { return std::cos(2 * M_PI * 2.5 * x[0]); };
  CHECK(peak_frequency(sample_on_grid(f, wide, 50)).xi[0] == 2.5);
}

TEST_CASE("every pure tone up to half the Nyquist frequency") {
  const int n = 64;
  for (int k = 1; k <= n / 4; ++k) CHECK(peak_frequency(sample_on_grid(tone(k), Hypercube::unit(1), n)).xi[0] == k);
  for (int a = 1; a <= 8; a += 3)
    for (int b = 0; b <= 8; b += 4) {
      ScalarField f = [a, b](const Vec& x) { return std::cos(2 * M_PI * (a * x[0] + b * x[1])); };
      const PeakFrequency p = peak_frequency(sample_on_grid(f, Hypercube::unit(2), 32));
      CHECK(p.xi[0] == a);
      CHECK(p.xi[1] == b);
    }
}

TEST_CASE("DC is excluded and ties go to the smallest bin") {
  ScalarField f = [](const Vec& x) { return 10.0 + std::sin(2 * M_PI * 3 * x[0]); };
  CHECK(peak_frequency(sample_on_grid(f, Hypercube::unit(1), 64)).xi[0] == 3.0);
  ScalarField two = [](const Vec& x) { return std::sin(2 * M_PI * 6 * x[0]) + std::sin(2 * M_PI * 2 * x[0]); };
  CHECK(peak_frequency(sample_on_grid(two, Hypercube::unit(1), 64)).xi[0] == 2.0);
  CHECK_THROWS_AS(peak_frequency(sample_on_grid([](const Vec&) { return 0.0; }, Hypercube::unit(1), 16)), Error);
}

TEST_CASE("spectrum CSV") {
  std::ostringstream out;
  write_spectrum_csv(out, sample_on_grid(tone(2), Hypercube::unit(1), 16));
  const std::string s = out.str();
  CHECK(s.rfind("xi0,magnitude\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 9);
}

TEST_CASE("candidate grids") {
  const auto full = candidate_weights(400, 50, 1, CandidateMode::Full);
  REQUIRE(full.size() == 50);
  CHECK(full[0][0] == 8.0);
  CHECK(full[18][0] == 152.0);
  CHECK(full[49][0] == 400.0);
  CHECK(candidate_weights(10, 4, 2, CandidateMode::Full).size() == 16);
  const auto per_axis = candidate_weights(10, 4, 3, CandidateMode::PerAxis);
  CHECK(per_axis.size() == 12);
  CHECK(per_axis[5].isApprox(vec({2.5, 5.0, 2.5})));
}

TEST_CASE("candidate spectra") {
  const Hypercube unit = Hypercube::unit(1);
  auto xi = candidate_spectra(identity_operator(1), Activation(ActivationKind::Sine), {vec({2 * M_PI})}, vec({0.5}),
                              unit, 64);
  CHECK(xi[0].xi[0] == 1.0);

  const PdeProblem p = make_problem("poisson-1");
  const auto cands = candidate_weights(400, 50, 1, CandidateMode::Full);
  const auto spectra = candidate_spectra(candidate_operator(p), Activation(ActivationKind::Gaussian), cands,
                                         vec({0.5}), unit, 1e4);
  for (size_t j = 1; j < spectra.size(); ++j) CHECK(spectra[j].xi[0] >= spectra[j - 1].xi[0]);
  CHECK(spectra.back().xi[0] > spectra.front().xi[0]);
  const auto again = candidate_spectra(candidate_operator(p), Activation(ActivationKind::Gaussian), cands,
                                       vec({0.5}), unit, 1e4);
  for (size_t j = 0; j < spectra.size(); ++j) CHECK(spectra[j].xi == again[j].xi);
}

TEST_CASE("advection candidate operator is the directional derivative") {
  const PdeProblem p = make_problem("ar-2");
  const PointCoeffs c = candidate_operator(p)(vec({0.3, 0.4}));
  CHECK(c.c_val == 0.0);
  CHECK(c.c_grad.isApprox(vec({0, 1})));
  const PointCoeffs b = candidate_operator(make_problem("burgers-1"))(vec({0.3, 0.4}));
  CHECK(b.c_grad.isApprox(vec({1, 0})));
  CHECK(b.c_lap[1] == doctest::Approx(-0.1 / M_PI));
}

TEST_CASE("choosing j0") {
  CHECK(select_j0(vec({2, 3}), {vec({3, 4}), vec({5, 6})}) == 0);
  CHECK(select_j0(vec({2, 3}), {vec({5, 6}), vec({3, 4})}) == 1);
  CHECK(select_j0(vec({10}), {vec({2}), vec({5})}) == 1);
  // equality relaxes strict domination
  CHECK(select_j0(vec({3, 4}), {vec({3, 4}), vec({9, 9})}) == 1);
  CHECK(select_j0(vec({3, 4}), {vec({3, 4}), vec({1, 1})}) == 0);
  // equal distances: first index
  CHECK(select_j0(vec({1}), {vec({3}), vec({3})}) == 0);
  CHECK_THROWS_AS(select_j0(vec({1}), {}), Error);
}

TEST_CASE("select_j0 ignores candidate order up to ties") {
  Rng rng(5);
  std::vector<Vec> c;
  for (int k = 0; k < 30; ++k) c.push_back(test::random_vec(rng, 2, 0, 50));
  const Vec xi0 = vec({20, 25});
  const Vec pick = c[select_j0(xi0, c)];
  std::reverse(c.begin(), c.end());
  CHECK(c[select_j0(xi0, c)] == pick);
}

TEST_CASE("frequency choice on the Poisson 1-D problem") {
  const PdeProblem p = make_problem("poisson-1");
  const SpectrumSample f = sample_on_grid(p.rhs, p.domain.bounding_box(), 1e4);
  const PeakFrequency peak = peak_frequency(f);
  CHECK(peak.xi[0] == 32.0);

  CandidateSet set;
  set.r_max = 400;
  set.lambda = 50;
  set.weights = candidate_weights(400, 50, 1, CandidateMode::Full);
  for (const auto& s : candidate_spectra(candidate_operator(p), Activation(ActivationKind::Gaussian), set.weights,
                                         vec({0.5}), p.domain.bounding_box(), 1e4))
    set.xi.push_back(s.xi);
  const FrequencyChoice choice = choose_frequency(peak.xi, set);
  REQUIRE(choice.j0.size() == 1);
  CHECK(choice.j0[0] + 1 == 19);
  CHECK(choice.r_opt[0] == 152.0);
}

TEST_CASE("spectral cache is write-once") {
  SpectralCache cache;
  int builds = 0;
  auto build = [&] {
    ++builds;
    CandidateSet s;
    s.lambda = 3;
    return s;
  };
  cache.get("a", build);
  cache.get("a", build);
  CHECK(builds == 1);
  CHECK(cache.contains("a"));
  CHECK_FALSE(cache.contains("b"));
}
