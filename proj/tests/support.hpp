#pragma once

#include <cmath>
#include <cstdint>

#include "agrnn/adaptivity.hpp"
#include "agrnn/basis.hpp"
#include "agrnn/types.hpp"

namespace agrnn::test {

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Mat random_matrix(Rng& rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline Vec random_vec(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
  return random_matrix(rng, n, 1, lo, hi).col(0);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline DenseLayerBlock random_dense(Rng& rng, int m, int d, double r, ActivationKind kind) {
  return DenseLayerBlock(random_matrix(rng, m, d, -r, r), random_vec(rng, m, -r, r), Activation(kind));
}

// Composite block over a random dense pilot, anchored at random points of [0,1]^d.
inline CompositeLayerBlock random_composite(Rng& rng, const DenseLayerBlock& parent, int m2, bool localize) {
  CompositeLayerBlock c;
  c.parent = std::make_shared<const DenseLayerBlock>(parent);
  c.parent_coeffs = random_vec(rng, parent.size(), -0.5, 0.5);
  c.anchor_points = random_matrix(rng, m2, parent.dim(), 0.0, 1.0);
  c.loc_rows = random_matrix(rng, m2, parent.dim(), -2.0, 2.0);
  c.scale = c.loc_rows.cwiseAbs().rowwise().sum();
  c.anchor_values.resize(m2);
  for (int j = 0; j < m2; ++j)
    c.anchor_values[j] = pilot_value(parent, c.parent_coeffs, c.anchor_points.row(j).transpose());
  c.eta2 = 1.0;
  c.localize = localize;
  c.activation = Activation(ActivationKind::Gaussian);
  return c;
}

// Worst relative gap between analytic jets and central differences: step h
// for gradients, the larger h2 for diagonal second derivatives.
inline double jet_fd_error(const RnnSpace& space, const Vec& x, double h = 1e-5, double h2 = 1e-4) {
  const auto jets = space.eval_point_jets(x, 2, JetMode::Laplacian);
  const Vec f0 = space.eval_values(x);
  double worst = 0.0;
  for (int t = 0; t < space.dim(); ++t) {
    auto shifted = [&](double step) {
      Vec xs = x;
      xs[t] += step;
      return space.eval_values(xs);
    };
    const Vec fp = shifted(h), fm = shifted(-h), fp2 = shifted(h2), fm2 = shifted(-h2);
    for (int i = 0; i < space.size(); ++i) {
      const double g = (fp[i] - fm[i]) / (2 * h);
      const double s = (fp2[i] - 2 * f0[i] + fm2[i]) / (h2 * h2);
      const double scale_g = std::max(1.0, jets[i].gradient.cwiseAbs().maxCoeff());
      const double scale_s = std::max(1.0, jets[i].second.cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(g - jets[i].gradient[t]) / scale_g);
      worst = std::max(worst, std::abs(s - jets[i].second(t, 0)) / scale_s);
    }
  }
  return worst;
}

}  // namespace agrnn::test
