#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "agrnn/activation.hpp"
#include "agrnn/types.hpp"

namespace agrnn {

/// Laplacian mode stores only the diagonal of the Hessian.
enum class JetMode { Laplacian, Full };

/// Value, gradient and second derivatives of one basis function at one point.
struct Jet2 {
  double value = 0.0;
  Vec gradient;
  Mat second;  // d x 1 diagonal in Laplacian mode, d x d in Full mode
  JetMode mode = JetMode::Laplacian;

  /// Throws unsupported-derivative for cross terms in Laplacian mode.
  double second_derivative(int i, int j) const;
  double laplacian() const;
};

/// phi_i(x) = rho(w_i . x + b_i), one neuron per row of `weights`.
struct DenseLayerBlock {
  Mat weights;  // m x d
  Vec bias;     // m
  Activation activation;

  DenseLayerBlock(Mat w, Vec b, Activation act);

  int size() const { return static_cast<int>(weights.rows()); }
  int dim() const { return static_cast<int>(weights.cols()); }

  DenseLayerBlock append(const DenseLayerBlock& more) const;
  DenseLayerBlock select(const std::vector<int>& keep) const;
};

/// Grown layer composed over a frozen pilot u0(x) = alpha . phi(x):
///   psi~_j(x) = rho2(H_j (u0(x) - u0(x_j)))
///   psi_j(x)  = G_j(x) psi~_j(x),  G_j(x) = exp(-|eta2 h_j (x - x_j)|^2)  (when localized)
///
/// The parent dense block is held by value so that later pruning of the trial
/// space cannot change u0.
struct CompositeLayerBlock {
  std::shared_ptr<const DenseLayerBlock> parent;
  Vec parent_coeffs;      // alpha, length parent->size()
  Vec scale;              // H, length m2
  Vec anchor_values;      // u0(X_err)
  PointSet anchor_points; // X_err, m2 x d
  Mat loc_rows;           // h_j rows of H0, m2 x d
  double eta2 = 1.0;
  bool localize = true;
  Activation activation{ActivationKind::Gaussian};

  int size() const { return static_cast<int>(scale.size()); }
  int dim() const { return static_cast<int>(anchor_points.cols()); }

  CompositeLayerBlock select(const std::vector<int>& keep) const;
};

using Block = std::variant<DenseLayerBlock, CompositeLayerBlock>;

/// Jets of every basis function of a space at one point, struct-of-arrays.
struct PointJets {
  Vec value;         // M
  Mat gradient;      // M x d (order >= 1)
  Mat second_diag;   // M x d (order 2)
};

/// Trial space z(x) = sum_l w^(l) . Phi_l(x): every block feeds the output.
class RnnSpace {
 public:
  explicit RnnSpace(DenseLayerBlock dense);
  explicit RnnSpace(std::vector<Block> blocks);

  int dim() const { return dim_; }
  int size() const { return total_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  int block_offset(int b) const { return offsets_[b]; }
  int block_size(int b) const;

  /// Global column -> (block index, local index).
  std::pair<int, int> column(int global) const;

  /// First dense block; throws invalid-config if there is none.
  const DenseLayerBlock& dense() const;
  bool has_composite() const;

  RnnSpace with_block(Block block) const;

  /// Highest derivative order every block can deliver (2, or 1 with RampJump).
  int max_order() const;

  void eval_point(const Vec& x, int order, PointJets& out) const;
  Vec eval_values(const Vec& x) const;
  std::vector<Jet2> eval_point_jets(const Vec& x, int order, JetMode mode) const;

 private:
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  int total_ = 0;
  int dim_ = 0;
};

/// u0(x) = alpha . phi(x) over a dense block, accumulated exactly as composite
/// blocks evaluate it, so anchors computed here reproduce rho2(0) bit for bit.
double pilot_value(const DenseLayerBlock& parent, const Vec& alpha, const Vec& x);

/// Per point, per basis function jets.
std::vector<std::vector<Jet2>> eval_jets(const RnnSpace& space, const PointSet& points, int order,
                                         JetMode mode = JetMode::Laplacian);

struct Solution {
  RnnSpace space;
  Vec coeffs;

  Solution(RnnSpace s, Vec c);

  double predict(const Vec& x) const;
  Vec predict(const PointSet& points) const;
  /// Jet of u = coeffs . features at x.
  Jet2 jet(const Vec& x, int order, JetMode mode = JetMode::Laplacian) const;
  /// Coefficients restricted to block b.
  Vec block_coeffs(int b) const;
};

struct PruneResult {
  RnnSpace space;
  Vec coeffs;
  int removed = 0;
  std::vector<int> kept;  // surviving global column indices, ascending
};

/// Drops columns with |c_i| <= tol_rel * max_k |c_k|.
PruneResult prune(const RnnSpace& space, const Vec& coeffs, double tol_rel);

/// Fraction of neurons whose hyperplane w_i . x + b_i = 0 passes within `tau`
/// of each center. Zero-norm rows never intersect.
Vec partition_hyperplane_density(const DenseLayerBlock& block, const PointSet& centers, double tau);

}  // namespace agrnn
