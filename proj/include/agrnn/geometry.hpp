#pragma once

#include <string>
#include <vector>

#include "agrnn/types.hpp"

namespace agrnn {

/// Axis-aligned box [p_1,q_1] x ... x [p_d,q_d].
class Hypercube {
 public:
  Hypercube(Vec lower, Vec upper);

  static Hypercube unit(int dim);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  Vec center() const { return 0.5 * (lower_ + upper_); }
  Vec sides() const { return upper_ - lower_; }
  double volume() const;
  bool contains(const Vec& x) const;

 private:
  Vec lower_;
  Vec upper_;
};

enum class ShapeKind { Box, Circle, LShape, SpaceTimeBox };

/// A bounded region together with the smallest box containing it.
///
/// Space-time boxes put time on coordinate 0, followed by the spatial axes.
class Domain {
 public:
  static Domain box(Hypercube box);
  static Domain circle(Vec center, double radius);
  /// `box` minus the (half-open) sub-box `removed`.
  static Domain lshape(Hypercube box, Hypercube removed);
  static Domain space_time(double final_time, const Hypercube& spatial);

  ShapeKind shape() const { return shape_; }
  const Hypercube& bounding_box() const { return box_; }
  int dim() const { return box_.dim(); }
  bool contains(const Vec& x) const;

 private:
  Domain(ShapeKind shape, Hypercube box) : shape_(shape), box_(std::move(box)) {}

  ShapeKind shape_;
  Hypercube box_;
  Vec circle_center_;
  double circle_radius_ = 0.0;
  Vec removed_lower_;
  Vec removed_upper_;
};

enum class BoundaryKind { Dirichlet, Initial };

/// One face of the bounding box: coordinate `axis` fixed at `value`, the other
/// axes sampled with a right-open uniform grid of `counts[k]` points each.
struct BoundarySegment {
  std::string id;
  int axis = 0;
  double value = 0.0;
  BoundaryKind kind = BoundaryKind::Dirichlet;
  std::vector<int> counts;  // one entry per free axis, in increasing axis order

  int point_count() const;
};

struct BoundaryPoints {
  std::string segment_id;
  PointSet points;
};

struct CollocationSet {
  PointSet interior;
  std::vector<BoundaryPoints> boundary;
  double epsilon_c = 1e-10;

  int interior_count() const { return static_cast<int>(interior.rows()); }
  int boundary_count() const;
};

struct QuadratureRule {
  PointSet nodes;
  Vec weights;
  Hypercube box;

  int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr double kDefaultEpsilonC = 1e-10;

/// Tensor grid x_tk = p_t + eps + (k-1)(q_t - p_t - 2 eps)/(N_t - 1), first axis
/// slowest. Points outside non-box shapes are discarded.
PointSet sample_interior(const Domain& domain, const std::vector<int>& counts,
                         double epsilon_c = kDefaultEpsilonC);

std::vector<BoundaryPoints> sample_boundary(const Domain& domain,
                                            const std::vector<BoundarySegment>& segments);

CollocationSet make_collocation(const Domain& domain, const std::vector<int>& interior_counts,
                                const std::vector<BoundarySegment>& segments,
                                double epsilon_c = kDefaultEpsilonC);

/// Faces of a box in the fixed traversal order. 1-D: left, right. 2-D: bottom,
/// right, top, left. Higher dimensions: for each axis, lower face then upper face.
/// `per_axis_count` is the grid count along every free axis of every face.
std::vector<BoundarySegment> box_faces(const Hypercube& box, int per_axis_count);

struct GaussLegendre {
  Vec nodes;
  Vec weights;
};

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
GaussLegendre gauss_legendre(int n);

/// Tensor product of gauss_legendre(n) mapped onto `box`, first axis slowest.
QuadratureRule tensor_quadrature(const Hypercube& box, int n_per_dim);

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
GaussLegendre composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel);

/// Lexicographic tensor grid of arbitrary per-axis coordinates.
PointSet tensor_grid(const std::vector<Vec>& axes);

}  // namespace agrnn
