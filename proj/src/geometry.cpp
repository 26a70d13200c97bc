#include "agrnn/geometry.hpp"

#include <cmath>
#include <numbers>

#include "agrnn/error.hpp"

namespace agrnn {

Hypercube::Hypercube(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0 || lower_.size() != upper_.size())
    throw Error(ErrorKind::InvalidConfig, "hypercube bounds must be nonempty and of equal length");
  for (int t = 0; t < lower_.size(); ++t) {
    if (!(lower_[t] < upper_[t]))
      throw Error(ErrorKind::InvalidConfig, "hypercube requires lower < upper on every axis");
  }
}

Hypercube Hypercube::unit(int dim) { return Hypercube(Vec::Zero(dim), Vec::Ones(dim)); }

double Hypercube::volume() const { return (upper_ - lower_).prod(); }

bool Hypercube::contains(const Vec& x) const {
  for (int t = 0; t < dim(); ++t) {
    if (x[t] < lower_[t] || x[t] > upper_[t]) return false;
  }
  return true;
}

Domain Domain::box(Hypercube box) { return Domain(ShapeKind::Box, std::move(box)); }

Domain Domain::circle(Vec center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidConfig, "circle radius must be positive");
  Vec r = Vec::Constant(center.size(), radius);
  Domain d(ShapeKind::Circle, Hypercube(center - r, center + r));
  d.circle_center_ = std::move(center);
  d.circle_radius_ = radius;
  return d;
}

Domain Domain::lshape(Hypercube box, Hypercube removed) {
  Domain d(ShapeKind::LShape, std::move(box));
  d.removed_lower_ = removed.lower();
  d.removed_upper_ = removed.upper();
  return d;
}

Domain Domain::space_time(double final_time, const Hypercube& spatial) {
  if (!(final_time > 0.0)) throw Error(ErrorKind::InvalidConfig, "final time must be positive");
  const int d = spatial.dim() + 1;
  Vec lo(d), hi(d);
  lo[0] = 0.0;
  hi[0] = final_time;
  lo.tail(d - 1) = spatial.lower();
  hi.tail(d - 1) = spatial.upper();
  return Domain(ShapeKind::SpaceTimeBox, Hypercube(lo, hi));
}

bool Domain::contains(const Vec& x) const {
  if (!box_.contains(x)) return false;
  switch (shape_) {
    case ShapeKind::Box:
    case ShapeKind::SpaceTimeBox:
      return true;
    case ShapeKind::Circle:
      return (x - circle_center_).squaredNorm() <= circle_radius_ * circle_radius_;
    case ShapeKind::LShape: {
      for (int t = 0; t < x.size(); ++t) {
        if (x[t] < removed_lower_[t] || x[t] >= removed_upper_[t]) return true;
      }
      return false;
    }
  }
  return false;
}

int BoundarySegment::point_count() const {
  int n = 1;
  for (int c : counts) n *= c;
  return n;
}

int CollocationSet::boundary_count() const {
  int n = 0;
  for (const auto& b : boundary) n += static_cast<int>(b.points.rows());
  return n;
}

PointSet tensor_grid(const std::vector<Vec>& axes) {
  const int d = static_cast<int>(axes.size());
  Eigen::Index total = 1;
  for (const auto& a : axes) total *= a.size();
  PointSet pts(total, d);
  std::vector<Eigen::Index> idx(d, 0);
  for (Eigen::Index row = 0; row < total; ++row) {
    for (int t = 0; t < d; ++t) pts(row, t) = axes[t][idx[t]];
    for (int t = d - 1; t >= 0; --t) {
      if (++idx[t] < axes[t].size()) break;
      idx[t] = 0;
    }
  }
  return pts;
}

PointSet sample_interior(const Domain& domain, const std::vector<int>& counts, double epsilon_c) {
  const Hypercube& box = domain.bounding_box();
  const int d = box.dim();
  if (static_cast<int>(counts.size()) != d)
    throw Error(ErrorKind::InvalidConfig, "interior counts must have one entry per dimension");
  std::vector<Vec> axes(d);
  for (int t = 0; t < d; ++t) {
    if (counts[t] < 2)
      throw Error(ErrorKind::InvalidConfig, "interior count must be >= 2 in every dimension");
    const double p = box.lower()[t], q = box.upper()[t];
    if (!(epsilon_c >= 0.0) || 2.0 * epsilon_c >= q - p)
      throw Error(ErrorKind::InvalidConfig, "epsilon_c must be below half of every box side");
    axes[t].resize(counts[t]);
    const double step = (q - p - 2.0 * epsilon_c) / (counts[t] - 1);
    for (int k = 0; k < counts[t]; ++k) axes[t][k] = p + epsilon_c + k * step;
  }
  PointSet grid = tensor_grid(axes);
  if (domain.shape() == ShapeKind::Box || domain.shape() == ShapeKind::SpaceTimeBox) return grid;

  std::vector<Eigen::Index> keep;
  keep.reserve(grid.rows());
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    if (domain.contains(grid.row(i).transpose())) keep.push_back(i);
  }
  PointSet out(static_cast<Eigen::Index>(keep.size()), d);
  for (size_t i = 0; i < keep.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = grid.row(keep[i]);
  return out;
}

std::vector<BoundaryPoints> sample_boundary(const Domain& domain,
                                            const std::vector<BoundarySegment>& segments) {
  const Hypercube& box = domain.bounding_box();
  const int d = box.dim();
  std::vector<BoundaryPoints> out;
  out.reserve(segments.size());
  for (const auto& seg : segments) {
    if (seg.axis < 0 || seg.axis >= d)
      throw Error(ErrorKind::InvalidConfig, "segment '" + seg.id + "' has an invalid axis");
    const bool on_lower = seg.value == box.lower()[seg.axis];
    const bool on_upper = seg.value == box.upper()[seg.axis];
    if (!on_lower && !on_upper)
      throw Error(ErrorKind::InvalidConfig, "segment '" + seg.id + "' is not on the boundary");
    if (seg.kind == BoundaryKind::Initial && !(domain.shape() == ShapeKind::SpaceTimeBox &&
                                               seg.axis == 0 && on_lower))
      throw Error(ErrorKind::InvalidConfig, "initial segment '" + seg.id + "' must be the t=0 face");
    if (static_cast<int>(seg.counts.size()) != d - 1)
      throw Error(ErrorKind::InvalidConfig,
                  "segment '" + seg.id + "' needs one count per free axis");

    std::vector<Vec> axes;
    for (int t = 0, k = 0; t < d; ++t) {
      if (t == seg.axis) {
        axes.push_back(Vec::Constant(1, seg.value));
        continue;
      }
      const int n = seg.counts[k++];
      if (n < 1) throw Error(ErrorKind::InvalidConfig, "segment point counts must be >= 1");
      Vec a(n);
      const double p = box.lower()[t], q = box.upper()[t];
      for (int j = 0; j < n; ++j) a[j] = p + j * (q - p) / n;
      axes.push_back(std::move(a));
    }
    out.push_back({seg.id, tensor_grid(axes)});
  }
  return out;
}

CollocationSet make_collocation(const Domain& domain, const std::vector<int>& interior_counts,
                                const std::vector<BoundarySegment>& segments, double epsilon_c) {
  CollocationSet set;
  set.interior = sample_interior(domain, interior_counts, epsilon_c);
  set.boundary = sample_boundary(domain, segments);
  set.epsilon_c = epsilon_c;
  return set;
}

std::vector<BoundarySegment> box_faces(const Hypercube& box, int per_axis_count) {
  const int d = box.dim();
  std::vector<BoundarySegment> faces;
  auto face = [&](std::string id, int axis, bool upper) {
    BoundarySegment s;
    s.id = std::move(id);
    s.axis = axis;
    s.value = upper ? box.upper()[axis] : box.lower()[axis];
    s.counts.assign(d - 1, per_axis_count);
    faces.push_back(std::move(s));
  };
  if (d == 1) {
    face("left", 0, false);
    face("right", 0, true);
  } else if (d == 2) {
    face("bottom", 1, false);
    face("right", 0, true);
    face("top", 1, true);
    face("left", 0, false);
  } else {
    for (int t = 0; t < d; ++t) {
      face("axis" + std::to_string(t) + "-lower", t, false);
      face("axis" + std::to_string(t) + "-upper", t, true);
    }
  }
  return faces;
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidConfig, "Gauss-Legendre order must be >= 1");
  GaussLegendre rule{Vec(n), Vec(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule tensor_quadrature(const Hypercube& box, int n_per_dim) {
  const GaussLegendre gl = gauss_legendre(n_per_dim);
  const int d = box.dim();
  std::vector<Vec> node_axes(d), weight_axes(d);
  for (int t = 0; t < d; ++t) {
    const double half = 0.5 * (box.upper()[t] - box.lower()[t]);
    const double mid = 0.5 * (box.upper()[t] + box.lower()[t]);
    node_axes[t] = (mid + half * gl.nodes.array()).matrix();
    weight_axes[t] = half * gl.weights;
  }
  PointSet w = tensor_grid(weight_axes);
  return QuadratureRule{tensor_grid(node_axes), w.rowwise().prod(), box};
}

GaussLegendre composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel) {
  const GaussLegendre gl = gauss_legendre(nodes_per_panel);
  GaussLegendre out{Vec(panels * nodes_per_panel), Vec(panels * nodes_per_panel)};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < nodes_per_panel; ++k) {
      out.nodes[p * nodes_per_panel + k] = mid + 0.5 * h * gl.nodes[k];
      out.weights[p * nodes_per_panel + k] = 0.5 * h * gl.weights[k];
    }
  }
  return out;
}

}  // namespace agrnn
