#pragma once

#include <Eigen/Dense>
#include <functional>

namespace agrnn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Point sets are stored one point per row (n x d).
using PointSet = Eigen::MatrixXd;

using ScalarField = std::function<double(const Vec&)>;

}  // namespace agrnn
