#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace morphkit {

using NodeId = std::size_t;
using NodeIds = std::vector<NodeId>;

/// Coordinates and displacements are always stored with three components;
/// 2D meshes keep the third at zero.
using Point = Eigen::Vector3d;

using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

} // namespace morphkit
