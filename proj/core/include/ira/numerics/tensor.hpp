#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace ira::numerics {

/// Row-major dense 2-D buffer; the leading dimension is the batch.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using Vector = Eigen::VectorXd;

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  return x.derived().array().isFinite().all();
}

inline std::string shape_string(Eigen::Index rows, Eigen::Index cols) {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

/// Stacks equally sized vectors as the rows of a matrix.
Matrix stack_rows(const std::vector<Vector>& rows);

/// [left | right], both with the same row count.
Matrix concat_cols(const Matrix& left, const Matrix& right);

}  // namespace ira::numerics
