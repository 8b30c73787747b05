#include "ira/numerics/tensor.hpp"

#include "ira/error.hpp"

namespace ira::numerics {

Matrix stack_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  const Eigen::Index cols = rows.front().size();
  Matrix out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DimensionError("stack_rows: row " + std::to_string(i) + " has " +
                           std::to_string(rows[i].size()) + " entries, expected " +
                           std::to_string(cols));
    }
    out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return out;
}

Matrix concat_cols(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows()) {
    throw DimensionError("concat_cols: row counts differ " + shape_string(left.rows(), left.cols()) +
                         " vs " + shape_string(right.rows(), right.cols()));
  }
  Matrix out(left.rows(), left.cols() + right.cols());
  out.leftCols(left.cols()) = left;
  out.rightCols(right.cols()) = right;
  return out;
}

}  // namespace ira::numerics
