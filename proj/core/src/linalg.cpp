#include "netref/linalg.hpp"

#include "netref/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace netref {

namespace {

Eigen::PartialPivLU<Matrix> factor_or_throw(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + " is not square");
  }
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rc = lu.rcond();
  if (!(rc >= kSingularRcond)) {
    std::ostringstream os;
    os << what << " is singular (rcond " << rc << " < " << kSingularRcond << ")";
    throw AssumptionError(os.str());
  }
  return lu;
}

}  // namespace

double reciprocal_condition(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(m).rcond();
}

bool is_singular(const Matrix& m) { return !(reciprocal_condition(m) >= kSingularRcond); }

Matrix checked_inverse(const Matrix& m, std::string_view what) {
  if (m.size() == 0) return Matrix(0, 0);
  return factor_or_throw(m, what).inverse();
}

Vector checked_solve(const Matrix& m, const Vector& rhs, std::string_view what) {
  if (m.size() == 0) return Vector(0);
  return factor_or_throw(m, what).solve(rhs);
}

Matrix submatrix(const Matrix& m, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Index>(r), static_cast<Index>(c)) = m(rows[r], cols[c]);
    }
  }
  return out;
}

Vector subvector(const Vector& v, const IndexSet& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return ((m - m.transpose()).cwiseAbs().maxCoeff() <= tol) || m.size() == 0;
}

bool is_triangular(const Matrix& m) {
  bool upper = true;
  bool lower = true;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      if (i > j) upper = false;
      if (i < j) lower = false;
    }
  }
  return upper || lower;
}

double scaled_difference(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  const double diff = (a - b).cwiseAbs().maxCoeff();
  return scale == 0.0 ? 0.0 : diff / scale;
}

double scaled_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.size() == 0) return 0.0;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  const double diff = (a - b).cwiseAbs().maxCoeff();
  return scale == 0.0 ? 0.0 : diff / scale;
}

double scaled_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace netref
