#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace netref {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Ordered list of 0-based customer indices.
using IndexSet = std::vector<Index>;

// A matrix counts as singular when the estimated reciprocal condition number
// of its partial-pivoting LU factorization falls below this value.
inline constexpr double kSingularRcond = 1e-12;

double reciprocal_condition(const Matrix& m);
bool is_singular(const Matrix& m);

// Inverse via partial-pivoting LU. Throws AssumptionError naming `what` when
// the matrix is singular in the sense above.
Matrix checked_inverse(const Matrix& m, std::string_view what);

// Solves m * x = rhs with the same singularity rule.
Vector checked_solve(const Matrix& m, const Vector& rhs, std::string_view what);

Matrix submatrix(const Matrix& m, const IndexSet& rows, const IndexSet& cols);
Vector subvector(const Vector& v, const IndexSet& idx);

inline Matrix symmetric_part(const Matrix& m) { return (m + m.transpose()) / 2.0; }
inline Matrix skew_part(const Matrix& m) { return (m - m.transpose()) / 2.0; }

bool is_symmetric(const Matrix& m, double tol = 0.0);
// True when m is upper or lower triangular (diagonal ignored).
bool is_triangular(const Matrix& m);

// ||a - b||_inf / max(||a||_inf, ||b||_inf); zero when both are zero.
double scaled_difference(const Vector& a, const Vector& b);
double scaled_difference(const Matrix& a, const Matrix& b);
double scaled_difference(double a, double b);

}  // namespace netref
