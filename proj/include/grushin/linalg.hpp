#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace grushin::linalg {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct TridiagEig {
  std::vector<double> values;
  // column i holds the eigenvector of values[i]; empty when vectors not requested
  MatrixXd vectors;
};

// m smallest eigenpairs of the symmetric tridiagonal matrix (diag, off)
TridiagEig tridiag_smallest(const std::vector<double>& diag, const std::vector<double>& off,
                            int m, bool want_vectors);

// all eigenvalues of (diag, off) inside [vl, vu], ascending, values only
std::vector<double> tridiag_values_in_range(const std::vector<double>& diag,
                                            const std::vector<double>& off, double vl, double vu);

// smallest eigenvalue of a Hermitian matrix. Dense solve below the dimension
// threshold, Lanczos with full reorthogonalization above it.
double hermitian_lambda_min(const MatrixXcd& A, int dense_threshold = 1024);

// Lanczos on the implicit matrix given by matvec (Hermitian, dimension n).
double lanczos_lambda_min(const std::function<void(const VectorXcd&, VectorXcd&)>& matvec, int n,
                          int max_iters = 400, double tol = 1e-11, unsigned seed = 7);

// eigenvalues of a general complex matrix (LAPACK zgeev)
VectorXcd complex_eigenvalues(const MatrixXcd& A);

// least-squares slope of y against x
struct LineFit {
  double slope, intercept, r_squared;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace grushin::linalg
