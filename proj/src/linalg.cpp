#include "grushin/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <random>
#include <stdexcept>

namespace grushin::linalg {

TridiagEig tridiag_smallest(const std::vector<double>& diag, const std::vector<double>& off,
                            int m, bool want_vectors) {
  const int n = static_cast<int>(diag.size());
  if (n < 1 || static_cast<int>(off.size()) != n - 1)
    throw std::invalid_argument("tridiag_smallest: inconsistent sizes");
  if (m < 1) throw std::invalid_argument("tridiag_smallest: m must be >= 1");
  m = std::min(m, n);

  std::vector<double> d(diag), e(off);
  e.resize(n);  // dstevr wants length n workspace for the off-diagonal
  std::vector<double> w(n);
  MatrixXd z;
  std::vector<lapack_int> isuppz(2 * std::max(1, m));
  lapack_int found = 0;
  lapack_int info;
  if (want_vectors) {
    z.resize(n, m);
    info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, m,
                          1e-13, &found, w.data(), z.data(), n, isuppz.data());
  } else {
    info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, m,
                          1e-13, &found, w.data(), nullptr, n, isuppz.data());
  }
  if (info != 0) throw std::runtime_error("tridiag_smallest: dstevr failed to converge");
  TridiagEig out;
  out.values.assign(w.begin(), w.begin() + found);
  if (want_vectors) out.vectors = z.leftCols(found);
  return out;
}

std::vector<double> tridiag_values_in_range(const std::vector<double>& diag,
                                            const std::vector<double>& off, double vl, double vu) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> d(diag), e(off);
  e.resize(n);
  std::vector<double> w(n);
  std::vector<lapack_int> isuppz(2 * n);
  lapack_int found = 0;
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', n, d.data(), e.data(), vl, vu, 0,
                                   0, 1e-13, &found, w.data(), nullptr, n, isuppz.data());
  if (info != 0) throw std::runtime_error("tridiag_values_in_range: dstevr failed");
  return {w.begin(), w.begin() + found};
}

double hermitian_lambda_min(const MatrixXcd& A, int dense_threshold) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) throw std::invalid_argument("hermitian_lambda_min: empty matrix");
  if (n <= dense_threshold) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
  auto matvec = [&A](const VectorXcd& x, VectorXcd& y) { y.noalias() = A * x; };
  return lanczos_lambda_min(matvec, n);
}

double lanczos_lambda_min(const std::function<void(const VectorXcd&, VectorXcd&)>& matvec, int n,
                          int max_iters, double tol, unsigned seed) {
  // shift by an upper bound of the spectrum so the smallest eigenvalue
  // becomes the dominant one of (sigma*I - A); Lanczos converges fastest to
  // extremal eigenvalues.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  VectorXcd v(n), av(n);
  for (int i = 0; i < n; ++i) v(i) = {nd(rng), nd(rng)};
  v.normalize();
  matvec(v, av);
  double sigma = 2.0 * av.norm() + 1.0;  // crude ||A|| proxy; refined below

  const int maxit = std::min(max_iters, n);
  MatrixXcd V(n, maxit + 1);
  std::vector<double> alpha, beta;
  V.col(0) = v;
  VectorXcd w(n);
  double lam_prev = 0.0;
  for (int k = 0; k < maxit; ++k) {
    matvec(V.col(k), w);
    w = sigma * V.col(k) - w;  // apply sigma*I - A
    double a = std::real(V.col(k).dot(w));
    w -= a * V.col(k);
    if (k > 0) w -= beta.back() * V.col(k - 1);
    // full reorthogonalization (dimensions here are modest)
    w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
    double b = w.norm();
    alpha.push_back(a);
    if (b < 1e-14) {  // invariant subspace found
      beta.push_back(0.0);
      V.col(k + 1).setZero();
      break;
    }
    beta.push_back(b);
    V.col(k + 1) = w / b;

    if (k >= 8 && (k % 8 == 0 || k == maxit - 1)) {
      const int kk = k + 1;
      std::vector<double> dd(alpha.begin(), alpha.begin() + kk);
      std::vector<double> ee(beta.begin(), beta.begin() + kk - 1);
      auto top = tridiag_smallest(dd, ee, kk, false);
      double lam_max_shifted = top.values.back();
      double lam = sigma - lam_max_shifted;
      if (k > 16 && std::abs(lam - lam_prev) < tol * (std::abs(lam) + 1.0)) return lam;
      lam_prev = lam;
    }
  }
  const int kk = static_cast<int>(alpha.size());
  std::vector<double> dd(alpha.begin(), alpha.end());
  std::vector<double> ee(beta.begin(), beta.begin() + kk - 1);
  auto top = tridiag_smallest(dd, ee, kk, false);
  return sigma - top.values.back();
}

VectorXcd complex_eigenvalues(const MatrixXcd& A) {
  const int n = static_cast<int>(A.rows());
  MatrixXcd work = A;
  VectorXcd w(n);
  lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, n, nullptr, n);
  if (info != 0) throw std::runtime_error("complex_eigenvalues: zgeev failed");
  return w;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  const double ssr = syy - sy * sy / n;
  double sse = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    sse += r * r;
  }
  f.r_squared = ssr > 0 ? 1.0 - sse / ssr : 1.0;
  return f;
}

}  // namespace grushin::linalg
