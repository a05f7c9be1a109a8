#include "spincal/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace spincal::linalg {

Mat expm(const Mat& x) { return x.exp(); }

Mat hermitian_function(const Mat& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Vec& d = es.eigenvalues();
  const Mat& u = es.eigenvectors();
  CVec fd(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) fd[i] = f(d[i]);
  return u * fd.asDiagonal() * u.adjoint();
}

Mat hermitian_ad_function(const Mat& h, const Mat& x, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Vec& d = es.eigenvalues();
  const Mat& u = es.eigenvectors();
  Mat y = u.adjoint() * x * u;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) *= f(d[i] - d[j]);
  return u * y * u.adjoint();
}

Mat hermitian_log(const Mat& lambda) {
  Eigen::SelfAdjointEigenSolver<Mat> es(lambda);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw DomainError("hermitian_log: matrix is not positive-definite");
  return hermitian_function(lambda, [](double v) { return std::log(v); });
}

Mat log_polar_factor(const Mat& g) {
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU);
  const Vec& s = svd.singularValues();
  if (s.minCoeff() <= 0.0) throw NumericalError("log_polar_factor: singular factor");
  CVec ls(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) ls[i] = std::log(s[i]);
  return svd.matrixU() * ls.asDiagonal() * svd.matrixU().adjoint();
}

Mat log_polar_factor(const Mat& g, const Mat& g_inv) {
  Eigen::JacobiSVD<Mat> up(g, Eigen::ComputeFullU);
  Eigen::JacobiSVD<Mat> down(g_inv, Eigen::ComputeFullV);
  if (up.singularValues().minCoeff() <= 0.0 || down.singularValues().minCoeff() <= 0.0)
    throw NumericalError("log_polar_factor: singular factor");
  // Expanding directions from g, contracting ones from g^{-1} = V S^{-1} U^dagger.
  Mat out = Mat::Zero(g.rows(), g.cols());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double a = up.singularValues()[i];
    if (a > 1.0) out += std::log(a) * up.matrixU().col(i) * up.matrixU().col(i).adjoint();
    const double b = down.singularValues()[i];
    if (b > 1.0) out -= std::log(b) * down.matrixV().col(i) * down.matrixV().col(i).adjoint();
  }
  return 0.5 * (out + out.adjoint());
}

std::vector<cplx> sorted_spectrum(const Mat& x) {
  Eigen::ComplexEigenSolver<Mat> es(x, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  // Classical O(n^3) potentials formulation, 1-based internally.
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(n, 0);
  for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
  return perm;
}

double matched_spectral_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw DomainError("matched_spectral_distance: size mismatch");
  const auto n = static_cast<Eigen::Index>(a.size());
  if (n == 0) return 0.0;
  // Squared distances favour matchings that are good in the max-norm too.
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = std::norm(a[i] - b[j]);
  const auto perm = hungarian(cost);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
  return worst;
}

}  // namespace spincal::linalg
