#pragma once

#include <functional>
#include <vector>

#include "spincal/common.hpp"

namespace spincal::linalg {

/// e^X for a general (non-normal) complex matrix, Pade scaling-and-squaring.
Mat expm(const Mat& x);

/// f(H) for Hermitian H via its eigendecomposition.
Mat hermitian_function(const Mat& h, const std::function<double(double)>& f);

/// f(ad_H) X for Hermitian H: in the eigenbasis H = U diag(d) U^dagger,
/// (U^dagger X U)_ij is scaled by f(d_i - d_j).
Mat hermitian_ad_function(const Mat& h, const Mat& x, const std::function<double(double)>& f);

/// Principal logarithm of a Hermitian positive-definite matrix.
/// Throws DomainError if an eigenvalue is not positive.
Mat hermitian_log(const Mat& lambda);

/// log P where P = (g g^dagger)^{1/2}, computed from the SVD of g.
Mat log_polar_factor(const Mat& g);
/// The same from g and an independently computed g^{-1}: the contracting
/// directions are read off the dominant singular values of g^{-1}, which keeps
/// them accurate when the spread of singular values is large.
Mat log_polar_factor(const Mat& g, const Mat& g_inv);

/// Eigenvalues sorted by real part, then imaginary part.
std::vector<cplx> sorted_spectrum(const Mat& x);

/// Minimal over assignments of max_i |a_i - b_pi(i)|. Sizes must agree.
double matched_spectral_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

/// Optimal assignment minimising the total cost (Hungarian method).
/// Returns perm with row i assigned to column perm[i].
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

/// max_ij |X_ij|
inline double max_abs(const Mat& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

}  // namespace spincal::linalg
