#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spincal {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Vec = Eigen::VectorXd;

/// Entrywise tolerance used to certify algebra membership after construction.
inline constexpr double kMembershipTol = 1e-10;

/// Inputs further than this (relative) from the algebra are rejected instead
/// of being symmetrized onto it.
inline constexpr double kMembershipRejectTol = 1e-6;

/// Minimal admissible value of min_alpha |alpha(q)| on the configuration space.
inline constexpr double kWallEpsilon = 1e-6;

/// Invalid parameters or dimensions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that is not (close to) an element of the required algebra/subspace.
class MembershipError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A Cartan point on, or too close to, a wall of the Weyl chamber.
class WallError : public std::runtime_error {
 public:
  WallError(const std::string& what, double min_root)
      : std::runtime_error(what), min_root_(min_root) {}
  double min_root() const { return min_root_; }

 private:
  double min_root_;
};

/// Numerical failure: degenerate diagonalization, step-size underflow, ...
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinates of an element of the maximal Abelian subspace A.
///
/// For SU(m,n) the coordinates are (q^1..q^n) of the block form with
/// Q = diag(q); for SL(k,C) they are the k real diagonal entries, constrained
/// to sum to zero.
struct CartanPoint {
  Vec coords;

  CartanPoint() = default;
  explicit CartanPoint(Vec c) : coords(std::move(c)) {}
  CartanPoint(std::initializer_list<double> c) : coords(static_cast<Eigen::Index>(c.size())) {
    Eigen::Index i = 0;
    for (double v : c) coords[i++] = v;
  }

  Eigen::Index size() const { return coords.size(); }
  double operator[](Eigen::Index i) const { return coords[i]; }
  double& operator[](Eigen::Index i) { return coords[i]; }
};

/// Re tr(XY), the invariant form used throughout.
inline double pairing(const Mat& x, const Mat& y) {
  // tr(XY) = sum_ij X_ij Y_ji
  return (x.array() * y.transpose().array()).sum().real();
}

inline Mat commutator(const Mat& x, const Mat& y) { return x * y - y * x; }

}  // namespace spincal
