#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spincal/dynamics.hpp"
#include "spincal/linalg.hpp"
#include "spincal/models.hpp"

namespace spincal::fixture {

/// Seeded generator of random algebra data.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  double normal() { return normal_(rng_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

  Vec normal_vec(int n, double scale = 1.0) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }

  /// Random element of the ambient real algebra.
  Mat member(const SymmetricSpace& space, double scale = 1.0) {
    const int n = space.size();
    Mat x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = scale * cplx(normal(), normal());
    return space.project_to_algebra(x);
  }

  /// Random element of M-perp.
  Mat slice_spin(const SymmetricSpace& space, double scale = 1.0) {
    return space.from_plus_coefficients(normal_vec(static_cast<int>(space.root_basis().size()), scale));
  }

  CartanPoint chamber(const SymmetricSpace& space, double margin = 0.2) {
    return random_chamber_point(space, rng_, margin);
  }

  CartanPoint momentum(const SymmetricSpace& space, double scale = 1.0) {
    return space.normalize(CartanPoint(normal_vec(space.coord_count(), scale)));
  }

  PhasePoint point(const SymmetricSpace& space, double spin_scale = 1.0, double margin = 0.2) {
    const CartanPoint q = chamber(space, margin);
    const CartanPoint p = momentum(space);
    return make_phase_point(space, q, p, slice_spin(space, spin_scale));
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

/// ad_Q as a superoperator on column-major vec(X).
inline Mat ad_superoperator(const Mat& q) {
  const Eigen::Index n = q.rows();
  const Mat id = Mat::Identity(n, n);
  Mat out = Mat::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      out.block(a * n, b * n, n, n) += (a == b ? cplx(1.0) : cplx(0.0)) * q;
      out.block(a * n, b * n, n, n) -= q(b, a) * id;
    }
  return out;
}

inline Mat vec_of(const Mat& x) { return Eigen::Map<const Mat>(x.data(), x.size(), 1); }
inline Mat unvec(const Mat& v, Eigen::Index n) { return Eigen::Map<const Mat>(v.data(), n, n); }

/// Truncated Taylor series of sinh and cosh of a square matrix.
inline std::pair<Mat, Mat> sinh_cosh_series(const Mat& a, int terms = 80) {
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat s = Mat::Zero(a.rows(), a.cols());
  Mat c = Mat::Zero(a.rows(), a.cols());
  for (int k = 0; k < terms; ++k) {
    (k % 2 == 0 ? c : s) += term;
    term = term * a / static_cast<double>(k + 1);
  }
  return {s, c};
}

/// Central difference of a scalar function along a matrix direction.
template <class F>
double directional_fd(F&& f, const Mat& x, const Mat& y, double h = 1e-5) {
  return (f(x + h * y) - f(x - h * y)) / (2.0 * h);
}

inline std::vector<SpaceSpec> small_spaces() {
  return {SpaceSpec::su(1, 1), SpaceSpec::su(2, 1), SpaceSpec::su(2, 2), SpaceSpec::su(3, 1),
          SpaceSpec::su(3, 2), SpaceSpec::sl(2),    SpaceSpec::sl(3)};
}

/// All su(m,n) with m >= n and m + n <= size.
inline std::vector<SpaceSpec> all_su_up_to(int size) {
  std::vector<SpaceSpec> out;
  for (int n = 1; 2 * n <= size; ++n)
    for (int m = n; m + n <= size; ++m) out.push_back(SpaceSpec::su(m, n));
  return out;
}

/// Root multiplicities read off the matrix realization.
inline int expected_multiplicity(const SpaceSpec& spec, const RestrictedRoot& r) {
  if (spec.family == SpaceSpec::Family::SL) return 2;
  switch (r.kind) {
    case RootKind::Diff:
    case RootKind::Sum: return 2;
    case RootKind::Twice: return 1;
    case RootKind::Single: return 2 * (spec.m - spec.n);
  }
  return -1;
}

}  // namespace spincal::fixture
