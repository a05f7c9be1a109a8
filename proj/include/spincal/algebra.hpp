#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "spincal/common.hpp"

namespace spincal {

/// Which concrete symmetric space G/G+ is realized.
struct SpaceSpec {
  enum class Family { SU, SL };

  Family family = Family::SU;
  int m = 0;  // SU(m,n)
  int n = 0;
  int k = 0;  // SL(k,C)

  static SpaceSpec su(int m, int n);
  static SpaceSpec sl(int k);

  /// Throws DomainError unless m >= n >= 1 (SU) or k >= 2 (SL).
  void validate() const;

  int matrix_size() const { return family == Family::SU ? m + n : k; }
  /// dim A.
  int rank() const { return family == Family::SU ? n : k - 1; }
  /// Number of CartanPoint coordinates (n for SU, k for SL).
  int coord_count() const { return family == Family::SU ? n : k; }
  std::string name() const;

  bool operator==(const SpaceSpec& o) const {
    return family == o.family && m == o.m && n == o.n && k == o.k;
  }
};

enum class RootKind { Diff, Sum, Twice, Single };

/// A positive restricted root: e_k - e_l, e_k + e_l, 2 e_k or e_k (0-based indices).
struct RestrictedRoot {
  RootKind kind;
  int k;
  int l = -1;

  double value(const CartanPoint& q) const;
  /// Coefficients of alpha as a linear functional on the coordinates.
  Vec functional(int coord_count) const;
  std::string label() const;
};

/// One pair (E_alpha^{+,i}, E_alpha^{-,i}) of the orthonormalized root basis.
struct RootVector {
  int root;         // index into SymmetricSpace::positive_roots()
  std::string tag;  // "r", "i", "r,d=1", ...
  Mat plus;         // in M-perp, <plus,plus> = -1
  Mat minus;        // in A-perp, <minus,minus> = +1
};

enum class Subspace { A, Aperp, M, Mperp };

/// Coefficients of X in the orthonormal basis A (+) M (+) M-perp (+) A-perp.
struct Components {
  Vec a;
  Vec m;
  Vec plus;   // xi_i^alpha, indexed like root_basis()
  Vec minus;
};

enum class Parity { Even, Odd };

/// A real analytic function of definite parity, applied to ad_q.
struct ScalarFunction {
  std::string name;
  Parity parity;
  std::function<double(double)> f;
  bool pole_at_zero = false;
  double at_zero = 0.0;

  static ScalarFunction tanh();
  static ScalarFunction coth();
  static ScalarFunction sinh();
  static ScalarFunction cosh();
  /// w(z) = 1/sinh z
  static ScalarFunction w();
  /// w(z)^2
  static ScalarFunction w_squared();
  /// w'(z) = -cosh z / sinh^2 z
  static ScalarFunction w_prime();
};

/// Weyl group element acting on coordinates: q'_i = signs[i] * q_{perm[i]}.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  static SignedPermutation identity(int size);
};

class SymmetricSpace;
using SpacePtr = std::shared_ptr<const SymmetricSpace>;

/// A matrix certified to lie in the real Lie algebra of its space.
class LieElement {
 public:
  const Mat& matrix() const { return value_; }
  const SpacePtr& space() const { return space_; }

 private:
  friend class SymmetricSpace;
  LieElement(Mat value, SpacePtr space) : value_(std::move(value)), space_(std::move(space)) {}

  Mat value_;
  SpacePtr space_;
};

/// Concrete realization of su(m,n) or sl(k,C) with its Cartan involution,
/// restricted roots and the orthonormalized root basis. Immutable.
class SymmetricSpace : public std::enable_shared_from_this<SymmetricSpace> {
 public:
  static SpacePtr build(const SpaceSpec& spec);

  const SpaceSpec& spec() const { return spec_; }
  int size() const { return spec_.matrix_size(); }
  int rank() const { return spec_.rank(); }
  int coord_count() const { return spec_.coord_count(); }
  /// Real dimension of the ambient algebra.
  int dim() const;
  /// <H_j, H_j> for the matrix embedding of the coordinate directions.
  double cartan_norm() const { return spec_.family == SpaceSpec::Family::SU ? 2.0 : 1.0; }

  const std::vector<RestrictedRoot>& positive_roots() const { return roots_; }
  int multiplicity(int root) const;
  const std::vector<RootVector>& root_basis() const { return basis_; }
  const std::vector<Mat>& a_basis() const { return a_basis_; }
  const std::vector<Mat>& m_basis() const { return m_basis_; }

  // Membership.
  double membership_residual(const Mat& x) const;
  bool is_member(const Mat& x, double tol = kMembershipTol) const;
  Mat project_to_algebra(const Mat& x) const;
  /// Symmetrizes near-members; throws MembershipError for far ones.
  LieElement element(const Mat& x) const;
  void require_member(const Mat& x, const char* who) const;

  /// I X I (SU) or -X^dagger (SL).
  Mat theta(const Mat& x) const;
  /// (X+, X-) with X+ = (X + theta X)/2.
  std::pair<Mat, Mat> split(const Mat& x) const;
  Mat project(const Mat& x, Subspace s) const;
  Components components(const Mat& x) const;
  Mat assemble(const Components& c) const;

  /// phi(ad_q) X computed componentwise on the root basis.
  Mat ad_fn(const ScalarFunction& phi, const CartanPoint& q, const Mat& x) const;

  // Cartan subspace.
  Mat embed(const CartanPoint& q) const;
  /// Coordinates of the A-component of X.
  CartanPoint cartan_coords(const Mat& x) const;
  /// Projects SL coordinates onto sum zero; validates the coordinate count.
  CartanPoint normalize(const CartanPoint& q) const;
  std::vector<double> root_values(const CartanPoint& q) const;
  double min_root_value(const CartanPoint& q) const;
  bool is_regular(const CartanPoint& q, double tol = kWallEpsilon) const;
  bool in_chamber(const CartanPoint& q, double tol = kWallEpsilon) const;
  /// Throws WallError unless q is in the open chamber with margin tol.
  void require_chamber(const CartanPoint& q, double tol = kWallEpsilon) const;

  CartanPoint weyl_act(const SignedPermutation& w, const CartanPoint& q) const;

  /// Expansion coefficients of X along E^{+,i}_alpha (the xi_i^alpha).
  Vec plus_coefficients(const Mat& x) const;
  Mat from_plus_coefficients(const Vec& c) const;
  Mat zero() const { return Mat::Zero(size(), size()); }

  /// I_{m,n} (SU) or the identity (SL).
  const Mat& metric() const { return metric_; }

 private:
  explicit SymmetricSpace(const SpaceSpec& spec);
  void build_su();
  void build_sl();

  SpaceSpec spec_;
  Mat metric_;
  std::vector<RestrictedRoot> roots_;
  std::vector<int> multiplicities_;
  std::vector<RootVector> basis_;
  std::vector<Mat> a_basis_;
  std::vector<Mat> m_basis_;
};

inline SpacePtr build_space(const SpaceSpec& spec) { return SymmetricSpace::build(spec); }

}  // namespace spincal
