#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spincal/algebra.hpp"
#include "spincal/orbits.hpp"

namespace spincal {

/// A point (q, p, xi) of the thick gauge slice.
struct PhasePoint {
  CartanPoint q;
  CartanPoint p;
  SpinPoint xi;
};

/// Normalizes coordinates and checks q in the chamber, xi on the slice.
PhasePoint make_phase_point(const SymmetricSpace& space, const CartanPoint& q, const CartanPoint& p,
                            const Mat& xi);

/// 1/2 sum p_k^2 + 1/(2c) sum (xi_i^alpha)^2 / sinh^2 alpha(q), c = <H_k, H_k>.
double hamiltonian(const SymmetricSpace& space, const PhasePoint& pt);
/// <L(1), L(1)> / (2c), the same quantity through the Lax matrix.
double hamiltonian_from_lax(const SymmetricSpace& space, const PhasePoint& pt);

/// L(x) = p - coth(ad_q) xi - x xi.
Mat lax(const SymmetricSpace& space, const PhasePoint& pt, double x);
/// L(0).
Mat lax_minus(const SymmetricSpace& space, const PhasePoint& pt);
/// p - w(ad_q) xi with w = 1/sinh.
Mat lax_cal(const SymmetricSpace& space, const PhasePoint& pt);
/// e^{-q} L(1) e^{q}, the same operator by conjugation.
Mat lax_cal_conjugated(const SymmetricSpace& space, const PhasePoint& pt);

enum class Gauge { Thick, Frozen };

struct Tangent {
  Vec dq;
  Vec dp;
  Mat dxi;
  /// Norm of the M-component of dxi (zero on the thick slice up to rounding).
  double dxi_m_norm = 0.0;
  Mat y_m;
};

/// Right-hand side of the reduced equations of motion.
/// Thick: y_M = 0. Frozen: y_M from freezing_solve (throws DomainError if none).
Tangent eom_rhs(const SymmetricSpace& space, const PhasePoint& pt, Gauge gauge = Gauge::Thick);

// ---------------------------------------------------------------------------
// Invariant functions on the algebra.

enum class InvariantKind { TracePower, BlockInvariant };

struct InvariantSpec {
  InvariantKind kind = InvariantKind::TracePower;
  int k = 2;
  double x = 1.0;

  static InvariantSpec trace_power(int k, double x = 1.0);
  static InvariantSpec block_invariant(int k, double x = 1.0);
  /// Invariant under all of G (not only G+).
  bool g_invariant() const { return kind == InvariantKind::TracePower; }
  std::string label() const;
  void validate(const SymmetricSpace& space) const;
};

/// trace_power(k): Re tr(X^k) / k. block_invariant(k): Re tr((A B D B^dagger)^k)
/// for X = [[A, B], [B^dagger, D]] in su(m,n).
double evaluate(const SymmetricSpace& space, const InvariantSpec& spec, const Mat& x);
/// The gradient with respect to <X, Y> = Re tr(XY).
Mat gradient(const SymmetricSpace& space, const InvariantSpec& spec, const Mat& x);
/// f(L(spec.x)) at a phase point.
double invariant_at(const SymmetricSpace& space, const InvariantSpec& spec, const PhasePoint& pt);

struct BracketTerms {
  double plus = 0.0;   // <xi, [A^f_+(x), A^h_+(y)]>
  double minus = 0.0;  // <xi, [A^f_-(x), A^h_-(y)]>
};

/// The two pairings entering the bracket of f o K(x) and h o K(y) at the slice point.
BracketTerms bracket_terms(const SymmetricSpace& space, const InvariantSpec& f, double x,
                           const InvariantSpec& h, double y, const PhasePoint& pt);
/// x y <xi, [A^f_+, A^h_+]> - <xi, [A^f_-, A^h_-]>
double bracket_formula(const SymmetricSpace& space, const InvariantSpec& f, double x,
                       const InvariantSpec& h, double y, const PhasePoint& pt);
/// |x <xi, [A^f_+, A^h_+]> - y <xi, [A^f_-, A^h_-]>|, for f G+-invariant and h G-invariant.
double identity_413(const SymmetricSpace& space, const InvariantSpec& f, double x,
                    const InvariantSpec& h, double y, const PhasePoint& pt);
/// |y <xi, [A^f_+, A^h_+]> - x <xi, [A^f_-, A^h_-]>|, for f and h both G-invariant.
double identity_416(const SymmetricSpace& space, const InvariantSpec& f, double x,
                    const InvariantSpec& h, double y, const PhasePoint& pt);

// ---------------------------------------------------------------------------

struct FreezingSolution {
  Mat y_m;
  Vec coefficients;           // along m_basis()
  double residual = 0.0;      // least-squares residual of the linear system
  double frozen_residual = 0.0;    // |[y_M - w^2(ad_q) mu, mu]|
  double identity_residual = 0.0;  // |[w^2 Z, Z] - sinh(ad_q)[w Z, w' Z]| at Z = mu
};

/// Solves [y_M, w(ad_q) mu] = [w(ad_q) mu, w'(ad_q) mu]_{A-perp} for y_M in M.
/// Returns nullopt when the least-squares residual exceeds tol.
std::optional<FreezingSolution> freezing_solve(const SymmetricSpace& space, const CartanPoint& q,
                                               const SpinPoint& mu, double tol = 1e-9);
/// Smallest least-squares residual, whether or not a solution is accepted.
double freezing_residual(const SymmetricSpace& space, const CartanPoint& q, const SpinPoint& mu);

struct R12Term {
  double coefficient;
  int root;
  std::string tag;
  Mat left;   // E_alpha^{+,i}, in M-perp
  Mat right;  // E_alpha^{-,i}, in A-perp
};

/// sum over positive roots and their basis vectors of coth alpha(q) E^{+,i} (x) E^{-,i}.
std::vector<R12Term> r12_build(const SymmetricSpace& space, const CartanPoint& q);

/// Norm induced by the orthonormal basis: sqrt of the sum of squared components.
double algebra_norm(const SymmetricSpace& space, const Mat& x);

}  // namespace spincal
