#pragma once

#include <cstdint>

#include "spincal/integrator.hpp"

namespace spincal {

struct ProjectionOptions {
  int align_starts = 6;       // random exp(M) starting points besides the identity
  int align_iterations = 300;
  std::uint64_t align_seed = 0x5eed;
  double degeneracy_tol = 1e-9;
};

struct ProjectionResult {
  PhasePoint point;
  Mat g_plus;                 // Lambda(t) = g_plus e^{2q(t)} g_plus^{-1}
  double diagonalization_residual = 0.0;
  double dropped_m = 0.0;     // M-part of g_plus^{-1} xi g_plus before projection
  double overlap = 0.0;       // -<xi(t), xi_ref> after M-gauge alignment
};

/// (q, Q) with Q = g_plus diag-form g_plus^{-1}: chamber coordinates of the
/// Hermitian element Q of g_- and a G+ element bringing it to A.
/// Throws WallError for degenerate or wall-adjacent spectra.
struct ChamberForm {
  CartanPoint q;
  Mat g_plus;
  double residual = 0.0;
};
ChamberForm chamber_form(const SymmetricSpace& space, const Mat& q_matrix,
                         double degeneracy_tol = 1e-9);

/// The reduced flow of f o K(1) for G-invariant f, obtained by projecting the
/// explicit unreduced flow. Aligns the residual M-gauge to xi_ref (default: pt0's xi).
ProjectionResult flow_projection_detailed(const SymmetricSpace& space, const PhasePoint& pt0,
                                          const InvariantSpec& spec, double t,
                                          const Mat* xi_ref = nullptr,
                                          const ProjectionOptions& opts = {});

PhasePoint flow_projection(const SymmetricSpace& space, const PhasePoint& pt0,
                           const InvariantSpec& spec, double t);

/// Samples the projection flow on the same grid integrate_direct uses; each
/// sample is aligned to the previous one.
Trajectory integrate_projection(const SymmetricSpace& space, const PhasePoint& pt0,
                                const InvariantSpec& spec, const IntegrateOptions& opts);

/// Maximizes -<Ad_m xi, xi_ref> over m in exp(M); returns the aligned xi.
Mat align_m_gauge(const SymmetricSpace& space, const Mat& xi, const Mat& xi_ref,
                  const ProjectionOptions& opts = {}, double* overlap = nullptr);

}  // namespace spincal
