#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "spincal/algebra.hpp"

namespace spincal {

/// Coadjoint orbit of G+ built from minimal SU(k) orbits (and the centre).
///
/// For SU(m,n): kappa_m / kappa_n select minimal orbits O^{k,kappa} embedded in
/// the su(m) / su(n) factor, central_x multiplies C_{m,n}. For SL(k,C) only
/// kks_kappa is used.
struct OrbitSpec {
  std::optional<double> kappa_m;
  std::optional<double> kappa_n;
  double central_x = 0.0;
  std::optional<double> kks_kappa;

  static OrbitSpec kks(double kappa);
  void validate(const SymmetricSpace& space) const;
};

/// An element xi of g+ (a point of a coadjoint orbit of G+).
struct SpinPoint {
  Mat xi;
  /// True when the M-component vanishes; coefficients then holds xi_i^alpha.
  bool on_slice = false;
  Vec coefficients;
};

/// Certifies xi in g+ and fills the on-slice data.
SpinPoint make_spin_point(const SymmetricSpace& space, const Mat& xi);
/// As make_spin_point, but throws DomainError if the M-component is nonzero.
SpinPoint make_slice_spin(const SymmetricSpace& space, const Mat& xi);

/// A point (Lambda, J_-, xi) of the extended phase space before reduction.
struct UnreducedPoint {
  Mat lambda;
  Mat j_minus;
  Mat xi;
};

/// Throws DomainError unless Lambda is in G_-, J_- in g_- and xi in g_+.
void validate_unreduced(const SymmetricSpace& space, const UnreducedPoint& pt);

/// eta(u) = i (u u^dagger - (u^dagger u / k) 1_k); requires u^dagger u = k kappa.
Mat eta_of_u(const CVec& u, double kappa);

/// (mu^{k,kappa})_{ab} = i kappa (1 - delta_ab).
Mat mu_kks(int k, double kappa);

/// C_{m,n} = diag(i n 1_m, -i m 1_n).
Mat central_element(int m, int n);

/// Psi(Lambda, J_-, xi) = tanh(ad_Q) J_- + xi with Q = log(Lambda)/2.
Mat moment_map(const SymmetricSpace& space, const UnreducedPoint& pt);

/// (e^{2q}, p - coth(ad_q) xi, xi); q must be in the chamber, xi on the slice.
UnreducedPoint build_slice_point(const SymmetricSpace& space, const CartanPoint& q,
                                 const CartanPoint& p, const SpinPoint& xi);

enum class ReducedCase { D, C, BC, KKS };

/// Couplings g, g1, g2 of the BC_n reduction.
struct BcCouplings {
  double g = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;

  /// g1^2 - 2 g^2 + sqrt(2) g g2
  double relation_residual() const;
};

/// Empty when admissible, otherwise a description of the violated condition.
std::optional<std::string> bc_violation(int n, double kappa, double x);
std::optional<std::string> c_violation(int n, double kappa, double x);
std::optional<std::string> d_violation(int n, double kappa);
std::optional<std::string> kks_violation(int k, double kappa);

/// Throws DomainError for inadmissible parameters.
BcCouplings bc_couplings(int n, double kappa, double x);

/// Representative of the single-point reduced orbit. The space must match the
/// case: BC needs su(n+1,n), C needs su(n,n), D any su(m,n), KKS sl(k,C).
SpinPoint xi_red(const SymmetricSpace& space, ReducedCase c, double kappa, double x = 0.0);

struct OrbitCheckReport {
  int samples = 0;
  double max_diag_residual = 0.0;         // eta_diag vs diag(i x 1_n, -i x n)
  double max_m_component = 0.0;           // M-part of xi = eta~ + x C
  double max_torus_det_residual = 0.0;    // det of the torus element
  double max_normal_form_residual = 0.0;  // t u vs e^{i alpha} u^
  double max_m_membership_residual = 0.0; // the assembled M group element
  double max_xi_residual = 0.0;           // Ad_m xi vs xi_red
  bool pass = false;
};

/// Samples the constrained orbit of (O~^{n+1,kappa} + x C_{n+1,n}) and checks
/// that every sample is torus-equivalent to the normal form.
OrbitCheckReport reduce_orbit_check(int n, double kappa, double x, int samples,
                                    std::uint64_t seed, double tol = 1e-10);

struct EmptinessReport {
  int samples = 0;
  double min_residual = 0.0;  // min over samples of |xi_M|
  double lower_bound = 0.0;   // |<Z0, xi>| / |Z0| for the central direction Z0 of M
};

/// Samples O~^{n,kappa} + x C_{n+1,n} in su(n+1,n) and records how far the
/// points stay from M-perp.
EmptinessReport emptiness_probe(int n, double kappa, double x, int samples, std::uint64_t seed);

/// Random element of g+ with standard normal coordinates (times scale).
Mat random_g_plus(const SymmetricSpace& space, std::mt19937_64& rng, double scale = 1.0);
/// exp of a random g+ element, determinant-corrected.
Mat random_G_plus(const SymmetricSpace& space, std::mt19937_64& rng);
/// Random point of the orbit through the base point of spec.
SpinPoint random_orbit_point(const SymmetricSpace& space, const OrbitSpec& spec, std::uint64_t seed);
/// A point of the orbit on M-perp: random orbit points are moved by descending
/// |xi_M|^2 along G+ conjugation. Throws DomainError if every start stalls
/// above tol (the orbit may not meet M-perp).
SpinPoint slice_orbit_point(const SymmetricSpace& space, const OrbitSpec& spec, std::uint64_t seed,
                            int starts = 8, double tol = 1e-12);
/// Base point of the orbit (before random conjugation).
Mat orbit_base_point(const SymmetricSpace& space, const OrbitSpec& spec);
/// Random on-slice spin: normal coefficients along every E^{+,i}_alpha.
SpinPoint random_slice_spin(const SymmetricSpace& space, std::mt19937_64& rng, double scale = 1.0);

/// Orbit membership certificate: sorted spectra agree to tol.
bool same_spectrum(const Mat& a, const Mat& b, double tol = 1e-9);

}  // namespace spincal
