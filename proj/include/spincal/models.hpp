#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spincal/dynamics.hpp"

namespace spincal {

/// g^2 / kappa^2 of the A-type Sutherland model obtained from mu_kks(k, kappa).
/// Fixed by matching the reduced Hamiltonian; see the models regression test.
inline constexpr double kSutherlandG2PerKappa2 = 1.0;

enum class ModelFamily { BC, C, D, SutherlandA };

/// Spinless catalog entry. n is the rank for BC/C/D and k for SutherlandA.
struct SpinlessModel {
  ModelFamily family = ModelFamily::BC;
  int n = 1;
  double kappa = 1.0;
  double x = 0.0;
  int m = 0;  // D only: realize on su(m,n); 0 means m = n

  static SpinlessModel bc(int n, double kappa, double x);
  static SpinlessModel c(int n, double kappa, double x);
  static SpinlessModel d(int n, double kappa, int m = 0);
  static SpinlessModel sutherland(int k, double kappa);

  /// Throws DomainError with the violated condition.
  void validate() const;
  SpaceSpec space() const;
  ReducedCase reduced_case() const;
  std::string name() const;
};

/// Admissibility verdict: empty when ok, otherwise the violated condition.
std::optional<std::string> validate_params(const SpinlessModel& model);

/// (g, g1, g2) of the BC model.
BcCouplings model_couplings(const SpinlessModel& model);

/// The displayed closed-form Hamiltonian; q must be in the model's chamber.
double closed_form_H(const SpinlessModel& model, const CartanPoint& q, const CartanPoint& p);
/// The same expression at any regular q (used for Weyl images of chamber points).
double closed_form_H_regular(const SpinlessModel& model, const CartanPoint& q, const CartanPoint& p);

/// The frozen spin of the model on its space.
SpinPoint model_spin(const SpinlessModel& model, const SymmetricSpace& space);

/// Phase point of the model on its space with the frozen spin.
PhasePoint model_point(const SpinlessModel& model, const SymmetricSpace& space, const CartanPoint& q,
                       const CartanPoint& p);

/// Max |hamiltonian - closed_form_H| over random chamber points.
double machinery_equals_closed_form(const SpinlessModel& model, int samples = 100,
                                    std::uint64_t seed = 1);

/// A random point of the open chamber (coordinates of order 1, roots >= margin).
CartanPoint random_chamber_point(const SymmetricSpace& space, std::mt19937_64& rng,
                                 double margin = 0.2);

}  // namespace spincal
