#pragma once

#include <vector>

#include "spincal/dynamics.hpp"

namespace spincal {

struct IntegrateOptions {
  double t_end = 1.0;
  double tol = 1e-10;
  /// Output spacing; samples at 0, dt, 2dt, ... and t_end. Non-positive: t_end only.
  double sample_dt = 0.0;
  Gauge gauge = Gauge::Thick;
  double initial_step = 0.0;  // 0: automatic
  long max_steps = 10'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double max_orbit_correction = 0.0;  // max |s - 1| of the spectral rescaling
  double max_dropped_m = 0.0;         // max M-part of xi-dot removed by projection
  double min_root_seen = 0.0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> points;
  IntegrationStats stats;

  bool empty() const { return t.empty(); }
  std::size_t size() const { return t.size(); }
};

/// Thrown when q comes within the wall margin; carries the samples reached.
class TrajectoryWallError : public WallError {
 public:
  TrajectoryWallError(const std::string& what, double min_root, Trajectory partial, double last_safe_t)
      : WallError(what, min_root), partial_(std::move(partial)), last_safe_t_(last_safe_t) {}
  const Trajectory& partial() const { return partial_; }
  double last_safe_t() const { return last_safe_t_; }

 private:
  Trajectory partial_;
  double last_safe_t_;
};

/// Dormand-Prince 5(4) on the reduced equations of motion.
Trajectory integrate_direct(const SymmetricSpace& space, const PhasePoint& pt0,
                            const IntegrateOptions& opts);

struct SpecDrift {
  InvariantSpec spec;
  double initial = 0.0;
  double max_relative_drift = 0.0;
};

struct SpectrumDrift {
  double x = 0.0;
  double max_relative_drift = 0.0;
};

struct DriftReport {
  double energy_initial = 0.0;
  double energy_relative_drift = 0.0;
  std::vector<SpecDrift> invariants;
  std::vector<SpectrumDrift> spectra;

  double worst() const;
};

/// Relative drift |v - v0| / max(|v0|, 1).
double relative_drift(double v, double v0);

/// Max drift over the trajectory of each f o L(x) and of the sorted L(x) spectra.
DriftReport monitor(const SymmetricSpace& space, const Trajectory& traj,
                    const std::vector<InvariantSpec>& specs, const std::vector<double>& lax_xs);

/// Matched max-distance between L(x) spectra of two points, over max(|lambda|, 1).
double spectral_distance(const SymmetricSpace& space, const PhasePoint& a, const PhasePoint& b,
                         double x);

}  // namespace spincal
