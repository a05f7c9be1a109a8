#include "spincal/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "spincal/linalg.hpp"

namespace spincal {

namespace {

// Dormand-Prince 5(4) tableau (autonomous system, nodes not needed).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StageFailure {};

class System {
 public:
  System(const SymmetricSpace& space, Gauge gauge) : space_(space), gauge_(gauge) {
    c_ = space.coord_count();
    r_ = static_cast<Eigen::Index>(space.root_basis().size());
  }

  Vec pack(const PhasePoint& pt) const {
    Vec y(2 * c_ + r_);
    y << pt.q.coords, pt.p.coords, space_.plus_coefficients(pt.xi.xi);
    return y;
  }

  PhasePoint unpack(const Vec& y) const {
    PhasePoint pt;
    pt.q = CartanPoint(Vec(y.segment(0, c_)));
    pt.p = CartanPoint(Vec(y.segment(c_, c_)));
    pt.xi.coefficients = y.segment(2 * c_, r_);
    pt.xi.xi = space_.from_plus_coefficients(pt.xi.coefficients);
    pt.xi.on_slice = true;
    return pt;
  }

  double min_root(const Vec& y) const { return space_.min_root_value(CartanPoint(Vec(y.head(c_)))); }

  Vec operator()(const Vec& y) {
    const CartanPoint q(Vec(y.head(c_)));
    if (!(space_.min_root_value(q) > 0.0)) throw StageFailure{};
    const CartanPoint p(Vec(y.segment(c_, c_)));
    const Mat xi = space_.from_plus_coefficients(y.segment(2 * c_, r_));
    Tangent t;
    try {
      t = detail::rhs_core(space_, q, p, xi, gauge_);
    } catch (const WallError&) {
      throw StageFailure{};
    }
    ++evaluations;
    max_dropped_m = std::max(max_dropped_m, t.dxi_m_norm);
    Vec dy(2 * c_ + r_);
    dy << t.dq, t.dp, space_.plus_coefficients(t.dxi);
    return dy;
  }

  /// Rescales xi so that its spectrum best matches lambda0; returns |s - 1|.
  double correct_orbit(Vec& y, const Vec& lambda0) const {
    const Mat xi = space_.from_plus_coefficients(y.segment(2 * c_, r_));
    const Vec lambda = detail::spin_spectrum(xi);
    const double ll = lambda.squaredNorm();
    if (ll == 0.0) return 0.0;
    const double s = lambda.dot(lambda0) / ll;
    y.segment(2 * c_, r_) *= s;
    return std::abs(s - 1.0);
  }

  long evaluations = 0;
  double max_dropped_m = 0.0;

 private:
  const SymmetricSpace& space_;
  Gauge gauge_;
  Eigen::Index c_ = 0;
  Eigen::Index r_ = 0;
};

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double tol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    acc += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(System& f, const Vec& y, const Vec& k1, double tol, double span) {
  Vec sc = (tol + tol * y.cwiseAbs().array()).matrix();
  const double d0 = std::sqrt((y.array() / sc.array()).square().mean());
  const double d1 = std::sqrt((k1.array() / sc.array()).square().mean());
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  double d2 = 0.0;
  try {
    const Vec k2 = f(y + h0 * k1);
    d2 = std::sqrt(((k2 - k1).array() / sc.array()).square().mean()) / h0;
  } catch (const StageFailure&) {
    return h0 * 0.1;
  }
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

Trajectory integrate_direct(const SymmetricSpace& space, const PhasePoint& pt0,
                            const IntegrateOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("integrate_direct: tol must be positive");
  if (!(opts.t_end >= 0.0) || !std::isfinite(opts.t_end))
    throw DomainError("integrate_direct: t_end must be a non-negative finite number");
  const PhasePoint start = make_phase_point(space, pt0.q, pt0.p, pt0.xi.xi);

  std::vector<double> targets;
  if (opts.sample_dt > 0.0) {
    const long count = static_cast<long>(std::floor(opts.t_end / opts.sample_dt + 1e-9));
    for (long i = 1; i <= count; ++i) targets.push_back(std::min(i * opts.sample_dt, opts.t_end));
  }
  if (targets.empty() || opts.t_end - targets.back() > 1e-12 * std::max(1.0, opts.t_end))
    targets.push_back(opts.t_end);
  if (opts.t_end == 0.0) targets.clear();

  System f(space, opts.gauge);
  Trajectory traj;
  traj.t.push_back(0.0);
  traj.points.push_back(start);
  Vec y = f.pack(start);
  const Vec lambda0 = detail::spin_spectrum(start.xi.xi);
  traj.stats.min_root_seen = f.min_root(y);

  auto finish_stats = [&]() {
    traj.stats.evaluations = f.evaluations;
    traj.stats.max_dropped_m = f.max_dropped_m;
  };
  if (targets.empty()) {
    finish_stats();
    return traj;
  }

  double t = 0.0;
  Vec k1 = f(y);
  double h = opts.initial_step > 0.0 ? opts.initial_step : initial_step(f, y, k1, opts.tol, opts.t_end);
  std::size_t next = 0;
  long steps = 0;
  bool last_rejected = false;

  while (next < targets.size()) {
    if (++steps > opts.max_steps) {
      finish_stats();
      throw NumericalError("integrate_direct: maximum number of steps exceeded");
    }
    const double target = targets[next];
    const double h_free = h;
    bool lands = false;
    if (t + h >= target - 1e-13 * std::max(1.0, std::abs(target))) {
      h = target - t;
      lands = true;
    }
    if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
      finish_stats();
      std::ostringstream os;
      os << "integrate_direct: step size underflow at t = " << t;
      throw NumericalError(os.str());
    }

    Vec y1;
    Vec k7;
    double err = 0.0;
    bool ok = true;
    try {
      const Vec k2 = f(y + h * (a21 * k1));
      const Vec k3 = f(y + h * (a31 * k1 + a32 * k2));
      const Vec k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vec k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vec k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      k7 = f(y1);
      const Vec e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      err = error_norm(e, y, y1, opts.tol);
      if (!std::isfinite(err)) ok = false;
    } catch (const StageFailure&) {
      ok = false;
    }

    if (!ok || err > 1.0) {
      ++traj.stats.rejected;
      const double fac = ok ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
      h *= std::min(fac, 0.9);
      last_rejected = true;
      continue;
    }

    ++traj.stats.accepted;
    const double t_prev = t;
    t = lands ? target : t + h;
    y = y1;
    traj.stats.max_orbit_correction =
        std::max(traj.stats.max_orbit_correction, f.correct_orbit(y, lambda0));

    const double mr = f.min_root(y);
    traj.stats.min_root_seen = std::min(traj.stats.min_root_seen, mr);
    if (mr < kWallEpsilon) {
      finish_stats();
      std::ostringstream os;
      os << "integrate_direct: q reached the chamber wall at t = " << t << " (min alpha(q) = " << mr
         << ")";
      throw TrajectoryWallError(os.str(), mr, traj, t_prev);
    }

    if (lands) {
      traj.t.push_back(t);
      traj.points.push_back(f.unpack(y));
      ++next;
    }

    k1 = f(y);
    double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    // A clipped landing step says nothing about the natural step size.
    h = (lands && fac >= 1.0) ? std::max(h * fac, h_free) : h * fac;
  }
  finish_stats();
  return traj;
}

// ---------------------------------------------------------------------------

double relative_drift(double v, double v0) { return std::abs(v - v0) / std::max(std::abs(v0), 1.0); }

double spectral_distance(const SymmetricSpace& space, const PhasePoint& a, const PhasePoint& b,
                         double x) {
  const auto sa = linalg::sorted_spectrum(lax(space, a, x));
  const auto sb = linalg::sorted_spectrum(lax(space, b, x));
  double scale = 1.0;
  for (const auto& v : sa) scale = std::max(scale, std::abs(v));
  return linalg::matched_spectral_distance(sa, sb) / scale;
}

double DriftReport::worst() const {
  double w = energy_relative_drift;
  for (const auto& d : invariants) w = std::max(w, d.max_relative_drift);
  for (const auto& d : spectra) w = std::max(w, d.max_relative_drift);
  return w;
}

DriftReport monitor(const SymmetricSpace& space, const Trajectory& traj,
                    const std::vector<InvariantSpec>& specs, const std::vector<double>& lax_xs) {
  if (traj.empty()) throw DomainError("monitor: empty trajectory");
  const PhasePoint& p0 = traj.points.front();
  DriftReport rep;
  rep.energy_initial = hamiltonian(space, p0);
  for (const auto& s : specs) rep.invariants.push_back({s, invariant_at(space, s, p0), 0.0});
  for (double x : lax_xs) rep.spectra.push_back({x, 0.0});
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const PhasePoint& pt = traj.points[i];
    rep.energy_relative_drift =
        std::max(rep.energy_relative_drift, relative_drift(hamiltonian(space, pt), rep.energy_initial));
    for (auto& d : rep.invariants)
      d.max_relative_drift =
          std::max(d.max_relative_drift, relative_drift(invariant_at(space, d.spec, pt), d.initial));
    for (auto& d : rep.spectra)
      d.max_relative_drift = std::max(d.max_relative_drift, spectral_distance(space, p0, pt, d.x));
  }
  return rep;
}

}  // namespace spincal
