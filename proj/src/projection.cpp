#include "spincal/projection.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "spincal/linalg.hpp"

namespace spincal {

namespace {

using Family = SpaceSpec::Family;

void require_gap(const Vec& descending, double tol, bool last_against_zero) {
  for (Eigen::Index i = 0; i + 1 < descending.size(); ++i) {
    if (descending[i] - descending[i + 1] < tol) {
      std::ostringstream os;
      os << "degenerate diagonalization: repeated values " << descending[i] << ", "
         << descending[i + 1];
      throw WallError(os.str(), descending[i] - descending[i + 1]);
    }
  }
  if (last_against_zero && descending[descending.size() - 1] < tol)
    throw WallError("degenerate diagonalization: vanishing singular value",
                    descending[descending.size() - 1]);
}

Mat fix_determinant(Mat g) {
  const cplx det = g.determinant();
  g *= std::polar(1.0, -std::arg(det) / static_cast<double>(g.rows()));
  return g;
}

}  // namespace

ChamberForm chamber_form(const SymmetricSpace& space, const Mat& qm, double degeneracy_tol) {
  const SpaceSpec& sp = space.spec();
  const int N = space.size();
  ChamberForm out;
  Vec coords(space.coord_count());
  Mat g = Mat::Identity(N, N);
  if (sp.family == Family::SU) {
    const int m = sp.m, n = sp.n;
    Eigen::JacobiSVD<Mat> svd(qm.topRightCorner(m, n), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec s = svd.singularValues();
    require_gap(s, degeneracy_tol, true);
    coords = s;
    g.topLeftCorner(m, m) = svd.matrixU();
    g.bottomRightCorner(n, n) = svd.matrixV();
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (qm + qm.adjoint()));
    const Eigen::Index k = es.eigenvalues().size();
    coords = es.eigenvalues().reverse();
    require_gap(coords, degeneracy_tol, false);
    for (Eigen::Index j = 0; j < k; ++j) g.col(j) = es.eigenvectors().col(k - 1 - j);
  }
  out.g_plus = fix_determinant(g);
  out.q = space.normalize(CartanPoint(coords));
  space.require_chamber(out.q);
  out.residual = linalg::max_abs(out.g_plus.adjoint() * qm * out.g_plus - space.embed(out.q));
  return out;
}

Mat align_m_gauge(const SymmetricSpace& space, const Mat& xi, const Mat& xi_ref,
                  const ProjectionOptions& opts, double* overlap) {
  const auto& mb = space.m_basis();
  auto objective = [&](const Mat& x) { return -pairing(x, xi_ref); };
  if (mb.empty()) {
    if (overlap) *overlap = objective(xi);
    return xi;
  }
  std::mt19937_64 rng(opts.align_seed);
  std::normal_distribution<double> normal;
  Mat best = xi;
  double best_val = objective(xi);
  for (int start = 0; start <= opts.align_starts; ++start) {
    Mat g = Mat::Identity(space.size(), space.size());
    if (start > 0) {
      Mat z = space.zero();
      for (const auto& b : mb) z += (M_PI * normal(rng)) * b;
      g = linalg::expm(z);
    }
    Mat cur = g * xi * g.adjoint();
    double val = objective(cur);
    double step = 0.5;
    for (int it = 0; it < opts.align_iterations && step > 1e-14; ++it) {
      const Mat w = commutator(cur, xi_ref);
      Mat z = space.zero();
      double gnorm = 0.0;
      for (const auto& b : mb) {
        const double c = -pairing(w, b);
        z += c * b;
        gnorm += c * c;
      }
      if (std::sqrt(gnorm) < 1e-13 * std::max(1.0, std::abs(val))) break;
      bool improved = false;
      while (step > 1e-14) {
        const Mat e = linalg::expm(step * z);
        const Mat trial = e * cur * e.adjoint();
        const double tv = objective(trial);
        if (tv > val) {
          cur = trial;
          val = tv;
          improved = true;
          step *= 1.5;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (val > best_val) {
      best_val = val;
      best = cur;
    }
  }
  if (overlap) *overlap = best_val;
  return best;
}

ProjectionResult flow_projection_detailed(const SymmetricSpace& space, const PhasePoint& pt0,
                                          const InvariantSpec& spec, double t, const Mat* xi_ref,
                                          const ProjectionOptions& opts) {
  spec.validate(space);
  if (!spec.g_invariant())
    throw DomainError("flow_projection: the projection method needs a G-invariant function");
  const PhasePoint start = make_phase_point(space, pt0.q, pt0.p, pt0.xi.xi);
  const UnreducedPoint u = build_slice_point(space, start.q, start.p, start.xi);
  const Mat j_plus = moment_map(space, u) - u.xi;
  const Mat j0 = u.j_minus + j_plus;
  const Mat grad = gradient(space, spec, j0);

  // Lambda(t) = e^{t grad} Lambda_0 e^{-t theta(grad)} = g g^dagger.
  const Mat e_q0 = linalg::hermitian_function(space.embed(start.q), [](double z) { return std::exp(z); });
  const Mat e_mq0 = linalg::hermitian_function(space.embed(start.q), [](double z) { return std::exp(-z); });
  const Mat g = linalg::expm(t * grad) * e_q0;
  const Mat qm = linalg::log_polar_factor(g, e_mq0 * linalg::expm(-t * grad));

  const ChamberForm cf = chamber_form(space, qm, opts.degeneracy_tol);
  const Mat gi = cf.g_plus.adjoint();

  ProjectionResult r;
  r.g_plus = cf.g_plus;
  r.diagonalization_residual = cf.residual;
  const CartanPoint p = space.cartan_coords(gi * u.j_minus * cf.g_plus);
  Mat xi = space.project_to_algebra(gi * u.xi * cf.g_plus);
  const Components c = space.components(xi);
  r.dropped_m = c.m.size() ? c.m.norm() : 0.0;
  xi = space.from_plus_coefficients(c.plus);
  xi = align_m_gauge(space, xi, xi_ref ? *xi_ref : start.xi.xi, opts, &r.overlap);
  r.point = make_phase_point(space, cf.q, p, space.from_plus_coefficients(space.plus_coefficients(xi)));
  return r;
}

PhasePoint flow_projection(const SymmetricSpace& space, const PhasePoint& pt0,
                           const InvariantSpec& spec, double t) {
  return flow_projection_detailed(space, pt0, spec, t).point;
}

Trajectory integrate_projection(const SymmetricSpace& space, const PhasePoint& pt0,
                                const InvariantSpec& spec, const IntegrateOptions& opts) {
  if (!(opts.t_end >= 0.0) || !std::isfinite(opts.t_end))
    throw DomainError("integrate_projection: t_end must be a non-negative finite number");
  std::vector<double> times;
  if (opts.sample_dt > 0.0) {
    const long count = static_cast<long>(std::floor(opts.t_end / opts.sample_dt + 1e-9));
    for (long i = 1; i <= count; ++i) times.push_back(std::min(i * opts.sample_dt, opts.t_end));
  }
  if (opts.t_end > 0.0 &&
      (times.empty() || opts.t_end - times.back() > 1e-12 * std::max(1.0, opts.t_end)))
    times.push_back(opts.t_end);

  Trajectory traj;
  traj.t.push_back(0.0);
  traj.points.push_back(make_phase_point(space, pt0.q, pt0.p, pt0.xi.xi));
  traj.stats.min_root_seen = space.min_root_value(traj.points.back().q);
  for (double t : times) {
    try {
      const Mat ref = traj.points.back().xi.xi;
      const ProjectionResult r = flow_projection_detailed(space, traj.points.front(), spec, t, &ref);
      traj.t.push_back(t);
      traj.points.push_back(r.point);
      traj.stats.max_dropped_m = std::max(traj.stats.max_dropped_m, r.dropped_m);
      traj.stats.min_root_seen = std::min(traj.stats.min_root_seen, space.min_root_value(r.point.q));
      ++traj.stats.accepted;
    } catch (const WallError& e) {
      throw TrajectoryWallError(std::string("integrate_projection: ") + e.what(), e.min_root(), traj,
                                traj.t.back());
    }
  }
  return traj;
}

}  // namespace spincal
