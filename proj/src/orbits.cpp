#include "spincal/orbits.hpp"

#include <cmath>
#include <sstream>

#include "spincal/linalg.hpp"

namespace spincal {

namespace {

using Family = SpaceSpec::Family;

double scale_of(const Mat& x) { return std::max(1.0, linalg::max_abs(x)); }

void require_g_plus(const SymmetricSpace& space, const Mat& x, const char* who) {
  space.require_member(x, who);
  if (linalg::max_abs(space.theta(x) - x) > 1e-8 * scale_of(x))
    throw MembershipError(std::string(who) + ": element is not theta-fixed (not in g+)");
}

double m_norm(const SymmetricSpace& space, const Mat& x) {
  const Components c = space.components(x);
  return c.m.size() ? c.m.norm() : 0.0;
}

// Places a k x k block at (offset, offset) of an N x N zero matrix.
Mat embed_block(int size, int offset, const Mat& block) {
  Mat x = Mat::Zero(size, size);
  x.block(offset, offset, block.rows(), block.cols()) = block;
  return x;
}

std::string fmt(const char* what, double a, double b) {
  std::ostringstream os;
  os << what << " (kappa = " << a << ", x = " << b << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

OrbitSpec OrbitSpec::kks(double kappa) {
  OrbitSpec s;
  s.kks_kappa = kappa;
  return s;
}

void OrbitSpec::validate(const SymmetricSpace& space) const {
  const SpaceSpec& sp = space.spec();
  if (sp.family == Family::SL) {
    if (kappa_m || kappa_n || central_x != 0.0)
      throw DomainError("orbit: sl(k,C) orbits are given by kks kappa only");
    if (!kks_kappa || !(*kks_kappa > 0.0))
      throw DomainError("orbit: sl(k,C) orbit needs kks kappa > 0");
    return;
  }
  if (kks_kappa) throw DomainError("orbit: kks kappa applies only to sl(k,C)");
  bool nonzero = central_x != 0.0;
  if (!std::isfinite(central_x)) throw DomainError("orbit: central x must be finite");
  if (kappa_m) {
    if (!(*kappa_m > 0.0)) throw DomainError("orbit: constituent kappa_m must be positive");
    if (sp.m < 2) throw DomainError("orbit: su(1) has no nonzero minimal orbit");
    nonzero = true;
  }
  if (kappa_n) {
    if (!(*kappa_n > 0.0)) throw DomainError("orbit: constituent kappa_n must be positive");
    if (sp.n < 2) throw DomainError("orbit: su(1) has no nonzero minimal orbit");
    nonzero = true;
  }
  if (!nonzero) throw DomainError("orbit: the zero orbit is excluded");
}

SpinPoint make_spin_point(const SymmetricSpace& space, const Mat& xi) {
  require_g_plus(space, xi, "spin");
  SpinPoint s;
  s.xi = space.project_to_algebra(0.5 * (xi + space.theta(xi)));
  s.on_slice = m_norm(space, s.xi) <= 1e-10 * scale_of(s.xi);
  if (s.on_slice) s.coefficients = space.plus_coefficients(s.xi);
  return s;
}

SpinPoint make_slice_spin(const SymmetricSpace& space, const Mat& xi) {
  SpinPoint s = make_spin_point(space, xi);
  if (!s.on_slice) {
    std::ostringstream os;
    os << "spin has a nonzero M-component (norm " << m_norm(space, s.xi) << ")";
    throw DomainError(os.str());
  }
  return s;
}

void validate_unreduced(const SymmetricSpace& space, const UnreducedPoint& pt) {
  const int N = space.size();
  const Mat& L = pt.lambda;
  if (L.rows() != N || L.cols() != N) throw DomainError("Lambda has the wrong size");
  const double s = scale_of(L);
  if (linalg::max_abs(L - L.adjoint()) > 1e-10 * s) throw DomainError("Lambda is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (L + L.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("Lambda is not positive-definite");
  if (std::abs(L.determinant() - 1.0) > 1e-8 * std::pow(s, N))
    throw DomainError("Lambda does not have unit determinant");
  if (space.spec().family == Family::SU) {
    const Mat& I = space.metric();
    if (linalg::max_abs(I * L * I * L - Mat::Identity(N, N)) > 1e-8 * s * s)
      throw DomainError("Lambda is not in G_- (Theta(Lambda) != Lambda^-1)");
  }
  space.require_member(pt.j_minus, "J_-");
  if (linalg::max_abs(space.theta(pt.j_minus) + pt.j_minus) > 1e-8 * scale_of(pt.j_minus))
    throw MembershipError("J_- is not in g_-");
  require_g_plus(space, pt.xi, "xi");
}

Mat eta_of_u(const CVec& u, double kappa) {
  const auto k = u.size();
  if (k < 1) throw DomainError("eta_of_u: empty vector");
  const double norm2 = u.squaredNorm();
  const double target = static_cast<double>(k) * kappa;
  if (!(std::abs(norm2 - target) <= 1e-10 * std::max(1.0, std::abs(target)))) {
    std::ostringstream os;
    os << "eta_of_u: u^dagger u = " << norm2 << " but k kappa = " << target;
    throw DomainError(os.str());
  }
  const cplx i(0.0, 1.0);
  return i * (u * u.adjoint() - (norm2 / static_cast<double>(k)) * Mat::Identity(k, k));
}

Mat mu_kks(int k, double kappa) {
  if (k < 2) throw DomainError("mu_kks: k must be at least 2");
  if (!(kappa > 0.0)) throw DomainError("mu_kks: kappa must be positive");
  Mat x = Mat::Constant(k, k, cplx(0.0, kappa));
  x.diagonal().setZero();
  return x;
}

Mat central_element(int m, int n) {
  CVec d(m + n);
  d.head(m).setConstant(cplx(0.0, n));
  d.tail(n).setConstant(cplx(0.0, -m));
  return d.asDiagonal();
}

Mat moment_map(const SymmetricSpace& space, const UnreducedPoint& pt) {
  validate_unreduced(space, pt);
  const Mat q = 0.5 * linalg::hermitian_log(0.5 * (pt.lambda + pt.lambda.adjoint()));
  const Mat j_plus = linalg::hermitian_ad_function(q, pt.j_minus, [](double z) { return std::tanh(z); });
  return j_plus + pt.xi;
}

UnreducedPoint build_slice_point(const SymmetricSpace& space, const CartanPoint& q0,
                                 const CartanPoint& p0, const SpinPoint& xi) {
  const CartanPoint q = space.normalize(q0);
  const CartanPoint p = space.normalize(p0);
  space.require_chamber(q);
  const SpinPoint s = make_slice_spin(space, xi.xi);
  UnreducedPoint out;
  out.lambda = linalg::hermitian_function(2.0 * space.embed(q), [](double z) { return std::exp(z); });
  out.j_minus = space.embed(p) - space.ad_fn(ScalarFunction::coth(), q, s.xi);
  out.xi = s.xi;
  return out;
}

// ---------------------------------------------------------------------------

double BcCouplings::relation_residual() const {
  return g1 * g1 - 2.0 * g * g + std::sqrt(2.0) * g * g2;
}

std::optional<std::string> bc_violation(int n, double kappa, double x) {
  if (n < 1) return "BC case needs n >= 1";
  if (!std::isfinite(kappa) || !std::isfinite(x)) return "parameters must be finite";
  if (!(kappa > 0.0)) return fmt("BC case needs kappa > 0", kappa, x);
  if (kappa - n * x < 0.0) return fmt("BC case needs kappa - n x >= 0", kappa, x);
  if (kappa + x < 0.0) return fmt("BC case needs kappa + x >= 0", kappa, x);
  return std::nullopt;
}

std::optional<std::string> c_violation(int n, double kappa, double x) {
  if (n < 1) return "C case needs n >= 1";
  if (!std::isfinite(kappa) || !std::isfinite(x)) return "parameters must be finite";
  if (kappa < 0.0) return fmt("C case needs kappa >= 0", kappa, x);
  if (kappa == 0.0 && x == 0.0) return "C case needs a nonzero orbit (kappa, x) != (0, 0)";
  if (n == 1 && x == 0.0) return "C case with n = 1 needs x != 0 (su(1) carries no orbit)";
  return std::nullopt;
}

std::optional<std::string> d_violation(int n, double kappa) {
  if (n < 2) return "D case needs n >= 2 (su(1) carries no orbit)";
  if (!std::isfinite(kappa) || !(kappa > 0.0)) return "D case needs kappa > 0";
  return std::nullopt;
}

std::optional<std::string> kks_violation(int k, double kappa) {
  if (k < 2) return "KKS case needs k >= 2";
  if (!std::isfinite(kappa) || !(kappa > 0.0)) return "KKS case needs kappa > 0";
  return std::nullopt;
}

BcCouplings bc_couplings(int n, double kappa, double x) {
  if (auto v = bc_violation(n, kappa, x)) throw DomainError(*v);
  BcCouplings c;
  c.g = 0.5 * (kappa + x);
  c.g1 = std::sqrt(0.5 * (kappa + x) * (kappa - n * x));
  c.g2 = (n + 1) * x / std::sqrt(2.0);
  return c;
}

SpinPoint xi_red(const SymmetricSpace& space, ReducedCase c, double kappa, double x) {
  const SpaceSpec& sp = space.spec();
  const int N = space.size();
  Mat xi;
  switch (c) {
    case ReducedCase::BC: {
      if (sp.family != Family::SU || sp.m != sp.n + 1)
        throw DomainError("BC case lives on su(n+1,n), not " + sp.name());
      const int n = sp.n;
      if (auto v = bc_violation(n, kappa, x)) throw DomainError(*v);
      CVec u(n + 1);
      u.head(n).setConstant(std::sqrt(kappa + x));
      u[n] = std::sqrt(kappa - n * x);
      xi = embed_block(N, 0, eta_of_u(u, kappa)) + x * central_element(sp.m, sp.n);
      break;
    }
    case ReducedCase::C: {
      if (sp.family != Family::SU || sp.m != sp.n)
        throw DomainError("C case lives on su(n,n), not " + sp.name());
      if (auto v = c_violation(sp.n, kappa, x)) throw DomainError(*v);
      xi = x * central_element(sp.m, sp.n);
      if (kappa > 0.0 && sp.n >= 2) xi += embed_block(N, 0, mu_kks(sp.n, kappa));
      break;
    }
    case ReducedCase::D: {
      if (sp.family != Family::SU) throw DomainError("D case lives on su(m,n), not " + sp.name());
      if (auto v = d_violation(sp.n, kappa)) throw DomainError(*v);
      if (x != 0.0) throw DomainError("D case has no central term (x must be 0)");
      xi = embed_block(N, sp.m, mu_kks(sp.n, kappa));
      break;
    }
    case ReducedCase::KKS: {
      if (sp.family != Family::SL) throw DomainError("KKS case lives on sl(k,C), not " + sp.name());
      if (auto v = kks_violation(sp.k, kappa)) throw DomainError(*v);
      if (x != 0.0) throw DomainError("KKS case has no central term (x must be 0)");
      xi = mu_kks(sp.k, kappa);
      break;
    }
  }
  return make_slice_spin(space, xi);
}

// ---------------------------------------------------------------------------

OrbitCheckReport reduce_orbit_check(int n, double kappa, double x, int samples,
                                    std::uint64_t seed, double tol) {
  if (auto v = bc_violation(n, kappa, x)) throw DomainError(*v);
  if (samples < 1) throw DomainError("reduce_orbit_check: samples must be positive");
  const SpacePtr space = build_space(SpaceSpec::su(n + 1, n));
  const int N = space->size();
  const cplx i(0.0, 1.0);
  const Mat target = xi_red(*space, ReducedCase::BC, kappa, x).xi;
  const Mat cx = x * central_element(n + 1, n);

  CVec u_hat(n + 1);
  u_hat.head(n).setConstant(std::sqrt(kappa + x));
  u_hat[n] = std::sqrt(kappa - n * x);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  OrbitCheckReport rep;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> beta(n + 1);
    CVec u(n + 1);
    for (int j = 0; j <= n; ++j) {
      beta[j] = phase(rng);
      u[j] = std::polar(j < n ? std::sqrt(kappa + x) : std::sqrt(kappa - n * x), beta[j]);
    }
    const Mat eta = eta_of_u(u, kappa);

    CVec want(n + 1);
    want.head(n).setConstant(i * x);
    want[n] = -i * (n * x);
    rep.max_diag_residual = std::max(rep.max_diag_residual, (eta.diagonal() - want).cwiseAbs().maxCoeff());

    const Mat xi = embed_block(N, 0, eta) + cx;
    rep.max_m_component = std::max(rep.max_m_component, m_norm(*space, xi));

    // Torus phases relative to component n+1, then a global phase into SU(n+1).
    CVec tau(n + 1);
    cplx det = 1.0;
    for (int j = 0; j <= n; ++j) {
      tau[j] = std::polar(1.0, -(beta[j] - beta[n]));
      det *= tau[j];
    }
    const cplx gamma = std::polar(1.0, -std::arg(det) / (n + 1));
    tau *= gamma;
    det = 1.0;
    for (int j = 0; j <= n; ++j) det *= tau[j];
    rep.max_torus_det_residual = std::max(rep.max_torus_det_residual, std::abs(det - 1.0));

    const CVec tu = tau.asDiagonal() * u;
    const std::size_t ref = (kappa - n * x > 0.0) ? n : 0;
    const cplx e_alpha = tu[ref] / std::abs(tu[ref]);
    rep.max_normal_form_residual =
        std::max(rep.max_normal_form_residual, (tu - e_alpha * u_hat).cwiseAbs().maxCoeff());

    // The M element diag(s tau_1..n, s tau_{n+1}, s tau_1..n); its determinant
    // is s^{2n+1} prod_{j<=n} tau_j.
    cplx prod_a = 1.0;
    for (int j = 0; j < n; ++j) prod_a *= tau[j];
    const cplx sc = std::polar(1.0, -std::arg(prod_a) / (2 * n + 1));
    CVec md(N);
    for (int j = 0; j <= n; ++j) md[j] = sc * tau[j];
    for (int j = 0; j < n; ++j) md[n + 1 + j] = sc * tau[j];
    const Mat mg = md.asDiagonal();
    const Mat q_probe = space->embed(CartanPoint(Vec::LinSpaced(n, 1.0, 0.5 + n)));
    double mres = std::abs(mg.determinant() - 1.0);
    mres = std::max(mres, linalg::max_abs(mg * mg.adjoint() - Mat::Identity(N, N)));
    mres = std::max(mres, linalg::max_abs(mg * q_probe - q_probe * mg));
    rep.max_m_membership_residual = std::max(rep.max_m_membership_residual, mres);

    const Mat moved = mg * xi * mg.adjoint();
    rep.max_xi_residual = std::max(rep.max_xi_residual, linalg::max_abs(moved - target));
  }
  rep.pass = rep.max_diag_residual <= tol && rep.max_m_component <= tol &&
             rep.max_torus_det_residual <= tol && rep.max_normal_form_residual <= tol &&
             rep.max_m_membership_residual <= tol && rep.max_xi_residual <= tol;
  return rep;
}

EmptinessReport emptiness_probe(int n, double kappa, double x, int samples, std::uint64_t seed) {
  if (n < 1) throw DomainError("emptiness_probe: n must be positive");
  if (kappa < 0.0) throw DomainError("emptiness_probe: kappa must be non-negative");
  if (samples < 1) throw DomainError("emptiness_probe: samples must be positive");
  const SpacePtr space = build_space(SpaceSpec::su(n + 1, n));
  const int N = space->size();
  const Mat cx = x * central_element(n + 1, n);

  // Z0 = diag(i 1_n, -2n i, i 1_n) lies in M.
  CVec zd = CVec::Constant(N, cplx(0.0, 1.0));
  zd[n] = cplx(0.0, -2.0 * n);
  const Mat z0 = zd.asDiagonal();
  const double z0_norm = std::sqrt(-pairing(z0, z0));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  EmptinessReport rep;
  rep.samples = samples;
  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.lower_bound = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Mat xi = cx;
    if (n >= 2 && kappa > 0.0) {
      CVec u(n);
      for (int j = 0; j < n; ++j) u[j] = cplx(normal(rng), normal(rng));
      u *= std::sqrt(n * kappa) / u.norm();
      xi += embed_block(N, n + 1, eta_of_u(u, kappa));
    }
    rep.min_residual = std::min(rep.min_residual, m_norm(*space, xi));
    rep.lower_bound = std::min(rep.lower_bound, std::abs(pairing(z0, xi)) / z0_norm);
  }
  return rep;
}

// ---------------------------------------------------------------------------

Mat random_g_plus(const SymmetricSpace& space, std::mt19937_64& rng, double scale) {
  const int N = space.size();
  std::normal_distribution<double> normal;
  Mat r(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) r(a, b) = scale * cplx(normal(rng), normal(rng));
  Mat x = 0.5 * (r - r.adjoint());
  if (space.spec().family == Family::SU) {
    const int m = space.spec().m;
    const int n = space.spec().n;
    x.block(0, m, m, n).setZero();
    x.block(m, 0, n, m).setZero();
  }
  x -= (x.trace() / static_cast<double>(N)) * Mat::Identity(N, N);
  return x;
}

Mat random_G_plus(const SymmetricSpace& space, std::mt19937_64& rng) {
  const int N = space.size();
  Mat g = linalg::expm(random_g_plus(space, rng));
  const cplx det = g.determinant();
  g *= std::polar(1.0, -std::arg(det) / N);
  return g;
}

Mat orbit_base_point(const SymmetricSpace& space, const OrbitSpec& spec) {
  spec.validate(space);
  const SpaceSpec& sp = space.spec();
  const int N = space.size();
  auto minimal = [](int k, double kappa) {
    CVec u = CVec::Zero(k);
    u[0] = std::sqrt(k * kappa);
    return eta_of_u(u, kappa);
  };
  if (sp.family == Family::SL) return minimal(sp.k, *spec.kks_kappa);
  Mat xi = spec.central_x * central_element(sp.m, sp.n);
  if (spec.kappa_m) xi += embed_block(N, 0, minimal(sp.m, *spec.kappa_m));
  if (spec.kappa_n) xi += embed_block(N, sp.m, minimal(sp.n, *spec.kappa_n));
  return xi;
}

SpinPoint random_orbit_point(const SymmetricSpace& space, const OrbitSpec& spec, std::uint64_t seed) {
  const Mat base = orbit_base_point(space, spec);
  std::mt19937_64 rng(seed);
  const Mat g = random_G_plus(space, rng);
  return make_spin_point(space, g * base * g.inverse());
}

SpinPoint slice_orbit_point(const SymmetricSpace& space, const OrbitSpec& spec, std::uint64_t seed,
                            int starts, double tol) {
  const Mat base = orbit_base_point(space, spec);
  std::mt19937_64 rng(seed);
  auto m_part = [&](const Mat& x) { return space.project(x, Subspace::M); };
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    const Mat g = random_G_plus(space, rng);
    Mat xi = g * base * g.adjoint();
    double f = m_norm(space, xi);
    double step = 0.1;
    for (int it = 0; it < 5000 && f > tol && step > 1e-16; ++it) {
      const Mat w = commutator(xi, m_part(xi));
      bool improved = false;
      while (step > 1e-16) {
        const Mat e = linalg::expm(-step * w);
        const Mat trial = e * xi * e.adjoint();
        const double ft = m_norm(space, trial);
        if (ft < f) {
          xi = trial;
          f = ft;
          step *= 1.5;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    best = std::min(best, f);
    if (f <= tol) {
      const Components c = space.components(xi);
      return make_slice_spin(space, space.from_plus_coefficients(c.plus));
    }
  }
  std::ostringstream os;
  os << "orbit does not reach M-perp within the search (best |xi_M| = " << best << ")";
  throw DomainError(os.str());
}

SpinPoint random_slice_spin(const SymmetricSpace& space, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal;
  Vec c(static_cast<Eigen::Index>(space.root_basis().size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = scale * normal(rng);
  return make_slice_spin(space, space.from_plus_coefficients(c));
}

bool same_spectrum(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != b.rows()) return false;
  const auto sa = linalg::sorted_spectrum(a);
  const auto sb = linalg::sorted_spectrum(b);
  return linalg::matched_spectral_distance(sa, sb) <= tol;
}

}  // namespace spincal
