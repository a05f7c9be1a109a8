#include "spincal/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "spincal/linalg.hpp"

namespace spincal {

namespace {

using Family = SpaceSpec::Family;

Mat matrix_power(const Mat& x, int k) {
  Mat r = Mat::Identity(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

Vec flatten(const SymmetricSpace& space, const Mat& x) {
  const Components c = space.components(x);
  Vec v(c.a.size() + c.m.size() + c.plus.size() + c.minus.size());
  v << c.a, c.m, c.plus, c.minus;
  return v;
}

}  // namespace

double algebra_norm(const SymmetricSpace& space, const Mat& x) { return flatten(space, x).norm(); }

PhasePoint make_phase_point(const SymmetricSpace& space, const CartanPoint& q, const CartanPoint& p,
                            const Mat& xi) {
  PhasePoint pt{space.normalize(q), space.normalize(p), make_slice_spin(space, xi)};
  space.require_chamber(pt.q);
  return pt;
}

double hamiltonian(const SymmetricSpace& space, const PhasePoint& pt) {
  space.require_chamber(pt.q);
  const Vec coeff = space.plus_coefficients(pt.xi.xi);
  const std::vector<double> alpha = space.root_values(pt.q);
  double pot = 0.0;
  const auto& basis = space.root_basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double s = std::sinh(alpha[basis[i].root]);
    pot += coeff[i] * coeff[i] / (s * s);
  }
  return 0.5 * pt.p.coords.squaredNorm() + pot / (2.0 * space.cartan_norm());
}

double hamiltonian_from_lax(const SymmetricSpace& space, const PhasePoint& pt) {
  const Mat l = lax(space, pt, 1.0);
  return pairing(l, l) / (2.0 * space.cartan_norm());
}

Mat lax(const SymmetricSpace& space, const PhasePoint& pt, double x) {
  space.require_chamber(pt.q);
  return space.embed(pt.p) - space.ad_fn(ScalarFunction::coth(), pt.q, pt.xi.xi) - x * pt.xi.xi;
}

Mat lax_minus(const SymmetricSpace& space, const PhasePoint& pt) { return lax(space, pt, 0.0); }

Mat lax_cal(const SymmetricSpace& space, const PhasePoint& pt) {
  space.require_chamber(pt.q);
  return space.embed(pt.p) - space.ad_fn(ScalarFunction::w(), pt.q, pt.xi.xi);
}

Mat lax_cal_conjugated(const SymmetricSpace& space, const PhasePoint& pt) {
  const Mat q = space.embed(pt.q);
  const Mat l1 = lax(space, pt, 1.0);
  auto ex = [](double s) { return [s](double z) { return std::exp(s * z); }; };
  return linalg::hermitian_function(q, ex(-1.0)) * l1 * linalg::hermitian_function(q, ex(1.0));
}

namespace detail {

Tangent rhs_core(const SymmetricSpace& space, const CartanPoint& q, const CartanPoint& p,
                 const Mat& xi, Gauge gauge) {
  Tangent t;
  const Mat w2xi = space.ad_fn(ScalarFunction::w_squared(), q, xi);
  const Mat cothxi = space.ad_fn(ScalarFunction::coth(), q, xi);
  t.dq = p.coords;
  t.dp = space.cartan_coords(commutator(w2xi, cothxi)).coords;
  t.y_m = space.zero();
  if (gauge == Gauge::Frozen) {
    const SpinPoint mu = make_slice_spin(space, xi);
    auto sol = freezing_solve(space, q, mu);
    if (!sol) throw DomainError("frozen gauge: the spin admits no freezing y_M at this q");
    t.y_m = sol->y_m;
  }
  t.dxi = commutator(t.y_m - w2xi, xi);
  const Components c = space.components(t.dxi);
  t.dxi_m_norm = c.m.size() ? c.m.norm() : 0.0;
  return t;
}

Vec spin_spectrum(const Mat& xi) {
  const Mat h = cplx(0.0, -1.0) * xi;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace detail

Tangent eom_rhs(const SymmetricSpace& space, const PhasePoint& pt, Gauge gauge) {
  space.require_chamber(pt.q);
  return detail::rhs_core(space, pt.q, pt.p, pt.xi.xi, gauge);
}

// ---------------------------------------------------------------------------

InvariantSpec InvariantSpec::trace_power(int k, double x) {
  return InvariantSpec{InvariantKind::TracePower, k, x};
}

InvariantSpec InvariantSpec::block_invariant(int k, double x) {
  return InvariantSpec{InvariantKind::BlockInvariant, k, x};
}

std::string InvariantSpec::label() const {
  std::ostringstream os;
  os << (kind == InvariantKind::TracePower ? "trace_power" : "block_invariant") << "(" << k
     << ")@x=" << x;
  return os.str();
}

void InvariantSpec::validate(const SymmetricSpace& space) const {
  if (k < 1) throw DomainError("invariant: k must be at least 1");
  if (!std::isfinite(x)) throw DomainError("invariant: x must be finite");
  if (kind == InvariantKind::BlockInvariant && space.spec().family != Family::SU)
    throw DomainError("invariant: block_invariant is defined for su(m,n) only");
}

namespace {

struct Blocks {
  Mat a, b, d;
};

Blocks blocks_of(const SymmetricSpace& space, const Mat& x) {
  const int m = space.spec().m;
  const int n = space.spec().n;
  return {x.topLeftCorner(m, m), x.topRightCorner(m, n), x.bottomRightCorner(n, n)};
}

}  // namespace

namespace {

using LMat = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

template <class M>
M power_of(const M& x, int k) {
  M r = M::Identity(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

template <class M>
M theta_of(const SymmetricSpace& space, const M& x) {
  if (space.spec().family == Family::SL) return -x.adjoint();
  M t = x;
  const int m = space.spec().m;
  t.topRightCorner(m, space.spec().n) *= -1;
  t.bottomLeftCorner(space.spec().n, m) *= -1;
  return t;
}

template <class M>
M to_algebra(const SymmetricSpace& space, const M& x) {
  using S = typename M::Scalar;
  using R = typename S::value_type;
  M y = x;
  if (space.spec().family == Family::SU) y = R(0.5) * (x + theta_of(space, M(-x.adjoint())));
  y -= (y.trace() / R(y.rows())) * M::Identity(y.rows(), y.cols());
  return y;
}

template <class M>
M gradient_of(const SymmetricSpace& space, const InvariantSpec& spec, const M& x) {
  using R = typename M::Scalar::value_type;
  if (spec.kind == InvariantKind::TracePower) return to_algebra(space, power_of(x, spec.k - 1));
  const int m = space.spec().m;
  const int n = space.spec().n;
  const M a = x.topLeftCorner(m, m), b = x.topRightCorner(m, n), d = x.bottomRightCorner(n, n);
  const M bh = b.adjoint();
  const M pk = power_of(M(a * b * d * bh), spec.k - 1);
  const R k = spec.k;
  M g = M::Zero(m + n, m + n);
  g.topLeftCorner(m, m) = k * b * d * bh * pk;
  g.bottomLeftCorner(n, m) = k * d * bh * pk * a;
  g.bottomRightCorner(n, n) = k * bh * pk * a * b;
  g.topRightCorner(m, n) = k * pk * a * b * d;
  return to_algebra(space, g);
}

}  // namespace

double evaluate(const SymmetricSpace& space, const InvariantSpec& spec, const Mat& x) {
  spec.validate(space);
  if (spec.kind == InvariantKind::TracePower) return matrix_power(x, spec.k).trace().real() / spec.k;
  const Blocks bl = blocks_of(space, x);
  const Mat p = bl.a * bl.b * bl.d * bl.b.adjoint();
  return matrix_power(p, spec.k).trace().real();
}

Mat gradient(const SymmetricSpace& space, const InvariantSpec& spec, const Mat& x) {
  spec.validate(space);
  space.require_member(x, "gradient");
  return gradient_of(space, spec, x);
}

double invariant_at(const SymmetricSpace& space, const InvariantSpec& spec, const PhasePoint& pt) {
  return evaluate(space, spec, lax(space, pt, spec.x));
}

// Both terms vanish identically, so they are accumulated in extended precision.
BracketTerms bracket_terms(const SymmetricSpace& space, const InvariantSpec& f, double x,
                           const InvariantSpec& h, double y, const PhasePoint& pt) {
  f.validate(space);
  h.validate(space);
  const UnreducedPoint u = build_slice_point(space, pt.q, pt.p, pt.xi);
  const LMat j = u.j_minus.cast<std::complex<long double>>();
  const LMat xi = u.xi.cast<std::complex<long double>>();
  const LMat gf = gradient_of(space, f, LMat(j - static_cast<long double>(x) * xi));
  const LMat gh = gradient_of(space, h, LMat(j - static_cast<long double>(y) * xi));
  const LMat tf = theta_of(space, gf), th = theta_of(space, gh);
  const LMat fp = 0.5L * (gf + tf), fm = 0.5L * (gf - tf);
  const LMat hp = 0.5L * (gh + th), hm = 0.5L * (gh - th);
  const LMat cp = fp * hp - hp * fp, cm = fm * hm - hm * fm;
  return {static_cast<double>((xi * cp).trace().real()), static_cast<double>((xi * cm).trace().real())};
}

double bracket_formula(const SymmetricSpace& space, const InvariantSpec& f, double x,
                       const InvariantSpec& h, double y, const PhasePoint& pt) {
  const BracketTerms b = bracket_terms(space, f, x, h, y, pt);
  return x * y * b.plus - b.minus;
}

double identity_413(const SymmetricSpace& space, const InvariantSpec& f, double x,
                    const InvariantSpec& h, double y, const PhasePoint& pt) {
  const BracketTerms b = bracket_terms(space, f, x, h, y, pt);
  return std::abs(x * b.plus - y * b.minus);
}

double identity_416(const SymmetricSpace& space, const InvariantSpec& f, double x,
                    const InvariantSpec& h, double y, const PhasePoint& pt) {
  const BracketTerms b = bracket_terms(space, f, x, h, y, pt);
  return std::abs(y * b.plus - x * b.minus);
}

// ---------------------------------------------------------------------------

namespace {

struct FreezingSystem {
  Eigen::MatrixXd a;
  Vec b;
  Vec c;
  double residual;
};

FreezingSystem freezing_system(const SymmetricSpace& space, const CartanPoint& q, const Mat& mu) {
  const Mat wmu = space.ad_fn(ScalarFunction::w(), q, mu);
  const Mat wpmu = space.ad_fn(ScalarFunction::w_prime(), q, mu);
  FreezingSystem s;
  s.b = flatten(space, space.project(commutator(wmu, wpmu), Subspace::Aperp));
  const auto& mb = space.m_basis();
  s.a.resize(s.b.size(), static_cast<Eigen::Index>(mb.size()));
  for (std::size_t j = 0; j < mb.size(); ++j) s.a.col(j) = flatten(space, commutator(mb[j], wmu));
  if (mb.empty()) {
    s.c = Vec();
    s.residual = s.b.norm();
  } else {
    s.c = s.a.completeOrthogonalDecomposition().solve(s.b);
    s.residual = (s.a * s.c - s.b).norm();
  }
  s.residual /= std::max(1.0, s.b.norm());
  return s;
}

}  // namespace

double freezing_residual(const SymmetricSpace& space, const CartanPoint& q, const SpinPoint& mu) {
  space.require_chamber(q);
  const SpinPoint s = make_slice_spin(space, mu.xi);
  return freezing_system(space, q, s.xi).residual;
}

std::optional<FreezingSolution> freezing_solve(const SymmetricSpace& space, const CartanPoint& q0,
                                               const SpinPoint& mu0, double tol) {
  const CartanPoint q = space.normalize(q0);
  if (!space.is_regular(q, 0.0))
    throw WallError("freezing_solve: q is not regular", space.min_root_value(q));
  const SpinPoint mu = make_slice_spin(space, mu0.xi);
  const FreezingSystem s = freezing_system(space, q, mu.xi);
  if (!(s.residual < tol)) return std::nullopt;

  FreezingSolution out;
  out.coefficients = s.c;
  out.residual = s.residual;
  out.y_m = space.zero();
  for (std::size_t j = 0; j < space.m_basis().size(); ++j) out.y_m += s.c[j] * space.m_basis()[j];

  const Mat w2mu = space.ad_fn(ScalarFunction::w_squared(), q, mu.xi);
  const Mat wmu = space.ad_fn(ScalarFunction::w(), q, mu.xi);
  const Mat wpmu = space.ad_fn(ScalarFunction::w_prime(), q, mu.xi);
  const double scale = std::max(1.0, algebra_norm(space, commutator(w2mu, mu.xi)));
  out.frozen_residual = algebra_norm(space, commutator(out.y_m - w2mu, mu.xi)) / scale;
  out.identity_residual =
      algebra_norm(space, commutator(w2mu, mu.xi) -
                              space.ad_fn(ScalarFunction::sinh(), q, commutator(wmu, wpmu))) /
      scale;
  if (out.frozen_residual >= 1e-8 || out.identity_residual >= 1e-8) {
    std::ostringstream os;
    os << "freezing_solve: accepted y_M fails verification (frozen residual "
       << out.frozen_residual << ", identity residual " << out.identity_residual << ")";
    throw NumericalError(os.str());
  }
  return out;
}

std::vector<R12Term> r12_build(const SymmetricSpace& space, const CartanPoint& q0) {
  const CartanPoint q = space.normalize(q0);
  space.require_chamber(q);
  const std::vector<double> alpha = space.root_values(q);
  std::vector<R12Term> out;
  for (const auto& rv : space.root_basis())
    out.push_back({1.0 / std::tanh(alpha[rv.root]), rv.root, rv.tag, rv.plus, rv.minus});
  return out;
}

}  // namespace spincal
