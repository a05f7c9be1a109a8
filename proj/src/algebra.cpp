#include "spincal/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spincal/linalg.hpp"

namespace spincal {

namespace {

const cplx I{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Gram-Schmidt with respect to the (definite) form sign * <.,.>.
std::vector<Mat> orthonormalize(const std::vector<Mat>& candidates, double sign) {
  std::vector<Mat> out;
  for (Mat v : candidates) {
    for (const Mat& b : out) v -= (pairing(v, b) * sign) * b;
    const double nrm2 = sign * pairing(v, v);
    if (nrm2 < 1e-20) continue;
    out.push_back(v / std::sqrt(nrm2));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

SpaceSpec SpaceSpec::su(int m, int n) {
  SpaceSpec s;
  s.family = Family::SU;
  s.m = m;
  s.n = n;
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::sl(int k) {
  SpaceSpec s;
  s.family = Family::SL;
  s.k = k;
  s.validate();
  return s;
}

void SpaceSpec::validate() const {
  if (family == Family::SU) {
    if (n < 1 || m < n) {
      std::ostringstream os;
      os << "SU(m,n) requires m >= n >= 1, got m=" << m << ", n=" << n;
      throw DomainError(os.str());
    }
  } else if (k < 2) {
    throw DomainError("SL(k,C) requires k >= 2, got k=" + std::to_string(k));
  }
}

std::string SpaceSpec::name() const {
  std::ostringstream os;
  if (family == Family::SU)
    os << "su(" << m << "," << n << ")";
  else
    os << "sl(" << k << ",C)";
  return os.str();
}

// ---------------------------------------------------------------------------

double RestrictedRoot::value(const CartanPoint& q) const {
  switch (kind) {
    case RootKind::Diff: return q[k] - q[l];
    case RootKind::Sum: return q[k] + q[l];
    case RootKind::Twice: return 2.0 * q[k];
    case RootKind::Single: return q[k];
  }
  return 0.0;
}

Vec RestrictedRoot::functional(int coord_count) const {
  Vec f = Vec::Zero(coord_count);
  switch (kind) {
    case RootKind::Diff: f[k] = 1.0; f[l] = -1.0; break;
    case RootKind::Sum: f[k] = 1.0; f[l] = 1.0; break;
    case RootKind::Twice: f[k] = 2.0; break;
    case RootKind::Single: f[k] = 1.0; break;
  }
  return f;
}

std::string RestrictedRoot::label() const {
  std::ostringstream os;
  switch (kind) {
    case RootKind::Diff: os << "e" << k + 1 << "-e" << l + 1; break;
    case RootKind::Sum: os << "e" << k + 1 << "+e" << l + 1; break;
    case RootKind::Twice: os << "2e" << k + 1; break;
    case RootKind::Single: os << "e" << k + 1; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

ScalarFunction ScalarFunction::tanh() {
  return {"tanh", Parity::Odd, [](double z) { return std::tanh(z); }, false, 0.0};
}
ScalarFunction ScalarFunction::coth() {
  return {"coth", Parity::Odd, [](double z) { return 1.0 / std::tanh(z); }, true, 0.0};
}
ScalarFunction ScalarFunction::sinh() {
  return {"sinh", Parity::Odd, [](double z) { return std::sinh(z); }, false, 0.0};
}
ScalarFunction ScalarFunction::cosh() {
  return {"cosh", Parity::Even, [](double z) { return std::cosh(z); }, false, 1.0};
}
ScalarFunction ScalarFunction::w() {
  return {"w", Parity::Odd, [](double z) { return 1.0 / std::sinh(z); }, true, 0.0};
}
ScalarFunction ScalarFunction::w_squared() {
  return {"w^2", Parity::Even,
          [](double z) {
            const double s = std::sinh(z);
            return 1.0 / (s * s);
          },
          true, 0.0};
}
ScalarFunction ScalarFunction::w_prime() {
  return {"w'", Parity::Even,
          [](double z) {
            const double s = std::sinh(z);
            return -std::cosh(z) / (s * s);
          },
          true, 0.0};
}

SignedPermutation SignedPermutation::identity(int size) {
  SignedPermutation w;
  for (int i = 0; i < size; ++i) {
    w.perm.push_back(i);
    w.signs.push_back(1);
  }
  return w;
}

// ---------------------------------------------------------------------------

SpacePtr SymmetricSpace::build(const SpaceSpec& spec) {
  spec.validate();
  return SpacePtr(new SymmetricSpace(spec));
}

SymmetricSpace::SymmetricSpace(const SpaceSpec& spec) : spec_(spec) {
  const int N = spec_.matrix_size();
  metric_ = Mat::Identity(N, N);
  if (spec_.family == SpaceSpec::Family::SU) {
    for (int i = spec_.m; i < N; ++i) metric_(i, i) = -1.0;
    build_su();
  } else {
    build_sl();
  }
}

void SymmetricSpace::build_su() {
  const int m = spec_.m, n = spec_.n, N = m + n, r = m - n;
  // Block partition n + (m-n) + n.
  auto a = [](int k) { return k; };
  auto e = [n](int d) { return n + d; };
  auto dd = [m](int k) { return m + k; };

  auto add_root = [&](RootKind kind, int k, int l, int mult) {
    roots_.push_back({kind, k, l});
    multiplicities_.push_back(mult);
    return static_cast<int>(roots_.size()) - 1;
  };

  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      for (int sgn : {-1, +1}) {
        // sgn = -1: e_k - e_l (upper sign in the "minus" formulas is the lower one)
        const RootKind kind = sgn < 0 ? RootKind::Diff : RootKind::Sum;
        const int root = add_root(kind, k, l, 2);
        const double s = sgn < 0 ? -1.0 : 1.0;  // "pm" in e_k pm e_l
        // E^{+,r}: 1/2 [a: E_kl - E_lk ; d: -/+ (E_kl - E_lk)]
        Mat pr = Mat::Zero(N, N), pi = Mat::Zero(N, N), mr = Mat::Zero(N, N), mi = Mat::Zero(N, N);
        pr(a(k), a(l)) = 0.5;
        pr(a(l), a(k)) = -0.5;
        pr(dd(k), dd(l)) = -s * 0.5;
        pr(dd(l), dd(k)) = s * 0.5;
        // E^{+,i}: i/2 [a: E_kl + E_lk ; d: -/+ (E_kl + E_lk)]
        pi(a(k), a(l)) = 0.5 * I;
        pi(a(l), a(k)) = 0.5 * I;
        pi(dd(k), dd(l)) = -s * 0.5 * I;
        pi(dd(l), dd(k)) = -s * 0.5 * I;
        // E^{-,r}: 1/2 [b: E_lk -/+ E_kl ; b^dag block: E_kl -/+ E_lk]
        mr(a(l), dd(k)) += 0.5;
        mr(a(k), dd(l)) += -s * 0.5;
        mr(dd(k), a(l)) += 0.5;
        mr(dd(l), a(k)) += -s * 0.5;
        // E^{-,i}: i/2 [b: -(E_lk +/- E_kl) ; b^dag block: E_kl +/- E_lk]
        mi(a(l), dd(k)) += -0.5 * I;
        mi(a(k), dd(l)) += -s * 0.5 * I;
        mi(dd(k), a(l)) += 0.5 * I;
        mi(dd(l), a(k)) += s * 0.5 * I;
        basis_.push_back({root, "r", pr, mr});
        basis_.push_back({root, "i", pi, mi});
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    const int root = add_root(RootKind::Twice, k, -1, 1);
    Mat p = Mat::Zero(N, N), mm = Mat::Zero(N, N);
    p(a(k), a(k)) = kInvSqrt2 * I;
    p(dd(k), dd(k)) = -kInvSqrt2 * I;
    mm(a(k), dd(k)) = -kInvSqrt2 * I;
    mm(dd(k), a(k)) = kInvSqrt2 * I;
    basis_.push_back({root, "i", p, mm});
  }
  if (r > 0) {
    for (int k = 0; k < n; ++k) {
      const int root = add_root(RootKind::Single, k, -1, 2 * r);
      for (int d = 0; d < r; ++d) {
        Mat pr = Mat::Zero(N, N), pi = Mat::Zero(N, N), mr = Mat::Zero(N, N), mi = Mat::Zero(N, N);
        pr(a(k), e(d)) = kInvSqrt2;
        pr(e(d), a(k)) = -kInvSqrt2;
        pi(a(k), e(d)) = kInvSqrt2 * I;
        pi(e(d), a(k)) = kInvSqrt2 * I;
        mr(e(d), dd(k)) = kInvSqrt2;
        mr(dd(k), e(d)) = kInvSqrt2;
        mi(e(d), dd(k)) = -kInvSqrt2 * I;
        mi(dd(k), e(d)) = kInvSqrt2 * I;
        const std::string ds = ",d=" + std::to_string(d + 1);
        basis_.push_back({root, "r" + ds, pr, mr});
        basis_.push_back({root, "i" + ds, pi, mi});
      }
    }
  }

  for (int k = 0; k < n; ++k) {
    Mat h = Mat::Zero(N, N);
    h(a(k), dd(k)) = kInvSqrt2;
    h(dd(k), a(k)) = kInvSqrt2;
    a_basis_.push_back(h);
  }

  // M = { diag(i chi, gamma, i chi) : gamma in u(m-n), tr = 0 }.
  std::vector<Mat> cand;
  auto traceless = [N](Mat x) {
    x -= (x.trace() / static_cast<double>(N)) * Mat::Identity(N, N);
    return x;
  };
  for (int k = 0; k < n; ++k) {
    Mat x = Mat::Zero(N, N);
    x(a(k), a(k)) = I;
    x(dd(k), dd(k)) = I;
    cand.push_back(traceless(x));
  }
  for (int d = 0; d < r; ++d) {
    Mat x = Mat::Zero(N, N);
    x(e(d), e(d)) = I;
    cand.push_back(traceless(x));
  }
  for (int d = 0; d < r; ++d) {
    for (int d2 = d + 1; d2 < r; ++d2) {
      Mat x = Mat::Zero(N, N), y = Mat::Zero(N, N);
      x(e(d), e(d2)) = 1.0;
      x(e(d2), e(d)) = -1.0;
      y(e(d), e(d2)) = I;
      y(e(d2), e(d)) = I;
      cand.push_back(x);
      cand.push_back(y);
    }
  }
  m_basis_ = orthonormalize(cand, -1.0);
}

void SymmetricSpace::build_sl() {
  const int k = spec_.k;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      roots_.push_back({RootKind::Diff, i, j});
      multiplicities_.push_back(2);
      const int root = static_cast<int>(roots_.size()) - 1;
      Mat pr = Mat::Zero(k, k), pi = Mat::Zero(k, k), mr = Mat::Zero(k, k), mi = Mat::Zero(k, k);
      pr(i, j) = kInvSqrt2;
      pr(j, i) = -kInvSqrt2;
      mr(i, j) = kInvSqrt2;
      mr(j, i) = kInvSqrt2;
      pi(i, j) = kInvSqrt2 * I;
      pi(j, i) = kInvSqrt2 * I;
      mi(i, j) = kInvSqrt2 * I;
      mi(j, i) = -kInvSqrt2 * I;
      basis_.push_back({root, "r", pr, mr});
      basis_.push_back({root, "i", pi, mi});
    }
  }
  std::vector<Mat> cand;
  for (int i = 0; i + 1 < k; ++i) {
    Mat h = Mat::Zero(k, k);
    h(i, i) = 1.0;
    h(i + 1, i + 1) = -1.0;
    cand.push_back(h);
  }
  a_basis_ = orthonormalize(cand, 1.0);
  for (const Mat& h : a_basis_) m_basis_.push_back(I * h);
}

int SymmetricSpace::dim() const {
  const int N = size();
  return spec_.family == SpaceSpec::Family::SU ? N * N - 1 : 2 * (N * N - 1);
}

int SymmetricSpace::multiplicity(int root) const { return multiplicities_.at(root); }

// ---------------------------------------------------------------------------

double SymmetricSpace::membership_residual(const Mat& x) const {
  if (x.rows() != size() || x.cols() != size()) return std::numeric_limits<double>::infinity();
  double res = std::abs(x.trace());
  if (spec_.family == SpaceSpec::Family::SU)
    res = std::max(res, linalg::max_abs(x.adjoint() * metric_ + metric_ * x));
  return res;
}

bool SymmetricSpace::is_member(const Mat& x, double tol) const {
  const double scale = std::max(1.0, linalg::max_abs(x));
  return membership_residual(x) <= tol * scale;
}

void SymmetricSpace::require_member(const Mat& x, const char* who) const {
  if (!is_member(x, 1e-8)) {
    std::ostringstream os;
    os << who << ": matrix is not an element of " << spec_.name()
       << " (residual " << membership_residual(x) << ")";
    throw MembershipError(os.str());
  }
}

Mat SymmetricSpace::project_to_algebra(const Mat& x) const {
  const int N = size();
  Mat y = x;
  if (spec_.family == SpaceSpec::Family::SU) y = 0.5 * (x - metric_ * x.adjoint() * metric_);
  y -= (y.trace() / static_cast<double>(N)) * Mat::Identity(N, N);
  return y;
}

LieElement SymmetricSpace::element(const Mat& x) const {
  if (!is_member(x, kMembershipRejectTol)) {
    std::ostringstream os;
    os << "element: matrix is too far from " << spec_.name() << " (residual "
       << membership_residual(x) << ")";
    throw MembershipError(os.str());
  }
  return LieElement(project_to_algebra(x), shared_from_this());
}

Mat SymmetricSpace::theta(const Mat& x) const {
  require_member(x, "theta");
  if (spec_.family == SpaceSpec::Family::SU) return metric_ * x * metric_;
  return -x.adjoint();
}

std::pair<Mat, Mat> SymmetricSpace::split(const Mat& x) const {
  const Mat tx = theta(x);
  return {0.5 * (x + tx), 0.5 * (x - tx)};
}

Components SymmetricSpace::components(const Mat& x) const {
  Components c;
  c.a.resize(static_cast<Eigen::Index>(a_basis_.size()));
  c.m.resize(static_cast<Eigen::Index>(m_basis_.size()));
  c.plus.resize(static_cast<Eigen::Index>(basis_.size()));
  c.minus.resize(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < a_basis_.size(); ++i) c.a[i] = pairing(x, a_basis_[i]);
  for (std::size_t i = 0; i < m_basis_.size(); ++i) c.m[i] = -pairing(x, m_basis_[i]);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    c.plus[i] = -pairing(x, basis_[i].plus);
    c.minus[i] = pairing(x, basis_[i].minus);
  }
  return c;
}

Mat SymmetricSpace::assemble(const Components& c) const {
  Mat x = zero();
  for (std::size_t i = 0; i < a_basis_.size(); ++i)
    if (c.a.size() && c.a[i] != 0.0) x += c.a[i] * a_basis_[i];
  for (std::size_t i = 0; i < m_basis_.size(); ++i)
    if (c.m.size() && c.m[i] != 0.0) x += c.m[i] * m_basis_[i];
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (c.plus.size() && c.plus[i] != 0.0) x += c.plus[i] * basis_[i].plus;
    if (c.minus.size() && c.minus[i] != 0.0) x += c.minus[i] * basis_[i].minus;
  }
  return x;
}

Mat SymmetricSpace::project(const Mat& x, Subspace s) const {
  require_member(x, "project");
  Components c = components(x);
  Components out;
  out.a = Vec::Zero(c.a.size());
  out.m = Vec::Zero(c.m.size());
  out.plus = Vec::Zero(c.plus.size());
  out.minus = Vec::Zero(c.minus.size());
  switch (s) {
    case Subspace::A: out.a = c.a; break;
    case Subspace::M: out.m = c.m; break;
    case Subspace::Mperp: out.plus = c.plus; break;
    case Subspace::Aperp: out.minus = c.minus; break;
  }
  return assemble(out);
}

Mat SymmetricSpace::ad_fn(const ScalarFunction& phi, const CartanPoint& q, const Mat& x) const {
  require_member(x, "ad_fn");
  Components c = components(x);
  if (phi.pole_at_zero) {
    if (!is_regular(q, 0.0) || min_root_value(q) == 0.0)
      throw WallError("ad_fn: " + phi.name + "(ad_q) requires regular q", min_root_value(q));
    const double scale = std::max(1.0, linalg::max_abs(x));
    const double am = std::max(c.a.size() ? c.a.cwiseAbs().maxCoeff() : 0.0,
                               c.m.size() ? c.m.cwiseAbs().maxCoeff() : 0.0);
    if (am > 1e-9 * scale)
      throw DomainError("ad_fn: " + phi.name +
                        "(ad_q) has a pole at 0; argument must have zero A and M components");
    c.a.setZero();
    c.m.setZero();
  } else {
    c.a *= phi.at_zero;
    c.m *= phi.at_zero;
  }
  const std::vector<double> alpha = root_values(q);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const double fv = phi.f(alpha[basis_[i].root]);
    const double p = c.plus[i], mn = c.minus[i];
    if (phi.parity == Parity::Even) {
      c.plus[i] = fv * p;
      c.minus[i] = fv * mn;
    } else {
      c.plus[i] = fv * mn;
      c.minus[i] = fv * p;
    }
  }
  return assemble(c);
}

// ---------------------------------------------------------------------------

CartanPoint SymmetricSpace::normalize(const CartanPoint& q) const {
  if (q.size() != coord_count()) {
    std::ostringstream os;
    os << spec_.name() << " expects " << coord_count() << " Cartan coordinates, got " << q.size();
    throw DomainError(os.str());
  }
  CartanPoint out = q;
  if (spec_.family == SpaceSpec::Family::SL) out.coords.array() -= out.coords.mean();
  return out;
}

Mat SymmetricSpace::embed(const CartanPoint& q0) const {
  const CartanPoint q = normalize(q0);
  Mat x = zero();
  if (spec_.family == SpaceSpec::Family::SU) {
    for (int k = 0; k < spec_.n; ++k) {
      x(k, spec_.m + k) = q[k];
      x(spec_.m + k, k) = q[k];
    }
  } else {
    for (int k = 0; k < spec_.k; ++k) x(k, k) = q[k];
  }
  return x;
}

CartanPoint SymmetricSpace::cartan_coords(const Mat& x) const {
  Components c = components(x);
  Mat a = zero();
  for (std::size_t i = 0; i < a_basis_.size(); ++i) a += c.a[i] * a_basis_[i];
  Vec coords(coord_count());
  if (spec_.family == SpaceSpec::Family::SU) {
    for (int k = 0; k < spec_.n; ++k) coords[k] = a(k, spec_.m + k).real();
  } else {
    for (int k = 0; k < spec_.k; ++k) coords[k] = a(k, k).real();
  }
  return CartanPoint(coords);
}

std::vector<double> SymmetricSpace::root_values(const CartanPoint& q) const {
  std::vector<double> v;
  v.reserve(roots_.size());
  for (const auto& r : roots_) v.push_back(r.value(q));
  return v;
}

double SymmetricSpace::min_root_value(const CartanPoint& q) const {
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& r : roots_) mn = std::min(mn, r.value(q));
  return mn;
}

bool SymmetricSpace::is_regular(const CartanPoint& q, double tol) const {
  for (const auto& r : roots_)
    if (std::abs(r.value(q)) <= tol) return false;
  return true;
}

bool SymmetricSpace::in_chamber(const CartanPoint& q, double tol) const {
  return min_root_value(q) > tol;
}

void SymmetricSpace::require_chamber(const CartanPoint& q, double tol) const {
  const double mn = min_root_value(q);
  if (!(mn > tol)) {
    std::ostringstream os;
    os << "q is not in the open Weyl chamber of " << spec_.name() << " (min alpha(q) = " << mn
       << ")";
    throw WallError(os.str(), mn);
  }
}

CartanPoint SymmetricSpace::weyl_act(const SignedPermutation& w, const CartanPoint& q) const {
  const int c = coord_count();
  if (static_cast<int>(w.perm.size()) != c || static_cast<int>(w.signs.size()) != c)
    throw DomainError("weyl_act: permutation size does not match coordinates");
  std::vector<int> seen(c, 0);
  for (int i = 0; i < c; ++i) {
    if (w.perm[i] < 0 || w.perm[i] >= c || seen[w.perm[i]]++)
      throw DomainError("weyl_act: not a permutation");
    if (w.signs[i] != 1 && w.signs[i] != -1) throw DomainError("weyl_act: signs must be +-1");
    if (w.signs[i] == -1 && spec_.family == SpaceSpec::Family::SL)
      throw DomainError("weyl_act: sign flips are not Weyl group elements for A_{k-1}");
  }
  CartanPoint out{Vec(c)};
  for (int i = 0; i < c; ++i) out[i] = w.signs[i] * q[w.perm[i]];
  return out;
}

Vec SymmetricSpace::plus_coefficients(const Mat& x) const {
  Vec c(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) c[i] = -pairing(x, basis_[i].plus);
  return c;
}

Mat SymmetricSpace::from_plus_coefficients(const Vec& c) const {
  if (c.size() != static_cast<Eigen::Index>(basis_.size()))
    throw DomainError("from_plus_coefficients: wrong coefficient count");
  Mat x = zero();
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (c[i] != 0.0) x += c[i] * basis_[i].plus;
  return x;
}

}  // namespace spincal
