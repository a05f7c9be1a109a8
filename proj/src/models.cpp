#include "spincal/models.hpp"

#include <cmath>
#include <sstream>

namespace spincal {

namespace {

double inv_sinh2(double z) {
  const double s = std::sinh(z);
  return 1.0 / (s * s);
}

}  // namespace

SpinlessModel SpinlessModel::bc(int n, double kappa, double x) {
  return {ModelFamily::BC, n, kappa, x, 0};
}

SpinlessModel SpinlessModel::c(int n, double kappa, double x) {
  return {ModelFamily::C, n, kappa, x, 0};
}

SpinlessModel SpinlessModel::d(int n, double kappa, int m) {
  return {ModelFamily::D, n, kappa, 0.0, m};
}

SpinlessModel SpinlessModel::sutherland(int k, double kappa) {
  return {ModelFamily::SutherlandA, k, kappa, 0.0, 0};
}

std::optional<std::string> validate_params(const SpinlessModel& model) {
  switch (model.family) {
    case ModelFamily::BC:
      return bc_violation(model.n, model.kappa, model.x);
    case ModelFamily::C:
      return c_violation(model.n, model.kappa, model.x);
    case ModelFamily::D:
      if (model.x != 0.0) return "D case has no central term (x must be 0)";
      if (model.m != 0 && model.m < model.n) return "D case needs m >= n";
      return d_violation(model.n, model.kappa);
    case ModelFamily::SutherlandA:
      if (model.x != 0.0) return "Sutherland case has no central term (x must be 0)";
      return kks_violation(model.n, model.kappa);
  }
  return "unknown model family";
}

void SpinlessModel::validate() const {
  if (auto v = validate_params(*this)) throw DomainError(name() + ": " + *v);
}

SpaceSpec SpinlessModel::space() const {
  switch (family) {
    case ModelFamily::BC: return SpaceSpec::su(n + 1, n);
    case ModelFamily::C: return SpaceSpec::su(n, n);
    case ModelFamily::D: return SpaceSpec::su(m == 0 ? n : m, n);
    case ModelFamily::SutherlandA: return SpaceSpec::sl(n);
  }
  throw DomainError("unknown model family");
}

ReducedCase SpinlessModel::reduced_case() const {
  switch (family) {
    case ModelFamily::BC: return ReducedCase::BC;
    case ModelFamily::C: return ReducedCase::C;
    case ModelFamily::D: return ReducedCase::D;
    case ModelFamily::SutherlandA: return ReducedCase::KKS;
  }
  throw DomainError("unknown model family");
}

std::string SpinlessModel::name() const {
  std::ostringstream os;
  switch (family) {
    case ModelFamily::BC: os << "BC" << n << "(kappa=" << kappa << ", x=" << x << ")"; break;
    case ModelFamily::C: os << "C" << n << "(kappa=" << kappa << ", x=" << x << ")"; break;
    case ModelFamily::D:
      os << "D" << n << "(kappa=" << kappa;
      if (m != 0) os << ", m=" << m;
      os << ")";
      break;
    case ModelFamily::SutherlandA: os << "A" << n - 1 << "(kappa=" << kappa << ")"; break;
  }
  return os.str();
}

BcCouplings model_couplings(const SpinlessModel& model) {
  if (model.family != ModelFamily::BC) throw DomainError("couplings (g, g1, g2) belong to the BC model");
  return bc_couplings(model.n, model.kappa, model.x);
}

namespace {

double closed_form(const SpinlessModel& model, const CartanPoint& q0, const CartanPoint& p0, bool chamber) {
  model.validate();
  const SpacePtr space = build_space(model.space());
  const CartanPoint q = space->normalize(q0);
  const CartanPoint p = space->normalize(p0);
  if (chamber) {
    space->require_chamber(q);
  } else if (!space->is_regular(q)) {
    throw WallError("closed_form_H: q is not regular", space->min_root_value(q));
  }
  const int n = model.n;
  double h = 0.5 * p.coords.squaredNorm();

  if (model.family == ModelFamily::SutherlandA) {
    const double g2 = kSutherlandG2PerKappa2 * model.kappa * model.kappa;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) h += g2 * inv_sinh2(q[i] - q[j]);
    return h;
  }

  double pair = 0.0, single = 0.0, twice = 0.0;
  switch (model.family) {
    case ModelFamily::BC: {
      const BcCouplings c = bc_couplings(n, model.kappa, model.x);
      pair = c.g * c.g;
      single = c.g1 * c.g1;
      twice = c.g2 * c.g2;
      break;
    }
    case ModelFamily::C:
      pair = model.kappa * model.kappa / 4.0;
      twice = n * n * model.x * model.x / 2.0;
      break;
    case ModelFamily::D:
      pair = model.kappa * model.kappa / 4.0;
      break;
    default:
      break;
  }
  for (int k = 0; k < n; ++k) {
    if (single != 0.0) h += single * inv_sinh2(q[k]);
    if (twice != 0.0) h += twice * inv_sinh2(2.0 * q[k]);
    for (int l = k + 1; l < n; ++l) h += pair * (inv_sinh2(q[k] - q[l]) + inv_sinh2(q[k] + q[l]));
  }
  return h;
}

}  // namespace

double closed_form_H(const SpinlessModel& model, const CartanPoint& q, const CartanPoint& p) {
  return closed_form(model, q, p, true);
}

double closed_form_H_regular(const SpinlessModel& model, const CartanPoint& q, const CartanPoint& p) {
  return closed_form(model, q, p, false);
}

SpinPoint model_spin(const SpinlessModel& model, const SymmetricSpace& space) {
  model.validate();
  if (!(space.spec() == model.space()))
    throw DomainError(model.name() + " lives on " + model.space().name() + ", not " + space.spec().name());
  return xi_red(space, model.reduced_case(), model.kappa, model.x);
}

PhasePoint model_point(const SpinlessModel& model, const SymmetricSpace& space, const CartanPoint& q,
                       const CartanPoint& p) {
  return make_phase_point(space, q, p, model_spin(model, space).xi);
}

CartanPoint random_chamber_point(const SymmetricSpace& space, std::mt19937_64& rng, double margin) {
  std::uniform_real_distribution<double> gap(margin, margin + 1.0);
  const int c = space.coord_count();
  Vec q(c);
  if (space.spec().family == SpaceSpec::Family::SU) {
    // q_n > 0 for the roots e_k / 2e_k, then increasing gaps upwards.
    double acc = 0.0;
    for (int k = c - 1; k >= 0; --k) {
      acc += gap(rng);
      q[k] = acc;
    }
  } else {
    double acc = 0.0;
    for (int k = c - 1; k >= 0; --k) {
      q[k] = acc;
      acc += gap(rng);
    }
  }
  return space.normalize(CartanPoint(q));
}

double machinery_equals_closed_form(const SpinlessModel& model, int samples, std::uint64_t seed) {
  model.validate();
  const SpacePtr space = build_space(model.space());
  const SpinPoint xi = model_spin(model, *space);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CartanPoint q = random_chamber_point(*space, rng);
    Vec pv(space->coord_count());
    for (Eigen::Index i = 0; i < pv.size(); ++i) pv[i] = normal(rng);
    const PhasePoint pt = make_phase_point(*space, q, CartanPoint(pv), xi.xi);
    worst = std::max(worst, std::abs(hamiltonian(*space, pt) - closed_form_H(model, pt.q, pt.p)));
  }
  return worst;
}

}  // namespace spincal
