#include <algorithm>
#include <cmath>
#include <random>

#include "spincal/cli.hpp"
#include "spincal/linalg.hpp"

namespace spincal::cli {

using nlohmann::json;

namespace {

struct Table {
  json rows = json::array();
  bool pass = true;

  void add(const std::string& scope, const std::string& check, double residual, double tol) {
    const bool ok = std::isfinite(residual) && residual <= tol;
    pass = pass && ok;
    rows.push_back({{"scope", scope}, {"check", check}, {"residual", residual}, {"tol", tol}, {"pass", ok}});
  }

  void fail(const std::string& scope, const std::string& check, const std::string& why) {
    pass = false;
    rows.push_back({{"scope", scope}, {"check", check}, {"violation", why}, {"pass", false}});
  }
};

Vec normal_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

void check_space(const SymmetricSpace& space, int samples, std::mt19937_64& rng, Table& t) {
  const std::string scope = space.spec().name();
  const auto& basis = space.root_basis();

  std::vector<std::pair<Mat, double>> all;
  for (const Mat& a : space.a_basis()) all.push_back({a, 1.0});
  for (const Mat& m : space.m_basis()) all.push_back({m, -1.0});
  for (const RootVector& b : basis) {
    all.push_back({b.plus, -1.0});
    all.push_back({b.minus, 1.0});
  }
  double orth = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i; j < all.size(); ++j) {
      const double want = i == j ? all[i].second : 0.0;
      orth = std::max(orth, std::abs(pairing(all[i].first, all[j].first) - want));
    }
  t.add(scope, "basis orthonormality", orth, 1e-12);
  t.add(scope, "basis dimension", std::abs(static_cast<double>(all.size()) - space.dim()), 0.0);

  double ladder = 0.0, slice = 0.0, id413 = 0.0, id416 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CartanPoint q = random_chamber_point(space, rng);
    const Mat qm = space.embed(q);
    const auto alpha = space.root_values(q);
    for (const RootVector& b : basis) {
      const double a = alpha[b.root];
      ladder = std::max(ladder, linalg::max_abs(commutator(qm, b.plus) - a * b.minus));
      ladder = std::max(ladder, linalg::max_abs(commutator(qm, b.minus) - a * b.plus));
    }

    const SpinPoint xi = random_slice_spin(space, rng, 1.0);
    const CartanPoint p = space.normalize(CartanPoint(normal_vec(space.coord_count(), rng)));
    const UnreducedPoint up = build_slice_point(space, q, p, xi);
    slice = std::max(slice, linalg::max_abs(moment_map(space, up)));

    const PhasePoint pt = make_phase_point(space, q, p, xi.xi);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    const double x = coord(rng), y = coord(rng);
    const InvariantSpec h = InvariantSpec::trace_power(4);
    const InvariantSpec f = InvariantSpec::trace_power(2);
    {
      const BracketTerms bt = bracket_terms(space, f, x, h, y, pt);
      const double scale = std::max(1.0, std::abs(bt.plus) + std::abs(bt.minus));
      id416 = std::max(id416, identity_416(space, f, x, h, y, pt) / scale);
    }
    const InvariantSpec g = space.spec().family == SpaceSpec::Family::SU
                                ? InvariantSpec::block_invariant(2)
                                : InvariantSpec::trace_power(3);
    {
      const BracketTerms bt = bracket_terms(space, g, x, h, y, pt);
      const double scale = std::max(1.0, std::abs(x * bt.plus) + std::abs(y * bt.minus));
      id413 = std::max(id413, identity_413(space, g, x, h, y, pt) / scale);
    }
  }
  t.add(scope, "root ladder", ladder, 1e-11);
  t.add(scope, "slice moment map", slice, 1e-10);
  t.add(scope, "bracket identity (G+ x G)", id413, 1e-9);
  t.add(scope, "bracket identity (G x G)", id416, 1e-9);

  // Lax spectral invariants along a short direct flow.
  const CartanPoint q = random_chamber_point(space, rng, 0.5);
  const CartanPoint p = space.normalize(CartanPoint(0.3 * normal_vec(space.coord_count(), rng)));
  const PhasePoint pt = make_phase_point(space, q, p, random_slice_spin(space, rng, 0.5).xi);
  IntegrateOptions opts;
  opts.t_end = 0.5;
  opts.tol = 1e-11;
  opts.sample_dt = 0.05;
  std::vector<InvariantSpec> specs{InvariantSpec::trace_power(2, 0.7), InvariantSpec::trace_power(4, -0.4)};
  if (space.spec().family == SpaceSpec::Family::SU) specs.push_back(InvariantSpec::block_invariant(1, 0.3));
  try {
    const Trajectory traj = integrate_direct(space, pt, opts);
    const DriftReport d = monitor(space, traj, specs, {0.0, 1.0});
    t.add(scope, "energy conservation", d.energy_relative_drift, 1e-8);
    t.add(scope, "Lax invariants conservation", d.worst(), 1e-8);
  } catch (const std::exception& e) {
    t.fail(scope, "Lax invariants conservation", e.what());
  }
}

void check_bc(const VerifyConfig::BcCase& c, int samples, std::uint64_t seed, Table& t) {
  const SpinlessModel model = SpinlessModel::bc(c.n, c.kappa, c.x);
  const std::string scope = model.name();
  if (auto v = validate_params(model)) {
    t.fail(scope, "admissibility", *v);
    return;
  }
  const BcCouplings cp = bc_couplings(c.n, c.kappa, c.x);
  t.add(scope, "coupling relation", std::abs(cp.relation_residual()) / std::max(1.0, cp.g1 * cp.g1), 1e-12);
  const OrbitCheckReport r = reduce_orbit_check(c.n, c.kappa, c.x, samples, seed);
  const double orbit = std::max({r.max_diag_residual, r.max_m_component, r.max_torus_det_residual,
                                 r.max_normal_form_residual, r.max_m_membership_residual, r.max_xi_residual});
  t.add(scope, "orbit normal form", orbit, 1e-10);
  t.add(scope, "reduced Hamiltonian", machinery_equals_closed_form(model, samples, seed), 1e-10);
  const SpacePtr space = build_space(model.space());
  std::mt19937_64 rng(seed);
  const CartanPoint q = random_chamber_point(*space, rng);
  t.add(scope, "frozen spin", freezing_residual(*space, q, model_spin(model, *space)), 1e-9);
}

}  // namespace

json run_verify(const VerifyConfig& cfg) {
  Table t;
  std::mt19937_64 rng(cfg.seed);
  for (const SpaceSpec& spec : cfg.spaces) check_space(*build_space(spec), cfg.samples, rng, t);
  for (const auto& c : cfg.bc_cases) check_bc(c, cfg.samples, cfg.seed, t);
  return {{"tool", "spincal"},
          {"version", kVersion},
          {"config_hash", hex64(fnv1a64(cfg.canonical))},
          {"seed", cfg.seed},
          {"checks", t.rows},
          {"pass", t.pass}};
}

}  // namespace spincal::cli
