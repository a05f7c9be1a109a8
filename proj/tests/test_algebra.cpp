#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "spincal/orbits.hpp"
#include "support.hpp"

using namespace spincal;
using spincal::fixture::Gen;

using fixture::all_su_up_to;
using fixture::expected_multiplicity;

TEST(SpaceSpec, RejectsInvalidDimensions) {
  EXPECT_THROW(build_space(SpaceSpec{SpaceSpec::Family::SU, 1, 2, 0}), DomainError);
  EXPECT_THROW(build_space(SpaceSpec{SpaceSpec::Family::SU, 0, 0, 0}), DomainError);
  EXPECT_THROW(build_space(SpaceSpec{SpaceSpec::Family::SL, 0, 0, 1}), DomainError);
}

TEST(BuildSpace, Su32RootsAndMultiplicities) {
  const SpacePtr s = build_space(SpaceSpec::su(3, 2));
  std::map<std::string, int> got;
  for (std::size_t i = 0; i < s->positive_roots().size(); ++i)
    got[s->positive_roots()[i].label()] = s->multiplicity(static_cast<int>(i));
  const std::map<std::string, int> want{{"e1-e2", 2}, {"e1+e2", 2}, {"2e1", 1},
                                        {"2e2", 1},   {"e1", 2},    {"e2", 2}};
  EXPECT_EQ(got, want);
}

TEST(BuildSpace, Su32DimensionCount) {
  const SpacePtr s = build_space(SpaceSpec::su(3, 2));
  EXPECT_EQ(s->a_basis().size(), 2u);
  EXPECT_EQ(s->m_basis().size(), 2u);
  const int roots = static_cast<int>(s->root_basis().size());
  EXPECT_EQ(2 + roots, 12);  // g+ = M + M-perp
  EXPECT_EQ(2 + roots, 12);  // g- = A + A-perp
  EXPECT_EQ(s->dim(), 24);
}

TEST(BuildSpace, Sl2SingleRoot) {
  const SpacePtr s = build_space(SpaceSpec::sl(2));
  ASSERT_EQ(s->positive_roots().size(), 1u);
  EXPECT_EQ(s->multiplicity(0), 2);
  EXPECT_EQ(s->a_basis().size() + s->root_basis().size(), 3u);
}

TEST(BuildSpace, Sl2MinusPartMatchesBruteForceBasis) {
  // g- is the traceless Hermitian part: sigma_x, sigma_y, sigma_z.
  const SpacePtr s = build_space(SpaceSpec::sl(2));
  const cplx I(0, 1);
  std::vector<Mat> brute;
  Mat a(2, 2);
  a << 0, 1, 1, 0;
  brute.push_back(a);
  a << 0, -I, I, 0;
  brute.push_back(a);
  a << 1, 0, 0, -1;
  brute.push_back(a);
  for (const Mat& b : brute) {
    const auto [plus, minus] = s->split(b);
    EXPECT_LT(linalg::max_abs(plus), 1e-14);
    EXPECT_LT(linalg::max_abs(minus - b), 1e-14);
    EXPECT_LT(linalg::max_abs(s->split(I * b).second), 1e-14);
  }
  Eigen::MatrixXd gram(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram(i, j) = pairing(brute[i], brute[j]);
  // The A + A-perp basis spans the same space: its Gram determinant matches.
  std::vector<Mat> ours = s->a_basis();
  for (const RootVector& b : s->root_basis()) ours.push_back(b.minus);
  ASSERT_EQ(ours.size(), 3u);
  for (const Mat& b : brute) {
    Mat rest = b;
    for (const Mat& e : ours) rest -= pairing(b, e) * e;
    EXPECT_LT(linalg::max_abs(rest), 1e-14);
  }
  EXPECT_NEAR(gram.determinant(), 8.0, 1e-12);
}

TEST(BasisProperty, OrthonormalExhaustive) {
  std::vector<SpaceSpec> specs = all_su_up_to(7);
  for (int k = 2; k <= 4; ++k) specs.push_back(SpaceSpec::sl(k));
  for (const SpaceSpec& spec : specs) {
    const SpacePtr s = build_space(spec);
    const auto& b = s->root_basis();
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double d = i == j ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(pairing(b[i].plus, b[j].plus) + d));
        worst = std::max(worst, std::abs(pairing(b[i].minus, b[j].minus) - d));
        worst = std::max(worst, std::abs(pairing(b[i].plus, b[j].minus)));
      }
    EXPECT_LT(worst, 1e-12) << spec.name();
  }
}

TEST(BasisProperty, MultiplicitiesAndDimensions) {
  std::vector<SpaceSpec> specs = all_su_up_to(7);
  for (int k = 2; k <= 4; ++k) specs.push_back(SpaceSpec::sl(k));
  for (const SpaceSpec& spec : specs) {
    const SpacePtr s = build_space(spec);
    int sum = 0;
    for (std::size_t r = 0; r < s->positive_roots().size(); ++r) {
      const int nu = s->multiplicity(static_cast<int>(r));
      EXPECT_EQ(nu, expected_multiplicity(spec, s->positive_roots()[r])) << spec.name();
      sum += nu;
    }
    const int n = spec.matrix_size();
    const int ambient = spec.family == SpaceSpec::Family::SU ? n * n - 1 : 2 * (n * n - 1);
    EXPECT_EQ(static_cast<int>(s->a_basis().size() + s->m_basis().size()) + 2 * sum, ambient) << spec.name();
    EXPECT_EQ(s->dim(), ambient);
    EXPECT_EQ(static_cast<int>(s->root_basis().size()), sum);
  }
}

TEST(BasisProperty, PositiveRootSetsAreComplete) {
  for (const SpaceSpec& spec : all_su_up_to(7)) {
    const SpacePtr s = build_space(spec);
    const int n = spec.n;
    std::size_t want = static_cast<std::size_t>(n * (n - 1) + n);
    if (spec.m > spec.n) want += static_cast<std::size_t>(n);
    EXPECT_EQ(s->positive_roots().size(), want) << spec.name();
  }
  for (int k = 2; k <= 4; ++k)
    EXPECT_EQ(build_space(SpaceSpec::sl(k))->positive_roots().size(), static_cast<std::size_t>(k * (k - 1) / 2));
}

TEST(BasisProperty, LadderRelation) {
  Gen gen(11);
  for (const SpaceSpec& spec : fixture::small_spaces()) {
    const SpacePtr s = build_space(spec);
    for (int trial = 0; trial < 100; ++trial) {
      const CartanPoint q = s->normalize(CartanPoint(gen.normal_vec(s->coord_count())));
      const Mat Q = s->embed(q);
      const auto alpha = s->root_values(q);
      for (const RootVector& b : s->root_basis()) {
        EXPECT_LT(linalg::max_abs(commutator(Q, b.plus) - alpha[b.root] * b.minus), 1e-13) << spec.name();
        EXPECT_LT(linalg::max_abs(commutator(Q, b.minus) - alpha[b.root] * b.plus), 1e-13) << spec.name();
      }
    }
  }
}

TEST(BasisProperty, InvolutionOnBasis) {
  for (const SpaceSpec& spec : fixture::small_spaces()) {
    const SpacePtr s = build_space(spec);
    for (const RootVector& b : s->root_basis()) {
      EXPECT_LT(linalg::max_abs(s->theta(b.plus) - b.plus), 1e-15);
      EXPECT_LT(linalg::max_abs(s->theta(b.minus) + b.minus), 1e-15);
    }
  }
}

TEST(Theta, BlockFormNegatesOffDiagonal) {
  const SpacePtr s = build_space(SpaceSpec::su(3, 2));
  Gen gen(3);
  const Mat x = gen.member(*s);
  const Mat t = s->theta(x);
  EXPECT_LT(linalg::max_abs(t.topLeftCorner(3, 3) - x.topLeftCorner(3, 3)), 1e-15);
  EXPECT_LT(linalg::max_abs(t.bottomRightCorner(2, 2) - x.bottomRightCorner(2, 2)), 1e-15);
  EXPECT_LT(linalg::max_abs(t.topRightCorner(3, 2) + x.topRightCorner(3, 2)), 1e-15);
  EXPECT_LT(linalg::max_abs(t + x.adjoint()), 1e-14);
}

TEST(Theta, Involutive) {
  Gen gen(5);
  for (const SpaceSpec& spec : fixture::small_spaces()) {
    const SpacePtr s = build_space(spec);
    const Mat x = gen.member(*s);
    EXPECT_LT(linalg::max_abs(s->theta(s->theta(x)) - x), 1e-15);
  }
}

TEST(Theta, RejectsNonMembers) {
  const SpacePtr s = build_space(SpaceSpec::su(2, 1));
  EXPECT_THROW(s->theta(Mat::Identity(3, 3)), MembershipError);
}

TEST(Project, BasisVectorLivesInMperp) {
  const SpacePtr s = build_space(SpaceSpec::su(2, 2));
  for (const RootVector& b : s->root_basis()) {
    EXPECT_LT(linalg::max_abs(s->project(b.plus, Subspace::Mperp) - b.plus), 1e-14);
    EXPECT_LT(linalg::max_abs(s->project(b.plus, Subspace::A)), 1e-14);
    EXPECT_LT(linalg::max_abs(s->project(b.plus, Subspace::M)), 1e-14);
    EXPECT_LT(linalg::max_abs(s->project(b.plus, Subspace::Aperp)), 1e-14);
  }
}

TEST(Project, FourPartsReconstruct) {
  Gen gen(7);
  for (const SpaceSpec& spec : fixture::small_spaces()) {
    const SpacePtr s = build_space(spec);
    for (int trial = 0; trial < 20; ++trial) {
      const Mat x = gen.member(*s);
      const Mat sum = s->project(x, Subspace::A) + s->project(x, Subspace::M) + s->project(x, Subspace::Mperp) +
                      s->project(x, Subspace::Aperp);
      EXPECT_LT(linalg::max_abs(sum - x), 1e-12) << spec.name();
      const auto [plus, minus] = s->split(x);
      EXPECT_LT(std::abs(pairing(plus, minus)), 1e-12);
      EXPECT_LT(linalg::max_abs(plus + minus - x), 1e-14);
    }
  }
}

TEST(Project, CentralElementSpansCentreOfPlusPart) {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}, {2, 2}}) {
    const SpacePtr s = build_space(SpaceSpec::su(m, n));
    const Mat c = central_element(m, n);
    EXPECT_LT(linalg::max_abs(s->split(c).second), 1e-15);
    Gen gen(m * 10 + n);
    for (int trial = 0; trial < 5; ++trial) {
      const Mat y = s->split(gen.member(*s)).first;
      EXPECT_LT(linalg::max_abs(commutator(c, y)), 1e-13);
    }
    // Not in M: M = diag(i chi, gamma, i chi) repeats the first n entries at the end.
    EXPECT_GT(linalg::max_abs(c - s->project(c, Subspace::M)), 0.5);
    EXPECT_LT(linalg::max_abs(s->project(c, Subspace::A) + s->project(c, Subspace::Aperp)), 1e-15);
  }
}

TEST(AdFn, TanhKillsCartan) {
  const SpacePtr s = build_space(SpaceSpec::su(3, 2));
  Gen gen(9);
  const CartanPoint q = gen.chamber(*s);
  const Mat h = s->embed(gen.chamber(*s));
  EXPECT_LT(linalg::max_abs(s->ad_fn(ScalarFunction::tanh(), q, h)), 1e-15);
}

TEST(AdFn, TanhSwapsTwiceRootPair) {
  const SpacePtr s = build_space(SpaceSpec::su(2, 1));
  const CartanPoint q{0.8};
  const Mat Q = s->embed(q);
  const Mat ad = fixture::ad_superoperator(Q);
  const auto [sh, ch] = fixture::sinh_cosh_series(ad);
  const Mat tanh_ad = ch.fullPivLu().solve(sh);
  for (std::size_t i = 0; i < s->root_basis().size(); ++i) {
    const RootVector& b = s->root_basis()[i];
    if (s->positive_roots()[b.root].kind != RootKind::Twice) continue;
    const Mat got = s->ad_fn(ScalarFunction::tanh(), q, b.minus);
    EXPECT_LT(linalg::max_abs(got - std::tanh(2 * 0.8) * b.plus), 1e-14);
    const Mat dense = fixture::unvec(tanh_ad * fixture::vec_of(b.minus), 3);
    EXPECT_LT(linalg::max_abs(got - dense), 1e-10);
  }
}

TEST(AdFn, AgreesWithDenseSeries) {
  Gen gen(13);
  for (const SpaceSpec& spec : fixture::small_spaces()) {
    const SpacePtr s = build_space(spec);
    const int n = s->size();
    for (int trial = 0; trial < 5; ++trial) {
      const CartanPoint q = gen.chamber(*s);
      Mat x = gen.member(*s);
      x -= s->project(x, Subspace::A) + s->project(x, Subspace::M);
      const Mat ad = fixture::ad_superoperator(s->embed(q));
      const auto [sh, ch] = fixture::sinh_cosh_series(ad);
      const Mat vx = fixture::vec_of(x);
      EXPECT_LT(linalg::max_abs(s->ad_fn(ScalarFunction::sinh(), q, x) - fixture::unvec(sh * vx, n)), 1e-10)
          << spec.name();
      EXPECT_LT(linalg::max_abs(s->ad_fn(ScalarFunction::cosh(), q, x) - fixture::unvec(ch * vx, n)), 1e-10)
          << spec.name();
      const Mat tanh_dense = fixture::unvec(ch.fullPivLu().solve(sh) * vx, n);
      EXPECT_LT(linalg::max_abs(s->ad_fn(ScalarFunction::tanh(), q, x) - tanh_dense), 1e-10) << spec.name();
      // coth = cosh / sinh on the root spaces
      const Mat coth_x = s->ad_fn(ScalarFunction::coth(), q, x);
      EXPECT_LT(linalg::max_abs(fixture::unvec(sh * fixture::vec_of(coth_x), n) - fixture::unvec(ch * vx, n)), 1e-9)
          << spec.name();
    }
  }
}

TEST(AdFn, CothMapsMperpToAperp) {
  Gen gen(17);
  const SpacePtr s = build_space(SpaceSpec::su(3, 2));
  const Mat xi = gen.slice_spin(*s);
  const Mat y = s->ad_fn(ScalarFunction::coth(), gen.chamber(*s), xi);
  EXPECT_LT(linalg::max_abs(s->project(y, Subspace::Aperp) - y), 1e-13);
}

TEST(AdFn, PoleRejectsCartanAndMComponents) {
  const SpacePtr s = build_space(SpaceSpec::su(2, 2));
  Gen gen(19);
  const CartanPoint q = gen.chamber(*s);
  EXPECT_THROW(s->ad_fn(ScalarFunction::coth(), q, s->a_basis()[0]), DomainError);
  EXPECT_THROW(s->ad_fn(ScalarFunction::w(), q, s->m_basis()[0]), DomainError);
  EXPECT_THROW(s->ad_fn(ScalarFunction::coth(), CartanPoint{1.0, 1.0}, gen.slice_spin(*s)), WallError);
}

TEST(Weyl, IdentityAndSignedSwap) {
  const SpacePtr s = build_space(SpaceSpec::su(3, 2));
  const CartanPoint q{1.0, 0.5};
  const CartanPoint same = s->weyl_act(SignedPermutation::identity(2), q);
  EXPECT_EQ(same[0], 1.0);
  EXPECT_EQ(same[1], 0.5);
  const CartanPoint w = s->weyl_act(SignedPermutation{{1, 0}, {-1, -1}}, q);
  EXPECT_EQ(w[0], -0.5);
  EXPECT_EQ(w[1], -1.0);
}

TEST(Weyl, SignFlipRejectedForTypeA) {
  const SpacePtr s = build_space(SpaceSpec::sl(3));
  EXPECT_THROW(s->weyl_act(SignedPermutation{{0, 1, 2}, {1, -1, 1}}, CartanPoint{1.0, 0.0, -1.0}), DomainError);
  const CartanPoint w = s->weyl_act(SignedPermutation{{2, 1, 0}, {1, 1, 1}}, CartanPoint{1.0, 0.0, -1.0});
  EXPECT_EQ(w[0], -1.0);
}

TEST(Weyl, RootValuesArePermuted) {
  Gen gen(23);
  const SpacePtr s = build_space(SpaceSpec::su(3, 2));
  const CartanPoint q = gen.chamber(*s);
  const CartanPoint w = s->weyl_act(SignedPermutation{{1, 0}, {-1, 1}}, q);
  auto a = s->root_values(q), b = s->root_values(w);
  for (double& v : a) v = std::abs(v);
  for (double& v : b) v = std::abs(v);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
}

TEST(Membership, NearMembersAreSymmetrized) {
  const SpacePtr s = build_space(SpaceSpec::su(2, 1));
  Gen gen(29);
  const Mat x = gen.member(*s);
  Mat noisy = x;
  noisy(0, 1) += cplx(1e-12, 0);
  const LieElement e = s->element(noisy);
  EXPECT_LT(s->membership_residual(e.matrix()), 1e-15);
  EXPECT_THROW(s->element(x + Mat::Identity(3, 3)), MembershipError);
}

TEST(Cartan, ChamberAndRegularity) {
  const SpacePtr s = build_space(SpaceSpec::su(2, 2));
  EXPECT_TRUE(s->in_chamber(CartanPoint{2.0, 1.0}));
  EXPECT_FALSE(s->in_chamber(CartanPoint{1.0, 2.0}));
  EXPECT_TRUE(s->is_regular(CartanPoint{1.0, 2.0}));
  EXPECT_FALSE(s->is_regular(CartanPoint{1.0, 1.0}));
  EXPECT_FALSE(s->is_regular(CartanPoint{1.0, 0.0}));
  EXPECT_THROW(s->require_chamber(CartanPoint{1.0, 0.0}), WallError);
  const CartanPoint q{1.3, 0.4};
  const CartanPoint back = s->cartan_coords(s->embed(q));
  EXPECT_NEAR(back[0], 1.3, 1e-15);
  EXPECT_NEAR(back[1], 0.4, 1e-15);
}
