#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "tchm/operators.hpp"

using namespace tchm;

namespace {

StateSpace jc_space(int cap, int atoms) {
  std::vector<AtomSpec> a;
  for (int k = 0; k < atoms; ++k) a.push_back({"a" + std::to_string(k), 2, {0}, {1.0}});
  return build_space({{"m", 1.0, cap}}, a);
}

}  // namespace

TEST(SparseOperator, TripletsSumDuplicatesAndDropZeros) {
  auto op = SparseOperator::from_triplets(2, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 1.0}, {1, 0, -1.0}});
  EXPECT_EQ(op.coeff(0, 1), cplx(3.0));
  EXPECT_EQ(op.nonzeros(), 1u);
}

TEST(SparseOperator, AdjointAndHermiticity) {
  auto op = SparseOperator::from_triplets(2, {{0, 1, cplx(0, 1)}});
  EXPECT_EQ(op.adjoint().coeff(1, 0), cplx(0, -1));
  EXPECT_FALSE(op.is_hermitian());
  EXPECT_TRUE((op + op.adjoint()).is_hermitian());
  EXPECT_THROW(op.require_hermitian(), OperatorError);
}

TEST(Ladder, MatrixElementsAreSqrtN) {
  StateSpace S = build_space({{"m", 1.0, 4}}, {});
  SparseOperator a = photon_op(S, "m", LadderKind::annihilate);
  for (int n = 1; n <= 4; ++n)
    EXPECT_NEAR(std::abs(a.coeff(S.index_of({{n - 1}, {}, {}}), S.index_of({{n}, {}, {}}))), std::sqrt(double(n)), 1e-15);
  // [a, a^dag] = 1 below the cap; -cap on the top state
  SparseOperator c = commutator(a, a.adjoint());
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(c.coeff(n, n).real(), 1.0, 1e-14);
  EXPECT_NEAR(c.coeff(4, 4).real(), -4.0, 1e-14);
}

TEST(Ladder, NumberOperatorIsDiagonal) {
  StateSpace S = build_space({{"m", 1.0, 3}}, {});
  SparseOperator a = photon_op(S, 0, LadderKind::annihilate);
  SparseOperator n = number_op(S, 0);
  EXPECT_LT((a.adjoint() * a - n).max_abs(), 1e-14);
}

TEST(AtomSigma, RaisesAndLowers) {
  StateSpace S = jc_space(0, 1);
  SparseOperator up = atom_sigma(S, "a0", 1, 0, SigmaKind::raise);
  EXPECT_EQ(up.coeff(S.index_of({{0}, {{1, 0}}, {}}), S.index_of({{0}, {{0, 0}}, {}})), cplx(1.0));
  EXPECT_LT((atom_sigma(S, 0, 1, 0, SigmaKind::lower) - up.adjoint()).max_abs(), 1e-15);
}

TEST(BuildTerm, IntermediateStatesMayLeaveTheSpace) {
  // a a^dag on the capped top state: a^dag leaves the space, the product returns to it.
  StateSpace S = build_space({{"m", 1.0, 1}}, {});
  SparseOperator t = build_term(S, {act::photon_lower(0), act::photon_raise(0, 2)});
  EXPECT_NEAR(t.coeff(1, 1).real(), 2.0, 1e-14);
  EXPECT_NEAR(t.coeff(0, 0).real(), 1.0, 1e-14);
}

TEST(BuildTerm, SiteTransferRespectsCapacity) {
  StateSpace S = build_space({}, {}, {{"p", 1}, {"q", 1}});
  SparseOperator t = build_term(S, {act::site_transfer(1, 0, 1)});
  EXPECT_EQ(t.coeff(S.index_of({{}, {}, {0, 1}}), S.index_of({{}, {}, {1, 0}})), cplx(1.0));
  EXPECT_EQ(t.nonzeros(), 1u);
}

class TcRwa : public ::testing::TestWithParam<int> {};

TEST_P(TcRwa, ConservesExcitationNumber) {
  const int n = GetParam();
  StateSpace S = jc_space(n, n);
  SparseOperator H = build_tc(S, {0, 0, 1.0, {}}, true);
  H.require_hermitian();
  EXPECT_LT(commutator(H, excitation_number(S)).max_abs(), 1e-12);
  SparseOperator Hx = build_tc(S, {0, 0, 1.0, {}}, false);
  EXPECT_TRUE(Hx.is_hermitian());
  EXPECT_GT(commutator(Hx, excitation_number(S)).max_abs(), 0.5);
}

INSTANTIATE_TEST_SUITE_P(Atoms, TcRwa, ::testing::Values(1, 2, 3));

TEST(Tc, RejectsMultiLevelAtoms) {
  StateSpace S = build_space({{"m", 1.0, 1}}, {{"x", 3, {0}, {1.0}}});
  EXPECT_THROW(build_tc(S, {0, 0, 1.0, {}}, true), OperatorError);
}

TEST(Tc, SingleExcitationSplittingIsTwoGSqrtN) {
  // Bright state couples to |1> with g sqrt(n); eigenvalues omega +- g sqrt(n) in the one-excitation sector.
  const int n = 3;
  const double g = 0.2;
  StateSpace S = build_space({{"m", 1.0, 1}}, {{"a", 2, {0}, {g}}, {"b", 2, {0}, {g}}, {"c", 2, {0}, {g}}},
                             {}, {[](const BasisState& s) {
                               int e = s.photons[0];
                               for (const auto& a : s.atoms) e += a.level;
                               return e <= 1;
                             }});
  SparseOperator H = build_tc(S, {0, 0, 1.0, {}}, true);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense());
  auto ev = es.eigenvalues();
  EXPECT_NEAR(ev.maxCoeff(), 1.0 + g * std::sqrt(double(n)), 1e-12);
}

TEST(Tch, HoppingMovesPhotonsAndValidatesGraph) {
  StateSpace S = build_space({{"m0", 1.0, 1}, {"m1", 1.0, 1}}, {{"a", 2, {0}, {1.0}}});
  CavityGraph g = path_graph(2);
  SparseOperator H = build_tch(S, g, {{0, 0, 1.0, {}}, {1, 1, 1.0, {}}}, true);
  EXPECT_TRUE(H.is_hermitian());
  EXPECT_NE(std::abs(H.coeff(S.index_of({{1, 0}, {{0, 0}}, {}}), S.index_of({{0, 1}, {{0, 0}}, {}}))), 0.0);
  CavityGraph bad = g;
  bad.photon_edges.push_back({0, 0, 1.0});
  EXPECT_THROW(build_tch(S, bad, {{0, 0, 1.0, {}}, {1, 1, 1.0, {}}}, true), OperatorError);
  CavityGraph unknown = g;
  unknown.photon_edges.push_back({0, 7, 1.0});
  EXPECT_THROW(build_tch(S, unknown, {{0, 0, 1.0, {}}, {1, 1, 1.0, {}}}, true), OperatorError);
}

TEST(Graphs, RingAndPath) {
  EXPECT_EQ(ring_graph(4).edges().size(), 4u);
  EXPECT_EQ(path_graph(4).edges().size(), 3u);
  EXPECT_TRUE(ring_graph(5).has_cavity(4));
  EXPECT_FALSE(ring_graph(5).has_cavity(5));
}
