#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "tchm/observables.hpp"

using namespace tchm;

namespace {

// Brute force over l <= 200, m in 1..200.
JumpClass brute(long long p, long long q) {
  for (long long l = 0; l <= 200; ++l)
    for (long long m = 1; m <= 200; ++m)
      if (p * 2 * m == q * (1 + 2 * l)) return {true, 1, l, m};
  for (long long l = 0; l <= 200; ++l)
    for (long long m = 1; m <= 200; ++m)
      if (p * (1 + 2 * m) == q * 2 * l) return {true, 2, l, m};
  return {};
}

Trajectory with_column(const std::string& name, std::vector<double> v) {
  Trajectory t;
  t.names = {name};
  for (std::size_t k = 0; k < v.size(); ++k) {
    t.times.push_back(double(k));
    t.values.push_back({v[k]});
  }
  return t;
}

}  // namespace

TEST(Association, LinearInRho) {
  StateSpace S = build_space({{"a", 1.0, 1}}, {{"x", 2, {0}, {1.0}}});
  AssociationClassifier xi(S, [](const BasisState& s) { return s.atoms[0].level == 0; });
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  auto random_rho = [&] {
    Eigen::MatrixXcd m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = cplx(n(rng), n(rng));
    DensityMatrix r = m * m.adjoint();
    return DensityMatrix(r / r.trace());
  };
  DensityMatrix a = random_rho(), b = random_rho();
  EXPECT_NEAR(association_degree(0.3 * a + 0.7 * b, xi), 0.3 * xi(a) + 0.7 * xi(b), 1e-14);
  // basis states with xi = 1 sum to the projector population
  SparseOperator P = projector(S, [](const BasisState& s) { return s.atoms[0].level == 0; });
  EXPECT_NEAR(xi(a), population(a, P), 1e-14);
}

TEST(Association, InvariantUnderRelabelingWithinClass) {
  StateSpace S = build_space({{"a", 1.0, 1}}, {{"x", 2, {0}, {1.0}}});
  auto pred = [](const BasisState& s) { return s.atoms[0].level == 0; };
  AssociationClassifier xi(S, pred);
  DensityMatrix r = DensityMatrix::Zero(4, 4);
  r(0, 0) = 0.25;
  r(1, 1) = 0.5;
  r(2, 2) = 0.125;
  r(3, 3) = 0.125;
  // permute basis states that share xi
  std::vector<int> same, other;
  for (int i = 0; i < 4; ++i) (pred(S.state(i)) ? same : other).push_back(i);
  DensityMatrix q = r;
  std::swap(q(same[0], same[0]), q(same[1], same[1]));
  EXPECT_NEAR(xi(q), xi(r), 1e-15);
  EXPECT_THROW(xi(DensityMatrix::Zero(3, 3)), ObservableError);
}

TEST(Population, RejectsNonProjectors) {
  DensityMatrix r = DensityMatrix::Identity(2, 2) / 2.0;
  EXPECT_THROW(population(r, cplx(2.0) * SparseOperator::identity(2)), ObservableError);
  EXPECT_THROW(population(r, SparseOperator::from_triplets(2, {{0, 1, 1.0}})), ObservableError);
  EXPECT_NEAR(population(r, SparseOperator::identity(2)), 1.0, 1e-15);
}

TEST(Rabi, ReferenceIsNormalized) {
  for (double t : {0.0, 0.3, 7.1}) {
    RabiAmplitudes r = rabi_reference(2.0, 0.7, t);
    EXPECT_NEAR(std::norm(r.dark) + std::norm(r.bright), 1.0, 1e-15);
  }
}

TEST(Jumps, Examples) {
  JumpClass half = jump_commensurability_rational(1, 2);
  EXPECT_TRUE(half.exact);
  EXPECT_EQ(half.form, 1);
  EXPECT_EQ(half.l, 0);
  EXPECT_EQ(half.m, 1);
  JumpClass two_thirds = jump_commensurability_rational(2, 3);
  EXPECT_TRUE(two_thirds.exact);
  EXPECT_EQ(two_thirds.form, 2);
  EXPECT_EQ(two_thirds.l, 1);
  EXPECT_EQ(two_thirds.m, 1);
  EXPECT_FALSE(jump_commensurability_rational(1, 1).exact);
  EXPECT_FALSE(jump_commensurability(std::sqrt(2.0)).exact);
  EXPECT_TRUE(jump_commensurability(0.5).exact);
  EXPECT_THROW(jump_commensurability_rational(0, 1), ObservableError);
  EXPECT_THROW(jump_commensurability(-1.0), ObservableError);
}

TEST(Jumps, AgreesWithBruteForce) {
  for (long long p = 1; p <= 50; ++p)
    for (long long q = 1; q <= 50; ++q) {
      JumpClass c = jump_commensurability_rational(p, q);
      JumpClass b = brute(p, q);
      ASSERT_EQ(c.exact, b.exact) << p << "/" << q;
      if (!c.exact) continue;
      // returned (l, m) must reproduce the ratio in its declared form
      if (c.form == 1) EXPECT_EQ(p * 2 * c.m, q * (1 + 2 * c.l)) << p << "/" << q;
      else EXPECT_EQ(p * (1 + 2 * c.m), q * 2 * c.l) << p << "/" << q;
      EXPECT_GE(c.l, 0);
      EXPECT_GE(c.m, 1);
    }
}

TEST(Transformation, FinalSinkValue) {
  EXPECT_DOUBLE_EQ(transformation_probability(with_column("p_sink", {0.0, 0.2, 0.5})), 0.5);
  EXPECT_THROW(transformation_probability(with_column("p_sink", {0.0, 0.5, 0.2})), ObservableError);
  EXPECT_THROW(transformation_probability(with_column("other", {0.0})), ObservableError);
}
