#include "netref/equilibrium.hpp"
#include "netref/instances.hpp"
#include "support.hpp"

using namespace netref;

TEST(Builtins, StarIsUndirected) {
  const Matrix g = star5_network().matrix();
  EXPECT_TRUE(is_symmetric(g));
  EXPECT_EQ(g.sum(), 8.0);
  EXPECT_EQ(g.row(0).sum(), 4.0);
}

TEST(Builtins, HierarchicalTree) {
  const Matrix g = hierarchical5_network().matrix();
  EXPECT_TRUE(is_symmetric(g));
  EXPECT_EQ(g(0, 1), 1.0);
  EXPECT_EQ(g(0, 2), 1.0);
  EXPECT_EQ(g(1, 3), 1.0);
  EXPECT_EQ(g(1, 4), 1.0);
  EXPECT_EQ(g.sum(), 8.0);
}

TEST(Builtins, ReferralLineAndStar) {
  const auto line = referral_line(4);
  for (Index j = 0; j + 1 < 4; ++j) EXPECT_TRUE(line.recommended(j, j + 1));
  EXPECT_EQ(line.matrix().sum(), 3.0);
  const auto star = referral_star(5);
  for (Index j = 1; j < 5; ++j) EXPECT_TRUE(star.recommended(0, j));
  EXPECT_EQ(build_comprehensive(star, 1.0).matrix(), star5_network().matrix());
}

TEST(RandomInstance, SameSeedSameInstance) {
  std::mt19937_64 a(11), b(11);
  for (int i = 0; i < 10; ++i) {
    const auto x = random_instance(a);
    const auto y = random_instance(b);
    EXPECT_EQ(x.network.matrix(), y.network.matrix());
    EXPECT_EQ(x.params.alpha, y.params.alpha);
    EXPECT_EQ(x.sequence, y.sequence);
  }
}

TEST(RandomInstance, RespectsSpec) {
  std::mt19937_64 rng(5);
  InstanceSpec spec;
  spec.min_customers = 3;
  spec.max_customers = 6;
  spec.parts = 0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(rng, spec);
    const Index n = inst.network.size();
    EXPECT_GE(n, 3);
    EXPECT_LE(n, 6);
    EXPECT_GE(inst.sequence.part_count(), 2);
    EXPECT_LE(inst.sequence.part_count(), n);
    EXPECT_EQ(inst.params.size(), n);
  }
}

TEST(RandomInstance, TopologiesHaveTheirShape) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    InstanceSpec spec;
    spec.topology = Topology::symmetric;
    EXPECT_TRUE(is_symmetric(random_instance(rng, spec).network.matrix()));
    spec.topology = Topology::triangular;
    EXPECT_TRUE(is_triangular(random_instance(rng, spec).network.matrix()));
  }
}

TEST(RandomInstance, SatiationDominatesInfluence) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(rng);
    const Matrix& g = inst.network.matrix();
    for (Index k = 0; k < g.rows(); ++k) {
      const double bound = 1.0 + std::max(g.row(k).sum(), g.col(k).sum());
      EXPECT_GE(inst.params.beta(k), 1.5 * bound - 1e-12);
      EXPECT_LE(inst.params.beta(k), 3.0 * bound + 1e-12);
      EXPECT_GT(inst.params.alpha(k), inst.params.cost);
    }
  }
}

TEST(RandomInstance, PassesSolverAssumptions) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(rng);
    EXPECT_TRUE(check_assumptions(inst.network.matrix(), inst.params).passes());
    EXPECT_NO_THROW(solve_sequential(inst.network, inst.sequence, inst.params));
  }
}
