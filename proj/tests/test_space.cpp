#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "test_support.hpp"

namespace atbench {
namespace {

using testing::ints;
using testing::xy_space;

// index of a value in {1, 2, 4}
Index ix(int v) { return v == 1 ? 0 : v == 2 ? 1 : 2; }
Configuration xy(int x, int y) { return Configuration{ix(x), ix(y)}; }

TEST(SearchSpace, EnumeratesXyFixture) {
  const auto sp = xy_space();
  EXPECT_EQ(sp.cartesian_size(), 9u);
  EXPECT_EQ(sp.constrained_size(), 6u);
  const std::vector<Configuration> expected = {xy(1, 1), xy(1, 2), xy(1, 4), xy(2, 1), xy(2, 2), xy(4, 1)};
  EXPECT_EQ(sp.valid_set(), expected);
  EXPECT_EQ(sp.values_of(xy(4, 1)), ints({4, 1}));
}

TEST(SearchSpace, EmptyConstraintListAcceptsEverything) {
  const auto sp = SearchSpace::build({ParamDomain("x", ints({1, 2})), ParamDomain("y", ints({1, 2}))}, {});
  EXPECT_EQ(sp.constrained_size(), 4u);
  EXPECT_EQ(sp.cartesian_size(), 4u);
  for (const auto& c : testing::cartesian_product(sp)) {
    EXPECT_TRUE(sp.is_valid(c));
  }
}

TEST(SearchSpace, UnsatisfiableIsEmptySpace) {
  EXPECT_THROW(SearchSpace::build({ParamDomain("x", ints({1, 2, 4}))}, {"x > 100"}), EmptySpace);
}

TEST(SearchSpace, RejectsBadDomains) {
  EXPECT_THROW(ParamDomain("x", {}), FormatError);
  EXPECT_THROW(ParamDomain("x", ints({1, 1})), FormatError);
  EXPECT_THROW(ParamDomain("1x", ints({1})), FormatError);
  EXPECT_THROW(SearchSpace::build({ParamDomain("x", ints({1})), ParamDomain("x", ints({2}))}, {}), FormatError);
}

TEST(SearchSpace, IsValidExamples) {
  const auto sp = xy_space();
  EXPECT_TRUE(sp.is_valid(xy(4, 1)));
  EXPECT_FALSE(sp.is_valid(xy(4, 2)));
  EXPECT_THROW(sp.is_valid(Configuration{0, 3}), UsageError);
  EXPECT_THROW(sp.is_valid(Configuration{0}), UsageError);
}

TEST(SearchSpace, NeighborExamples) {
  const auto sp = xy_space();
  const std::vector<Configuration> ham = {xy(1, 2), xy(1, 4), xy(2, 1), xy(4, 1)};
  EXPECT_EQ(sp.neighbors(xy(1, 1), NeighborhoodKind::Hamming), ham);
  const std::vector<Configuration> strict = {xy(1, 2), xy(2, 1)};
  EXPECT_EQ(sp.neighbors(xy(2, 2), NeighborhoodKind::StrictlyAdjacent), strict);
  EXPECT_THROW(sp.neighbors(xy(4, 4), NeighborhoodKind::Hamming), InvalidConfiguration);

  const auto single = SearchSpace::build({ParamDomain("x", ints({1}))}, {});
  for (auto kind : kNeighborhoodKinds) {
    EXPECT_TRUE(single.neighbors(Configuration{0}, kind).empty());
  }
}

TEST(SearchSpace, RandomValidIsUniform) {
  const auto sp = xy_space();
  Rng rng(12345);
  std::map<Configuration, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    counts[sp.random_valid(rng)]++;
  }
  ASSERT_EQ(counts.size(), 6u);
  const double sigma = std::sqrt(draws * (1.0 / 6.0) * (5.0 / 6.0));
  for (const auto& [c, n] : counts) {
    EXPECT_LE(std::abs(n - 10000.0), 5 * sigma) << to_string(c);
  }
}

TEST(SearchSpace, RandomValidDeterministicAndSingleton) {
  const auto sp = xy_space();
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(sp.random_valid(a), sp.random_valid(b));
  }
  const auto one = SearchSpace::build({ParamDomain("x", ints({1, 2, 4}))}, {"x == 2"});
  EXPECT_EQ(one.random_valid(a), Configuration{1});
}

TEST(SearchSpace, RepairExamples) {
  const auto sp = xy_space();
  EXPECT_EQ(sp.repair(xy(1, 1)), xy(1, 1));
  EXPECT_EQ(sp.repair(xy(4, 4)), xy(1, 4));
  const Configuration r = sp.repair(xy(4, 2));
  EXPECT_EQ(hamming_distance(r, xy(4, 2)), 1u);
  EXPECT_EQ(r, testing::brute_repair(sp, xy(4, 2)));
  EXPECT_EQ(r, xy(1, 2));
}

TEST(SearchSpace, HammingExamples) {
  EXPECT_EQ(hamming_distance(xy(1, 1), xy(1, 4)), 1u);
  EXPECT_EQ(hamming_distance(xy(2, 4), xy(2, 4)), 0u);
  EXPECT_EQ(hamming_distance(xy(1, 1), xy(4, 4)), 2u);
  EXPECT_THROW(hamming_distance(Configuration{0}, xy(1, 1)), LengthMismatch);
}

TEST(SearchSpace, CrossoverExamples) {
  Rng rng(5);
  EXPECT_EQ(crossover_uniform(xy(2, 4), xy(2, 4), rng), xy(2, 4));
  std::map<Configuration, int> counts;
  const int draws = 4000;
  for (int i = 0; i < draws; ++i) {
    const auto child = crossover_uniform(xy(1, 1), xy(4, 4), rng);
    ASSERT_TRUE(child[0] == 0 || child[0] == 2);
    ASSERT_TRUE(child[1] == 0 || child[1] == 2);
    counts[child]++;
  }
  ASSERT_EQ(counts.size(), 4u);
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (const auto& [c, n] : counts) {
    EXPECT_LE(std::abs(n - draws / 4.0), 5 * sigma);
  }
  EXPECT_THROW(crossover_uniform(Configuration{0}, xy(1, 1), rng), LengthMismatch);
}

// Property: enumeration, neighborhoods and repair agree with brute force on
// randomly generated small spaces.
TEST(SearchSpaceProperty, MatchesBruteForceOnRandomSpaces) {
  Rng rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const auto sp = testing::random_space(rng);
    std::vector<Configuration> valid;
    for (const auto& c : testing::cartesian_product(sp)) {
      bool ok = true;
      for (const auto& con : sp.constraints()) {
        ok = ok && con.holds(c.indices);
      }
      EXPECT_EQ(sp.is_valid(c), ok);
      EXPECT_EQ(sp.satisfies_constraints(c), ok);
      if (ok) {
        valid.push_back(c);
      }
      const Configuration r = sp.repair(c);
      ASSERT_TRUE(sp.is_valid(r));
      EXPECT_EQ(r, testing::brute_repair(sp, c));
      EXPECT_EQ(sp.repair(r), r);
    }
    ASSERT_EQ(sp.valid_set(), valid);
    for (const auto& c : valid) {
      const auto& h = sp.neighbors(c, NeighborhoodKind::Hamming);
      const auto& a = sp.neighbors(c, NeighborhoodKind::Adjacent);
      const auto& s = sp.neighbors(c, NeighborhoodKind::StrictlyAdjacent);
      EXPECT_EQ(h, testing::brute_neighbors(sp, c, NeighborhoodKind::Hamming));
      EXPECT_EQ(a, testing::brute_neighbors(sp, c, NeighborhoodKind::Adjacent));
      EXPECT_EQ(s, testing::brute_neighbors(sp, c, NeighborhoodKind::StrictlyAdjacent));
      const std::set<Configuration> hs(h.begin(), h.end()), as(a.begin(), a.end());
      for (const auto& v : s) {
        EXPECT_TRUE(hs.contains(v) && as.contains(v));
      }
      for (const auto& v : a) {
        EXPECT_NE(v, c);
      }
    }
  }
}

TEST(SearchSpaceProperty, HammingIsAMetric) {
  Rng rng(77);
  auto random_config = [&](std::size_t dims) {
    Configuration c;
    for (std::size_t d = 0; d < dims; ++d) {
      c.indices.push_back(static_cast<Index>(uniform_index(rng, 4)));
    }
    return c;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t dims = 1 + uniform_index(rng, 6);
    const auto a = random_config(dims), b = random_config(dims), c = random_config(dims);
    EXPECT_EQ(hamming_distance(a, a), 0u);
    EXPECT_EQ(hamming_distance(a, b), hamming_distance(b, a));
    EXPECT_EQ(hamming_distance(a, b) == 0, a == b);
    EXPECT_LE(hamming_distance(a, c), hamming_distance(a, b) + hamming_distance(b, c));
  }
}

TEST(SearchSpaceProperty, CrossoverChildTakesParentGenes) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    Configuration a, b;
    const std::size_t dims = 1 + uniform_index(rng, 6);
    for (std::size_t d = 0; d < dims; ++d) {
      a.indices.push_back(static_cast<Index>(uniform_index(rng, 5)));
      b.indices.push_back(static_cast<Index>(uniform_index(rng, 5)));
    }
    const auto child = crossover_uniform(a, b, rng);
    for (std::size_t d = 0; d < dims; ++d) {
      EXPECT_TRUE(child[d] == a[d] || child[d] == b[d]);
    }
  }
}

TEST(SearchSpace, ReportsOversizedProducts) {
  std::vector<ParamDomain> domains;
  std::vector<Value> big;
  for (std::int64_t v = 0; v < 65536; ++v) {
    big.emplace_back(v);
  }
  for (int d = 0; d < 5; ++d) {
    domains.emplace_back("p" + std::to_string(d), big);
  }
  EXPECT_THROW(SearchSpace::build(domains, {}), TooLarge);
}

} // namespace
} // namespace atbench
