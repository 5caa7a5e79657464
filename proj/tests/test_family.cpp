#include <gtest/gtest.h>

#include <numeric>

#include "gmmds/family.hpp"
#include "gmmds/random.hpp"
#include "gmmds/verify.hpp"

using namespace gmmds;

namespace {

Family fam(int k, std::vector<std::vector<int>> sets, std::vector<int> mult, int n = -1) {
  Family f;
  f.k = k;
  int max_col = -1;
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    if (!s.empty()) max_col = std::max(max_col, s.back());
  }
  f.n = n < 0 ? max_col + 1 : n;
  f.sets = std::move(sets);
  f.mult = std::move(mult);
  return f;
}

const Family triangle = fam(3, {{0, 1}, {1, 2}, {2, 0}}, {1, 1, 1});

}  // namespace

TEST(Condition, Examples) {
  EXPECT_TRUE(check_condition(fam(2, {{0}, {1}}, {1, 1})).holds);

  const auto v = check_condition(fam(2, {{0}, {0}}, {1, 1}));
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.witness, (std::vector<int>{0, 1}));
  EXPECT_EQ(v.lhs, 0);
  EXPECT_EQ(v.rhs, 1);

  EXPECT_TRUE(check_condition(triangle).holds);
}

TEST(Condition, TriangleTightAtEveryPair) {
  for (std::vector<int> I : {std::vector<int>{0, 1}, {0, 2}, {1, 2}}) {
    int rows = 0;
    for (int i : I) rows += triangle.mult[static_cast<std::size_t>(i)];
    EXPECT_EQ(triangle.k - rows, intersection_size(triangle, I));
  }
  EXPECT_EQ(intersection_size(triangle, std::vector<int>{0, 1, 2}), 0);
}

TEST(Condition, WitnessIsRecomputable) {
  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    const int k = uniform_int(rng, 2, 6), m = uniform_int(rng, 1, k);
    auto shape = random_family(rng, m, k);
    // Random sets of the right sizes over a small universe, so violations are common.
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < m; ++i) {
      const int size = k - shape.mult[static_cast<std::size_t>(i)];
      auto cols = sample_distinct(rng, static_cast<std::uint64_t>(k), static_cast<std::size_t>(std::min(size, k)));
      sets.emplace_back(cols.begin(), cols.end());
    }
    const Family f = fam(k, sets, shape.mult, k);
    const auto v = check_condition(f);
    if (v.holds) continue;
    int rows = 0;
    for (int i : v.witness) rows += f.mult[static_cast<std::size_t>(i)];
    ASSERT_EQ(v.lhs, k - rows);
    ASSERT_EQ(v.rhs, intersection_size(f, v.witness));
    ASSERT_LT(v.lhs, v.rhs);
  }
}

TEST(Condition, MultisetIntersectionUsesMinimum) {
  // S1 = {1,1,2}, S2 = {1,1}: intersection {1,1} has size 2.
  const Family f = fam(4, {{0, 0, 1}, {0, 0}}, {1, 2});
  EXPECT_EQ(intersection_size(f, std::vector<int>{0, 1}), 2);
  EXPECT_FALSE(check_condition(f).holds);  // 4 - 3 = 1 < 2
  EXPECT_TRUE(check_condition(fam(4, {{0, 0, 1}, {0, 2}}, {1, 2})).holds);
}

TEST(Condition, SetFamilyEqualsMultisetEmbedding) {
  // A set family is a multiset family with all multiplicities <= 1; the
  // checker runs the same code path, so compare against brute intersection.
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const int k = uniform_int(rng, 2, 6), m = uniform_int(rng, 2, std::min(k, 4));
    const auto c = random_family(rng, m, k);
    const Family f = c.to_family();
    EXPECT_EQ(check_condition(f).holds, condition_holds(c));
  }
}

TEST(Condition, InvariantUnderRelabeling) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const int k = uniform_int(rng, 2, 6), m = uniform_int(rng, 2, std::min(k, 4));
    const Family f = random_family(rng, m, k).to_family();
    std::vector<int> perm(static_cast<std::size_t>(f.n)), order(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::iota(order.begin(), order.end(), 0);
    shuffle(rng, perm);
    shuffle(rng, order);
    const Family g = permute_groups(relabel_columns(f, perm), order);
    ASSERT_EQ(check_condition(f).holds, check_condition(g).holds);
  }
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(triangle), triangle);

  const Family a = normalize(fam(3, {{0, 1}, {}}, {1, 2}, 2));
  EXPECT_EQ(a.n, 3);
  EXPECT_EQ(a.sets, (std::vector<std::vector<int>>{{0, 1}, {2}}));

  const Family b = normalize(fam(3, {{0}, {1}, {0, 1}}, {1, 1, 1}, 2));
  EXPECT_EQ(b.n, 4);
  EXPECT_EQ(b.sets, (std::vector<std::vector<int>>{{0, 2}, {1, 3}, {0, 1}}));
  EXPECT_TRUE(check_condition(b).holds);
}

TEST(Normalize, InfeasibleThrowsWithWitness) {
  try {
    normalize(fam(2, {{0}, {0}}, {1, 1}));
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.verdict().witness, (std::vector<int>{0, 1}));
  }
}

TEST(Normalize, IdempotentAndSizes) {
  Rng rng(12);
  int tested = 0;
  while (tested < 200) {
    const int k = uniform_int(rng, 2, 6), m = uniform_int(rng, 1, k);
    auto shape = random_family(rng, m, k);
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < m; ++i) {
      const int size = uniform_int(rng, 0, k - shape.mult[static_cast<std::size_t>(i)]);
      auto cols = sample_distinct(rng, static_cast<std::uint64_t>(k + 2), static_cast<std::size_t>(size));
      sets.emplace_back(cols.begin(), cols.end());
    }
    const Family f = fam(k, sets, shape.mult, k + 2);
    if (!check_condition(f).holds) continue;
    ++tested;
    const Family g = normalize(f);
    ASSERT_TRUE(is_normalized(g));
    ASSERT_EQ(g.total_size(), (m - 1) * k);
    ASSERT_EQ(normalize(g), g);
    ASSERT_TRUE(check_condition(g).holds);
    for (int i = 0; i < m; ++i) {
      std::vector<int> old_part;
      for (int c : g.sets[static_cast<std::size_t>(i)])
        if (c < f.n) old_part.push_back(c);
      ASSERT_EQ(old_part, f.sets[static_cast<std::size_t>(i)]);
    }
  }
}

TEST(QDual, Examples) {
  EXPECT_EQ(q_dual(fam(2, {{0}, {1}}, {1, 1})), (QDual{{0}, {1}}));
  EXPECT_EQ(q_dual(triangle), (QDual{{0, 2}, {0, 1}, {1, 2}}));
  for (const auto& q : q_dual(triangle)) EXPECT_FALSE(q.empty());
}

TEST(QDual, RoundTrip) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const int k = uniform_int(rng, 2, 7), m = uniform_int(rng, 1, std::min(k, 5));
    const Family f = random_family(rng, m, k).to_family();
    ASSERT_EQ(from_q_dual(f.k, f.mult, q_dual(f)), f);
  }
  EXPECT_THROW(q_dual(fam(3, {{0, 0}}, {1})), Error);
}

TEST(Ungroup, Examples) {
  EXPECT_EQ(ungroup(fam(2, {{0}}, {2})), (std::vector<std::vector<int>>{{0}, {0}}));
  EXPECT_EQ(ungroup(fam(3, {{0}, {1}}, {1, 2})), (std::vector<std::vector<int>>{{0}, {1}, {1}}));
}

TEST(Ungroup, GroupRoundTripPreservesRows) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const int k = uniform_int(rng, 1, 6), n = k + 2;
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < k; ++i) {
      // few distinct rows so grouping has work to do
      auto cols = sample_distinct(rng, 3, uniform_below(rng, 3));
      std::vector<int> s(cols.begin(), cols.end());
      std::sort(s.begin(), s.end());
      rows.push_back(s);
    }
    const auto g = group_rows(k, n, rows);
    auto back = ungroup(g.family);
    auto a = rows;
    std::sort(a.begin(), a.end());
    std::sort(back.begin(), back.end());
    ASSERT_EQ(a, back);
    for (int r = 0; r < k; ++r)
      ASSERT_EQ(g.family.sets[static_cast<std::size_t>(g.row_group[static_cast<std::size_t>(r)])], rows[static_cast<std::size_t>(r)]);
  }
}

TEST(Validate, RejectsBadInput) {
  EXPECT_THROW(validate(fam(2, {{0}, {1}}, {1, 2})), Error);       // sum r != k
  EXPECT_THROW(validate(fam(2, {{0}, {5}}, {1, 1}, 3)), Error);    // column out of range
  EXPECT_THROW(validate_support(fam(2, {{0}, {1}}, {2, 0})), Error);
  EXPECT_THROW(validate_support(fam(3, {{0, 0}, {1}}, {1, 2})), Error);
  EXPECT_NO_THROW(validate_support(triangle));
}

TEST(Columns, DropUnused) {
  const auto d = drop_unused_columns(fam(2, {{1}, {3}}, {1, 1}, 5));
  EXPECT_EQ(d.family.n, 2);
  EXPECT_EQ(d.family.sets, (std::vector<std::vector<int>>{{0}, {1}}));
  EXPECT_EQ(d.column_map, (std::vector<int>{-1, 0, -1, 1, -1}));
}
