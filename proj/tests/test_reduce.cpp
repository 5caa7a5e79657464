#include <gtest/gtest.h>

#include <bit>

#include "gmmds/reduce.hpp"
#include "gmmds/verify.hpp"

using namespace gmmds;

namespace {

const Family singletons = make_tform(2, {{0}, {1}});
const Family triangle = make_tform(3, {{0, 1}, {1, 2}, {2, 0}});

using Sets = std::vector<std::vector<int>>;

}  // namespace

TEST(Strip, Example) {
  const auto res = strip_common(make_tform(3, {{0, 1}, {0, 2}, {1, 2}}), 2);
  EXPECT_FALSE(res.noop);
  EXPECT_EQ(res.common, (std::vector<int>{0}));
  EXPECT_EQ(res.family.k, 2);
  EXPECT_EQ(res.family.sets, (Sets{{1}, {2}, {1, 2}}));
  EXPECT_EQ(res.family.mult, (std::vector<int>{1, 1, 0}));
  EXPECT_EQ(res.family.total_size(), (3 - 1) * 2);
}

TEST(Strip, EmptyCommonIsNoop) {
  const Family f = make_tform(4, {{0, 1, 2}, {3, 4, 5}, {0, 3}});
  const auto res = strip_common(f, 2);
  EXPECT_TRUE(res.noop);
  EXPECT_EQ(res.family, f);
}

TEST(Strip, RejectsNonemptyTotalIntersection) {
  EXPECT_THROW(strip_common(make_tform(3, {{0, 1}, {0, 2}, {0}}), 2), Error);
}

TEST(Strip, MultisetCommonBlock) {
  // S0 = {0,0} shared by groups 0 and 1
  const Family f = make_tform(5, {{0, 0, 1, 2}, {0, 0, 3, 4}, {1, 3}});
  const auto res = strip_common(f, 2);
  EXPECT_EQ(res.common, (std::vector<int>{0, 0}));
  EXPECT_EQ(res.family.k, 3);
  EXPECT_EQ(res.family.sets, (Sets{{1, 2}, {3, 4}, {1, 3}}));
  EXPECT_EQ(res.family.mult, (std::vector<int>{1, 1, 1}));
  EXPECT_TRUE(check_condition(f).holds);
  EXPECT_EQ(check_condition(f).holds, check_condition(res.family).holds);
}

TEST(Split, TriangleExample) {
  const std::vector<int> I{0, 1};
  const auto s = split_tight(triangle, I);
  EXPECT_EQ(s.common, (std::vector<int>{1}));
  EXPECT_EQ(s.part_i.k, 2);
  EXPECT_EQ(s.part_i.sets, (Sets{{0}, {2}}));
  EXPECT_EQ(s.part_j.k, 3);
  EXPECT_EQ(s.part_j.sets, (Sets{{1}, {0, 2}}));
  EXPECT_TRUE(check_condition(s.part_i).holds);
  EXPECT_TRUE(check_condition(s.part_j).holds);
  // bookkeeping: 1 + 1 = (2-1)*2 and 1 + 2 = (2-1)*3
  EXPECT_EQ(s.part_i.total_size(), 2);
  EXPECT_EQ(s.part_j.total_size(), 3);
}

TEST(Split, RejectsNonTightAndBadSizes) {
  // Two disjoint singletons plus a pair: no I of size 2 is tight.
  const Family f = make_tform(3, {{0, 1}, {2, 3}, {4, 5}});
  EXPECT_THROW(split_tight(f, std::vector<int>{0, 1}), Error);
  EXPECT_THROW(split_tight(triangle, std::vector<int>{0}), Error);
  EXPECT_THROW(split_tight(triangle, std::vector<int>{0, 1, 2}), Error);
}

TEST(MergeDisjoint, FourGroupExample) {
  // Q_0 = {1}, Q_1 = {2} (groups 0-based), union != [4].
  const Family f = make_tform(4, {{0, 2, 3}, {1, 2, 4}, {3, 4, 5}, {2, 5, 6}});
  const auto q = q_dual(f);
  ASSERT_EQ(q[0], (std::vector<int>{0}));
  ASSERT_EQ(q[1], (std::vector<int>{1}));
  const auto res = merge_disjoint(f, 0, 1);
  EXPECT_EQ(res.family.n, f.n - 1);
  EXPECT_EQ(res.family.k, f.k);
  EXPECT_EQ(res.family.m(), f.m());
  // group 2 now uses column 0 where it used column 1
  EXPECT_EQ(res.family.sets[1], (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(res.family.sets[0], (std::vector<int>{0, 1, 2}));
  for (int i = 0; i < f.m(); ++i) EXPECT_EQ(res.family.set_size(i), f.set_size(i));
  EXPECT_EQ(res.column_map[1], res.column_map[0]);
}

TEST(MergeDisjoint, Rejections) {
  EXPECT_THROW(merge_disjoint(singletons, 0, 1), Error);  // union = [m]
  const Family f = make_tform(3, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_THROW(merge_disjoint(f, 0, 1), Error);  // Q_0 = {0,1}, Q_1 = {0,2} overlap
}

TEST(MergeMultiset, ProofReplay) {
  // Search a seeded stream for m = 4 families with a pair covering m-1
  // groups, and check the stripped output is a set family of (m, n-1, k-1).
  Rng rng(77);
  int found = 0;
  for (int t = 0; t < 20000 && found < 20; ++t) {
    const auto c = random_family(rng, 4, uniform_int(rng, 4, 7));
    if (!condition_holds(c)) continue;
    const Family f = c.to_family();
    const auto q = column_masks(f);
    for (int a = 0; a < f.n; ++a)
      for (int b = a + 1; b < f.n; ++b) {
        if (std::popcount(q[static_cast<std::size_t>(a)] | q[static_cast<std::size_t>(b)]) != 3) continue;
        const auto res = merge_multiset(f, a, b);
        EXPECT_TRUE(res.merged.is_multiset() || (q[static_cast<std::size_t>(a)] & q[static_cast<std::size_t>(b)]) == 0);
        EXPECT_EQ(res.stripped.family.n, f.n - 1);
        EXPECT_LE(res.stripped.family.k, f.k - 1);
        if (res.stripped.common.size() == 1) {
          ++found;
          EXPECT_EQ(params_of(res.stripped.family), (Params{f.m(), f.n - 1, f.k - 1}));
          EXPECT_FALSE(res.stripped.family.is_multiset());
        }
        a = b = f.n;  // one pair per family
      }
  }
  EXPECT_EQ(found, 20);
}

TEST(MergeMultiset, RejectsFullCover) {
  EXPECT_THROW(merge_multiset(singletons, 0, 1), Error);
}

TEST(Audit, Examples) {
  const auto tri = audit(triangle);
  EXPECT_FALSE(tri.conditions[0].holds);
  EXPECT_EQ(tri.conditions[0].groups, (std::vector<int>{0, 1}));
  ASSERT_FALSE(tri.proposals.empty());
  EXPECT_EQ(tri.proposals.front().kind, StepKind::split_tight);

  const auto two = audit(singletons);
  EXPECT_TRUE(two.conditions[0].holds);
  EXPECT_TRUE(two.conditions[1].holds);
  EXPECT_TRUE(two.conditions[2].holds);

  // Containment already breaks the pair bound, so audit refuses it and
  // (iv) holds on everything it accepts.
  EXPECT_TRUE(tri.conditions[3].holds);
  EXPECT_THROW(audit(make_tform(4, {{0, 1}, {0, 1, 2}, {3, 4, 5}})), InfeasibleError);
}

TEST(Reduce, Examples) {
  Family one;
  one.k = 3;
  one.n = 0;
  one.sets = {{}};
  one.mult = {3};
  const auto a = reduce_to_irreducible(one);
  EXPECT_TRUE(a.steps.empty());
  ASSERT_EQ(a.leaves.size(), 1u);
  EXPECT_EQ(exact_identity_test(a.leaves[0]).det.to_string(), "1");

  const auto b = reduce_to_irreducible(triangle);
  ASSERT_FALSE(b.steps.empty());
  EXPECT_EQ(b.steps.front().kind, StepKind::split_tight);
  EXPECT_EQ(b.leaves.size(), 2u);

  const auto c = reduce_to_irreducible(singletons);
  EXPECT_TRUE(c.steps.empty());
  EXPECT_EQ(c.leaves, (std::vector<Family>{singletons}));
}

TEST(Reduce, RejectsInfeasible) {
  EXPECT_THROW(reduce_to_irreducible(make_tform(2, {{0}, {0}})), InfeasibleError);
}

TEST(Reduce, EveryEnumeratedFamilyReducesSoundly) {
  // Every step must shrink (m, n, k), keep the condition, and end at leaves
  // where (i)-(iii) no longer apply. Runs across the whole small grid.
  IdentityOptions opt;
  opt.seed = 13;
  std::size_t families = 0;
  for (int k = 2; k <= 5; ++k)
    for (int m = 2; m <= std::min(4, k); ++m)
      for (const auto& c : enumerate_families(m, k, true)) {
        ++families;
        const Family f = c.to_family();
        const auto v = reduce_and_decide(f, opt);
        for (const auto& step : v.trace.steps)
          for (const auto& after : step.after) ASSERT_LT(after, step.before);
        for (const auto& leaf : v.trace.leaves) {
          ASSERT_TRUE(check_condition(leaf).holds);
          if (leaf.m() < 2) continue;
          const auto a = audit(leaf);
          ASSERT_TRUE(a.conditions[0].holds && a.conditions[1].holds && a.conditions[2].holds);
        }
        ASSERT_EQ(v.status, ReducedStatus::nonzero);
      }
  EXPECT_GT(families, 400u);
}

TEST(CrossCheck, SmallRunPasses) {
  CrossCheckOptions o;
  o.samples = 60;
  o.seed = 2;
  const auto r = reduction_cross_check(o);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.strip_instances, 60u);
  EXPECT_GT(r.strip_reduced_nonzero, 30u);
  EXPECT_GT(r.disjoint_reduced_nonzero, 30u);
  EXPECT_GT(r.multiset_reduced_nonzero, 30u);
}
