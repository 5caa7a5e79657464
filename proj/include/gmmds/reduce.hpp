#pragma once

#include <array>
#include <compare>
#include <span>
#include <string>
#include <vector>

#include "gmmds/family.hpp"
#include "gmmds/tmatrix.hpp"

namespace gmmds {

enum class StepKind { strip_common, split_tight, merge_disjoint, merge_multiset };
const char* to_string(StepKind k);

/// (m, n, k), compared lexicographically.
struct Params {
  int m = 0;
  int n = 0;
  int k = 0;
  auto operator<=>(const Params&) const = default;
};
Params params_of(const Family& fam);

struct StripResult {
  Family family;
  /// S_0 as a sorted multiset of columns.
  std::vector<int> common;
  bool noop = false;
};

/// Removes S_0 = cap_{i != excluded} S_i from every set, k' = k - |S_0|.
/// Requires T form and an empty total (multiset) intersection.
StripResult strip_common(const Family& fam, int excluded);

struct SplitResult {
  /// (S_i - S_0) for i in I at k' = k - |S_0|.
  Family part_i;
  /// S_0 followed by S_i for i not in I, at k.
  Family part_j;
  std::vector<int> common;
};

/// Requires 2 <= |I| <= m-1 and equality k - |cap_I S_i| = sum_I (k - |S_i|).
SplitResult split_tight(const Family& fam, std::span<const int> groups);

struct MergeResult {
  Family family;
  /// old column -> new column; j2 maps to j1's new index.
  std::vector<int> column_map;
};

/// Replaces column j2 by j1. Requires Q_j1, Q_j2 disjoint with union != [m].
MergeResult merge_disjoint(const Family& fam, int j1, int j2);

struct MultisetMergeResult {
  /// After the multiset sum, before stripping.
  Family merged;
  int excluded = -1;
  StripResult stripped;
  std::vector<int> column_map;
};

/// Requires |Q_j1 u Q_j2| = m-1. Adds a copy of j1 for every j2, then strips
/// with the group outside Q_j1 u Q_j2 excluded.
MultisetMergeResult merge_multiset(const Family& fam, int j1, int j2);

struct ReductionStep {
  StepKind kind = StepKind::split_tight;
  /// Tight set I for split_tight, {excluded} for strip_common.
  std::vector<int> groups;
  /// (j1, j2) for merges.
  std::vector<int> columns;
  Params before;
  std::vector<Params> after;
};

struct ConditionCheck {
  bool holds = true;
  std::vector<int> groups;
  std::vector<int> columns;
};

/// Minimality conditions (i)..(viii). (i)-(iii) come with reductions; the
/// rest are informational.
struct AuditReport {
  std::array<ConditionCheck, 8> conditions;
  std::vector<ReductionStep> proposals;
};

AuditReport audit(const Family& fam);

struct ReductionTrace {
  std::vector<Family> leaves;
  std::vector<ReductionStep> steps;
};

/// Applies split_tight > merge_disjoint > merge_multiset until none applies.
/// Between steps, unused columns and groups owning no rows of T are dropped.
ReductionTrace reduce_to_irreducible(const Family& fam);

enum class ReducedStatus { nonzero, inconclusive, counterexample_leaf };
const char* to_string(ReducedStatus s);

struct ReducedVerdict {
  ReductionTrace trace;
  std::vector<IdentityVerdict> leaf_verdicts;
  ReducedStatus status = ReducedStatus::inconclusive;
};

/// Reduces, then decides every leaf. All leaves nonzero => root nonzero.
ReducedVerdict reduce_and_decide(const Family& fam, const IdentityOptions& opt);

}  // namespace gmmds
