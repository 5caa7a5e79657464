#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmmds/field.hpp"

namespace gmmds {

/// Grouped zero pattern S_1..S_m with row multiplicities r_1..r_m.
///
/// Columns are 0-based. Each set is kept sorted; a repeated column makes it a
/// multiset and contributes a repeated root to the row polynomial. Families
/// arising from the reductions may carry r_i <= 0 (a block with no rows);
/// the row count of block i is always k - |S_i| for families in T form.
struct Family {
  int k = 0;
  int n = 0;
  std::vector<std::vector<int>> sets;
  std::vector<int> mult;

  int m() const noexcept { return static_cast<int>(sets.size()); }
  int set_size(int i) const noexcept { return static_cast<int>(sets[static_cast<std::size_t>(i)].size()); }
  int total_size() const noexcept;
  bool is_multiset() const noexcept;
  /// |S_i| + r_i == k for every group, hence sum |S_i| = (m-1)k.
  bool tform() const noexcept;
  /// Multiplicity of column j in S_i.
  int mu(int i, int j) const noexcept;

  bool operator==(const Family&) const = default;
};

/// Family with r_i = k - |S_i|; sets are sorted, n inferred when negative.
Family make_tform(int k, std::vector<std::vector<int>> sets, int n = -1);

/// Structural checks (column range, sortedness, sum r_i = k). Throws Error.
void validate(const Family& fam);
/// validate() plus r_i >= 1 and duplicate-free sets.
void validate_support(const Family& fam);

/// Multiset intersection size: sum_j min_{i in groups} mu_i(j).
int intersection_size(const Family& fam, std::span<const int> groups);

struct ConditionVerdict {
  bool holds = true;
  /// Lexicographically smallest violating group set, empty when holds.
  std::vector<int> witness;
  /// k - sum_{i in witness} r_i
  int lhs = 0;
  /// |intersection of the witness sets|
  int rhs = 0;
};

/// Checks k - sum_{i in I} r_i >= |cap_{i in I} S_i| for every nonempty I.
ConditionVerdict check_condition(const Family& fam);

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(ConditionVerdict v);
  const ConditionVerdict& verdict() const noexcept { return verdict_; }

 private:
  ConditionVerdict verdict_;
};

/// Pads every S_i with fresh columns until |S_i| = k - r_i. Fresh columns are
/// handed out in ascending order, lowest to group 1. Throws InfeasibleError.
Family normalize(const Family& fam);

/// T form with no negative block sizes; what build_t accepts.
bool is_normalized(const Family& fam) noexcept;

/// Q_j = { t : j in S_t }, one entry per column.
using QDual = std::vector<std::vector<int>>;
QDual q_dual(const Family& fam);
Family from_q_dual(int k, std::vector<int> mult, const QDual& q);

/// Row-level sets, S_i repeated r_i times in block order.
std::vector<std::vector<int>> ungroup(const Family& fam);

struct Grouping {
  Family family;
  /// For each input row: its group and its index within the group.
  std::vector<int> row_group;
  std::vector<int> row_offset;
};

/// Groups equal row sets in order of first appearance.
Grouping group_rows(int k, int n, const std::vector<std::vector<int>>& rowsets);

struct ColumnMapped {
  Family family;
  /// old column -> new column, -1 when dropped.
  std::vector<int> column_map;
};

/// Drops columns no set mentions and renumbers the rest in ascending order.
ColumnMapped drop_unused_columns(const Family& fam);

/// New column of old column j is perm[j]; perm must be a permutation of [n].
Family relabel_columns(const Family& fam, std::span<const int> perm);
/// Group i of the result is group order[i] of the input.
Family permute_groups(const Family& fam, std::span<const int> order);

/// Column incidence bitmasks (bit t set iff j in S_t). Set families, m <= 32.
std::vector<std::uint32_t> column_masks(const Family& fam);

}  // namespace gmmds
