#include "gmmds/family.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace gmmds {

int Family::total_size() const noexcept {
  int s = 0;
  for (const auto& set : sets) s += static_cast<int>(set.size());
  return s;
}

bool Family::is_multiset() const noexcept {
  for (const auto& set : sets)
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) return true;
  return false;
}

bool Family::tform() const noexcept {
  if (mult.size() != sets.size()) return false;
  for (int i = 0; i < m(); ++i)
    if (set_size(i) + mult[static_cast<std::size_t>(i)] != k) return false;
  return true;
}

int Family::mu(int i, int j) const noexcept {
  const auto& s = sets[static_cast<std::size_t>(i)];
  const auto [lo, hi] = std::equal_range(s.begin(), s.end(), j);
  return static_cast<int>(hi - lo);
}

Family make_tform(int k, std::vector<std::vector<int>> sets, int n) {
  Family fam;
  fam.k = k;
  int max_col = -1;
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    if (!s.empty()) max_col = std::max(max_col, s.back());
    fam.mult.push_back(k - static_cast<int>(s.size()));
  }
  fam.n = n < 0 ? max_col + 1 : n;
  fam.sets = std::move(sets);
  return fam;
}

void validate(const Family& fam) {
  if (fam.k < 0) throw Error("k must be non-negative");
  if (fam.n < 0) throw Error("n must be non-negative");
  if (fam.mult.size() != fam.sets.size())
    throw Error("expected " + std::to_string(fam.sets.size()) + " multiplicities, got " +
                std::to_string(fam.mult.size()));
  for (std::size_t i = 0; i < fam.sets.size(); ++i) {
    const auto& s = fam.sets[i];
    if (!std::is_sorted(s.begin(), s.end())) throw Error("set " + std::to_string(i + 1) + " is not sorted");
    for (int j : s)
      if (j < 0 || j >= fam.n)
        throw Error("set " + std::to_string(i + 1) + " mentions column " + std::to_string(j + 1) +
                    " outside [1, " + std::to_string(fam.n) + "]");
  }
  const int total = std::accumulate(fam.mult.begin(), fam.mult.end(), 0);
  if (total != fam.k)
    throw Error("multiplicities sum to " + std::to_string(total) + " but k = " + std::to_string(fam.k));
}

void validate_support(const Family& fam) {
  validate(fam);
  if (fam.sets.empty()) throw Error("family has no sets");
  for (std::size_t i = 0; i < fam.sets.size(); ++i) {
    if (fam.mult[i] < 1) throw Error("multiplicity of set " + std::to_string(i + 1) + " must be positive");
  }
  if (fam.is_multiset()) throw Error("support sets must not repeat columns (use msets for multisets)");
}

int intersection_size(const Family& fam, std::span<const int> groups) {
  if (groups.empty()) return 0;
  // Merge-walk the first set against the rest.
  const auto& first = fam.sets[static_cast<std::size_t>(groups.front())];
  int total = 0;
  for (std::size_t a = 0; a < first.size();) {
    const int col = first[a];
    std::size_t b = a;
    while (b < first.size() && first[b] == col) ++b;
    int mn = static_cast<int>(b - a);
    for (std::size_t g = 1; g < groups.size() && mn > 0; ++g) mn = std::min(mn, fam.mu(groups[g], col));
    total += mn;
    a = b;
  }
  return total;
}

namespace {

std::vector<int> bits_of(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

}  // namespace

ConditionVerdict check_condition(const Family& fam) {
  const int m = fam.m();
  if (m > 24) throw Error("check_condition enumerates 2^m subsets; m = " + std::to_string(m) + " is too large");

  // mu table, column-major: mu[j * m + i]
  std::vector<int> mu(static_cast<std::size_t>(fam.n) * static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i)
    for (int j : fam.sets[static_cast<std::size_t>(i)]) ++mu[static_cast<std::size_t>(j * m + i)];

  ConditionVerdict out;
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    int lhs = fam.k;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) lhs -= fam.mult[static_cast<std::size_t>(i)];
    int rhs = 0;
    for (int j = 0; j < fam.n; ++j) {
      int mn = INT32_MAX;
      for (int i = 0; i < m && mn > 0; ++i)
        if (mask >> i & 1) mn = std::min(mn, mu[static_cast<std::size_t>(j * m + i)]);
      rhs += mn;
    }
    if (lhs >= rhs) continue;
    auto groups = bits_of(mask);
    if (out.holds || groups < out.witness) {
      out.holds = false;
      out.witness = std::move(groups);
      out.lhs = lhs;
      out.rhs = rhs;
    }
  }
  return out;
}

InfeasibleError::InfeasibleError(ConditionVerdict v)
    : Error([&] {
        std::string s = "support condition violated at I = {";
        for (std::size_t i = 0; i < v.witness.size(); ++i) s += (i ? "," : "") + std::to_string(v.witness[i] + 1);
        return s + "}: " + std::to_string(v.lhs) + " < " + std::to_string(v.rhs);
      }()),
      verdict_(std::move(v)) {}

Family normalize(const Family& fam) {
  validate(fam);
  auto verdict = check_condition(fam);
  if (!verdict.holds) throw InfeasibleError(std::move(verdict));
  Family out = fam;
  int next = fam.n;
  for (int i = 0; i < fam.m(); ++i) {
    const int pad = fam.k - fam.mult[static_cast<std::size_t>(i)] - fam.set_size(i);
    auto& s = out.sets[static_cast<std::size_t>(i)];
    for (int t = 0; t < pad; ++t) s.push_back(next++);
  }
  out.n = next;
  return out;
}

bool is_normalized(const Family& fam) noexcept {
  if (!fam.tform()) return false;
  return std::all_of(fam.mult.begin(), fam.mult.end(), [](int r) { return r >= 0; });
}

QDual q_dual(const Family& fam) {
  if (fam.is_multiset()) throw Error("Q-duality is defined for set families only");
  QDual q(static_cast<std::size_t>(fam.n));
  for (int t = 0; t < fam.m(); ++t)
    for (int j : fam.sets[static_cast<std::size_t>(t)]) q[static_cast<std::size_t>(j)].push_back(t);
  return q;
}

Family from_q_dual(int k, std::vector<int> mult, const QDual& q) {
  Family fam;
  fam.k = k;
  fam.n = static_cast<int>(q.size());
  fam.sets.resize(mult.size());
  fam.mult = std::move(mult);
  for (std::size_t j = 0; j < q.size(); ++j)
    for (int t : q[j]) {
      if (t < 0 || static_cast<std::size_t>(t) >= fam.sets.size()) throw Error("Q set names an unknown group");
      fam.sets[static_cast<std::size_t>(t)].push_back(static_cast<int>(j));
    }
  return fam;
}

std::vector<std::vector<int>> ungroup(const Family& fam) {
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < fam.m(); ++i)
    for (int t = 0; t < fam.mult[static_cast<std::size_t>(i)]; ++t) rows.push_back(fam.sets[static_cast<std::size_t>(i)]);
  return rows;
}

Grouping group_rows(int k, int n, const std::vector<std::vector<int>>& rowsets) {
  if (static_cast<int>(rowsets.size()) != k)
    throw Error("expected " + std::to_string(k) + " row sets, got " + std::to_string(rowsets.size()));
  Grouping g;
  g.family.k = k;
  g.family.n = n;
  std::map<std::vector<int>, int> index;
  for (const auto& raw : rowsets) {
    std::vector<int> s = raw;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto [it, inserted] = index.try_emplace(s, g.family.m());
    if (inserted) {
      g.family.sets.push_back(s);
      g.family.mult.push_back(0);
    }
    g.row_group.push_back(it->second);
    g.row_offset.push_back(g.family.mult[static_cast<std::size_t>(it->second)]++);
  }
  validate(g.family);
  return g;
}

ColumnMapped drop_unused_columns(const Family& fam) {
  ColumnMapped out;
  std::vector<bool> used(static_cast<std::size_t>(fam.n), false);
  for (const auto& s : fam.sets)
    for (int j : s) used[static_cast<std::size_t>(j)] = true;
  out.column_map.assign(static_cast<std::size_t>(fam.n), -1);
  int next = 0;
  for (int j = 0; j < fam.n; ++j)
    if (used[static_cast<std::size_t>(j)]) out.column_map[static_cast<std::size_t>(j)] = next++;
  out.family = fam;
  out.family.n = next;
  for (auto& s : out.family.sets)
    for (int& j : s) j = out.column_map[static_cast<std::size_t>(j)];
  return out;
}

Family relabel_columns(const Family& fam, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != fam.n) throw Error("column permutation has the wrong length");
  Family out = fam;
  for (auto& s : out.sets) {
    for (int& j : s) j = perm[static_cast<std::size_t>(j)];
    std::sort(s.begin(), s.end());
  }
  return out;
}

Family permute_groups(const Family& fam, std::span<const int> order) {
  if (static_cast<int>(order.size()) != fam.m()) throw Error("group permutation has the wrong length");
  Family out = fam;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.sets[i] = fam.sets[static_cast<std::size_t>(order[i])];
    out.mult[i] = fam.mult[static_cast<std::size_t>(order[i])];
  }
  return out;
}

std::vector<std::uint32_t> column_masks(const Family& fam) {
  if (fam.m() > 32) throw Error("column masks support at most 32 groups");
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(fam.n), 0);
  for (int t = 0; t < fam.m(); ++t)
    for (int j : fam.sets[static_cast<std::size_t>(t)]) masks[static_cast<std::size_t>(j)] |= std::uint32_t{1} << t;
  return masks;
}

}  // namespace gmmds
