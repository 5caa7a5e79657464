#include "gmmds/reduce.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <iterator>

#include "gmmds/random.hpp"

namespace gmmds {

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::strip_common: return "strip_common";
    case StepKind::split_tight: return "split_tight";
    case StepKind::merge_disjoint: return "merge_disjoint";
    case StepKind::merge_multiset: return "merge_multiset";
  }
  return "?";
}

const char* to_string(ReducedStatus s) {
  switch (s) {
    case ReducedStatus::nonzero: return "nonzero";
    case ReducedStatus::inconclusive: return "inconclusive";
    case ReducedStatus::counterexample_leaf: return "counterexample_leaf";
  }
  return "?";
}

Params params_of(const Family& fam) { return {fam.m(), fam.n, fam.k}; }

namespace {

// std::set_intersection / set_difference on sorted ranges already follow
// multiset semantics (min / saturating difference of multiplicities).
std::vector<int> multiset_cap(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> multiset_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> cap_of(const Family& fam, std::span<const int> groups) {
  std::vector<int> acc = fam.sets[static_cast<std::size_t>(groups.front())];
  for (std::size_t g = 1; g < groups.size(); ++g) acc = multiset_cap(acc, fam.sets[static_cast<std::size_t>(groups[g])]);
  return acc;
}

void require_tform(const Family& fam, const char* op) {
  validate(fam);
  if (!fam.tform()) throw Error(std::string(op) + ": family must satisfy |S_i| + r_i = k (normalize first)");
}

std::vector<int> all_groups(int m) {
  std::vector<int> g(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = i;
  return g;
}

// Replaces column j2 by j1 (as a set substitution or a multiset sum) and
// removes column j2 from the universe.
MergeResult substitute_column(const Family& fam, int j1, int j2) {
  MergeResult out;
  out.column_map.resize(static_cast<std::size_t>(fam.n));
  for (int c = 0; c < fam.n; ++c) out.column_map[static_cast<std::size_t>(c)] = c < j2 ? c : c - 1;
  out.column_map[static_cast<std::size_t>(j2)] = out.column_map[static_cast<std::size_t>(j1)];
  out.family = fam;
  out.family.n = fam.n - 1;
  for (auto& s : out.family.sets) {
    for (int& c : s) c = out.column_map[static_cast<std::size_t>(c)];
    std::sort(s.begin(), s.end());
  }
  return out;
}

std::vector<int> q_of(const Family& fam, int j) {
  std::vector<int> q;
  for (int t = 0; t < fam.m(); ++t)
    if (fam.mu(t, j) > 0) q.push_back(t);
  return q;
}

void check_columns(const Family& fam, int j1, int j2) {
  if (j1 < 0 || j2 < 0 || j1 >= fam.n || j2 >= fam.n) throw Error("merge column out of range");
  if (j1 == j2) throw Error("merge needs two distinct columns");
}

std::string show(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + 1);
  return s + "}";
}

}  // namespace

StripResult strip_common(const Family& fam, int excluded) {
  require_tform(fam, "strip_common");
  if (fam.m() < 2) throw Error("strip_common needs at least two groups");
  if (excluded < 0 || excluded >= fam.m()) throw Error("excluded group out of range");
  const auto everyone = all_groups(fam.m());
  if (!cap_of(fam, everyone).empty()) throw Error("strip_common: the intersection of all sets must be empty");

  std::vector<int> others;
  for (int i : everyone)
    if (i != excluded) others.push_back(i);

  StripResult out;
  out.common = cap_of(fam, others);
  out.noop = out.common.empty();
  out.family = fam;
  if (out.noop) return out;

  const int removed = static_cast<int>(out.common.size());
  out.family.k = fam.k - removed;
  for (int i = 0; i < fam.m(); ++i) {
    auto& s = out.family.sets[static_cast<std::size_t>(i)];
    s = multiset_minus(s, out.common);
    out.family.mult[static_cast<std::size_t>(i)] = out.family.k - static_cast<int>(s.size());
  }
  return out;
}

SplitResult split_tight(const Family& fam, std::span<const int> groups) {
  require_tform(fam, "split_tight");
  std::vector<int> in(groups.begin(), groups.end());
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  const int m = fam.m();
  if (in.size() < 2 || static_cast<int>(in.size()) > m - 1)
    throw Error("split_tight needs 2 <= |I| <= m-1, got |I| = " + std::to_string(in.size()));
  for (int i : in)
    if (i < 0 || i >= m) throw Error("split_tight: group index out of range");

  SplitResult out;
  out.common = cap_of(fam, in);
  int rows = 0;
  for (int i : in) rows += fam.k - fam.set_size(i);
  const int lhs = fam.k - static_cast<int>(out.common.size());
  if (lhs != rows)
    throw Error("split_tight: I = " + show(in) + " is not tight (" + std::to_string(lhs) + " vs " + std::to_string(rows) + ")");

  const int kp = lhs;
  out.part_i.k = kp;
  out.part_i.n = fam.n;
  for (int i : in) {
    auto s = multiset_minus(fam.sets[static_cast<std::size_t>(i)], out.common);
    out.part_i.mult.push_back(kp - static_cast<int>(s.size()));
    out.part_i.sets.push_back(std::move(s));
  }

  out.part_j.k = fam.k;
  out.part_j.n = fam.n;
  out.part_j.sets.push_back(out.common);
  out.part_j.mult.push_back(fam.k - static_cast<int>(out.common.size()));
  for (int i = 0; i < m; ++i) {
    if (std::binary_search(in.begin(), in.end(), i)) continue;
    out.part_j.sets.push_back(fam.sets[static_cast<std::size_t>(i)]);
    out.part_j.mult.push_back(fam.mult[static_cast<std::size_t>(i)]);
  }

  // Both halves must again be square T instances.
  const int ni = out.part_i.m(), nj = out.part_j.m();
  if (out.part_i.total_size() != (ni - 1) * kp || out.part_j.total_size() != (nj - 1) * fam.k)
    throw Error("split_tight: internal bookkeeping identity failed");
  return out;
}

MergeResult merge_disjoint(const Family& fam, int j1, int j2) {
  require_tform(fam, "merge_disjoint");
  if (fam.is_multiset()) throw Error("merge_disjoint expects a set family");
  check_columns(fam, j1, j2);
  const auto q1 = q_of(fam, j1), q2 = q_of(fam, j2);
  std::vector<int> both, either;
  std::set_intersection(q1.begin(), q1.end(), q2.begin(), q2.end(), std::back_inserter(both));
  std::set_union(q1.begin(), q1.end(), q2.begin(), q2.end(), std::back_inserter(either));
  if (!both.empty()) throw Error("merge_disjoint: Q_j1 = " + show(q1) + " and Q_j2 = " + show(q2) + " overlap");
  if (static_cast<int>(either.size()) == fam.m())
    throw Error("merge_disjoint: Q_j1 = " + show(q1) + " and Q_j2 = " + show(q2) + " cover every group");
  return substitute_column(fam, j1, j2);
}

MultisetMergeResult merge_multiset(const Family& fam, int j1, int j2) {
  require_tform(fam, "merge_multiset");
  if (fam.is_multiset()) throw Error("merge_multiset expects a set family");
  check_columns(fam, j1, j2);
  const auto q1 = q_of(fam, j1), q2 = q_of(fam, j2);
  std::vector<int> either;
  std::set_union(q1.begin(), q1.end(), q2.begin(), q2.end(), std::back_inserter(either));
  if (static_cast<int>(either.size()) != fam.m() - 1)
    throw Error("merge_multiset: |Q_j1 u Q_j2| = " + std::to_string(either.size()) + ", need m-1 = " +
                std::to_string(fam.m() - 1));

  MultisetMergeResult out;
  auto merged = substitute_column(fam, j1, j2);
  out.merged = std::move(merged.family);
  out.column_map = std::move(merged.column_map);
  for (int i = 0; i < fam.m(); ++i)
    if (!std::binary_search(either.begin(), either.end(), i)) out.excluded = i;
  out.stripped = strip_common(out.merged, out.excluded);
  return out;
}

// ---------------------------------------------------------------- audit

namespace {

struct Incidence {
  std::vector<std::uint32_t> q;  // per column
  std::uint32_t full = 0;
};

Incidence incidence(const Family& fam) {
  Incidence inc;
  inc.q = column_masks(fam);
  inc.full = fam.m() == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << fam.m()) - 1;
  return inc;
}

std::vector<int> groups_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

// Lexicographically smallest I with 2 <= |I| <= m-1 and equality in the
// support condition, if any.
std::optional<std::vector<int>> find_tight(const Family& fam, const Incidence& inc) {
  const int m = fam.m();
  if (m > 24) throw Error("audit enumerates 2^m subsets; m too large");
  std::optional<std::vector<int>> best;
  for (std::uint32_t mask = 1; mask < inc.full; ++mask) {
    const int size = std::popcount(mask);
    if (size < 2) continue;
    int cap = 0;
    for (auto q : inc.q) cap += (q & mask) == mask;
    int rows = 0;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) rows += fam.k - fam.set_size(i);
    if (fam.k - 1 - cap >= rows) continue;
    auto g = groups_of(mask);
    if (!best || g < *best) best = std::move(g);
  }
  return best;
}

std::optional<std::pair<int, int>> find_disjoint_pair(const Incidence& inc) {
  for (std::size_t a = 0; a < inc.q.size(); ++a)
    for (std::size_t b = a + 1; b < inc.q.size(); ++b)
      if ((inc.q[a] & inc.q[b]) == 0 && (inc.q[a] | inc.q[b]) != inc.full)
        return std::pair{static_cast<int>(a), static_cast<int>(b)};
  return std::nullopt;
}

std::optional<std::pair<int, int>> find_near_cover_pair(const Incidence& inc, int m) {
  for (std::size_t a = 0; a < inc.q.size(); ++a)
    for (std::size_t b = a + 1; b < inc.q.size(); ++b)
      if (std::popcount(inc.q[a] | inc.q[b]) == m - 1) return std::pair{static_cast<int>(a), static_cast<int>(b)};
  return std::nullopt;
}

std::vector<Params> after_params(StepKind kind, const Family& fam, const std::vector<int>& groups,
                                 const std::vector<int>& columns) {
  switch (kind) {
    case StepKind::split_tight: {
      auto s = split_tight(fam, groups);
      return {params_of(s.part_i), params_of(s.part_j)};
    }
    case StepKind::merge_disjoint: return {params_of(merge_disjoint(fam, columns[0], columns[1]).family)};
    case StepKind::merge_multiset:
      return {params_of(merge_multiset(fam, columns[0], columns[1]).stripped.family)};
    case StepKind::strip_common: return {params_of(strip_common(fam, groups[0]).family)};
  }
  return {};
}

ReductionStep make_step(StepKind kind, const Family& fam, std::vector<int> groups, std::vector<int> columns) {
  ReductionStep step;
  step.kind = kind;
  step.before = params_of(fam);
  step.after = after_params(kind, fam, groups, columns);
  step.groups = std::move(groups);
  step.columns = std::move(columns);
  return step;
}

}  // namespace

AuditReport audit(const Family& fam) {
  require_tform(fam, "audit");
  if (fam.is_multiset()) throw Error("audit expects a set family");
  auto verdict = check_condition(fam);
  if (!verdict.holds) throw InfeasibleError(std::move(verdict));

  const int m = fam.m();
  const Incidence inc = incidence(fam);
  AuditReport rep;
  auto& c = rep.conditions;

  if (auto tight = find_tight(fam, inc)) {
    c[0] = {false, *tight, {}};
    rep.proposals.push_back(make_step(StepKind::split_tight, fam, *tight, {}));
  }
  if (auto pair = find_disjoint_pair(inc)) {
    c[1] = {false, {}, {pair->first, pair->second}};
    rep.proposals.push_back(make_step(StepKind::merge_disjoint, fam, {}, {pair->first, pair->second}));
  }
  if (auto pair = find_near_cover_pair(inc, m)) {
    c[2] = {false, {}, {pair->first, pair->second}};
    rep.proposals.push_back(make_step(StepKind::merge_multiset, fam, {}, {pair->first, pair->second}));
  }
  // (iv) no S_i contained in another S_j
  for (int i = 0; i < m && c[3].holds; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto& a = fam.sets[static_cast<std::size_t>(i)];
      const auto& b = fam.sets[static_cast<std::size_t>(j)];
      if (std::includes(b.begin(), b.end(), a.begin(), a.end())) {
        c[3] = {false, {i, j}, {}};
        break;
      }
    }
  for (std::size_t j = 0; j < inc.q.size(); ++j) {
    const int size = std::popcount(inc.q[j]);
    // (v) |Q_j| <= m-3
    if (c[4].holds && size > m - 3) c[4] = {false, {}, {static_cast<int>(j)}};
    // (vi) |Q_j| (k-1) >= n-1 and |Q_j| >= 2
    if (c[5].holds && (size * (fam.k - 1) < fam.n - 1 || size < 2)) c[5] = {false, {}, {static_cast<int>(j)}};
  }
  // (vii) some |Q_j| >= 3
  c[6].holds = std::any_of(inc.q.begin(), inc.q.end(), [](auto q) { return std::popcount(q) >= 3; });
  // (viii) |Q_i| = 2 => Q_i meets every Q_j
  for (std::size_t a = 0; a < inc.q.size() && c[7].holds; ++a) {
    if (std::popcount(inc.q[a]) != 2) continue;
    for (std::size_t b = 0; b < inc.q.size(); ++b)
      if ((inc.q[a] & inc.q[b]) == 0) {
        c[7] = {false, {}, {static_cast<int>(a), static_cast<int>(b)}};
        break;
      }
  }
  return rep;
}

// ---------------------------------------------------------------- driver

namespace {

// Drops unused columns and groups with no rows in T (r_i == 0); neither
// changes T.
Family tidy(const Family& fam) {
  Family out = drop_unused_columns(fam).family;
  Family kept;
  kept.k = out.k;
  kept.n = out.n;
  for (int i = 0; i < out.m(); ++i) {
    const int r = out.mult[static_cast<std::size_t>(i)];
    if (r < 0) throw Error("internal: reduction produced a block with negative size");
    if (r == 0) continue;
    kept.sets.push_back(out.sets[static_cast<std::size_t>(i)]);
    kept.mult.push_back(r);
  }
  if (kept.m() != out.m()) kept = drop_unused_columns(kept).family;
  return kept;
}

void require_condition(const Family& fam, const char* where) {
  if (!check_condition(fam).holds)
    throw Error(std::string("internal: ") + where + " produced a family violating the support condition");
}

void reduce_rec(const Family& raw, ReductionTrace& trace) {
  const Family fam = tidy(raw);
  if (fam.m() <= 1) {
    trace.leaves.push_back(fam);
    return;
  }
  const Incidence inc = incidence(fam);
  std::vector<Family> children;
  if (auto tight = find_tight(fam, inc)) {
    auto split = split_tight(fam, *tight);
    trace.steps.push_back(make_step(StepKind::split_tight, fam, *tight, {}));
    children = {std::move(split.part_i), std::move(split.part_j)};
  } else if (auto pair = find_disjoint_pair(inc)) {
    trace.steps.push_back(make_step(StepKind::merge_disjoint, fam, {}, {pair->first, pair->second}));
    children = {merge_disjoint(fam, pair->first, pair->second).family};
  } else if (auto near = find_near_cover_pair(inc, fam.m())) {
    trace.steps.push_back(make_step(StepKind::merge_multiset, fam, {}, {near->first, near->second}));
    children = {merge_multiset(fam, near->first, near->second).stripped.family};
  } else {
    trace.leaves.push_back(fam);
    return;
  }
  const Params before = params_of(fam);
  for (const auto& child : children) {
    require_condition(child, to_string(trace.steps.back().kind));
    if (!(params_of(tidy(child)) < before)) throw Error("internal: reduction step did not shrink (m, n, k)");
    reduce_rec(child, trace);
  }
}

}  // namespace

ReductionTrace reduce_to_irreducible(const Family& fam) {
  require_tform(fam, "reduce");
  if (fam.is_multiset()) throw Error("reduce expects a set family");
  auto verdict = check_condition(fam);
  if (!verdict.holds) throw InfeasibleError(std::move(verdict));
  ReductionTrace trace;
  reduce_rec(fam, trace);
  return trace;
}

ReducedVerdict reduce_and_decide(const Family& fam, const IdentityOptions& opt) {
  ReducedVerdict out;
  out.trace = reduce_to_irreducible(fam);
  bool all_nonzero = true;
  bool any_zero = false;
  for (std::size_t i = 0; i < out.trace.leaves.size(); ++i) {
    IdentityOptions leaf_opt = opt;
    leaf_opt.seed = derive_seed(opt.seed, i);
    auto v = decide_identity(out.trace.leaves[i], leaf_opt);
    all_nonzero &= v.status == IdentityStatus::nonzero;
    any_zero |= v.status == IdentityStatus::proven_zero;
    out.leaf_verdicts.push_back(std::move(v));
  }
  out.status = all_nonzero ? ReducedStatus::nonzero
               : any_zero  ? ReducedStatus::counterexample_leaf
                           : ReducedStatus::inconclusive;
  return out;
}

}  // namespace gmmds
