#include "gmmds/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>
#include <optional>
#include <set>

#include "gmmds/reduce.hpp"
#include "parallel.hpp"

namespace gmmds {

Family CanonicalFamily::to_family() const {
  Family fam;
  fam.k = k;
  fam.n = n();
  fam.mult = mult;
  fam.sets.resize(mult.size());
  for (int j = 0; j < n(); ++j)
    for (int t = 0; t < m(); ++t)
      if (columns[static_cast<std::size_t>(j)] >> t & 1) fam.sets[static_cast<std::size_t>(t)].push_back(j);
  return fam;
}

namespace {

std::uint32_t apply_perm(std::uint32_t mask, const std::vector<int>& perm) {
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (mask >> i & 1) out |= std::uint32_t{1} << perm[i];
  return out;
}

// Every permutation of groups that maps each run of equal multiplicities
// onto itself. mult must already be sorted.
std::vector<std::vector<int>> stabilizer(const std::vector<int>& mult) {
  std::vector<std::pair<int, int>> runs;
  for (int i = 0; i < static_cast<int>(mult.size());) {
    int j = i;
    while (j < static_cast<int>(mult.size()) && mult[static_cast<std::size_t>(j)] == mult[static_cast<std::size_t>(i)]) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  std::vector<int> perm(mult.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  // Odometer over the runs, each stepping through next_permutation.
  while (true) {
    out.push_back(perm);
    std::size_t r = 0;
    for (; r < runs.size(); ++r) {
      auto first = perm.begin() + runs[r].first, last = perm.begin() + runs[r].second;
      if (std::next_permutation(first, last)) break;  // wrapped runs are back in sorted order
    }
    if (r == runs.size()) break;
  }
  return out;
}

struct PermTables {
  // mapped[p][mask] for every non-identity permutation p.
  std::vector<std::vector<std::uint32_t>> mapped;
};

PermTables perm_tables(const std::vector<int>& mult) {
  const auto m = mult.size();
  PermTables t;
  auto perms = stabilizer(mult);
  for (std::size_t p = 1; p < perms.size(); ++p) {
    std::vector<std::uint32_t> table(std::size_t{1} << m);
    for (std::uint32_t mask = 0; mask < table.size(); ++mask) table[mask] = apply_perm(mask, perms[p]);
    t.mapped.push_back(std::move(table));
  }
  return t;
}

// True when no permutation in the tables produces a lexicographically
// smaller sorted column list.
bool is_canonical(const std::vector<std::uint32_t>& cols, const PermTables& tables, std::vector<std::uint32_t>& scratch) {
  for (const auto& table : tables.mapped) {
    scratch.resize(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) scratch[j] = table[cols[j]];
    std::sort(scratch.begin(), scratch.end());
    if (scratch < cols) return false;
  }
  return true;
}

}  // namespace

CanonicalFamily canonical_form(int k, std::vector<int> mult, std::vector<std::uint32_t> columns) {
  const int m = static_cast<int>(mult.size());
  if (m > 10) throw Error("canonical form supports at most 10 groups");
  std::vector<int> order(mult.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return mult[static_cast<std::size_t>(a)] > mult[static_cast<std::size_t>(b)]; });
  // old group order[i] becomes group i
  std::vector<int> to_new(mult.size());
  for (int i = 0; i < m; ++i) to_new[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

  CanonicalFamily out;
  out.k = k;
  for (int i = 0; i < m; ++i) out.mult.push_back(mult[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
  for (auto& c : columns) c = apply_perm(c, to_new);
  std::sort(columns.begin(), columns.end());
  out.columns = columns;

  std::vector<std::uint32_t> scratch;
  for (const auto& perm : stabilizer(out.mult)) {
    scratch.clear();
    for (auto c : columns) scratch.push_back(apply_perm(c, perm));
    std::sort(scratch.begin(), scratch.end());
    if (scratch < out.columns) out.columns = scratch;
  }
  return out;
}

CanonicalFamily canonical_form(const Family& fam) {
  const Family tidy = drop_unused_columns(fam).family;
  return canonical_form(tidy.k, tidy.mult, column_masks(tidy));
}

bool condition_holds(const CanonicalFamily& fam) {
  const int m = fam.m();
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int lhs = fam.k;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) lhs -= fam.mult[static_cast<std::size_t>(i)];
    int cap = 0;
    for (auto q : fam.columns) cap += (q & mask) == mask;
    if (lhs < cap) return false;
  }
  return true;
}

// ---------------------------------------------------------------- enumeration

namespace {

// Non-increasing partitions of k into exactly m positive parts.
void partitions(int k, int m, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (m == 0) {
    if (k == 0) out.push_back(cur);
    return;
  }
  for (int part = std::min(max_part, k - (m - 1)); part >= 1; --part) {
    if (part * m < k) break;
    cur.push_back(part);
    partitions(k - part, m - 1, part, cur, out);
    cur.pop_back();
  }
}

struct Enumerator {
  Enumerator(int m_, int k_, bool condition_only_, const std::function<void(const CanonicalFamily&)>& sink_)
      : m(m_), k(k_), condition_only(condition_only_), sink(sink_) {}

  int m, k;
  bool condition_only;
  const std::function<void(const CanonicalFamily&)>& sink;
  std::vector<int> mult;
  std::vector<int> caps;
  PermTables tables;
  std::vector<std::uint32_t> cols;
  std::vector<std::uint32_t> scratch;
  // Condition pruning: count[I] = #columns containing I, limit[I] = k - sum_I r.
  std::vector<int> count;
  std::vector<int> limit;
  std::uint32_t full = 0;
  std::size_t emitted = 0;
  int violations = 0;
  std::uint64_t nodes = 0;
  std::size_t max_emit = SIZE_MAX;
  std::uint64_t max_nodes = UINT64_MAX;
  bool aborted = false;

  void run_partition(const std::vector<int>& r) {
    mult = r;
    caps.assign(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) caps[i] = k - r[i];
    tables = perm_tables(mult);
    full = (std::uint32_t{1} << m) - 1;
    count.assign(std::size_t{1} << m, 0);
    limit.assign(std::size_t{1} << m, 0);
    for (std::uint32_t s = 1; s <= full; ++s) {
      int l = k;
      for (int i = 0; i < m; ++i)
        if (s >> i & 1) l -= mult[static_cast<std::size_t>(i)];
      limit[s] = l;
    }
    cols.clear();
    recurse(1);
  }

  void add_column(std::uint32_t q) {
    cols.push_back(q);
    for (int i = 0; i < m; ++i)
      if (q >> i & 1) --caps[static_cast<std::size_t>(i)];
    for (std::uint32_t s = q; s; s = (s - 1) & q)
      if (++count[s] == limit[s] + 1) ++violations;
  }
  void remove_column(std::uint32_t q) {
    cols.pop_back();
    for (int i = 0; i < m; ++i)
      if (q >> i & 1) ++caps[static_cast<std::size_t>(i)];
    for (std::uint32_t s = q; s; s = (s - 1) & q)
      if (count[s]-- == limit[s] + 1) --violations;
  }

  // Columns are emitted in non-decreasing mask order; each mask is taken
  // t = 0..max times before moving on. Counts only grow, so a violated
  // subset stays violated and the branch can be cut.
  void recurse(std::uint32_t mask) {
    if (aborted || ++nodes > max_nodes || emitted > max_emit) {
      aborted = true;
      return;
    }
    if (std::all_of(caps.begin(), caps.end(), [](int c) { return c == 0; })) {
      if (is_canonical(cols, tables, scratch)) {
        ++emitted;
        sink(CanonicalFamily{k, mult, cols});
      }
      return;
    }
    if (mask > full) return;
    int max_take = k;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) max_take = std::min(max_take, caps[static_cast<std::size_t>(i)]);
    recurse(mask + 1);
    int taken = 0;
    while (taken < max_take) {
      add_column(mask);
      ++taken;
      if (condition_only && violations > 0) break;
      recurse(mask + 1);
    }
    while (taken-- > 0) remove_column(mask);
  }
};

}  // namespace

namespace {

Enumerator run_enumeration(int m, int k, bool condition_only, const std::function<void(const CanonicalFamily&)>& sink,
                           std::size_t max_emit, std::uint64_t max_nodes) {
  if (m < 1 || m > 10) throw Error("enumeration supports 1 <= m <= 10");
  if (m > k) throw Error("m > k is impossible: every group owns at least one row");
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  partitions(k, m, k, cur, parts);
  Enumerator e(m, k, condition_only, sink);
  e.max_emit = max_emit;
  e.max_nodes = max_nodes;
  for (const auto& r : parts) {
    e.run_partition(r);
    if (e.aborted) break;
  }
  return e;
}

}  // namespace

std::size_t enumerate_families(int m, int k, bool condition_only,
                               const std::function<void(const CanonicalFamily&)>& sink) {
  return run_enumeration(m, k, condition_only, sink, SIZE_MAX, UINT64_MAX).emitted;
}

std::optional<std::vector<CanonicalFamily>> enumerate_bounded(int m, int k, bool condition_only,
                                                              std::size_t max_families, std::uint64_t max_nodes) {
  std::vector<CanonicalFamily> out;
  auto e = run_enumeration(m, k, condition_only, [&](const CanonicalFamily& f) { out.push_back(f); }, max_families,
                           max_nodes);
  if (e.aborted) return std::nullopt;
  return out;
}

std::vector<CanonicalFamily> enumerate_families(int m, int k, bool condition_only) {
  std::vector<CanonicalFamily> out;
  enumerate_families(m, k, condition_only, [&](const CanonicalFamily& f) { out.push_back(f); });
  return out;
}

CanonicalFamily random_family(Rng& rng, int m, int k) {
  if (m < 1 || m > k) throw Error("random_family needs 1 <= m <= k");
  // Composition of k into m positive parts from m-1 distinct cut points.
  auto cuts = sample_distinct(rng, static_cast<std::uint64_t>(k - 1), static_cast<std::size_t>(m - 1));
  std::sort(cuts.begin(), cuts.end());
  CanonicalFamily out;
  out.k = k;
  std::uint64_t prev = 0;
  for (auto c : cuts) {
    out.mult.push_back(static_cast<int>(c + 1 - prev));
    prev = c + 1;
  }
  out.mult.push_back(static_cast<int>(static_cast<std::uint64_t>(k) - prev));

  std::vector<int> caps;
  for (int r : out.mult) caps.push_back(k - r);
  // Per-family inclusion bias spreads samples over sparse and dense columns.
  const double bias = 0.2 + 0.7 * static_cast<double>(uniform_below(rng, 1000)) / 1000.0;
  const auto threshold = static_cast<std::uint64_t>(bias * 1e6);
  while (std::any_of(caps.begin(), caps.end(), [](int c) { return c > 0; })) {
    std::uint32_t mask = 0;
    while (mask == 0)
      for (int i = 0; i < m; ++i)
        if (caps[static_cast<std::size_t>(i)] > 0 && uniform_below(rng, 1000000) < threshold) mask |= std::uint32_t{1} << i;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) --caps[static_cast<std::size_t>(i)];
    out.columns.push_back(mask);
  }
  std::sort(out.columns.begin(), out.columns.end());
  return out;
}

// ---------------------------------------------------------------- grid

std::size_t VerificationReport::counterexample_count() const {
  std::size_t s = 0;
  for (const auto& c : cells) s += c.counterexamples.size();
  return s;
}

std::size_t VerificationReport::inconclusive_count() const {
  std::size_t s = 0;
  for (const auto& c : cells) s += c.inconclusive.size();
  return s;
}

std::size_t VerificationReport::satisfying_count() const {
  std::size_t s = 0;
  for (const auto& c : cells) s += c.satisfying;
  return s;
}

namespace {

std::uint64_t cell_key(int m, int k) { return (static_cast<std::uint64_t>(m) << 32) | static_cast<std::uint32_t>(k); }

IdentityOptions family_options(const GridOptions& opt, int m, int k, std::size_t index) {
  IdentityOptions o;
  o.field_size_hint = opt.field_size_hint;
  o.trials = opt.trials;
  o.exact_limit = opt.exact_limit;
  o.seed = derive_seed(derive_seed(opt.seed, cell_key(m, k)), index);
  return o;
}

void tally(CellReport& cell, const Family& fam, const IdentityVerdict& v) {
  switch (v.status) {
    case IdentityStatus::nonzero:
      ++cell.nonzero;
      if (v.resolved_by != "random") ++cell.escalated;
      if (v.resolved_by == "exact") ++cell.exact_resolved;
      break;
    case IdentityStatus::proven_zero: cell.counterexamples.push_back(fam); break;
    case IdentityStatus::likely_zero: cell.inconclusive.push_back(fam); break;
  }
}

void decide_all(CellReport& cell, const std::vector<CanonicalFamily>& fams, const GridOptions& opt) {
  auto verdicts = detail::parallel_map(fams.size(), opt.jobs, [&](std::size_t i) {
    return decide_identity(fams[i].to_family(), family_options(opt, cell.m, cell.k, i));
  });
  for (std::size_t i = 0; i < fams.size(); ++i) tally(cell, fams[i].to_family(), verdicts[i]);
}

}  // namespace

CellReport verify_cell_exhaustive(int m, int k, const GridOptions& opt) {
  CellReport cell;
  cell.m = m;
  cell.k = k;
  std::vector<CanonicalFamily> good, bad;
  cell.enumerated = enumerate_families(m, k, !opt.include_violating, [&](const CanonicalFamily& f) {
    (condition_holds(f) ? good : bad).push_back(f);
  });
  if (!opt.include_violating) {
    // Pruned enumeration only reports satisfying families; count the rest.
    cell.enumerated = enumerate_families(m, k, false, [](const CanonicalFamily&) {});
  }
  cell.satisfying = good.size();
  decide_all(cell, good, opt);

  if (opt.include_violating) {
    auto verdicts = detail::parallel_map(bad.size(), opt.jobs, [&](std::size_t i) {
      return decide_identity(bad[i].to_family(), family_options(opt, m, k, good.size() + i));
    });
    cell.violating_tested = bad.size();
    for (std::size_t i = 0; i < bad.size(); ++i) {
      switch (verdicts[i].status) {
        case IdentityStatus::nonzero: cell.violating_nonzero.push_back(bad[i].to_family()); break;
        case IdentityStatus::proven_zero: ++cell.violating_proven_zero; break;
        case IdentityStatus::likely_zero: ++cell.violating_likely_zero; break;
      }
    }
  }
  return cell;
}

CellReport verify_cell_sampled(const SampledCell& spec, const GridOptions& opt) {
  CellReport cell;
  cell.m = spec.m;
  cell.k = spec.k;
  cell.sampled = true;
  cell.samples_requested = spec.samples;
  // Small cells are enumerated outright: if the whole cell has no more
  // classes than requested, sampling could only ever find a subset.
  if (auto all = enumerate_bounded(spec.m, spec.k, true, spec.samples, opt.sample_probe_nodes)) {
    cell.exhausted = true;
    cell.enumerated = all->size();
    cell.satisfying = all->size();
    decide_all(cell, *all, opt);
    return cell;
  }
  Rng rng(derive_seed(opt.seed, cell_key(spec.m, spec.k) ^ 0x5a5a5a5aULL));
  std::set<CanonicalFamily> seen;
  std::vector<CanonicalFamily> picked;
  const std::size_t max_attempts = std::max<std::size_t>(1000, spec.samples * 200);
  for (std::size_t attempt = 0; attempt < max_attempts && picked.size() < spec.samples; ++attempt) {
    auto raw = random_family(rng, spec.m, spec.k);
    auto f = canonical_form(spec.k, std::move(raw.mult), std::move(raw.columns));
    ++cell.enumerated;
    if (!condition_holds(f) || !seen.insert(f).second) continue;
    picked.push_back(std::move(f));
  }
  cell.satisfying = picked.size();
  decide_all(cell, picked, opt);
  return cell;
}

VerificationReport verify_grid(const GridOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.options = opt;
  for (int k = 2; k <= opt.k_max; ++k)
    for (int m = 2; m <= std::min(opt.m_max, k); ++m) rep.cells.push_back(verify_cell_exhaustive(m, k, opt));
  for (const auto& s : opt.sampled) {
    if (s.m < 2 || s.m > s.k) throw Error("sampled cell needs 2 <= m <= k");
    rep.cells.push_back(verify_cell_sampled(s, opt));
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------- necessity

Family violating_family(Rng& rng, int k_max, bool multiset) {
  if (k_max < 2) throw Error("violating families need k >= 2");
  const int k = uniform_int(rng, 2, k_max);
  const int m = uniform_int(rng, 2, std::min(k, 6));
  const auto shape = random_family(rng, m, k);  // only the composition is used
  const auto& r = shape.mult;

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  shuffle(rng, order);
  const int isize = uniform_int(rng, 2, m);
  std::vector<int> in(order.begin(), order.begin() + isize);
  std::sort(in.begin(), in.end());

  int rsum = 0;
  for (int i : in) rsum += r[static_cast<std::size_t>(i)];
  const int planted = k - rsum + 1;  // one more than the condition allows

  int max_size = 0;
  for (int ri : r) max_size = std::max(max_size, k - ri);
  const int n = std::max(max_size, planted) + uniform_int(rng, 0, k);

  std::vector<std::vector<int>> sets(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& s = sets[static_cast<std::size_t>(i)];
    const int size = k - r[static_cast<std::size_t>(i)];
    const bool in_i = std::binary_search(in.begin(), in.end(), i);
    if (in_i)
      for (int c = 0; c < planted; ++c) s.push_back(c);
    const int rest = size - static_cast<int>(s.size());
    if (multiset) {
      for (int t = 0; t < rest; ++t) s.push_back(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n))));
    } else {
      std::vector<int> pool;
      for (int c = in_i ? planted : 0; c < n; ++c) pool.push_back(c);
      shuffle(rng, pool);
      s.insert(s.end(), pool.begin(), pool.begin() + rest);
    }
  }
  Family fam = drop_unused_columns(make_tform(k, std::move(sets), n)).family;
  if (check_condition(fam).holds) throw Error("internal: violating generator produced a feasible family");
  return fam;
}

NecessityReport necessity_fuzz(const NecessityOptions& opt) {
  NecessityReport rep;
  rep.options = opt;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    Rng rng(derive_seed(opt.seed, s));
    const bool multiset = uniform_below(rng, 2) == 1;
    const Family fam = violating_family(rng, opt.k_max, multiset);
    ++rep.generated;
    if (fam.is_multiset()) ++rep.multisets;

    bool ok = true;
    const PrimeField f(default_prime(fam));
    std::vector<Elem> alpha(static_cast<std::size_t>(fam.n)), first_alpha;
    int vanished = 0;
    for (int e = 0; e < opt.evaluations; ++e) {
      for (auto& a : alpha) a = uniform_below(rng, f.modulus());
      if (e == 0) first_alpha = alpha;
      vanished += det(f, build_t(f, fam, alpha).matrix) == 0;
    }
    if (vanished == opt.evaluations) ++rep.all_vanished;
    else ok = false;

    if (fam.k <= opt.exact_limit) {
      ++rep.exact_checked;
      if (exact_identity_test(fam, opt.exact_limit).status == IdentityStatus::proven_zero) ++rep.proven_zero;
      else ok = false;
    }

    const TInstance t = build_t(f, fam, first_alpha);
    const auto cert = extract_certificate(f, t);
    if (cert && certificate_valid(f, t, *cert)) ++rep.certificates_valid;
    else ok = false;

    if (!ok) rep.exceptions.push_back(fam);
  }
  return rep;
}

// ---------------------------------------------------------------- cross-check

bool CrossCheckReport::passed() const {
  return strip_instances == options.samples && strip_condition_agree == strip_instances &&
         strip_lifted == strip_reduced_nonzero && disjoint_accepted == options.samples &&
         disjoint_lifted == disjoint_reduced_nonzero && multiset_accepted == options.samples &&
         multiset_lifted == multiset_reduced_nonzero && split_bookkeeping_ok == split_accepted &&
         split_lifted == split_both_nonzero;
}

namespace {

Elem det_at(const PrimeField& f, const Family& fam, const std::vector<Elem>& alpha) {
  return det(f, build_t(f, fam, alpha).matrix);
}

std::vector<Elem> distinct_alpha(Rng& rng, const PrimeField& f, int n) {
  auto raw = sample_distinct(rng, f.modulus(), static_cast<std::size_t>(n));
  return {raw.begin(), raw.end()};
}

// Distinct alpha making det T nonzero, if one shows up within a few tries.
std::optional<std::vector<Elem>> nonzero_point(Rng& rng, const PrimeField& f, const Family& fam) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto alpha = distinct_alpha(rng, f, fam.n);
    if (det_at(f, fam, alpha) != 0) return alpha;
  }
  return std::nullopt;
}

std::vector<Elem> lift(const std::vector<Elem>& reduced, const std::vector<int>& column_map) {
  std::vector<Elem> out(column_map.size());
  for (std::size_t c = 0; c < column_map.size(); ++c) out[c] = reduced[static_cast<std::size_t>(column_map[c])];
  return out;
}

// Random T-form multiset family with an empty total intersection, with a
// common block planted in every group except `excluded`.
Family strip_instance(Rng& rng, int k_max, int& excluded) {
  while (true) {
    const int k = uniform_int(rng, 2, k_max);
    const int m = uniform_int(rng, 2, std::min(k, 5));
    const auto shape = random_family(rng, m, k);
    excluded = uniform_int(rng, 0, m - 1);
    int min_other = k;
    for (int i = 0; i < m; ++i)
      if (i != excluded) min_other = std::min(min_other, k - shape.mult[static_cast<std::size_t>(i)]);
    const int n = k + uniform_int(rng, 1, k);
    std::vector<int> planted;
    for (int c = 0, size = uniform_int(rng, 0, min_other); c < size; ++c)
      planted.push_back(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n))));
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      auto& s = sets[static_cast<std::size_t>(i)];
      if (i != excluded) s = planted;
      const int size = k - shape.mult[static_cast<std::size_t>(i)];
      while (static_cast<int>(s.size()) < size) s.push_back(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n))));
    }
    Family fam = make_tform(k, std::move(sets), n);
    std::vector<int> everyone(static_cast<std::size_t>(m));
    std::iota(everyone.begin(), everyone.end(), 0);
    if (intersection_size(fam, everyone) == 0) return fam;
  }
}

// Random condition-satisfying normalized set family (3 <= m <= 5).
Family feasible_instance(Rng& rng, int k_max) {
  while (true) {
    const int k = uniform_int(rng, 3, std::max(3, k_max));
    const int m = uniform_int(rng, 3, std::min(k, 5));
    auto f = random_family(rng, m, k);
    if (condition_holds(f)) return f.to_family();
  }
}

}  // namespace

CrossCheckReport reduction_cross_check(const CrossCheckOptions& opt) {
  CrossCheckReport rep;
  rep.options = opt;
  Rng rng(derive_seed(opt.seed, 0xc0ffee));

  for (std::size_t s = 0; s < opt.samples; ++s) {
    int excluded = 0;
    const Family fam = strip_instance(rng, opt.k_max, excluded);
    const auto res = strip_common(fam, excluded);
    ++rep.strip_instances;
    rep.strip_noop += res.noop;
    rep.strip_condition_agree += check_condition(fam).holds == check_condition(res.family).holds;
    if (!is_normalized(res.family)) continue;
    const PrimeField f(default_prime(fam));
    if (auto alpha = nonzero_point(rng, f, res.family)) {
      ++rep.strip_reduced_nonzero;
      rep.strip_lifted += det_at(f, fam, *alpha) != 0;
    }
  }

  const std::size_t max_attempts = opt.samples * 1000;
  for (std::size_t attempt = 0; attempt < max_attempts && rep.disjoint_accepted < opt.samples; ++attempt) {
    const Family fam = feasible_instance(rng, opt.k_max);
    const auto q = column_masks(fam);
    const std::uint32_t full = (std::uint32_t{1} << fam.m()) - 1;
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < fam.n; ++a)
      for (int b = a + 1; b < fam.n; ++b)
        if ((q[static_cast<std::size_t>(a)] & q[static_cast<std::size_t>(b)]) == 0 &&
            (q[static_cast<std::size_t>(a)] | q[static_cast<std::size_t>(b)]) != full)
          pairs.emplace_back(a, b);
    if (pairs.empty()) continue;
    const auto [j1, j2] = pairs[uniform_below(rng, pairs.size())];
    const auto merged = merge_disjoint(fam, j1, j2);
    ++rep.disjoint_accepted;
    const PrimeField f(default_prime(fam));
    if (auto alpha = nonzero_point(rng, f, merged.family)) {
      ++rep.disjoint_reduced_nonzero;
      rep.disjoint_lifted += det_at(f, fam, lift(*alpha, merged.column_map)) != 0;
    }
  }

  for (std::size_t attempt = 0; attempt < max_attempts && rep.multiset_accepted < opt.samples; ++attempt) {
    const Family fam = feasible_instance(rng, opt.k_max);
    const auto q = column_masks(fam);
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < fam.n; ++a)
      for (int b = a + 1; b < fam.n; ++b)
        if (std::popcount(q[static_cast<std::size_t>(a)] | q[static_cast<std::size_t>(b)]) == fam.m() - 1)
          pairs.emplace_back(a, b);
    if (pairs.empty()) continue;
    const auto [j1, j2] = pairs[uniform_below(rng, pairs.size())];
    const auto merged = merge_multiset(fam, j1, j2);
    ++rep.multiset_accepted;
    if (!is_normalized(merged.stripped.family)) continue;
    const PrimeField f(default_prime(fam));
    if (auto alpha = nonzero_point(rng, f, merged.stripped.family)) {
      ++rep.multiset_reduced_nonzero;
      rep.multiset_lifted += det_at(f, fam, lift(*alpha, merged.column_map)) != 0;
    }
  }

  for (std::size_t attempt = 0; attempt < max_attempts && rep.split_accepted < opt.samples; ++attempt) {
    const Family fam = feasible_instance(rng, opt.k_max);
    const auto q = column_masks(fam);
    const int m = fam.m();
    std::vector<std::vector<int>> tight;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m) - 1; ++mask) {
      if (std::popcount(mask) < 2) continue;
      int cap = 0, rows = 0;
      for (auto c : q) cap += (c & mask) == mask;
      std::vector<int> g;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) {
          g.push_back(i);
          rows += fam.mult[static_cast<std::size_t>(i)];
        }
      if (fam.k - cap == rows) tight.push_back(std::move(g));
    }
    if (tight.empty()) continue;
    const auto& in = tight[uniform_below(rng, tight.size())];
    const auto split = split_tight(fam, in);
    ++rep.split_accepted;
    const int kp = split.part_i.k;
    const bool books = split.part_i.total_size() == (static_cast<int>(in.size()) - 1) * kp &&
                       split.part_j.total_size() == (split.part_j.m() - 1) * fam.k &&
                       split.part_i.m() + split.part_j.m() == m + 1;
    rep.split_bookkeeping_ok += books;
    const PrimeField f(default_prime(fam));
    const auto alpha = distinct_alpha(rng, f, fam.n);
    if (det_at(f, split.part_i, alpha) != 0 && det_at(f, split.part_j, alpha) != 0) {
      ++rep.split_both_nonzero;
      rep.split_lifted += det_at(f, fam, alpha) != 0;
    }
  }
  return rep;
}

}  // namespace gmmds
