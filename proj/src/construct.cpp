#include "gmmds/construct.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gmmds/random.hpp"
#include "gmmds/tmatrix.hpp"

namespace gmmds {

namespace {

void check_rowsets(const std::vector<std::vector<int>>& rowsets, int n, int k) {
  if (k < 1) throw Error("k must be positive");
  if (n < k) throw Error("n must be at least k");
  if (static_cast<int>(rowsets.size()) != k)
    throw Error("expected " + std::to_string(k) + " row sets, got " + std::to_string(rowsets.size()));
  for (std::size_t i = 0; i < rowsets.size(); ++i) {
    auto s = rowsets[i];
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error("row " + std::to_string(i + 1) + " repeats a column");
    for (int j : s)
      if (j < 0 || j >= n) throw Error("row " + std::to_string(i + 1) + " mentions column " + std::to_string(j + 1) + " outside [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

bool zero_pattern_exact(const Matrix& G, const std::vector<std::vector<int>>& rowsets) {
  if (static_cast<std::size_t>(G.rows()) != rowsets.size()) return false;
  for (std::size_t i = 0; i < G.rows(); ++i) {
    const auto& s = rowsets[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < G.cols(); ++j) {
      const bool want_zero = std::find(s.begin(), s.end(), static_cast<int>(j)) != s.end();
      if ((G(i, j) == 0) != want_zero) return false;
    }
  }
  return true;
}

CodeArtifact construct_code(const std::vector<std::vector<int>>& rowsets, int n, int k, const ConstructOptions& opt) {
  check_rowsets(rowsets, n, k);
  std::vector<std::vector<int>> sorted = rowsets;
  for (auto& s : sorted) std::sort(s.begin(), s.end());
  const Grouping grouping = group_rows(k, n, sorted);
  auto verdict = check_condition(grouping.family);
  if (!verdict.holds) {
    // Report the witness in terms of input rows.
    std::vector<int> rows;
    for (int r = 0; r < k; ++r)
      if (std::binary_search(verdict.witness.begin(), verdict.witness.end(), grouping.row_group[static_cast<std::size_t>(r)]))
        rows.push_back(r);
    verdict.witness = std::move(rows);
    throw InfeasibleError(std::move(verdict));
  }
  const Family padded = normalize(grouping.family);

  CodeArtifact art;
  art.k = k;
  art.n = n;
  art.rowsets = sorted;
  art.padded_columns = padded.n - n;

  Rng rng(opt.seed);
  std::uint64_t p = default_prime(padded, opt.field_size_hint);
  // alpha = 0 would zero every x^l p_i row entry with l > 0, so draw from GF(p)*.
  while (p - 1 < static_cast<std::uint64_t>(padded.n)) p = next_prime(2 * p);
  for (int escalation = 0;; ++escalation) {
    const PrimeField f(p);
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
      ++art.attempts;
      auto raw = sample_distinct(rng, p - 1, static_cast<std::size_t>(padded.n));
      std::vector<Elem> alpha(raw.size());
      for (std::size_t j = 0; j < raw.size(); ++j) alpha[j] = raw[j] + 1;
      TInstance t = build_t(f, padded, alpha);
      if (det(f, t.matrix) == 0) {
        ++art.singular_draws;
        continue;
      }
      const Matrix full = build_generator(f, t);
      // Put T and G back into input row order.
      art.T = Matrix(k, k);
      art.G = Matrix(k, n);
      for (int r = 0; r < k; ++r) {
        const auto g = static_cast<std::size_t>(grouping.row_group[static_cast<std::size_t>(r)]);
        const int src = t.block_rows[g].first + grouping.row_offset[static_cast<std::size_t>(r)];
        for (int c = 0; c < k; ++c) art.T(r, c) = t.matrix(src, c);
        for (int j = 0; j < n; ++j) art.G(r, j) = full(src, j);
      }
      art.p = p;
      art.alpha.assign(alpha.begin(), alpha.begin() + n);
      art.field_escalations = escalation;
      if (!zero_pattern_exact(art.G, art.rowsets))
        throw Error("internal error: generator zero pattern differs from the prescribed one");
      return art;
    }
    if (escalation == opt.max_escalations)
      throw Error("det T vanished on " + std::to_string(opt.max_attempts) + " draws at every field up to p = " +
                  std::to_string(p) + "; retry with a larger --field-size");
    p = next_prime(2 * p);
  }
}

std::optional<std::vector<int>> mds_check(const PrimeField& f, const Matrix& G, std::uint64_t max_subsets) {
  const int k = static_cast<int>(G.rows()), n = static_cast<int>(G.cols());
  if (k > n) throw Error("mds_check needs k <= n");
  // C(n, k) with early exit past the guard.
  std::uint64_t subsets = 1;
  for (int i = 1; i <= k; ++i) {
    subsets = subsets * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (subsets > max_subsets) throw Error("C(n, k) exceeds the minor-enumeration limit of " + std::to_string(max_subsets));
  }
  std::vector<int> cols(static_cast<std::size_t>(k));
  std::iota(cols.begin(), cols.end(), 0);
  Matrix minor(k, k);
  while (true) {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) minor(r, c) = G(r, cols[static_cast<std::size_t>(c)]);
    if (det(f, minor) == 0) return cols;
    int i = k - 1;
    while (i >= 0 && cols[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return std::nullopt;
    ++cols[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cols[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::optional<int> cutset_distance_bound(const std::vector<std::vector<int>>& rowsets, int n, int k) {
  check_rowsets(rowsets, n, k);
  std::vector<std::vector<int>> sorted = rowsets;
  for (auto& s : sorted) std::sort(s.begin(), s.end());
  if (!check_condition(group_rows(k, n, sorted).family).holds) return std::nullopt;
  return n - k + 1;
}

}  // namespace gmmds
