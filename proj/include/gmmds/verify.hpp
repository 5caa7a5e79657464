#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gmmds/family.hpp"
#include "gmmds/random.hpp"
#include "gmmds/tmatrix.hpp"

namespace gmmds {

/// Normalized family stored column-side: one bitmask Q_j per column plus
/// the multiplicities. Canonical when r is non-increasing and the sorted
/// mask list is lexicographically minimal over all group permutations that
/// fix r.
struct CanonicalFamily {
  int k = 0;
  std::vector<int> mult;
  std::vector<std::uint32_t> columns;

  int m() const noexcept { return static_cast<int>(mult.size()); }
  int n() const noexcept { return static_cast<int>(columns.size()); }
  Family to_family() const;

  auto operator<=>(const CanonicalFamily&) const = default;
};

CanonicalFamily canonical_form(int k, std::vector<int> mult, std::vector<std::uint32_t> columns);
/// Drops unused columns first. Set families only.
CanonicalFamily canonical_form(const Family& fam);

/// Support condition evaluated on the column masks.
bool condition_holds(const CanonicalFamily& fam);

/// Streams every normalized family with m groups and dimension k, one per
/// equivalence class, in a fixed order. Returns the number emitted.
std::size_t enumerate_families(int m, int k, bool condition_only,
                               const std::function<void(const CanonicalFamily&)>& sink);
std::vector<CanonicalFamily> enumerate_families(int m, int k, bool condition_only = false);
/// Same stream, but gives up (nullopt) once more than max_families are
/// emitted or the search visits more than max_nodes nodes.
std::optional<std::vector<CanonicalFamily>> enumerate_bounded(int m, int k, bool condition_only,
                                                              std::size_t max_families, std::uint64_t max_nodes);

/// Random normalized family (not necessarily canonical or condition-satisfying).
CanonicalFamily random_family(Rng& rng, int m, int k);

struct SampledCell {
  int m = 0;
  int k = 0;
  std::size_t samples = 0;
};

struct GridOptions {
  int m_max = 4;
  int k_max = 6;
  std::vector<SampledCell> sampled;
  int trials = 8;
  std::uint64_t seed = 0;
  int exact_limit = 8;
  std::uint64_t field_size_hint = 0;
  int jobs = 1;
  /// Also decide condition-violating families and count any nonzero det.
  bool include_violating = false;
  /// Node budget for the exhaustive probe run before sampling a cell.
  std::uint64_t sample_probe_nodes = 200'000'000;
};

struct CellReport {
  int m = 0;
  int k = 0;
  bool sampled = false;
  std::size_t samples_requested = 0;
  /// Sampled cell that turned out small enough to enumerate completely.
  bool exhausted = false;
  std::size_t enumerated = 0;
  std::size_t satisfying = 0;
  std::size_t nonzero = 0;
  std::size_t escalated = 0;
  std::size_t exact_resolved = 0;
  std::vector<Family> counterexamples;
  std::vector<Family> inconclusive;
  std::size_t violating_tested = 0;
  std::size_t violating_proven_zero = 0;
  std::size_t violating_likely_zero = 0;
  std::vector<Family> violating_nonzero;
};

struct VerificationReport {
  GridOptions options;
  std::vector<CellReport> cells;
  double wall_seconds = 0.0;

  std::size_t counterexample_count() const;
  std::size_t inconclusive_count() const;
  std::size_t satisfying_count() const;
  bool verified() const { return counterexample_count() == 0 && inconclusive_count() == 0; }
};

/// Exhaustive cells 2 <= m <= min(m_max, k), k <= k_max, then the sampled cells.
VerificationReport verify_grid(const GridOptions& opt);

/// Decides condition-satisfying canonical families of one cell.
CellReport verify_cell_exhaustive(int m, int k, const GridOptions& opt);
CellReport verify_cell_sampled(const SampledCell& cell, const GridOptions& opt);

/// Random condition-violating family: a common block of size
/// k - sum_{i in I} r_i + 1 is planted in a random I, the rest is random.
Family violating_family(Rng& rng, int k_max, bool multiset);

struct NecessityOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  int k_max = 8;
  int exact_limit = 6;
  int evaluations = 20;
};

struct NecessityReport {
  NecessityOptions options;
  std::size_t generated = 0;
  std::size_t multisets = 0;
  std::size_t exact_checked = 0;
  std::size_t proven_zero = 0;
  std::size_t all_vanished = 0;
  std::size_t certificates_valid = 0;
  std::vector<Family> exceptions;
  bool passed() const { return exceptions.empty() && certificates_valid == generated; }
};

NecessityReport necessity_fuzz(const NecessityOptions& opt);

struct CrossCheckOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  int k_max = 6;
};

struct CrossCheckReport {
  CrossCheckOptions options;
  // strip_common
  std::size_t strip_instances = 0;
  std::size_t strip_noop = 0;
  std::size_t strip_condition_agree = 0;
  std::size_t strip_reduced_nonzero = 0;
  std::size_t strip_lifted = 0;
  // merge_disjoint
  std::size_t disjoint_accepted = 0;
  std::size_t disjoint_reduced_nonzero = 0;
  std::size_t disjoint_lifted = 0;
  // merge_multiset
  std::size_t multiset_accepted = 0;
  std::size_t multiset_reduced_nonzero = 0;
  std::size_t multiset_lifted = 0;
  // split_tight
  std::size_t split_accepted = 0;
  std::size_t split_bookkeeping_ok = 0;
  std::size_t split_both_nonzero = 0;
  std::size_t split_lifted = 0;

  bool passed() const;
};

CrossCheckReport reduction_cross_check(const CrossCheckOptions& opt);

}  // namespace gmmds
