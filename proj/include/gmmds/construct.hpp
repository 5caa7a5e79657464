#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmmds/family.hpp"
#include "gmmds/field.hpp"

namespace gmmds {

/// Generator matrix with a prescribed zero pattern. Rows of T and G follow
/// the input row order; G = T * G_RS(alpha).
struct CodeArtifact {
  std::uint64_t p = 0;
  int k = 0;
  int n = 0;
  std::vector<Elem> alpha;
  Matrix T;
  Matrix G;
  /// 0-based zero set of each row.
  std::vector<std::vector<int>> rowsets;
  /// Columns added by padding (not part of G).
  int padded_columns = 0;
  /// alpha draws in total, and how many of them gave det T = 0.
  int attempts = 0;
  int singular_draws = 0;
  int field_escalations = 0;
};

struct ConstructOptions {
  std::uint64_t field_size_hint = 0;
  std::uint64_t seed = 0;
  int max_attempts = 64;
  /// Times the field may double after max_attempts singular draws.
  int max_escalations = 4;
};

/// Groups equal rows, checks feasibility (throws InfeasibleError), pads,
/// samples distinct nonzero alpha until det T != 0, builds G and drops the
/// padded columns. The zero pattern is verified exactly before returning.
CodeArtifact construct_code(const std::vector<std::vector<int>>& rowsets, int n, int k, const ConstructOptions& opt = {});

/// First k-subset of columns whose minor vanishes, or nullopt when every
/// minor is nonsingular. Throws when C(n, k) exceeds max_subsets.
std::optional<std::vector<int>> mds_check(const PrimeField& f, const Matrix& G, std::uint64_t max_subsets = 1'000'000);

/// n - k + 1 when the rows admit an MDS code, nullopt otherwise.
std::optional<int> cutset_distance_bound(const std::vector<std::vector<int>>& rowsets, int n, int k);

/// True when G[i][j] == 0 exactly for j in rowsets[i].
bool zero_pattern_exact(const Matrix& G, const std::vector<std::vector<int>>& rowsets);

}  // namespace gmmds
