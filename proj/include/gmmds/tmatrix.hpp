#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmmds/family.hpp"
#include "gmmds/field.hpp"

namespace gmmds {

/// The k x k matrix whose block i stacks the coefficient vectors of
/// p_i, x p_i, ..., x^{k-1-|S_i|} p_i with p_i(x) = prod_{j in S_i} (x - alpha_j).
/// Columns are ascending powers of x.
struct TInstance {
  Family family;
  std::vector<Elem> alpha;
  Matrix matrix;
  /// [begin, end) row range of each block.
  std::vector<std::pair<int, int>> block_rows;
  std::vector<UniPoly> polys;
};

TInstance build_t(const PrimeField& f, const Family& fam, std::span<const Elem> alpha);

/// k x n Vandermonde matrix, entry (i, j) = alpha_j^i. Rejects repeated alpha.
Matrix build_grs(const PrimeField& f, int k, std::span<const Elem> alpha);

/// Upper bound on deg(det T): sum_i (k - |S_i|) |S_i|.
std::uint64_t degree_bound(const Family& fam);

/// Smallest prime >= max(hint, 2D, 2n, 257).
std::uint64_t default_prime(const Family& fam, std::uint64_t hint = 0);

enum class IdentityStatus { nonzero, likely_zero, proven_zero };
const char* to_string(IdentityStatus s);

struct IdentityVerdict {
  IdentityStatus status = IdentityStatus::likely_zero;
  std::uint64_t p = 0;
  /// alpha with det T != 0, when nonzero.
  std::vector<Elem> witness_alpha;
  int trials_used = 0;
  /// Schwartz-Zippel bound (D/p)^trials, meaningful for likely_zero.
  double failure_bound = 1.0;
  /// "random", "random-escalated" or "exact".
  std::string resolved_by = "random";
};

/// Randomized test: alpha uniform over GF(p)^n with p >= max(hint, 2D).
IdentityVerdict identity_test(const Family& fam, std::uint64_t field_size_hint, int trials, std::uint64_t seed);

/// Sparse polynomial over Z in alpha_1..alpha_n, keyed on exponent vectors.
class SparsePoly {
 public:
  using Monomial = std::vector<std::uint8_t>;
  using Coeff = __int128;

  SparsePoly() = default;
  static SparsePoly constant(int nvars, Coeff c);
  /// c * alpha_var
  static SparsePoly variable(int nvars, int var, Coeff c = 1);

  int nvars() const noexcept { return nvars_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }
  const std::map<Monomial, Coeff>& terms() const noexcept { return terms_; }
  int total_degree() const noexcept;

  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly operator-() const;

  /// Evaluates modulo p.
  Elem eval(const PrimeField& f, std::span<const Elem> alpha) const;
  /// e.g. "a1 - a2", variables 1-based.
  std::string to_string() const;

  bool operator==(const SparsePoly&) const = default;

 private:
  int nvars_ = 0;
  std::map<Monomial, Coeff> terms_;
};

std::string int128_to_string(__int128 v);

struct ExactResult {
  IdentityStatus status = IdentityStatus::proven_zero;  // nonzero or proven_zero
  SparsePoly det;
};

/// Symbolic det T over Z[alpha]; refuses k > exact_limit.
ExactResult exact_identity_test(const Family& fam, int exact_limit = 8);

/// Symbolic T entries, exposed for tests and the exact expansion.
std::vector<std::vector<SparsePoly>> symbolic_t(const Family& fam);

struct IdentityOptions {
  std::uint64_t field_size_hint = 0;
  int trials = 8;
  std::uint64_t seed = 0;
  int exact_limit = 8;
};

/// identity_test, then a retry at an 8x larger prime, then exact expansion
/// when k <= exact_limit. Never turns a randomized miss into proven_zero.
IdentityVerdict decide_identity(const Family& fam, const IdentityOptions& opt);

/// q_1..q_m with deg q_i <= k-1-deg p_i and sum q_i p_i = 0 at alpha.
struct Certificate {
  std::vector<UniPoly> qpolys;
  std::vector<Elem> alpha;
  std::uint64_t p = 0;
};

/// Left-nullspace vector of T split by blocks; none when T is nonsingular.
std::optional<Certificate> extract_certificate(const PrimeField& f, const TInstance& t);

/// Checks the degree bounds, not-all-zero, and sum q_i p_i == 0 exactly.
bool certificate_valid(const PrimeField& f, const TInstance& t, const Certificate& c);

/// G = T * G_RS; rows of block i vanish exactly on columns of S_i.
/// Rejects repeated alpha and singular T.
Matrix build_generator(const PrimeField& f, const TInstance& t);

}  // namespace gmmds
