#include "gmmds/tmatrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "gmmds/random.hpp"

namespace gmmds {

TInstance build_t(const PrimeField& f, const Family& fam, std::span<const Elem> alpha) {
  validate(fam);
  if (!is_normalized(fam))
    throw Error("family is not normalized (need |S_i| = k - r_i for every group); run normalize first");
  if (static_cast<int>(alpha.size()) != fam.n)
    throw Error("expected " + std::to_string(fam.n) + " alpha values, got " + std::to_string(alpha.size()));

  TInstance t;
  t.family = fam;
  t.alpha.assign(alpha.begin(), alpha.end());
  const auto k = static_cast<std::size_t>(fam.k);
  t.matrix = Matrix(k, k);
  std::size_t row = 0;
  for (const auto& s : fam.sets) {
    std::vector<Elem> roots;
    roots.reserve(s.size());
    for (int j : s) roots.push_back(f.reduce(alpha[static_cast<std::size_t>(j)]));
    UniPoly p = poly_from_roots(f, roots);
    const std::size_t rows = k - s.size();
    t.block_rows.emplace_back(static_cast<int>(row), static_cast<int>(row + rows));
    for (std::size_t shift = 0; shift < rows; ++shift, ++row)
      for (std::size_t d = 0; d < p.coeffs.size(); ++d) t.matrix(row, shift + d) = p.coeffs[d];
    t.polys.push_back(std::move(p));
  }
  return t;
}

Matrix build_grs(const PrimeField& f, int k, std::span<const Elem> alpha) {
  std::set<Elem> seen;
  for (Elem a : alpha)
    if (!seen.insert(f.reduce(a)).second) throw Error("evaluation points must be pairwise distinct");
  Matrix g(static_cast<std::size_t>(k), alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    Elem pw = 1;
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      g(i, j) = pw;
      pw = f.mul(pw, f.reduce(alpha[j]));
    }
  }
  return g;
}

std::uint64_t degree_bound(const Family& fam) {
  std::uint64_t d = 0;
  for (int i = 0; i < fam.m(); ++i) {
    const int rows = fam.k - fam.set_size(i);
    if (rows > 0) d += static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(fam.set_size(i));
  }
  return d;
}

std::uint64_t default_prime(const Family& fam, std::uint64_t hint) {
  const std::uint64_t floor = std::max({hint, 2 * degree_bound(fam), 2 * static_cast<std::uint64_t>(fam.n), std::uint64_t{257}});
  return next_prime(floor);
}

const char* to_string(IdentityStatus s) {
  switch (s) {
    case IdentityStatus::nonzero: return "nonzero";
    case IdentityStatus::likely_zero: return "likely_zero";
    case IdentityStatus::proven_zero: return "proven_zero";
  }
  return "?";
}

namespace {

IdentityVerdict random_trials(const Family& fam, std::uint64_t p, int trials, std::uint64_t seed) {
  const PrimeField f(p);
  Rng rng(seed);
  IdentityVerdict v;
  v.p = p;
  std::vector<Elem> alpha(static_cast<std::size_t>(fam.n));
  for (int t = 0; t < trials; ++t) {
    for (auto& a : alpha) a = uniform_below(rng, p);
    ++v.trials_used;
    if (det(f, build_t(f, fam, alpha).matrix) != 0) {
      v.status = IdentityStatus::nonzero;
      v.witness_alpha = alpha;
      v.failure_bound = 0.0;
      return v;
    }
  }
  const double ratio = static_cast<double>(degree_bound(fam)) / static_cast<double>(p);
  v.failure_bound = std::min(1.0, std::pow(ratio, trials));
  return v;
}

}  // namespace

IdentityVerdict identity_test(const Family& fam, std::uint64_t field_size_hint, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error("need at least one trial");
  return random_trials(fam, default_prime(fam, field_size_hint), trials, seed);
}

// ---------------------------------------------------------------- SparsePoly

SparsePoly SparsePoly::constant(int nvars, Coeff c) {
  SparsePoly p;
  p.nvars_ = nvars;
  if (c != 0) p.terms_.emplace(Monomial(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

SparsePoly SparsePoly::variable(int nvars, int var, Coeff c) {
  SparsePoly p;
  p.nvars_ = nvars;
  if (c != 0) {
    Monomial mono(static_cast<std::size_t>(nvars), 0);
    mono[static_cast<std::size_t>(var)] = 1;
    p.terms_.emplace(std::move(mono), c);
  }
  return p;
}

int SparsePoly::total_degree() const noexcept {
  int best = -1;
  for (const auto& [mono, c] : terms_) {
    int d = 0;
    for (auto e : mono) d += e;
    best = std::max(best, d);
  }
  return best;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  nvars_ = std::max(nvars_, o.nvars_);
  for (const auto& [mono, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(mono, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) { return *this += -o; }

SparsePoly SparsePoly::operator-() const {
  SparsePoly out = *this;
  for (auto& [mono, c] : out.terms_) c = -c;
  return out;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  SparsePoly out;
  out.nvars_ = std::max(nvars_, o.nvars_);
  Monomial mono(static_cast<std::size_t>(out.nvars_), 0);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      for (std::size_t i = 0; i < mono.size(); ++i) mono[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      auto [it, inserted] = out.terms_.try_emplace(mono, ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  return out;
}

Elem SparsePoly::eval(const PrimeField& f, std::span<const Elem> alpha) const {
  const auto p = static_cast<__int128>(f.modulus());
  Elem acc = 0;
  for (const auto& [mono, c] : terms_) {
    __int128 r = c % p;
    if (r < 0) r += p;
    Elem term = static_cast<Elem>(r);
    for (std::size_t i = 0; i < mono.size(); ++i)
      if (mono[i]) term = f.mul(term, f.pow(f.reduce(alpha[i]), mono[i]));
    acc = f.add(acc, term);
  }
  return acc;
}

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

std::string SparsePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest total degree first, then reverse-lexicographic on exponents.
  std::vector<std::pair<Monomial, Coeff>> ordered(terms_.rbegin(), terms_.rend());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (auto e : a.first) da += e;
    for (auto e : b.first) db += e;
    return da > db;
  });
  bool first = true;
  for (const auto& [mono, c] : ordered) {
    const bool neg = c < 0;
    const __int128 mag = neg ? -c : c;
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    std::string vars;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (!mono[i]) continue;
      if (!vars.empty()) vars += "*";
      vars += "a" + std::to_string(i + 1);
      if (mono[i] > 1) vars += "^" + std::to_string(mono[i]);
    }
    if (vars.empty())
      out += int128_to_string(mag);
    else if (mag == 1)
      out += vars;
    else
      out += int128_to_string(mag) + "*" + vars;
  }
  return out;
}

// ---------------------------------------------------------------- exact test

std::vector<std::vector<SparsePoly>> symbolic_t(const Family& fam) {
  validate(fam);
  if (!is_normalized(fam)) throw Error("family is not normalized; run normalize first");
  const int n = fam.n;
  const auto k = static_cast<std::size_t>(fam.k);
  std::vector<std::vector<SparsePoly>> t(k, std::vector<SparsePoly>(k, SparsePoly::constant(n, 0)));
  std::size_t row = 0;
  for (const auto& s : fam.sets) {
    // coefficients of prod (x - alpha_j), ascending powers of x
    std::vector<SparsePoly> p{SparsePoly::constant(n, 1)};
    for (int j : s) {
      std::vector<SparsePoly> next(p.size() + 1, SparsePoly::constant(n, 0));
      const SparsePoly minus_a = SparsePoly::variable(n, j, -1);
      for (std::size_t d = 0; d < p.size(); ++d) {
        next[d + 1] += p[d];
        next[d] += p[d] * minus_a;
      }
      p = std::move(next);
    }
    const std::size_t rows = k - s.size();
    for (std::size_t shift = 0; shift < rows; ++shift, ++row)
      for (std::size_t d = 0; d < p.size(); ++d) t[row][shift + d] = p[d];
  }
  return t;
}

ExactResult exact_identity_test(const Family& fam, int exact_limit) {
  if (fam.k > exact_limit)
    throw Error("exact expansion refused: k = " + std::to_string(fam.k) + " exceeds the exact limit " +
                std::to_string(exact_limit));
  if (fam.k > 30) throw Error("exact expansion supports k <= 30");
  // Sum of |coefficients| of det T is at most 2^D; keep it inside __int128.
  if (degree_bound(fam) > 120) throw Error("exact expansion refused: degree bound too large for 128-bit coefficients");
  for (const auto& s : fam.sets)
    if (s.size() > 255) throw Error("exponent overflow");

  const auto t = symbolic_t(fam);
  const int k = fam.k;
  const std::uint32_t full = k == 0 ? 0 : (std::uint32_t{1} << k) - 1;

  // Laplace expansion along rows, memoized on the set of columns used so far.
  std::map<std::uint32_t, SparsePoly> layer{{0u, SparsePoly::constant(fam.n, 1)}};
  for (int r = 0; r < k; ++r) {
    std::map<std::uint32_t, SparsePoly> next;
    for (const auto& [mask, acc] : layer) {
      for (int c = 0; c < k; ++c) {
        if (mask >> c & 1) continue;
        const auto& entry = t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        if (entry.is_zero()) continue;
        SparsePoly term = acc * entry;
        if (std::popcount(mask >> (c + 1)) & 1) term = -term;
        auto [it, inserted] = next.try_emplace(mask | (std::uint32_t{1} << c), std::move(term));
        if (!inserted) it->second += term;
      }
    }
    for (auto it = next.begin(); it != next.end();) it = it->second.is_zero() ? next.erase(it) : std::next(it);
    layer = std::move(next);
  }

  ExactResult out;
  auto it = layer.find(full);
  out.det = it == layer.end() ? SparsePoly::constant(fam.n, 0) : it->second;
  out.status = out.det.is_zero() ? IdentityStatus::proven_zero : IdentityStatus::nonzero;
  return out;
}

IdentityVerdict decide_identity(const Family& fam, const IdentityOptions& opt) {
  IdentityVerdict v = identity_test(fam, opt.field_size_hint, opt.trials, opt.seed);
  if (v.status == IdentityStatus::nonzero) return v;

  const int first_trials = v.trials_used;
  const double first_bound = v.failure_bound;
  const std::uint64_t bigger = next_prime(8 * v.p);
  IdentityVerdict retry = random_trials(fam, bigger, opt.trials, derive_seed(opt.seed, 1));
  retry.trials_used += first_trials;
  retry.failure_bound *= first_bound;
  retry.resolved_by = "random-escalated";
  if (retry.status == IdentityStatus::nonzero || fam.k > opt.exact_limit) return retry;

  const ExactResult exact = exact_identity_test(fam, opt.exact_limit);
  retry.resolved_by = "exact";
  if (exact.status == IdentityStatus::proven_zero) {
    retry.status = IdentityStatus::proven_zero;
    retry.failure_bound = 0.0;
    return retry;
  }
  // The polynomial is nonzero; keep sampling it for a concrete witness.
  const PrimeField f(bigger);
  Rng rng(derive_seed(opt.seed, 2));
  std::vector<Elem> alpha(static_cast<std::size_t>(fam.n));
  for (int t = 0; t < 4096; ++t) {
    for (auto& a : alpha) a = uniform_below(rng, bigger);
    ++retry.trials_used;
    if (exact.det.eval(f, alpha) != 0) {
      retry.status = IdentityStatus::nonzero;
      retry.witness_alpha = alpha;
      retry.failure_bound = 0.0;
      return retry;
    }
  }
  throw Error("exact determinant is nonzero but no witness was found");
}

// ---------------------------------------------------------------- certificates

std::optional<Certificate> extract_certificate(const PrimeField& f, const TInstance& t) {
  const auto basis = left_nullspace(f, t.matrix);
  if (basis.empty()) return std::nullopt;
  const auto& v = basis.front();
  Certificate c;
  c.alpha = t.alpha;
  c.p = f.modulus();
  for (const auto& [begin, end] : t.block_rows) {
    UniPoly q;
    q.coeffs.assign(v.begin() + begin, v.begin() + end);
    q.trim();
    c.qpolys.push_back(std::move(q));
  }
  return c;
}

bool certificate_valid(const PrimeField& f, const TInstance& t, const Certificate& c) {
  if (c.qpolys.size() != t.polys.size()) return false;
  if (c.p != f.modulus() || c.alpha != t.alpha) return false;
  bool any_nonzero = false;
  UniPoly sum;
  for (std::size_t i = 0; i < c.qpolys.size(); ++i) {
    const auto& q = c.qpolys[i];
    if (q.is_zero()) continue;
    any_nonzero = true;
    if (q.degree() > t.family.k - 1 - t.polys[i].degree()) return false;
    sum = poly_add(f, sum, poly_mul(f, q, t.polys[i]));
  }
  return any_nonzero && sum.is_zero();
}

Matrix build_generator(const PrimeField& f, const TInstance& t) {
  const Matrix grs = build_grs(f, t.family.k, t.alpha);
  if (det(f, t.matrix) == 0) throw Error("T is singular at this alpha; resample");
  return matmul(f, t.matrix, grs);
}

}  // namespace gmmds
