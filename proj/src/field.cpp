#include "gmmds/field.hpp"

#include <algorithm>
#include <utility>

namespace gmmds {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Reduces m to row echelon form in place and returns pivot columns.
std::vector<std::size_t> row_echelon(const PrimeField& f, Matrix& m, bool reduced, Elem* det_acc) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
      if (det_acc) *det_acc = f.neg(*det_acc);
    }
    const Elem lead = m(r, c);
    if (det_acc) *det_acc = f.mul(*det_acc, lead);
    const Elem lead_inv = f.inv(lead);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), lead_inv);
    const std::size_t first = reduced ? 0 : r + 1;
    for (std::size_t i = first; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Elem factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % sp == 0) return n == sp;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are a deterministic witness set for n < 3.3e24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  if ((n & 1) == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= (1ULL << 63)) throw Error("field modulus must be below 2^63");
  if (!is_prime(p)) throw Error("field modulus " + std::to_string(p) + " is not prime");
}

Elem PrimeField::from_int(std::int64_t x) const noexcept {
  const auto p = static_cast<std::int64_t>(p_);
  std::int64_t r = x % p;
  return static_cast<Elem>(r < 0 ? r + p : r);
}

Elem PrimeField::pow(Elem a, std::uint64_t e) const noexcept { return powmod(a, e, p_); }

Elem PrimeField::inv(Elem a) const {
  if (a == 0) throw Error("inverse of zero");
  return powmod(a, p_ - 2, p_);
}

void UniPoly::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

UniPoly poly_from_roots(const PrimeField& f, std::span<const Elem> roots) {
  UniPoly out{{1}};
  for (Elem r : roots) {
    // multiply by (x - r)
    std::vector<Elem> next(out.coeffs.size() + 1, 0);
    const Elem nr = f.neg(r);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
      next[i + 1] = f.add(next[i + 1], out.coeffs[i]);
      next[i] = f.add(next[i], f.mul(nr, out.coeffs[i]));
    }
    out.coeffs = std::move(next);
  }
  return out;
}

UniPoly poly_add(const PrimeField& f, const UniPoly& a, const UniPoly& b) {
  UniPoly out;
  out.coeffs.assign(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] = a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] = f.add(out.coeffs[i], b.coeffs[i]);
  out.trim();
  return out;
}

UniPoly poly_mul(const PrimeField& f, const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  UniPoly out;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
      out.coeffs[i + j] = f.add(out.coeffs[i + j], f.mul(a.coeffs[i], b.coeffs[j]));
  }
  out.trim();
  return out;
}

UniPoly poly_shift(const UniPoly& a, int shift) {
  if (a.is_zero() || shift == 0) return a;
  UniPoly out;
  out.coeffs.assign(static_cast<std::size_t>(shift), 0);
  out.coeffs.insert(out.coeffs.end(), a.coeffs.begin(), a.coeffs.end());
  return out;
}

Elem eval_poly(const PrimeField& f, const UniPoly& poly, Elem x) {
  Elem acc = 0;
  for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) acc = f.add(f.mul(acc, x), *it);
  return acc;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Elem>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::vector<Elem>> Matrix::to_rows() const {
  std::vector<std::vector<Elem>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix matmul(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("matmul dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Elem x = a(i, l);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(l, j)));
    }
  return out;
}

Elem det(const PrimeField& f, const Matrix& m) {
  if (!m.square()) throw Error("determinant of a non-square matrix");
  Matrix work = m;
  Elem acc = 1;
  const auto pivots = row_echelon(f, work, false, &acc);
  return pivots.size() == m.rows() ? acc : 0;
}

std::size_t rank(const PrimeField& f, const Matrix& m) {
  Matrix work = m;
  return row_echelon(f, work, false, nullptr).size();
}

std::vector<std::vector<Elem>> left_nullspace(const PrimeField& f, const Matrix& m) {
  // v M = 0  <=>  M^T v^T = 0
  Matrix work = m.transpose();
  const auto pivots = row_echelon(f, work, true, nullptr);
  std::vector<bool> is_pivot(work.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Elem>> basis;
  for (std::size_t free = 0; free < work.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> v(work.cols(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(work(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Elem> vec_mul(const PrimeField& f, std::span<const Elem> v, const Matrix& m) {
  if (v.size() != m.rows()) throw Error("vector/matrix dimension mismatch");
  std::vector<Elem> out(m.cols(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = f.add(out[j], f.mul(v[i], m(i, j)));
  }
  return out;
}

}  // namespace gmmds
