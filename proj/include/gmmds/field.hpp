#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmmds {

/// Element of GF(p), always stored reduced into [0, p).
using Elem = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);

/// Prime field GF(p) with word-sized p. Arithmetic uses 128-bit intermediates.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }

  Elem reduce(std::uint64_t x) const noexcept { return x % p_; }
  Elem from_int(std::int64_t x) const noexcept;

  Elem add(Elem a, Elem b) const noexcept {
    Elem s = a + b;  // p < 2^63, no wraparound
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p_);
  }
  Elem pow(Elem a, std::uint64_t e) const noexcept;
  /// Throws on zero.
  Elem inv(Elem a) const;

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint64_t p_;
};

/// Dense univariate polynomial, ascending powers, trailing zeros trimmed.
/// The zero polynomial has no coefficients and degree -1.
struct UniPoly {
  std::vector<Elem> coeffs;

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const noexcept { return coeffs.empty(); }
  void trim();

  bool operator==(const UniPoly&) const = default;
};

UniPoly poly_from_roots(const PrimeField& f, std::span<const Elem> roots);
UniPoly poly_add(const PrimeField& f, const UniPoly& a, const UniPoly& b);
UniPoly poly_mul(const PrimeField& f, const UniPoly& a, const UniPoly& b);
/// x^shift * a
UniPoly poly_shift(const UniPoly& a, int shift);
Elem eval_poly(const PrimeField& f, const UniPoly& poly, Elem x);

/// Row-major dense matrix over a prime field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<Elem>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<std::vector<Elem>> to_rows() const;
  Matrix transpose() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

Matrix matmul(const PrimeField& f, const Matrix& a, const Matrix& b);

/// Determinant by Gaussian elimination. Pivot is the first nonzero entry
/// in the column, scanning rows top-down.
Elem det(const PrimeField& f, const Matrix& m);

std::size_t rank(const PrimeField& f, const Matrix& m);

/// Basis of { v : v * M = 0 }. Empty iff the rows of M are independent.
std::vector<std::vector<Elem>> left_nullspace(const PrimeField& f, const Matrix& m);

/// Row vector times matrix.
std::vector<Elem> vec_mul(const PrimeField& f, std::span<const Elem> v, const Matrix& m);

}  // namespace gmmds
