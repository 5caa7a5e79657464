#include <gtest/gtest.h>

#include "gmmds/field.hpp"
#include "gmmds/random.hpp"
#include "oracles.hpp"

using namespace gmmds;

TEST(Primes, SmallAndLarge) {
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(257));
  EXPECT_FALSE(is_prime(561));  // Carmichael
  EXPECT_TRUE(is_prime(2305843009213693951ULL));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_EQ(next_prime(256), 257u);
  EXPECT_EQ(next_prime(257), 257u);
  EXPECT_EQ(next_prime(14), 17u);
}

TEST(Primes, MatchesTrialDivision) {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    bool slow = n >= 2;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) slow = false;
    ASSERT_EQ(is_prime(n), slow) << n;
  }
}

TEST(PrimeField, RejectsComposite) { EXPECT_THROW(PrimeField(15), Error); }

TEST(PrimeField, InverseAxiom) {
  const PrimeField f(101);
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    const Elem a = 1 + uniform_below(rng, 100), b = uniform_below(rng, 101);
    EXPECT_EQ(f.mul(f.mul(a, b), f.inv(a)), b);
  }
  EXPECT_THROW(f.inv(0), Error);
  EXPECT_EQ(f.from_int(-1), 100u);
  EXPECT_EQ(f.sub(2, 5), 98u);
}

TEST(Poly, FromRootsExamples) {
  const PrimeField f(7);
  EXPECT_EQ(poly_from_roots(f, std::vector<Elem>{}).coeffs, (std::vector<Elem>{1}));
  EXPECT_EQ(poly_from_roots(f, std::vector<Elem>{3}).coeffs, (std::vector<Elem>{4, 1}));
  EXPECT_EQ(poly_from_roots(f, std::vector<Elem>{2, 3}).coeffs, (std::vector<Elem>{6, 2, 1}));
  EXPECT_EQ(eval_poly(f, UniPoly{{6, 2, 1}}, 2), 0u);
  EXPECT_EQ(eval_poly(f, UniPoly{}, 5), 0u);
  EXPECT_EQ(poly_from_roots(f, std::vector<Elem>{}).degree(), 0);
  EXPECT_EQ(UniPoly{}.degree(), -1);
}

TEST(Poly, RepeatedRoots) {
  const PrimeField f(101);
  const auto p = poly_from_roots(f, std::vector<Elem>{5, 5});
  EXPECT_EQ(p.coeffs, (std::vector<Elem>{25, 91, 1}));  // x^2 - 10x + 25
}

TEST(Poly, EvalMatchesDirectProduct) {
  const PrimeField f(101);
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    const int len = static_cast<int>(uniform_below(rng, 9));
    std::vector<Elem> roots;
    for (int i = 0; i < len; ++i) roots.push_back(uniform_below(rng, 101));
    const auto p = poly_from_roots(f, roots);
    ASSERT_EQ(p.coeffs, oracle::expand_roots(roots, 101));
    const Elem x = uniform_below(rng, 101);
    ASSERT_EQ(eval_poly(f, p, x), oracle::product_at(roots, x, 101));
  }
}

TEST(Poly, MulAddShift) {
  const PrimeField f(7);
  const UniPoly a{{1, 1}}, b{{6, 1}};  // (x+1)(x-1) = x^2 - 1
  EXPECT_EQ(poly_mul(f, a, b).coeffs, (std::vector<Elem>{6, 0, 1}));
  EXPECT_TRUE(poly_add(f, a, UniPoly{{6, 6}}).is_zero());
  EXPECT_EQ(poly_shift(a, 2).coeffs, (std::vector<Elem>{0, 0, 1, 1}));
}

TEST(Det, Examples) {
  const PrimeField f(7);
  EXPECT_EQ(det(f, Matrix::identity(3)), 1u);
  EXPECT_EQ(det(f, Matrix::from_rows({{1, 2}, {3, 4}})), 5u);
  EXPECT_EQ(det(f, Matrix::from_rows({{1, 2, 3}, {4, 5, 6}, {1, 2, 3}})), 0u);
  EXPECT_EQ(det(f, Matrix(0, 0)), 1u);
  EXPECT_THROW(det(f, Matrix(2, 3)), Error);
}

TEST(Det, AgreesWithLeibniz) {
  for (std::uint64_t p : {7ULL, 101ULL}) {
    const PrimeField f(p);
    Rng rng(p);
    for (int t = 0; t < 400; ++t) {
      const auto n = 1 + uniform_below(rng, 5);
      std::vector<std::vector<Elem>> rows(n, std::vector<Elem>(n));
      // Sparse-ish matrices hit the pivot search harder.
      const bool sparse = t % 3 == 0;
      for (auto& r : rows)
        for (auto& x : r) x = sparse && uniform_below(rng, 2) ? 0 : uniform_below(rng, p);
      ASSERT_EQ(det(f, Matrix::from_rows(rows)), oracle::leibniz_det(rows, p));
    }
  }
}

TEST(Nullspace, Examples) {
  const PrimeField f(7);
  EXPECT_TRUE(left_nullspace(f, Matrix::identity(3)).empty());
  EXPECT_EQ(left_nullspace(f, Matrix(2, 2)).size(), 2u);
  const auto basis = left_nullspace(f, Matrix::from_rows({{1, 2}, {2, 4}}));
  ASSERT_EQ(basis.size(), 1u);
  // proportional to [2, 6]
  EXPECT_EQ(f.mul(basis[0][0], 6), f.mul(basis[0][1], 2));
  EXPECT_NE(basis[0][0], 0u);
}

TEST(Nullspace, RankNullityAndAnnihilation) {
  const PrimeField f(7);
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto r = 1 + uniform_below(rng, 5), c = 1 + uniform_below(rng, 5);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform_below(rng, 3) == 0 ? 0 : uniform_below(rng, 7);
    const auto basis = left_nullspace(f, m);
    ASSERT_EQ(rank(f, m) + basis.size(), r);
    for (const auto& v : basis) {
      for (Elem x : vec_mul(f, v, m)) ASSERT_EQ(x, 0u);
      ASSERT_TRUE(std::any_of(v.begin(), v.end(), [](Elem x) { return x != 0; }));
    }
  }
}

TEST(Matrix, MatmulAndTranspose) {
  const PrimeField f(101);
  const auto a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  const auto b = Matrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(matmul(f, a, b).to_rows(), (std::vector<std::vector<Elem>>{{4, 5}, {10, 11}}));
  EXPECT_EQ(a.transpose().to_rows(), (std::vector<std::vector<Elem>>{{1, 4}, {2, 5}, {3, 6}}));
  EXPECT_THROW(matmul(f, a, a), Error);
}

TEST(Random, DeterministicAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(uniform_below(a, 1000), uniform_below(b, 1000));
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto v = sample_distinct(rng, 20, 7);
    std::set<std::uint64_t> s(v.begin(), v.end());
    ASSERT_EQ(s.size(), 7u);
    ASSERT_LT(*s.rbegin(), 20u);
  }
  const auto big = sample_distinct(rng, 1ULL << 40, 50);
  EXPECT_EQ(std::set<std::uint64_t>(big.begin(), big.end()).size(), 50u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
}
