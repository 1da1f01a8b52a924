#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tracefn/kloosterman_ring.hpp"
#include "tracefn/trace_zoo.hpp"

using namespace tracefn;

TEST(KlRing, MatchesDoubleLoop) {
  for (std::int64_t c : {1, 2, 4, 6, 9, 12, 25, 30}) {
    for (std::int64_t a = 0; a < c; a += std::max<std::int64_t>(1, c / 5)) {
      for (std::int64_t b = 0; b < c; b += std::max<std::int64_t>(1, c / 4)) {
        for (std::int64_t d = 0; d < c; ++d) {
          EXPECT_LT(std::abs(kl_ring(a, b, d, c) - oracle::kl_ring(a, b, d, c)), 1e-9) << a << b << d << c;
        }
      }
    }
  }
}

TEST(KlRing, Examples) {
  EXPECT_LT(std::abs(kl_ring(0, 0, 1, 5) - Complex(4.0, 0.0)), 1e-12);
  EXPECT_LT(std::abs(kl_ring(1, 1, 1, 5) - std::sqrt(5.0) * make_kloosterman(PrimeField(5), 2)[1]), 1e-12);
  EXPECT_EQ(kl_ring(3, 4, 7, 1), Complex(1.0, 0.0));
  EXPECT_THROW(kl_ring(1, 1, 1, 0), DomainError);
  EXPECT_THROW(kl_ring(1, 1, 1, -3), DomainError);
}

TEST(KlRing, ReducesArguments) {
  const auto r = RingKloosterman::make(-1, 17, 5, 7);
  EXPECT_EQ(r.a, 6);
  EXPECT_EQ(r.b, 3);
  EXPECT_EQ(r.d, 5);
  EXPECT_LT(std::abs(kl_ring(r) - kl_ring(-1, 17, 5, 7)), 1e-12);
}

TEST(KlRing, CrtFactorization) {
  const std::int64_t c1 = 3, c2 = 5, c = 15;
  for (std::int64_t a = 0; a < c; ++a) {
    for (std::int64_t b = 0; b < c; ++b) {
      for (std::int64_t d : {0, 1, 3, 5, 7}) {
        const std::int64_t i1 = inverse_mod(c2 % c1, c1), i2 = inverse_mod(c1 % c2, c2);
        const Complex prod = kl_ring(a * i1 % c1, b * i1 % c1, d % c1, c1) * kl_ring(a * i2 % c2, b * i2 % c2, d % c2, c2);
        EXPECT_LT(std::abs(kl_ring(a, b, d, c) - prod), 1e-8);
      }
    }
  }
}

TEST(KlRing, WeilBoundAtPrimes) {
  for (std::int64_t p : oracle::primes_upto(199)) {
    for (std::int64_t a = 1; a < p; a += 7) {
      for (std::int64_t b = 1; b < p; b += 11) {
        EXPECT_LE(std::abs(kl_ring(a, b, 1, p)), 2.0 * std::sqrt(static_cast<double>(p)) + 1e-9);
      }
    }
  }
}

TEST(KlRing, ConjugationSymmetry) {
  for (std::int64_t c : {7, 12, 45}) {
    for (std::int64_t a = 0; a < c; a += 2) {
      for (std::int64_t d = 0; d < c; d += 3) {
        EXPECT_LT(std::abs(kl_ring(-a, -5, d, c) - std::conj(kl_ring(a, 5, d, c))), 1e-10);
      }
    }
  }
}

TEST(KlRing, DegenerateArgumentsCountSolutions) {
  for (std::int64_t c : {8, 12, 27}) {
    for (std::int64_t d = 0; d < c; ++d) {
      std::int64_t count = 0;
      for (std::int64_t s1 = 0; s1 < c; ++s1)
        for (std::int64_t s2 = 0; s2 < c; ++s2) count += (s1 * s2 - d) % c == 0 ? 1 : 0;
      const Complex v = kl_ring(0, 0, d, c);
      EXPECT_NEAR(v.real(), static_cast<double>(count), 1e-9);
      EXPECT_NEAR(v.imag(), 0.0, 1e-9);
    }
  }
}

TEST(KlRing, UnitTwist) {
  EXPECT_LT(std::abs(kl_unit_twist(1, 1, 2, 5) - kl_ring(1, 2, 1, 5)), 1e-9);
  EXPECT_LT(std::abs(kl_ring(1, 2, 1, 5) - kl_ring(2, 1, 1, 5)), 1e-9);
  EXPECT_LT(std::abs(kl_ring(1, 1, 2, 5) - kl_ring(2, 1, 1, 5)), 1e-9);
  EXPECT_EQ(kl_unit_twist(1, 1, 1, 1), Complex(1.0, 0.0));
  EXPECT_THROW(kl_unit_twist(1, 1, 2, 4), DomainError);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const std::int64_t c = std::uniform_int_distribution<std::int64_t>(2, 500)(rng);
    std::int64_t d;
    do {
      d = std::uniform_int_distribution<std::int64_t>(1, c - 1)(rng);
    } while (gcd_i64(d, c) != 1);
    const std::int64_t b = std::uniform_int_distribution<std::int64_t>(0, c - 1)(rng);
    EXPECT_LT(std::abs(kl_unit_twist(0, b, d, c) - kl_ring(0, d * b % c, 1, c)), 1e-9);
  }
}

TEST(KlRing, Helpers) {
  EXPECT_EQ(gcd_i64(12, -18), 6);
  EXPECT_EQ(gcd_i64(0, 0), 0);
  EXPECT_EQ(inverse_mod(3, 7), 5);
  EXPECT_EQ(inverse_mod(-3, 7), 2);
}
