#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tracefn/trace_zoo.hpp"

using namespace tracefn;

namespace {

double max_diff(const TraceFunction& a, const TraceFunction& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(TraceZoo, Trivial) {
  for (std::uint64_t p : {3ULL, 5ULL}) {
    const auto k = make_trivial(PrimeField(p));
    for (std::uint64_t x = 0; x < p; ++x) EXPECT_EQ(k[x], Complex(1.0, 0.0));
    EXPECT_EQ(k.sup_norm(), 1.0);
    EXPECT_EQ(k.conductor_bound(), 1.0);
  }
}

TEST(TraceZoo, AdditiveIsNotFourierEligible) {
  const PrimeField f(7);
  EXPECT_FALSE(make_additive(f, 1).fourier_eligible());
  EXPECT_TRUE(make_additive(f, 0).fourier_eligible());
  EXPECT_TRUE(make_legendre(f).fourier_eligible());
  EXPECT_FALSE(pointwise_product(make_additive(f, 2), make_legendre(f)).fourier_eligible());
}

TEST(TraceZoo, KloostermanAtFive) {
  const PrimeField f(5);
  const auto kl = make_kloosterman(f, 2);
  const Complex expected = (2.0 + oracle::e(4, 5) + oracle::e(1, 5)) / std::sqrt(5.0);
  EXPECT_LT(std::abs(kl[4] - expected), 1e-12);
  EXPECT_EQ(kl[0], Complex(0.0, 0.0));
  EXPECT_LT(std::abs(kl.values().sum() - 1.0 / std::sqrt(5.0)), 1e-12);
  EXPECT_EQ(kl.conductor_bound(), 4.0);
}

TEST(TraceZoo, KloostermanMatchesNestedLoops) {
  for (std::uint64_t p : {13ULL, 31ULL}) {
    const PrimeField f(p);
    for (int m = 2; m <= 4; ++m) {
      const auto kl = make_kloosterman(f, m);
      for (std::uint64_t a = 0; a < p; ++a) {
        EXPECT_LT(std::abs(kl[a] - oracle::kl_naive(static_cast<std::int64_t>(p), m, static_cast<std::int64_t>(a))),
                  1e-8);
      }
    }
  }
}

TEST(TraceZoo, KloostermanRankBounds) {
  for (std::uint64_t p : oracle::primes_upto(199)) {
    if (p < 3) continue;
    const PrimeField f(p);
    EXPECT_LE(make_kloosterman(f, 2).sup_norm(), 2.0 + 1e-9);
    EXPECT_LE(make_kloosterman(f, 3).sup_norm(), 3.0 + 1e-6);
    if (p <= 61) {
      EXPECT_LE(make_kloosterman(f, 4).sup_norm(), 4.0 + 1e-6);
    }
  }
}

TEST(TraceZoo, KloostermanRejectsSmallRank) { EXPECT_THROW(make_kloosterman(PrimeField(7), 1), DomainError); }

TEST(TraceZoo, ConvolutionReproducesKloosterman) {
  for (std::uint64_t p : {5ULL, 13ULL, 101ULL}) {
    const PrimeField f(p);
    const auto psi = make_additive(f, 1);
    auto acc = psi;
    for (int m = 2; m <= 4; ++m) {
      acc = mult_convolve(acc, psi);
      auto expected = make_kloosterman(f, m);
      for (std::uint64_t a = 1; a < p; ++a) EXPECT_LT(std::abs(acc[a] - expected[a]), 1e-9);
    }
  }
}

TEST(TraceZoo, TrivialConvolution) {
  const PrimeField f(7);
  const auto t = make_trivial(f);
  const auto c = mult_convolve(t, t);
  EXPECT_NEAR(c[1].real(), 6.0 / std::sqrt(7.0), 1e-12);
  EXPECT_EQ(c[0], Complex(0.0, 0.0));
}

TEST(TraceZoo, FastConvolutionMatchesNaive) {
  const PrimeField f(101);
  const auto k1 = make_kloosterman(f, 2);
  const auto k2 = make_mult(f, 4);
  EXPECT_LT(max_diff(mult_convolve(k1, k2), mult_convolve_naive(k1, k2)), 1e-8);
}

TEST(TraceZoo, ConvolutionCommutesAndAssociates) {
  const PrimeField f(53);
  const auto a = make_kloosterman(f, 2);
  const auto b = make_mult(f, 4);
  const auto c = make_legendre(f);
  EXPECT_LT(max_diff(mult_convolve(a, b), mult_convolve(b, a)), 1e-9);
  EXPECT_LT(max_diff(mult_convolve(mult_convolve(a, b), c), mult_convolve(a, mult_convolve(b, c))), 1e-9);
}

TEST(TraceZoo, ConvolutionFieldMismatch) {
  EXPECT_THROW(mult_convolve(make_trivial(PrimeField(5)), make_trivial(PrimeField(7))), DomainError);
  EXPECT_THROW(pointwise_product(make_trivial(PrimeField(5)), make_trivial(PrimeField(7))), DomainError);
}

TEST(TraceZoo, PullbackIdentity) {
  const PrimeField f(11);
  const auto k = make_kloosterman(f, 2);
  const RationalMap id(f, Polynomial(f, {0, 1}), Polynomial(f, {1}));
  EXPECT_LT(max_diff(pullback(k, id), k), 1e-15);
  EXPECT_EQ(pullback(k, id).conductor_bound(), k.conductor_bound() * 2.0);
}

TEST(TraceZoo, PullbackLegendreBySquare) {
  const PrimeField f(7);
  const RationalMap sq(f, Polynomial(f, {0, 0, 1}), Polynomial(f, {1}));
  const auto k = pullback(make_legendre(f), sq);
  EXPECT_EQ(k[0], Complex(0.0, 0.0));
  for (std::uint64_t x = 1; x < 7; ++x) EXPECT_EQ(k[x], Complex(1.0, 0.0));
}

TEST(TraceZoo, PullbackByInversionPermutesTable) {
  const PrimeField f(11);
  const auto kl = make_kloosterman(f, 2);
  const RationalMap inv(f, Polynomial(f, {1}), Polynomial(f, {0, 1}));
  const auto k = pullback(kl, inv);
  EXPECT_EQ(k[0], Complex(0.0, 0.0));
  for (std::int64_t x = 1; x < 11; ++x) {
    EXPECT_EQ(k[static_cast<std::uint64_t>(x)], kl[static_cast<std::uint64_t>(oracle::inv_prime(x, 11))]);
  }
}

TEST(TraceZoo, RationalMapReducesCommonFactors) {
  const PrimeField f(13);
  // (x^2 - 1)/(x - 1) = x + 1, no pole at 1 after reduction
  const RationalMap phi(f, Polynomial(f, {-1, 0, 1}), Polynomial(f, {-1, 1}));
  FieldElement out{};
  EXPECT_TRUE(phi.apply(f, f.element(1), out));
  EXPECT_EQ(out.value, 2U);
  EXPECT_THROW(RationalMap(f, Polynomial(f, {1}), Polynomial(f, {0})), DomainError);
}

TEST(TraceZoo, PointwiseProducts) {
  const PrimeField f5(5);
  const auto sq = pointwise_product(make_legendre(f5), make_legendre(f5));
  EXPECT_EQ(sq[0], Complex(0.0, 0.0));
  for (std::uint64_t x = 1; x < 5; ++x) EXPECT_EQ(sq[x], Complex(1.0, 0.0));

  const PrimeField f(13);
  const auto kl = make_kloosterman(f, 2);
  EXPECT_LT(max_diff(pointwise_product(kl, make_trivial(f)), kl), 1e-15);
  const auto prod = pointwise_product(kl, make_legendre(f));
  for (std::int64_t x = 0; x < 13; ++x) {
    EXPECT_LT(std::abs(prod[static_cast<std::uint64_t>(x)] - kl[static_cast<std::uint64_t>(x)] * double(oracle::legendre(x, 13))),
              1e-15);
  }
  EXPECT_EQ(prod.conductor_bound(), kl.conductor_bound() * make_legendre(f).conductor_bound());
}

TEST(TraceZoo, SupNormBoundEnforced) {
  const PrimeField f(5);
  ComplexVector v = ComplexVector::Constant(5, Complex(3.0, 0.0));
  EXPECT_THROW(make_custom(f, v, 2.0, true), DomainError);
  EXPECT_NO_THROW(make_custom(f, v, 3.0, true));
  EXPECT_THROW(make_custom(f, ComplexVector::Zero(4), 1.0, true), DomainError);
}

TEST(TraceZoo, LinearCombination) {
  const PrimeField f(13);
  const auto a = make_kloosterman(f, 2);
  const auto b = make_legendre(f);
  const Complex alpha(0.3, -1.1), beta(2.0, 0.5);
  const auto c = linear_combination(alpha, a, beta, b);
  for (std::uint64_t x = 0; x < 13; ++x) EXPECT_LT(std::abs(c[x] - (alpha * a[x] + beta * b[x])), 1e-14);
}
