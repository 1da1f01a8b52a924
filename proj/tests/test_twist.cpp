#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tracefn/twist_experiment.hpp"

using namespace tracefn;

namespace {

const CuspFormCoeffs& table() {
  static const CuspFormCoeffs coeffs = extend_tau(20000);
  return coeffs;
}

/// sum over all n up to the table extent of lambda(n) K(n mod p) V(n/p), with
/// no support truncation.
Complex full_sum(const CuspFormCoeffs& c, const TraceFunction& k, const WindowSpec& w) {
  Complex acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= c.extent(); ++n) {
    acc += c.lambda(n) * w(static_cast<double>(n) / static_cast<double>(k.p())) * k[n % k.p()];
  }
  return acc;
}

}  // namespace

TEST(Window, SupportAndPeak) {
  const WindowSpec w;
  EXPECT_DOUBLE_EQ(w(1.0), 1.0);
  EXPECT_EQ(w(0.0), 0.0);
  EXPECT_NEAR(w(w.x_max()), kWindowCutoff, 1e-20);
  EXPECT_NEAR(w(w.x_min()), kWindowCutoff, 1e-20);
  EXPECT_NEAR(w.x_min() * w.x_max(), 1.0, 1e-12);
}

TEST(Twist, MatchesUntruncatedSum) {
  const WindowSpec w;
  for (std::uint64_t p : {101ULL, 499ULL}) {
    const PrimeField f(p);
    for (const auto& k : {make_trivial(f), make_kloosterman(f, 2), make_legendre(f)}) {
      EXPECT_LT(std::abs(twisted_sum(table(), k, w) - full_sum(table(), k, w)), 1e-9);
    }
  }
}

TEST(Twist, TrivialBoundHolds) {
  const WindowSpec w;
  const PrimeField f(101);
  const auto kl = make_kloosterman(f, 2);
  double weighted = 0.0;
  for (std::uint64_t n = 1; n <= table().extent(); ++n) weighted += std::fabs(table().lambda(n) * w(n / 101.0));
  EXPECT_LE(std::abs(twisted_sum(table(), kl, w)), 2.0 * weighted);
  EXPECT_LE(std::abs(twisted_sum(table(), kl, w)), trivial_bound(table(), kl, w));
}

TEST(Twist, ZeroResidueClass) {
  const WindowSpec w;
  const PrimeField f(101);
  ComplexVector ind = ComplexVector::Zero(101);
  ind[0] = 1.0;
  const auto k = make_custom(f, ind, 1.0, true);
  Complex expected{0.0, 0.0};
  for (std::uint64_t n = 101; n <= table().extent(); n += 101) expected += table().lambda(n) * w(n / 101.0);
  EXPECT_LT(std::abs(twisted_sum(table(), k, w) - expected), 1e-12);
}

TEST(Twist, LinearInKernel) {
  const WindowSpec w;
  const PrimeField f(211);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const Complex alpha(g(rng), g(rng)), beta(g(rng), g(rng));
  const auto k1 = make_kloosterman(f, 2);
  const auto k2 = make_mult(f, 2);
  const Complex lhs = twisted_sum(table(), linear_combination(alpha, k1, beta, k2), w);
  const Complex rhs = alpha * twisted_sum(table(), k1, w) + beta * twisted_sum(table(), k2, w);
  EXPECT_LT(std::abs(lhs - rhs), 1e-9);
}

TEST(Twist, ResidueClassesSumToTrivial) {
  const WindowSpec w;
  const std::uint64_t p = 101;
  const PrimeField f(p);
  Complex total{0.0, 0.0};
  for (std::uint64_t r = 0; r < p; ++r) {
    ComplexVector ind = ComplexVector::Zero(static_cast<Eigen::Index>(p));
    ind[static_cast<Eigen::Index>(r)] = 1.0;
    total += twisted_sum(table(), make_custom(f, ind, 1.0, true), w);
  }
  EXPECT_LT(std::abs(total - twisted_sum(table(), make_trivial(f), w)), 1e-9);
}

TEST(Twist, ExtentErrorNamesRequirement) {
  const auto small = extend_tau(100);
  const PrimeField f(101);
  try {
    twisted_sum(small, make_trivial(f), WindowSpec{});
    FAIL() << "expected ExtentError";
  } catch (const ExtentError& e) {
    EXPECT_EQ(e.needed(), required_extent(WindowSpec{}, 101));
  }
}

TEST(Twist, RunIsSortedAndThreadIndependent) {
  const WindowSpec w;
  const auto factory = [](const PrimeField& f) { return make_kloosterman(f, 2); };
  const std::vector<std::uint64_t> primes{499, 101, 211, 307, 401, 103};
  const auto one = run_twist(table(), "kloosterman:2", factory, primes, w, {1});
  const auto many = run_twist(table(), "kloosterman:2", factory, primes, w, {5});
  ASSERT_EQ(one.rows.size(), 6U);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    if (i > 0) {
      EXPECT_LT(one.rows[i - 1].p, one.rows[i].p);
    }
    EXPECT_EQ(one.rows[i].value, many.rows[i].value);
    EXPECT_LE(one.rows[i].magnitude, one.rows[i].trivial);
  }
  EXPECT_THROW(run_twist(table(), "x", factory, {101, 100}, w), DomainError);
}

TEST(ExponentFit, RecoversKnownSlope) {
  TwistRun run;
  for (std::uint64_t p : {101ULL, 211ULL, 401ULL, 809ULL, 1601ULL, 3203ULL}) {
    TwistRow row;
    row.p = p;
    row.magnitude = 3.0 * std::pow(static_cast<double>(p), 0.4);
    run.rows.push_back(row);
  }
  const auto fit = exponent_fit(run);
  EXPECT_NEAR(fit.delta, 0.6, 1e-10);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);
  EXPECT_LT(fit.stderr_delta, 1e-8);
  ASSERT_TRUE(fit.pass.has_value());
  EXPECT_TRUE(*fit.pass);
  run.control = true;
  EXPECT_FALSE(exponent_fit(run).pass.has_value());
  run.rows.resize(4);
  EXPECT_THROW(exponent_fit(run), DomainError);
}

TEST(ExponentFit, DegenerateWhenAllRowsVanish) {
  TwistRun run;
  for (std::uint64_t p : {101ULL, 211ULL, 401ULL, 809ULL, 1601ULL}) run.rows.push_back({p, {0.0, 0.0}, 0.0, 1.0, 0.0});
  const auto fit = exponent_fit(run);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_EQ(fit.dropped, 5U);
}

TEST(PrimeGrid, SortedDistinctPrimesInRange) {
  const auto grid = prime_grid(101, 4999, 40);
  EXPECT_GE(grid.size(), 30U);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_TRUE(is_prime(grid[i]));
    EXPECT_GE(grid[i], 101U);
    EXPECT_LE(grid[i], 4999U);
    if (i > 0) {
      EXPECT_LT(grid[i - 1], grid[i]);
    }
  }
}

TEST(AmplifiedDemo, Examples) {
  const PrimeField f(101);
  const auto kl = make_kloosterman(f, 2);
  const auto dfi = amplified_second_moment_demo(table(), kl, WindowSpec{}, 10.0, AmplifierKind::dfi);
  EXPECT_EQ(dfi.amplifier.exact_total, 4);
  EXPECT_NEAR(dfi.amplified, 16.0 * std::norm(dfi.twisted), 1e-9 * dfi.amplified + 1e-12);
  const auto v = amplified_second_moment_demo(table(), kl, WindowSpec{}, 50.0, AmplifierKind::venkatesh);
  double sum = 0.0;
  for (std::uint64_t l : v.amplifier.primes) sum += std::fabs(table().lambda(l));
  EXPECT_NEAR(v.amplifier.amplifier, sum, 1e-12);
  EXPECT_GT(v.amplifier.amplifier, 0.0);
  const auto a200 = amplifier_weights(AmplifierKind::dfi, 200.0, table());
  const auto a50 = amplifier_weights(AmplifierKind::dfi, 50.0, table());
  EXPECT_GT(a200.amplifier, a50.amplifier);
}
