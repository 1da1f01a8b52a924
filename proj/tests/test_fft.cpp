#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tracefn/fft.hpp"

using namespace tracefn;

namespace {

fft::CVector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  fft::CVector<double> v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST(FFT, MatchesNaiveForAllLengths) {
  for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 12, 13, 16, 31, 64, 97, 100, 128}) {
    const auto x = random_vector(n, n);
    for (int sign : {-1, 1}) {
      const auto fast = fft::dft(x, sign);
      const auto slow = fft::dft_naive(x, sign);
      EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-9 * static_cast<double>(n)) << n;
    }
  }
}

TEST(FFT, CyclicConvolutionMatchesDirectSum) {
  for (std::size_t n : {1, 4, 6, 12, 52, 100}) {
    const auto a = random_vector(n, 1 + n);
    const auto b = random_vector(n, 2 + n);
    const auto c = fft::cyclic_convolve(a, b);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) {
        acc += a[static_cast<Eigen::Index>(i)] * b[static_cast<Eigen::Index>((k + n - i) % n)];
      }
      EXPECT_LT(std::abs(c[static_cast<Eigen::Index>(k)] - acc), 1e-9);
    }
  }
}

TEST(FFT, FloatInstantiation) {
  fft::CVector<float> x(5);
  for (Eigen::Index i = 0; i < 5; ++i) x[i] = {static_cast<float>(i), 0.0F};
  const auto y = fft::dft(x, -1);
  EXPECT_NEAR(y[0].real(), 10.0F, 1e-4F);
}
