#pragma once

// Complex FFT kernels on Eigen vectors, templated on the real scalar type.
// Power-of-two lengths use an iterative radix-2 transform; every other length
// goes through Bluestein's chirp-z reduction to a power-of-two cyclic
// convolution.

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace tracefn::fft {

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1U;
  return m;
}

/// exp(sign * 2 pi i k / n) with k reduced mod n.
template <typename Real>
std::complex<Real> twiddle(std::int64_t k, std::int64_t n, int sign) {
  k %= n;
  if (k < 0) k += n;
  const Real angle = Real(sign) * Real(2) * std::numbers::pi_v<Real> * Real(k) / Real(n);
  return {std::cos(angle), std::sin(angle)};
}

/// In-place radix-2 transform, X[k] = sum_j x[j] exp(sign 2 pi i jk/n).
/// Unnormalized in both directions.
template <typename Real>
void radix2_inplace(CVector<Real>& x, int sign) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1U;
    for (; j & bit; bit >>= 1U) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  std::vector<std::complex<Real>> roots(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    roots[k] = twiddle<Real>(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n), sign);
  }
  for (std::size_t len = 2; len <= n; len <<= 1U) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<Real> u = x[i + j];
        const std::complex<Real> v = x[i + j + len / 2] * roots[j * stride];
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
      }
    }
  }
}

/// Cyclic convolution of equal-length vectors, via a zero-padded
/// power-of-two linear convolution folded back modulo n.
template <typename Real>
CVector<Real> cyclic_convolve(const CVector<Real>& a, const CVector<Real>& b) {
  const std::size_t n = static_cast<std::size_t>(a.size());
  CVector<Real> out = CVector<Real>::Zero(a.size());
  if (n == 0) return out;
  const std::size_t m = next_power_of_two(2 * n - 1);
  CVector<Real> fa = CVector<Real>::Zero(static_cast<Eigen::Index>(m));
  CVector<Real> fb = CVector<Real>::Zero(static_cast<Eigen::Index>(m));
  fa.head(a.size()) = a;
  fb.head(b.size()) = b;
  radix2_inplace(fa, -1);
  radix2_inplace(fb, -1);
  fa.array() *= fb.array();
  radix2_inplace(fa, +1);
  const Real scale = Real(1) / Real(m);
  for (std::size_t k = 0; k < 2 * n - 1; ++k) out[static_cast<Eigen::Index>(k % n)] += fa[static_cast<Eigen::Index>(k)] * scale;
  return out;
}

/// Discrete Fourier transform of any length:
/// X[k] = sum_j x[j] exp(sign 2 pi i jk/n), unnormalized.
template <typename Real>
CVector<Real> dft(const CVector<Real>& x, int sign) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  if (n <= 1) return x;
  if (is_power_of_two(n)) {
    CVector<Real> y = x;
    radix2_inplace(y, sign);
    return y;
  }
  // jk = (j^2 + k^2 - (k-j)^2) / 2; the chirp phase uses j^2 mod 2n.
  const auto two_n = static_cast<std::int64_t>(2 * n);
  std::vector<std::complex<Real>> chirp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<std::int64_t>(static_cast<unsigned __int128>(j) * j % static_cast<unsigned __int128>(two_n));
    chirp[j] = twiddle<Real>(jj, two_n, sign);
  }
  const std::size_t m = next_power_of_two(2 * n - 1);
  CVector<Real> a = CVector<Real>::Zero(static_cast<Eigen::Index>(m));
  CVector<Real> b = CVector<Real>::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < n; ++j) a[static_cast<Eigen::Index>(j)] = x[static_cast<Eigen::Index>(j)] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) {
    b[static_cast<Eigen::Index>(j)] = std::conj(chirp[j]);
    b[static_cast<Eigen::Index>(m - j)] = std::conj(chirp[j]);
  }
  radix2_inplace(a, -1);
  radix2_inplace(b, -1);
  a.array() *= b.array();
  radix2_inplace(a, +1);
  const Real scale = Real(1) / Real(m);
  CVector<Real> y(x.size());
  for (std::size_t k = 0; k < n; ++k) y[static_cast<Eigen::Index>(k)] = a[static_cast<Eigen::Index>(k)] * scale * chirp[k];
  return y;
}

/// O(n^2) reference transform with exactly reduced phases.
template <typename Real>
CVector<Real> dft_naive(const CVector<Real>& x, int sign) {
  const auto n = static_cast<std::int64_t>(x.size());
  std::vector<std::complex<Real>> roots(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) roots[static_cast<std::size_t>(k)] = twiddle<Real>(k, n, sign);
  CVector<Real> y = CVector<Real>::Zero(x.size());
  for (std::int64_t k = 0; k < n; ++k) {
    std::complex<Real> acc{};
    for (std::int64_t j = 0; j < n; ++j) acc += x[j] * roots[static_cast<std::size_t>(j * k % n)];
    y[k] = acc;
  }
  return y;
}

}  // namespace tracefn::fft
