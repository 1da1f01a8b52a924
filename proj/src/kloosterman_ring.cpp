#include "tracefn/kloosterman_ring.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace tracefn {

namespace {

std::int64_t reduce(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t old_r = reduce(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) throw DomainError("inverse_mod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return reduce(old_s, m);
}

RingKloosterman RingKloosterman::make(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c) {
  if (c < 1) throw DomainError("kl_ring: modulus c must be positive, got " + std::to_string(c));
  return {reduce(a, c), reduce(b, c), reduce(d, c), c};
}

Complex kl_ring(const RingKloosterman& k) {
  const std::int64_t c = k.c;
  // Root tables are reused across calls with the same modulus.
  thread_local std::int64_t cached_c = 0;
  thread_local std::vector<Complex> roots;
  if (cached_c != c) {
    roots.resize(static_cast<std::size_t>(c));
    for (std::int64_t r = 0; r < c; ++r) roots[static_cast<std::size_t>(r)] = unit_root(r, c);
    cached_c = c;
  }
  const auto phase = [&](std::int64_t s1, std::int64_t s2) {
    const auto e = static_cast<std::int64_t>((static_cast<__int128>(k.a) * s1 + static_cast<__int128>(k.b) * s2) % c);
    return roots[static_cast<std::size_t>(e)];
  };
  Complex total{0.0, 0.0};
  for (std::int64_t s1 = 0; s1 < c; ++s1) {
    const std::int64_t g = std::gcd(s1, c);  // gcd(0, c) = c
    if (k.d % g != 0) continue;
    // s1 s2 = d (mod c)  <=>  s2 = s0 (mod c/g)
    const std::int64_t step = c / g;
    const std::int64_t s0 = step == 1 ? 0
                                      : static_cast<std::int64_t>(static_cast<__int128>(k.d / g) *
                                                                      inverse_mod(s1 / g, step) % step);
    for (std::int64_t s2 = s0; s2 < c; s2 += step) total += phase(s1, s2);
  }
  return total;
}

Complex kl_ring(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c) {
  return kl_ring(RingKloosterman::make(a, b, d, c));
}

Complex kl_unit_twist(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c) {
  const RingKloosterman k = RingKloosterman::make(a, b, d, c);
  if (std::gcd(k.d, c) != 1) {
    throw DomainError("kl_unit_twist: d = " + std::to_string(d) + " is not a unit mod " + std::to_string(c));
  }
  const auto db = static_cast<std::int64_t>(static_cast<__int128>(k.d) * k.b % c);
  return kl_ring(k.a, db, 1, c);
}

}  // namespace tracefn
