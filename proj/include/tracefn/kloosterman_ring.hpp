#pragma once

#include <cstdint>

#include "tracefn/ff_core.hpp"

namespace tracefn {

/// Parameters (a, b, d; c) of a complete Kloosterman-type sum over Z/c.
struct RingKloosterman {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t d = 0;
  std::int64_t c = 1;

  /// Reduces a, b, d into [0, c); throws DomainError when c < 1.
  static RingKloosterman make(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c);
};

/// Kl(a, b, d; c) = sum_{s1 s2 = d mod c} e((a s1 + b s2)/c). The modulus d
/// need not be a unit. O(c + number of solution pairs).
Complex kl_ring(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c);
Complex kl_ring(const RingKloosterman& params);

/// For a unit d, evaluates Kl(a, db, 1; c), which equals Kl(a, b, d; c).
/// Throws DomainError when gcd(d, c) != 1.
Complex kl_unit_twist(std::int64_t a, std::int64_t b, std::int64_t d, std::int64_t c);

std::int64_t gcd_i64(std::int64_t a, std::int64_t b);
/// Inverse of a modulo m (gcd must be 1).
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace tracefn
