#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

#include "tracefn/errors.hpp"

namespace tracefn {

using Complex = std::complex<double>;

/// Deterministic primality test, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Primes q dividing n, ascending, without multiplicity.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Residue class in [0, p). The owning PrimeField is carried separately.
struct FieldElement {
  std::uint64_t value = 0;

  friend bool operator==(FieldElement, FieldElement) = default;
  friend auto operator<=>(FieldElement, FieldElement) = default;
};

/// The prime field F_p with a fixed primitive root and full discrete-log
/// tables. Copies share the immutable tables, so passing by value is cheap and
/// concurrent use is safe.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);

  std::uint64_t p() const { return tables_->p; }
  /// Smallest primitive root modulo p.
  std::uint64_t generator() const { return tables_->g; }

  FieldElement element(std::int64_t x) const;

  FieldElement add(FieldElement x, FieldElement y) const;
  FieldElement sub(FieldElement x, FieldElement y) const;
  FieldElement neg(FieldElement x) const;
  FieldElement mul(FieldElement x, FieldElement y) const;
  /// Multiplicative inverse; throws DomainError on zero.
  FieldElement inv(FieldElement x) const;

  /// g^k for any integer k (reduced mod p-1).
  FieldElement exp_g(std::int64_t k) const;
  /// Discrete logarithm base g in [0, p-1); throws DomainError at zero.
  std::uint64_t dlog(FieldElement x) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p() == b.p(); }

 private:
  struct Tables {
    std::uint64_t p = 0;
    std::uint64_t g = 0;
    std::vector<std::uint32_t> dlog;   // indexed by x in [1, p)
    std::vector<std::uint32_t> power;  // indexed by k in [0, p-1)
  };
  std::shared_ptr<const Tables> tables_;
};

/// e(x/p) = exp(2 pi i x / p).
Complex additive_character(const PrimeField& field, FieldElement x);

/// The character chi(x) = exp(2 pi i dlog(x) / order) of the given order
/// dividing p-1, extended by chi(0) = 0.
Complex mult_character(const PrimeField& field, std::uint64_t order, FieldElement x);

/// Free-function form of PrimeField::dlog.
std::uint64_t dlog(const PrimeField& field, FieldElement x);

/// exp(2 pi i num / den) with the numerator reduced first to keep the phase
/// argument small. Quarter turns are exact.
inline Complex unit_root(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % den;
  if (r < 0) r += den;
  if ((4 * static_cast<__int128>(r)) % den == 0) {
    static constexpr Complex kQuarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return kQuarter[static_cast<std::size_t>(4 * static_cast<__int128>(r) / den)];
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace tracefn
