#include "tracefn/ff_core.hpp"

#include <string>

namespace tracefn {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These twelve bases are a deterministic witness set for every n < 3.1e23.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

PrimeField::PrimeField(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) {
    throw DomainError("PrimeField: modulus " + std::to_string(p) + " is not an odd prime");
  }
  if (p > (std::uint64_t{1} << 31)) {
    throw DomainError("PrimeField: modulus " + std::to_string(p) + " too large for full dlog tables");
  }
  auto tables = std::make_shared<Tables>();
  tables->p = p;
  const auto factors = prime_factors(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool primitive = true;
    for (std::uint64_t q : factors) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      tables->g = g;
      break;
    }
  }
  tables->dlog.assign(p, 0);
  tables->power.assign(p - 1, 0);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k < p - 1; ++k) {
    tables->power[k] = static_cast<std::uint32_t>(x);
    tables->dlog[x] = static_cast<std::uint32_t>(k);
    x = x * tables->g % p;
  }
  tables_ = std::move(tables);
}

FieldElement PrimeField::element(std::int64_t x) const {
  const auto p = static_cast<std::int64_t>(tables_->p);
  std::int64_t r = x % p;
  if (r < 0) r += p;
  return {static_cast<std::uint64_t>(r)};
}

FieldElement PrimeField::add(FieldElement x, FieldElement y) const {
  std::uint64_t s = x.value + y.value;
  if (s >= p()) s -= p();
  return {s};
}

FieldElement PrimeField::sub(FieldElement x, FieldElement y) const {
  return {x.value >= y.value ? x.value - y.value : x.value + p() - y.value};
}

FieldElement PrimeField::neg(FieldElement x) const { return {x.value == 0 ? 0 : p() - x.value}; }

FieldElement PrimeField::mul(FieldElement x, FieldElement y) const { return {x.value * y.value % p()}; }

FieldElement PrimeField::inv(FieldElement x) const {
  if (x.value == 0) throw DomainError("PrimeField::inv: zero has no inverse");
  const std::uint64_t k = tables_->dlog[x.value];
  return {tables_->power[k == 0 ? 0 : p() - 1 - k]};
}

FieldElement PrimeField::exp_g(std::int64_t k) const {
  const auto n = static_cast<std::int64_t>(p() - 1);
  std::int64_t r = k % n;
  if (r < 0) r += n;
  return {tables_->power[static_cast<std::size_t>(r)]};
}

std::uint64_t PrimeField::dlog(FieldElement x) const {
  if (x.value == 0) throw DomainError("dlog: zero is not in the multiplicative group");
  return tables_->dlog[x.value];
}

Complex additive_character(const PrimeField& field, FieldElement x) {
  return unit_root(static_cast<std::int64_t>(x.value), static_cast<std::int64_t>(field.p()));
}

Complex mult_character(const PrimeField& field, std::uint64_t order, FieldElement x) {
  if (order == 0 || (field.p() - 1) % order != 0) {
    throw DomainError("mult_character: order " + std::to_string(order) + " does not divide p-1 = " +
                      std::to_string(field.p() - 1));
  }
  if (x.value == 0) return {0.0, 0.0};
  const std::uint64_t k = field.dlog(x) % order;
  return unit_root(static_cast<std::int64_t>(k), static_cast<std::int64_t>(order));
}

std::uint64_t dlog(const PrimeField& field, FieldElement x) { return field.dlog(x); }

}  // namespace tracefn
