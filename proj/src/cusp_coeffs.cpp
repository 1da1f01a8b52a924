#include "tracefn/cusp_coeffs.hpp"

#include <cmath>
#include <fstream>

#include "tracefn/ff_core.hpp"

namespace tracefn {

namespace {

TauInt checked_add(TauInt a, TauInt b) {
  TauInt r;
  if (__builtin_add_overflow(a, b, &r)) throw DomainError("tau arithmetic overflowed 128 bits");
  return r;
}

TauInt checked_sub(TauInt a, TauInt b) {
  TauInt r;
  if (__builtin_sub_overflow(a, b, &r)) throw DomainError("tau arithmetic overflowed 128 bits");
  return r;
}

TauInt checked_mul(TauInt a, TauInt b) {
  TauInt r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("tau arithmetic overflowed 128 bits");
  return r;
}

TauInt power(TauInt base, unsigned e) {
  TauInt r = 1;
  for (unsigned i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

long double to_long_double(TauInt v) {
  const bool neg = v < 0;
  const auto mag = static_cast<unsigned __int128>(neg ? -v : v);
  const long double hi = static_cast<long double>(static_cast<std::uint64_t>(mag >> 64U));
  const long double lo = static_cast<long double>(static_cast<std::uint64_t>(mag));
  const long double out = hi * 18446744073709551616.0L + lo;
  return neg ? -out : out;
}

}  // namespace

std::string to_string(TauInt v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  auto mag = static_cast<unsigned __int128>(neg ? -v : v);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (neg) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

TauInt parse_tau_int(const std::string& s) {
  if (s.empty()) throw ConfigError("empty integer literal");
  std::size_t i = 0;
  const bool neg = s[0] == '-';
  if (neg || s[0] == '+') i = 1;
  if (i == s.size()) throw ConfigError("malformed integer literal '" + s + "'");
  TauInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw ConfigError("malformed integer literal '" + s + "'");
    v = checked_add(checked_mul(v, 10), s[i] - '0');
  }
  return neg ? -v : v;
}

CuspFormCoeffs::CuspFormCoeffs(std::vector<TauInt> tau) : tau_(std::move(tau)) {}

TauInt CuspFormCoeffs::tau(std::uint64_t n) const {
  if (n == 0) throw DomainError("tau: index must be positive");
  if (n <= tau_.size()) return tau_[n - 1];
  TauInt result = 1;
  std::uint64_t rest = n;
  for (std::uint64_t q : prime_factors(n)) {
    if (q > tau_.size()) {
      throw DomainError("tau(" + std::to_string(n) + "): prime factor " + std::to_string(q) +
                        " exceeds the coefficient extent " + std::to_string(tau_.size()));
    }
    unsigned e = 0;
    while (rest % q == 0) {
      rest /= q;
      ++e;
    }
    // tau(q^{k+1}) = tau(q) tau(q^k) - q^11 tau(q^{k-1})
    const TauInt q11 = power(static_cast<TauInt>(q), 11);
    TauInt prev = 1;
    TauInt cur = tau_[q - 1];
    for (unsigned k = 1; k < e; ++k) {
      const TauInt next = checked_sub(checked_mul(tau_[q - 1], cur), checked_mul(q11, prev));
      prev = cur;
      cur = next;
    }
    result = checked_mul(result, cur);
  }
  return result;
}

double CuspFormCoeffs::lambda(std::uint64_t n) const {
  return static_cast<double>(to_long_double(tau(n)) / std::pow(static_cast<long double>(n), 5.5L));
}

CuspFormCoeffs extend_tau(std::uint64_t N) {
  if (N == 0) throw DomainError("extend_tau: N must be at least 1");
  // Coefficients of prod (1 - q^n)^24 up to q^{N-1}.
  const std::uint64_t len = N;
  std::vector<std::pair<std::uint64_t, int>> pentagonal;  // (exponent, sign), exponent > 0
  for (std::int64_t k = 1;; ++k) {
    const auto e1 = static_cast<std::uint64_t>(k * (3 * k - 1) / 2);
    const auto e2 = static_cast<std::uint64_t>(k * (3 * k + 1) / 2);
    if (e1 >= len) break;
    const int sign = (k % 2 == 0) ? 1 : -1;
    pentagonal.emplace_back(e1, sign);
    if (e2 < len) pentagonal.emplace_back(e2, sign);
  }
  std::vector<TauInt> series(len, 0);
  series[0] = 1;
  for (int factor = 0; factor < 24; ++factor) {
    for (std::uint64_t i = len; i-- > 0;) {
      TauInt acc = series[i];
      for (const auto& [e, sign] : pentagonal) {
        if (e > i) break;
        acc = sign > 0 ? checked_add(acc, series[i - e]) : checked_sub(acc, series[i - e]);
      }
      series[i] = acc;
    }
  }
  return CuspFormCoeffs(std::move(series));
}

SatakeResult satake_check(const CuspFormCoeffs& coeffs, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("satake_check: " + std::to_string(p) + " is not prime");
  if (p > coeffs.extent()) throw DomainError("satake_check: p exceeds the coefficient extent");
  SatakeResult out;
  out.p = p;
  const double lam = coeffs.lambda(p);
  const std::complex<double> disc = std::sqrt(std::complex<double>(lam * lam - 4.0, 0.0));
  out.alpha = (lam + disc) / 2.0;
  out.beta = (lam - disc) / 2.0;
  out.residual = std::fabs(coeffs.lambda(p * p) - (lam * lam - 1.0));
  const TauInt tp = coeffs.tau(p);
  out.exact_identity = checked_sub(checked_mul(tp, tp), coeffs.tau(p * p)) == power(static_cast<TauInt>(p), 11);
  return out;
}

AmplifierKind parse_amplifier_kind(const std::string& name) {
  if (name == "venkatesh") return AmplifierKind::venkatesh;
  if (name == "dfi") return AmplifierKind::dfi;
  throw DomainError("unknown amplifier '" + name + "' (expected venkatesh or dfi)");
}

std::string to_string(AmplifierKind kind) { return kind == AmplifierKind::venkatesh ? "venkatesh" : "dfi"; }

AmplifierWeights amplifier_weights(AmplifierKind kind, double L, const CuspFormCoeffs& coeffs) {
  if (!(L >= 2.0)) throw DomainError("amplifier_weights: L must be at least 2");
  AmplifierWeights out;
  out.kind = kind;
  out.L = L;
  const auto lo = static_cast<std::uint64_t>(std::ceil(L));
  const auto hi = static_cast<std::uint64_t>(std::floor(2.0 * L));
  for (std::uint64_t l = lo; l <= hi; ++l) {
    if (is_prime(l)) out.primes.push_back(l);
  }
  double total = 0.0;
  if (kind == AmplifierKind::venkatesh) {
    for (std::uint64_t l : out.primes) {
      const TauInt t = coeffs.tau(l);
      if (t == 0) continue;
      const double x = t > 0 ? 1.0 : -1.0;
      out.weights[l] = x;
      total += x * coeffs.lambda(l);
    }
  } else {
    std::int64_t exact = 0;
    for (std::uint64_t l : out.primes) {
      const double lam = coeffs.lambda(l);
      out.weights[l] = lam;
      out.weights[l * l] = -1.0;
      total += lam * lam - coeffs.lambda(l * l);
      const TauInt t = coeffs.tau(l);
      const TauInt numerator = checked_sub(checked_mul(t, t), coeffs.tau(l * l));
      const TauInt l11 = power(static_cast<TauInt>(l), 11);
      if (numerator % l11 != 0) throw DomainError("dfi amplifier: non-integral Hecke quotient at l = " + std::to_string(l));
      exact += static_cast<std::int64_t>(numerator / l11);
    }
    out.exact_total = exact;
  }
  out.amplifier = total;
  return out;
}

std::uint64_t divisor_count(std::uint64_t n) {
  std::uint64_t count = 1;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    unsigned e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    count *= e + 1;
  }
  if (n > 1) count *= 2;
  return count;
}

void write_tau_cache(const std::filesystem::path& path, const CuspFormCoeffs& coeffs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write tau cache " + path.string());
  out.write("TAUv1", 5);
  std::uint64_t n = coeffs.extent();
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((n >> (8 * i)) & 0xFFU));
  for (TauInt v : coeffs.table()) {
    auto bits = static_cast<unsigned __int128>(v);
    unsigned char bytes[16];
    for (int i = 0; i < 16; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFFU);
    // shortest two's-complement encoding
    int length = 16;
    while (length > 1) {
      const unsigned char top = bytes[length - 1];
      const bool next_negative = (bytes[length - 2] & 0x80U) != 0;
      if ((top == 0x00 && !next_negative) || (top == 0xFF && next_negative)) {
        --length;
      } else {
        break;
      }
    }
    out.put(static_cast<char>(length));
    out.write(reinterpret_cast<const char*>(bytes), length);
  }
  if (!out) throw ConfigError("failed while writing tau cache " + path.string());
}

CuspFormCoeffs read_tau_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open tau cache " + path.string());
  char magic[5];
  in.read(magic, 5);
  if (!in || std::string(magic, 5) != "TAUv1") throw ConfigError("tau cache " + path.string() + " has a bad header");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) {
    const int c = in.get();
    if (c == EOF) throw ConfigError("tau cache " + path.string() + " is truncated");
    n |= static_cast<std::uint64_t>(c) << (8 * i);
  }
  std::vector<TauInt> tau;
  tau.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const int length = in.get();
    if (length <= 0 || length > 16) throw ConfigError("tau cache " + path.string() + " is corrupt");
    unsigned char bytes[16];
    in.read(reinterpret_cast<char*>(bytes), length);
    if (!in) throw ConfigError("tau cache " + path.string() + " is truncated");
    const unsigned char fill = (bytes[length - 1] & 0x80U) ? 0xFF : 0x00;
    for (int i = length; i < 16; ++i) bytes[i] = fill;
    unsigned __int128 bits = 0;
    for (int i = 15; i >= 0; --i) bits = (bits << 8U) | bytes[i];
    tau.push_back(static_cast<TauInt>(bits));
  }
  return CuspFormCoeffs(std::move(tau));
}

CuspFormCoeffs load_or_extend_tau(const std::filesystem::path& cache_dir, std::uint64_t N) {
  const std::filesystem::path file = cache_dir / ("tau_" + std::to_string(N) + ".bin");
  std::error_code ec;
  if (std::filesystem::exists(file, ec)) {
    CuspFormCoeffs cached = read_tau_cache(file);
    if (cached.extent() == N) return cached;
  }
  CuspFormCoeffs fresh = extend_tau(N);
  std::filesystem::create_directories(cache_dir, ec);
  if (ec) throw ConfigError("cannot create cache directory " + cache_dir.string());
  write_tau_cache(file, fresh);
  return fresh;
}

}  // namespace tracefn
