#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tracefn/errors.hpp"

namespace tracefn {

/// Exact coefficient type. |tau(n)| <= d(n) n^{11/2} stays below 2^127 far
/// past any extent used here; every operation is overflow-checked.
using TauInt = __int128;

std::string to_string(TauInt v);
TauInt parse_tau_int(const std::string& s);

/// Normalized Hecke eigenvalues lambda(n) = tau(n) / n^{11/2} of the
/// discriminant form, with exact tau(n) for n <= extent().
class CuspFormCoeffs {
 public:
  CuspFormCoeffs() = default;
  explicit CuspFormCoeffs(std::vector<TauInt> tau);

  std::string form_id() const { return "delta"; }
  std::uint64_t extent() const { return tau_.size(); }
  /// tau(n) for n <= extent() from the table. Beyond it, tau(n) is assembled
  /// from multiplicativity and the prime-power recursion, which requires
  /// every prime factor of n to be <= extent().
  TauInt tau(std::uint64_t n) const;
  double lambda(std::uint64_t n) const;
  const std::vector<TauInt>& table() const { return tau_; }

 private:
  std::vector<TauInt> tau_;  // tau_[n-1] = tau(n)
};

/// tau(1..N) from q prod (1 - q^n)^24, multiplying the truncated series by
/// Euler's pentagonal series 24 times.
CuspFormCoeffs extend_tau(std::uint64_t N);

struct SatakeResult {
  std::uint64_t p = 0;
  std::complex<double> alpha;
  std::complex<double> beta;
  /// |lambda(p^2) - (lambda(p)^2 - 1)|
  double residual = 0.0;
  /// tau(p)^2 - tau(p^2) == p^11 in exact arithmetic.
  bool exact_identity = false;
};

/// Roots of X^2 - lambda(p) X + 1 and the Hecke relation residual at p.
SatakeResult satake_check(const CuspFormCoeffs& coeffs, std::uint64_t p);

enum class AmplifierKind { venkatesh, dfi };
AmplifierKind parse_amplifier_kind(const std::string& name);
std::string to_string(AmplifierKind kind);

struct AmplifierWeights {
  AmplifierKind kind = AmplifierKind::venkatesh;
  double L = 0.0;
  std::vector<std::uint64_t> primes;       // primes in [L, 2L]
  std::map<std::uint64_t, double> weights;  // n -> x_n (n prime or prime square)
  /// A = sum_n x_n lambda(n) in floating point.
  double amplifier = 0.0;
  /// For dfi: sum over primes of (tau(l)^2 - tau(l^2)) / l^11, evaluated
  /// exactly (each quotient must be an exact integer); -1 for venkatesh.
  std::int64_t exact_total = -1;
};

/// venkatesh: x_l = sign(lambda(l)) on primes l in [L, 2L];
/// dfi: x_l = lambda(l), x_{l^2} = -1 on the same primes.
AmplifierWeights amplifier_weights(AmplifierKind kind, double L, const CuspFormCoeffs& coeffs);

/// Number of positive divisors.
std::uint64_t divisor_count(std::uint64_t n);

/// Binary cache: "TAUv1", u64 LE extent, then per coefficient a u8 byte
/// length followed by that many two's-complement little-endian bytes.
void write_tau_cache(const std::filesystem::path& path, const CuspFormCoeffs& coeffs);
CuspFormCoeffs read_tau_cache(const std::filesystem::path& path);
/// Reads cache_dir/tau_<N>.bin when present, otherwise computes and writes it.
CuspFormCoeffs load_or_extend_tau(const std::filesystem::path& cache_dir, std::uint64_t N);

}  // namespace tracefn
