#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tracefn/parallel.hpp"
#include "tracefn/trace_zoo.hpp"

namespace tracefn {

/// Unitary transform Khat(x) = p^{-1/2} sum_y K(y) e(-xy/p), O(p log p).
TraceFunction fourier(const TraceFunction& k);
/// Reference O(p^2) transform with exactly reduced phases.
TraceFunction fourier_naive(const TraceFunction& k);

/// C(K1, K2) = (1/p) sum_a K1(a) conj(K2(a)).
Complex correlate(const TraceFunction& k1, const TraceFunction& k2);

/// Element of PGL_2(F_p), stored normalized so the first nonzero entry in
/// row-major order is 1. Equal normalized entries <=> same class.
class MobiusMap {
 public:
  /// Throws DomainError when ad - bc = 0.
  MobiusMap(const PrimeField& field, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  static MobiusMap identity(const PrimeField& field) { return {field, 1, 0, 0, 1}; }

  std::uint64_t a() const { return entries_[0]; }
  std::uint64_t b() const { return entries_[1]; }
  std::uint64_t c() const { return entries_[2]; }
  std::uint64_t d() const { return entries_[3]; }
  const std::array<std::uint64_t, 4>& entries() const { return entries_; }
  bool is_upper_triangular() const { return entries_[2] == 0; }

  friend bool operator==(const MobiusMap&, const MobiusMap&) = default;
  friend auto operator<=>(const MobiusMap&, const MobiusMap&) = default;

 private:
  std::array<std::uint64_t, 4> entries_{};
};

/// (ax + b)/(cx + d), or nullopt at the pole cx + d = 0.
std::optional<FieldElement> mobius_apply(const PrimeField& field, const MobiusMap& gamma, FieldElement x);

/// Matrix product g * h (acts as x -> g(h(x))).
MobiusMap compose(const PrimeField& field, const MobiusMap& g, const MobiusMap& h);
MobiusMap inverse(const PrimeField& field, const MobiusMap& g);

/// Number of elements of PGL_2(F_p), p(p^2 - 1).
std::uint64_t pgl2_order(std::uint64_t p);
/// The index-th element of PGL_2(F_p) in row-major lexicographic order of
/// normalized entries; index < pgl2_order(p).
MobiusMap pgl2_element(const PrimeField& field, std::uint64_t index);

/// C(K, gamma) = (1/p) sum_a Khat(a) conj(Khat(gamma a)), pole term skipped.
/// Throws DomainError for kernels that are not Fourier-eligible.
Complex gamma_correlation(const TraceFunction& k, const MobiusMap& gamma);
/// Same sum from a precomputed transform.
Complex gamma_correlation_hat(const TraceFunction& khat, const MobiusMap& gamma);

/// gamma_{m,n}(mu) = [[m, mu - mn], [1, -n]]; mu = 0 is singular.
MobiusMap gamma_family(const PrimeField& field, FieldElement m, FieldElement n, FieldElement mu);
Complex gamma_family_correlation(const TraceFunction& k, FieldElement m, FieldElement n, FieldElement mu);

struct FMScanReport {
  std::uint64_t p = 0;
  std::string kind;
  double tau = 0.0;
  std::vector<MobiusMap> members;  // lexicographic order
  std::vector<double> values;      // |C(K, gamma)| per member
  double max_nonmember = 0.0;
  double min_member = 0.0;
  std::uint64_t scanned = 0;
  double elapsed_ms = 0.0;
  /// Set when p >= 53 and min member |C| < 2 max non-member |C|.
  bool gap_warning = false;
};

/// Scans all of PGL_2(F_p) and keeps gamma with |C(K, gamma)| >= tau.
/// Output is independent of the thread count.
FMScanReport fm_scan(const TraceFunction& k, double tau, Parallelism par = {});

/// True when the set contains the identity and is closed under the group law
/// and inverses.
bool is_subgroup(const PrimeField& field, const std::vector<MobiusMap>& members);

}  // namespace tracefn
