#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tracefn/ff_core.hpp"

namespace tracefn {

using ComplexVector = Eigen::VectorXcd;

enum class KernelKind { trivial, additive, mult, kloosterman, product, pullback, custom };

struct KernelTag {
  KernelKind kind = KernelKind::custom;
  std::int64_t param = 0;  // a for additive, order for mult, m for kloosterman
  std::string label;       // kernel-spec style description, e.g. "kloosterman:2"
};

/// A complex table on F_p together with its declared conductor bound and the
/// Fourier-eligibility flag (false when an additive-character factor is
/// present). Construction enforces |K(x)| <= conductor_bound.
class TraceFunction {
 public:
  TraceFunction(PrimeField field, ComplexVector values, KernelTag tag, double conductor_bound,
                bool fourier_eligible);

  const PrimeField& field() const { return field_; }
  std::uint64_t p() const { return field_.p(); }
  const ComplexVector& values() const { return values_; }
  Complex operator[](std::uint64_t x) const { return values_[static_cast<Eigen::Index>(x)]; }
  const KernelTag& tag() const { return tag_; }
  double conductor_bound() const { return conductor_bound_; }
  bool fourier_eligible() const { return fourier_eligible_; }

  double sup_norm() const;
  double l2_norm() const;

 private:
  PrimeField field_;
  ComplexVector values_;
  KernelTag tag_;
  double conductor_bound_;
  bool fourier_eligible_;
};

/// Polynomial over F_p, coefficients low degree first, trailing zeros trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const PrimeField& field, std::vector<std::int64_t> coeffs);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  FieldElement operator()(const PrimeField& field, FieldElement x) const;

  static Polynomial from_reduced(std::vector<std::uint64_t> coeffs);

 private:
  std::vector<std::uint64_t> coeffs_;
};

/// Rational map num/den on F_p. The constructor divides out gcd(num, den), so
/// pole positions are those of the reduced fraction.
class RationalMap {
 public:
  RationalMap(const PrimeField& field, Polynomial num, Polynomial den);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  int degree() const { return std::max(num_.degree(), den_.degree()); }
  /// Value at x, or false when x is a pole.
  bool apply(const PrimeField& field, FieldElement x, FieldElement& out) const;

 private:
  Polynomial num_;
  Polynomial den_;
};

TraceFunction make_trivial(const PrimeField& field);
/// x -> e(a x / p).
TraceFunction make_additive(const PrimeField& field, std::int64_t a);
/// Multiplicative character of the given order (see mult_character).
TraceFunction make_mult(const PrimeField& field, std::uint64_t order);
TraceFunction make_legendre(const PrimeField& field);
/// Normalized hyper-Kloosterman sum Kl_m(a; p), built as the (m-1)-fold
/// multiplicative convolution of the additive character; value 0 at a = 0.
TraceFunction make_kloosterman(const PrimeField& field, int m);
/// Arbitrary table; throws DomainError when the table violates the bound.
TraceFunction make_custom(const PrimeField& field, ComplexVector values, double conductor_bound,
                          bool fourier_eligible, std::string label = "custom");

/// result[a] = p^{-1/2} sum_{xy=a} K1[x] K2[y] on F_p^x, result[0] = 0.
/// O(p log p) through the discrete-log reindexing of F_p^x.
TraceFunction mult_convolve(const TraceFunction& k1, const TraceFunction& k2);
/// Same convolution by direct O(p^2) enumeration of pairs.
TraceFunction mult_convolve_naive(const TraceFunction& k1, const TraceFunction& k2);

/// x -> K(phi(x)), zero at the poles of phi.
TraceFunction pullback(const TraceFunction& k, const RationalMap& phi);
TraceFunction pointwise_product(const TraceFunction& k1, const TraceFunction& k2);
/// alpha K1 + beta K2.
TraceFunction linear_combination(Complex alpha, const TraceFunction& k1, Complex beta,
                                 const TraceFunction& k2);

}  // namespace tracefn
