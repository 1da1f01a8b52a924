#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracefn/errors.hpp"

namespace tracefn {

/// Exact rational with 64-bit numerator and positive denominator. Arithmetic
/// goes through 128-bit intermediates and throws DomainError on overflow.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }
  Rational abs() const { return {num_ < 0 ? -num_ : num_, den_}; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return {-num_, den_}; }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);

  std::string str() const;

 private:
  static Rational from_wide(__int128 n, __int128 d);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// x + y sqrt(D) in the ambient field; y = 0 over Q.
struct NFElement {
  Rational x;
  Rational y;

  friend bool operator==(const NFElement&, const NFElement&) = default;
};

/// Q (degree 1) or Q(sqrt D) with D squarefree, D != 0, 1.
class NumberFieldSpec {
 public:
  static NumberFieldSpec rationals();
  static NumberFieldSpec quadratic(std::int64_t D);

  int degree() const { return degree_; }
  std::int64_t D() const { return D_; }
  std::int64_t discriminant() const { return discriminant_; }
  int real_places() const { return r_; }
  int complex_places() const { return s_; }
  bool is_real_quadratic() const { return degree_ == 2 && D_ > 0; }
  /// Integral basis {1} or {1, omega}.
  const std::vector<NFElement>& integral_basis() const { return basis_; }
  /// Fundamental unit (> 1 in the first embedding) for real quadratic fields.
  const std::optional<NFElement>& fundamental_unit() const { return unit_; }
  /// All roots of unity in the field.
  const std::vector<NFElement>& roots_of_unity() const { return roots_; }

  NFElement add(const NFElement& a, const NFElement& b) const;
  NFElement sub(const NFElement& a, const NFElement& b) const;
  NFElement mul(const NFElement& a, const NFElement& b) const;
  NFElement inv(const NFElement& a) const;
  NFElement conj(const NFElement& a) const;
  Rational norm(const NFElement& a) const;
  Rational trace(const NFElement& a) const;
  bool is_zero(const NFElement& a) const { return a.x == 0 && a.y == 0; }

  /// The n archimedean embeddings sigma_1..sigma_n (complex places listed
  /// with their conjugates).
  std::vector<std::complex<double>> embeddings(const NFElement& a) const;
  /// sum_i |sigma_i(a)|.
  double l1_norm(const NFElement& a) const;
  /// Exact-where-possible test of l1_norm(a) < R.
  bool l1_below(const NFElement& a, double R) const;
  /// Real coordinates: sigma_i at real places, sqrt2 (Re, Im) at complex ones.
  Eigen::VectorXd minkowski(const NFElement& a) const;
  /// Coordinates of a in the integral basis.
  std::vector<Rational> coordinates(const NFElement& a) const;
  NFElement from_coordinates(const std::vector<Rational>& c) const;
  bool is_integral(const NFElement& a) const;

  std::string describe() const;

 private:
  int degree_ = 1;
  std::int64_t D_ = 1;
  std::int64_t discriminant_ = 1;
  int r_ = 1;
  int s_ = 0;
  std::vector<NFElement> basis_;
  std::optional<NFElement> unit_;
  std::vector<NFElement> roots_;
};

/// A fractional ideal realized through a Z-basis in Hermite normal form.
class IdealLattice {
 public:
  /// O_F-ideal generated by the given elements (at least one nonzero).
  static IdealLattice generated_by(const NumberFieldSpec& field, const std::vector<NFElement>& generators);
  static IdealLattice principal(const NumberFieldSpec& field, const NFElement& m0);
  static IdealLattice unit_ideal(const NumberFieldSpec& field);

  const NumberFieldSpec& field() const { return field_; }
  const std::vector<NFElement>& basis() const { return basis_; }
  Rational norm() const { return norm_; }
  /// Rows are the Minkowski vectors of the Z-basis.
  Eigen::MatrixXd embedding_matrix() const;
  bool contains(const NFElement& a) const;
  /// Trace dual {x : Tr(x I) in Z}.
  IdealLattice dual() const;
  IdealLattice inverse() const;
  IdealLattice times(const IdealLattice& other) const;
  IdealLattice times(const NFElement& a) const;
  bool contains(const IdealLattice& other) const;
  bool is_integral() const;

  friend bool operator==(const IdealLattice& a, const IdealLattice& b) { return a.hnf_ == b.hnf_; }

  std::string describe() const;

 private:
  IdealLattice(NumberFieldSpec field, const std::vector<std::vector<Rational>>& z_generators);
  NumberFieldSpec field_;
  std::vector<NFElement> basis_;
  std::vector<std::vector<Rational>> hnf_;  // rows: basis coordinates in the integral basis
  Rational norm_;
};

/// Integer Hermite normal form of the row lattice (upper triangular, positive
/// diagonal, off-diagonal entries reduced). Rows of zeros are dropped.
std::vector<std::vector<std::int64_t>> hermite_normal_form(std::vector<std::vector<std::int64_t>> rows, int cols);

}  // namespace tracefn
