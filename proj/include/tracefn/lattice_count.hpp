#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tracefn/number_field.hpp"

namespace tracefn {

enum class ProfileKind { gaussian, bump };

/// Smooth test function on Minkowski space R^n.
///   gaussian: exp(-pi |v|^2), its own Lebesgue Fourier transform;
///   bump:     prod_i exp(1 - 1/(1 - v_i^2)) on the open unit cube.
/// Fourier transforms are taken against the Haar measure giving O_F
/// covolume 1, so the Poisson main term reads R^n f^(0) / Nm(I).
class TestProfile {
 public:
  explicit TestProfile(ProfileKind kind) : kind_(kind) {}
  /// "gaussian" or "bump"; anything else throws DomainError.
  static TestProfile parse(const std::string& name);

  ProfileKind kind() const { return kind_; }
  std::string name() const;
  double value(const Eigen::VectorXd& v) const;
  /// Lebesgue integral over R^n.
  double integral(int n) const;
  /// Euclidean radius outside which |f| < 1e-14.
  double support_radius(int n) const;
  /// sum over |alpha| <= order of ||d^alpha f||_1.
  double sobolev_norm(int n, int order) const;
  /// sum over |alpha| == order of ||d^alpha f||_1.
  double derivative_norm(int n, int order) const;
  /// L1 norm of the k-th derivative of the one-dimensional factor.
  double factor_derivative_l1(int k) const;

 private:
  ProfileKind kind_;
};

inline constexpr double kProfileCutoff = 1e-14;

struct LatticeSumResult {
  double value = 0.0;
  double poisson_main_term = 0.0;
  double error_bound = 0.0;
  std::uint64_t points = 0;
};

/// Covolume of the Minkowski image of O_F, sqrt|disc F|.
double ring_covolume(const NumberFieldSpec& field);

/// Direct sum over m in I of f(m/R) together with the dense-limit Poisson
/// main term and the tail bound derived from the shortest dual vector.
LatticeSumResult lattice_sum(const IdealLattice& lattice, const TestProfile& f, double R);

/// (R^n / Nm(I)) sum_{w in I*} fhat(R w) for the gaussian profile: the dual
/// side of the Poisson identity, truncated at the same 1e-14 tail.
double poisson_dual_sum(const IdealLattice& lattice, double R);

/// n Nm(I)^{1/n}, a lower bound for the l1 norm of nonzero elements of I.
double shortest_vector_lower_bound(const IdealLattice& lattice);

/// Number of generators m of (m0) with sum_i |sigma_i(m)| < R.
std::uint64_t count_units_in_box(const NumberFieldSpec& field, const NFElement& m0, double R);

/// Units u (roots of unity times powers of the fundamental unit) with
/// l1(u m0) < R, in a deterministic order.
std::vector<NFElement> units_in_box(const NumberFieldSpec& field, const NFElement& m0, double R);

/// Number of ordered pairs (m, n) in I x I with mn = k and both l1 norms
/// below R. Throws DomainError unless k is a nonzero element of I^2.
std::uint64_t count_divisor_pairs(const IdealLattice& lattice, const NFElement& k, double R);

/// A generator of the ideal when it is principal.
std::optional<NFElement> principal_generator(const IdealLattice& ideal);

/// Integral ideals containing the given integral ideal (i.e. its divisors).
std::vector<IdealLattice> ideal_divisors(const IdealLattice& integral_ideal);

/// Calls visit(element) for every element of the lattice whose Minkowski
/// vector has Euclidean length <= radius.
void enumerate_lattice_ball(const IdealLattice& lattice, double radius,
                            const std::function<void(const NFElement&, const Eigen::VectorXd&)>& visit);

}  // namespace tracefn
