#include "tracefn/lattice_count.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace tracefn {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Taylor coefficients h_0..h_K of the exponent at t; false outside the support.
bool exponent_series(ProfileKind kind, double t, int K, std::vector<double>& h) {
  h.assign(static_cast<std::size_t>(K + 1), 0.0);
  if (kind == ProfileKind::gaussian) {
    h[0] = -std::numbers::pi * t * t;
    if (K >= 1) h[1] = -2.0 * std::numbers::pi * t;
    if (K >= 2) h[2] = -std::numbers::pi;
    return true;
  }
  const double q0 = 1.0 - t * t;
  if (q0 <= 0.0) return false;
  // 1/q with q(s) = q0 - 2t s - s^2
  const double q[3] = {q0, -2.0 * t, -1.0};
  std::vector<double> r(static_cast<std::size_t>(K + 1), 0.0);
  r[0] = 1.0 / q0;
  for (int k = 1; k <= K; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(k, 2); ++j) acc += q[j] * r[static_cast<std::size_t>(k - j)];
    r[static_cast<std::size_t>(k)] = -acc / q0;
  }
  h[0] = 1.0 - r[0];
  for (int k = 1; k <= K; ++k) h[static_cast<std::size_t>(k)] = -r[static_cast<std::size_t>(k)];
  return true;
}

// k-th derivative of exp(h(t)) via the Taylor recursion f_k = (1/k) sum j h_j f_{k-j}.
double factor_derivative(ProfileKind kind, double t, int k) {
  std::vector<double> h;
  if (!exponent_series(kind, t, k, h)) return 0.0;
  std::vector<double> f(static_cast<std::size_t>(k + 1), 0.0);
  f[0] = std::exp(h[0]);
  for (int i = 1; i <= k; ++i) {
    double acc = 0.0;
    for (int j = 1; j <= i; ++j) acc += j * h[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(i - j)];
    f[static_cast<std::size_t>(i)] = acc / i;
  }
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  return f[static_cast<std::size_t>(k)] * factorial;
}

double factor_value(ProfileKind kind, double t) {
  if (kind == ProfileKind::gaussian) return std::exp(-std::numbers::pi * t * t);
  const double q = 1.0 - t * t;
  return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

// Lattice enumeration over a Gauss-reduced basis; calls fn(c0, c1, v).
template <typename Fn>
void enumerate_reduced(std::vector<Eigen::VectorXd> vecs, double radius, Fn&& fn) {
  const double r2 = radius * radius;
  if (vecs.size() == 1) {
    const double len = vecs[0].norm();
    const auto bound = static_cast<std::int64_t>(std::floor(radius / len)) + 1;
    for (std::int64_t c = -bound; c <= bound; ++c) {
      const Eigen::VectorXd v = static_cast<double>(c) * vecs[0];
      if (v.squaredNorm() <= r2) fn(c, std::int64_t{0}, v);
    }
    return;
  }
  Eigen::Matrix2d B;
  B.row(0) = vecs[0].transpose();
  B.row(1) = vecs[1].transpose();
  const Eigen::Matrix2d Binv = B.inverse();
  const auto c0_bound = static_cast<std::int64_t>(std::ceil(radius * Binv.col(0).norm())) + 1;
  const double a = vecs[1].squaredNorm();
  const double cross = vecs[0].dot(vecs[1]);
  const double len0 = vecs[0].squaredNorm();
  for (std::int64_t c0 = -c0_bound; c0 <= c0_bound; ++c0) {
    const double b = 2.0 * static_cast<double>(c0) * cross;
    const double c = static_cast<double>(c0) * static_cast<double>(c0) * len0 - r2;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    const auto lo = static_cast<std::int64_t>(std::floor((-b - root) / (2.0 * a))) - 1;
    const auto hi = static_cast<std::int64_t>(std::ceil((-b + root) / (2.0 * a))) + 1;
    for (std::int64_t c1 = lo; c1 <= hi; ++c1) {
      const Eigen::VectorXd v = static_cast<double>(c0) * vecs[0] + static_cast<double>(c1) * vecs[1];
      if (v.squaredNorm() <= r2) fn(c0, c1, v);
    }
  }
}

struct ReducedBasis {
  std::vector<NFElement> elements;
  std::vector<Eigen::VectorXd> vectors;
};

ReducedBasis reduce_basis(const IdealLattice& lattice) {
  const NumberFieldSpec& field = lattice.field();
  ReducedBasis out{lattice.basis(), {}};
  if (out.elements.size() == 2) {
    for (int iter = 0; iter < 200; ++iter) {
      Eigen::VectorXd v0 = field.minkowski(out.elements[0]);
      Eigen::VectorXd v1 = field.minkowski(out.elements[1]);
      if (v1.squaredNorm() < v0.squaredNorm()) {
        std::swap(out.elements[0], out.elements[1]);
        std::swap(v0, v1);
      }
      const double mu = std::round(v0.dot(v1) / v0.squaredNorm());
      if (mu == 0.0) break;
      out.elements[1] = field.sub(out.elements[1], field.mul(NFElement{Rational(static_cast<std::int64_t>(mu)), 0}, out.elements[0]));
    }
  }
  for (const NFElement& e : out.elements) out.vectors.push_back(field.minkowski(e));
  return out;
}

std::vector<Eigen::VectorXd> dual_vectors(const IdealLattice& lattice) {
  const ReducedBasis rb = reduce_basis(lattice);
  const auto n = static_cast<Eigen::Index>(rb.vectors.size());
  Eigen::MatrixXd B(n, n);
  for (Eigen::Index i = 0; i < n; ++i) B.row(i) = rb.vectors[static_cast<std::size_t>(i)].transpose();
  const Eigen::MatrixXd D = B.inverse().transpose();
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index i = 0; i < n; ++i) out.emplace_back(D.row(i).transpose());
  return out;
}

double minkowski_covolume(const IdealLattice& lattice) { return std::fabs(lattice.embedding_matrix().determinant()); }

}  // namespace

TestProfile TestProfile::parse(const std::string& name) {
  if (name == "gaussian") return TestProfile(ProfileKind::gaussian);
  if (name == "bump") return TestProfile(ProfileKind::bump);
  throw DomainError("unknown test profile '" + name + "' (expected gaussian or bump)");
}

std::string TestProfile::name() const { return kind_ == ProfileKind::gaussian ? "gaussian" : "bump"; }

double TestProfile::value(const Eigen::VectorXd& v) const {
  if (kind_ == ProfileKind::gaussian) return std::exp(-std::numbers::pi * v.squaredNorm());
  double out = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) out *= factor_value(kind_, v[i]);
  return out;
}

double TestProfile::factor_derivative_l1(int k) const {
  // Trapezoid rule; both factors are smooth and negligible at the ends.
  const double lo = kind_ == ProfileKind::gaussian ? -8.0 : -1.0;
  const double hi = -lo;
  const int steps = 400000;
  const double h = (hi - lo) / steps;
  CompensatedSum sum;
  for (int i = 1; i < steps; ++i) sum.add(std::fabs(factor_derivative(kind_, lo + i * h, k)));
  return sum.value() * h;
}

double TestProfile::integral(int n) const {
  if (kind_ == ProfileKind::gaussian) return 1.0;
  return std::pow(factor_derivative_l1(0), n);
}

double TestProfile::support_radius(int n) const {
  if (kind_ == ProfileKind::gaussian) return std::sqrt(-std::log(kProfileCutoff) / std::numbers::pi);
  return std::sqrt(static_cast<double>(n));
}

double TestProfile::derivative_norm(int n, int order) const {
  std::vector<double> norms(static_cast<std::size_t>(order + 1));
  for (int k = 0; k <= order; ++k) norms[static_cast<std::size_t>(k)] = factor_derivative_l1(k);
  if (n == 1) return norms[static_cast<std::size_t>(order)];
  double total = 0.0;
  for (int k = 0; k <= order; ++k) total += norms[static_cast<std::size_t>(k)] * norms[static_cast<std::size_t>(order - k)];
  return total;
}

double TestProfile::sobolev_norm(int n, int order) const {
  double total = 0.0;
  for (int k = 0; k <= order; ++k) total += derivative_norm(n, k);
  return total;
}

double ring_covolume(const NumberFieldSpec& field) {
  return std::sqrt(std::fabs(static_cast<double>(field.discriminant())));
}

void enumerate_lattice_ball(const IdealLattice& lattice, double radius,
                            const std::function<void(const NFElement&, const Eigen::VectorXd&)>& visit) {
  const NumberFieldSpec& field = lattice.field();
  const ReducedBasis rb = reduce_basis(lattice);
  enumerate_reduced(rb.vectors, radius, [&](std::int64_t c0, std::int64_t c1, const Eigen::VectorXd& v) {
    NFElement e = field.mul(NFElement{Rational(c0), 0}, rb.elements[0]);
    if (rb.elements.size() == 2) e = field.add(e, field.mul(NFElement{Rational(c1), 0}, rb.elements[1]));
    visit(e, v);
  });
}

LatticeSumResult lattice_sum(const IdealLattice& lattice, const TestProfile& f, double R) {
  if (!(R > 0.0)) throw DomainError("lattice_sum: scale R must be positive");
  const NumberFieldSpec& field = lattice.field();
  const int n = field.degree();
  const ReducedBasis rb = reduce_basis(lattice);
  CompensatedSum sum;
  LatticeSumResult out;
  enumerate_reduced(rb.vectors, R * f.support_radius(n), [&](std::int64_t, std::int64_t, const Eigen::VectorXd& v) {
    const double value = f.value(v / R);
    if (value >= kProfileCutoff) {
      sum.add(value);
      ++out.points;
    }
  });
  out.value = sum.value();
  const double nm = lattice.norm().to_double();
  const double scale = std::pow(R, n) / nm;
  out.poisson_main_term = scale * f.integral(n) / ring_covolume(field);
  const double dual_norm = lattice.dual().norm().to_double();
  const int order = n + 1;
  const double shortest_dual = n * std::pow(dual_norm, 1.0 / n);
  out.error_bound = scale * f.derivative_norm(n, order) / std::pow(R * shortest_dual, order);
  return out;
}

double poisson_dual_sum(const IdealLattice& lattice, double R) {
  if (!(R > 0.0)) throw DomainError("poisson_dual_sum: scale R must be positive");
  const int n = lattice.field().degree();
  const TestProfile gaussian(ProfileKind::gaussian);
  CompensatedSum sum;
  enumerate_reduced(dual_vectors(lattice), gaussian.support_radius(n) / R,
                    [&](std::int64_t, std::int64_t, const Eigen::VectorXd& w) {
                      const double value = gaussian.value(R * w);
                      if (value >= kProfileCutoff) sum.add(value);
                    });
  return std::pow(R, n) / minkowski_covolume(lattice) * sum.value();
}

double shortest_vector_lower_bound(const IdealLattice& lattice) {
  const int n = lattice.field().degree();
  return n * std::pow(lattice.norm().to_double(), 1.0 / n);
}

std::vector<NFElement> units_in_box(const NumberFieldSpec& field, const NFElement& m0, double R) {
  if (field.is_zero(m0)) throw DomainError("count_units_in_box: m0 must be nonzero");
  if (!(R > 0.0)) throw DomainError("count_units_in_box: R must be positive");
  std::vector<NFElement> out;
  if (!field.fundamental_unit()) {
    if (field.l1_below(m0, R)) out = field.roots_of_unity();
    return out;
  }
  // Log-map window: l1(m0 eps^k) = A eps^k + B eps^-k.
  const NFElement& eps = *field.fundamental_unit();
  const auto sig = field.embeddings(m0);
  const double A = std::fabs(sig[0].real());
  const double B = std::fabs(sig[1].real());
  const double log_eps = std::log(field.embeddings(eps)[0].real());
  const double disc = R * R - 4.0 * A * B;
  if (disc < 0.0) return out;
  const double t_lo = (R - std::sqrt(disc)) / (2.0 * A);
  const double t_hi = (R + std::sqrt(disc)) / (2.0 * A);
  const auto k_lo = static_cast<std::int64_t>(std::floor(std::log(std::max(t_lo, 1e-300)) / log_eps)) - 1;
  const auto k_hi = static_cast<std::int64_t>(std::ceil(std::log(t_hi) / log_eps)) + 1;
  const NFElement eps_inv = field.inv(eps);
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    NFElement u{1, 0};
    const NFElement& step = k >= 0 ? eps : eps_inv;
    for (std::int64_t i = 0; i < (k >= 0 ? k : -k); ++i) u = field.mul(u, step);
    for (const NFElement& zeta : field.roots_of_unity()) {
      const NFElement unit = field.mul(zeta, u);
      if (field.l1_below(field.mul(unit, m0), R)) out.push_back(unit);
    }
  }
  return out;
}

std::uint64_t count_units_in_box(const NumberFieldSpec& field, const NFElement& m0, double R) {
  return units_in_box(field, m0, R).size();
}

std::optional<NFElement> principal_generator(const IdealLattice& ideal) {
  const NumberFieldSpec& field = ideal.field();
  const Rational nm = ideal.norm();
  if (field.degree() == 1) return ideal.basis()[0];
  double bound = 2.0 * std::sqrt(nm.to_double());
  if (field.fundamental_unit()) bound *= std::sqrt(field.embeddings(*field.fundamental_unit())[0].real());
  std::optional<NFElement> found;
  enumerate_lattice_ball(ideal, bound * (1.0 + 1e-9), [&](const NFElement& e, const Eigen::VectorXd&) {
    if (found || field.is_zero(e)) return;
    if (field.norm(e).abs() == nm) found = e;
  });
  return found;
}

std::vector<IdealLattice> ideal_divisors(const IdealLattice& integral_ideal) {
  const NumberFieldSpec& field = integral_ideal.field();
  if (!integral_ideal.is_integral()) throw DomainError("ideal_divisors: ideal is not integral");
  const std::int64_t N = integral_ideal.norm().num();
  std::vector<IdealLattice> out;
  if (field.degree() == 1) {
    for (std::int64_t d = 1; d <= N; ++d) {
      if (N % d == 0) out.push_back(IdealLattice::principal(field, NFElement{d, 0}));
    }
    return out;
  }
  const NFElement omega = field.integral_basis()[1];
  for (std::int64_t d = 1; d <= N; ++d) {
    if (N % d != 0) continue;
    for (std::int64_t h00 = 1; h00 <= d; ++h00) {
      if (d % h00 != 0) continue;
      const std::int64_t h11 = d / h00;
      for (std::int64_t h01 = 0; h01 < h11; ++h01) {
        // Z-basis {h00 + h01 omega, h11 omega}; it is an ideal iff the ideal it
        // generates has the same index.
        const NFElement b0 = field.add(NFElement{h00, 0}, field.mul(NFElement{h01, 0}, omega));
        const NFElement b1 = field.mul(NFElement{h11, 0}, omega);
        const IdealLattice candidate = IdealLattice::generated_by(field, {b0, b1});
        if (candidate.norm() == Rational(d) && candidate.contains(integral_ideal)) out.push_back(candidate);
      }
    }
  }
  return out;
}

std::uint64_t count_divisor_pairs(const IdealLattice& lattice, const NFElement& k, double R) {
  const NumberFieldSpec& field = lattice.field();
  if (field.is_zero(k)) throw DomainError("count_divisor_pairs: k must be nonzero");
  if (!(R > 0.0)) throw DomainError("count_divisor_pairs: R must be positive");
  const IdealLattice square = lattice.times(lattice);
  if (!square.contains(k)) throw DomainError("count_divisor_pairs: k is not an element of I^2");
  // m ranges over generators of the principal ideals J = I A with A | (k) I^-2.
  const IdealLattice quotient = IdealLattice::principal(field, k).times(square.inverse());
  std::uint64_t count = 0;
  for (const IdealLattice& divisor : ideal_divisors(quotient)) {
    const IdealLattice j = lattice.times(divisor);
    const auto generator = principal_generator(j);
    if (!generator) continue;
    for (const NFElement& u : units_in_box(field, *generator, R)) {
      const NFElement m = field.mul(u, *generator);
      const NFElement n = field.mul(k, field.inv(m));
      if (field.l1_below(n, R)) ++count;
    }
  }
  return count;
}

}  // namespace tracefn
