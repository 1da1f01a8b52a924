#include "tracefn/trace_zoo.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tracefn/fft.hpp"

namespace tracefn {

namespace {

constexpr double kBoundSlack = 1e-9;

void require_same_field(const TraceFunction& a, const TraceFunction& b, const char* op) {
  if (!(a.field() == b.field())) {
    throw DomainError(std::string(op) + ": field mismatch (p = " + std::to_string(a.p()) + " vs " +
                      std::to_string(b.p()) + ")");
  }
}

double sup_of(const ComplexVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

using Coeffs = std::vector<std::uint64_t>;

void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// Remainder of a by b over F_p; b must be nonzero.
Coeffs poly_mod(Coeffs a, const Coeffs& b, std::uint64_t p) {
  const std::uint64_t lead_inv = pow_mod(b.back(), p - 2, p);
  while (a.size() >= b.size() && !a.empty()) {
    const std::uint64_t factor = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = (a[shift + i] + p - mul_mod(factor, b[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

Coeffs poly_div_exact(Coeffs a, const Coeffs& b, std::uint64_t p) {
  Coeffs q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  const std::uint64_t lead_inv = pow_mod(b.back(), p - 2, p);
  while (a.size() >= b.size() && !a.empty()) {
    const std::uint64_t factor = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    q[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = (a[shift + i] + p - mul_mod(factor, b[i], p)) % p;
    }
    trim(a);
  }
  return q;
}

Coeffs poly_gcd(Coeffs a, Coeffs b, std::uint64_t p) {
  while (!b.empty()) {
    Coeffs r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

TraceFunction::TraceFunction(PrimeField field, ComplexVector values, KernelTag tag,
                             double conductor_bound, bool fourier_eligible)
    : field_(std::move(field)),
      values_(std::move(values)),
      tag_(std::move(tag)),
      conductor_bound_(conductor_bound),
      fourier_eligible_(fourier_eligible) {
  if (static_cast<std::uint64_t>(values_.size()) != field_.p()) {
    throw DomainError("TraceFunction: table length " + std::to_string(values_.size()) +
                      " does not match p = " + std::to_string(field_.p()));
  }
  if (!(conductor_bound_ > 0.0)) throw DomainError("TraceFunction: conductor bound must be positive");
  const double sup = sup_of(values_);
  if (sup > conductor_bound_ + kBoundSlack) {
    throw DomainError("TraceFunction: sup norm " + std::to_string(sup) + " exceeds conductor bound " +
                      std::to_string(conductor_bound_));
  }
}

double TraceFunction::sup_norm() const { return sup_of(values_); }

double TraceFunction::l2_norm() const { return values_.norm(); }

Polynomial::Polynomial(const PrimeField& field, std::vector<std::int64_t> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (std::int64_t c : coeffs) coeffs_.push_back(field.element(c).value);
  trim(coeffs_);
}

Polynomial Polynomial::from_reduced(std::vector<std::uint64_t> coeffs) {
  Polynomial out;
  out.coeffs_ = std::move(coeffs);
  trim(out.coeffs_);
  return out;
}

FieldElement Polynomial::operator()(const PrimeField& field, FieldElement x) const {
  FieldElement acc{0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = field.add(field.mul(acc, x), {*it});
  return acc;
}

RationalMap::RationalMap(const PrimeField& field, Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DomainError("RationalMap: denominator is identically zero");
  const std::uint64_t p = field.p();
  if (num.is_zero()) {
    num_ = num;
    den_ = Polynomial::from_reduced({1});
    return;
  }
  const Coeffs g = poly_gcd(num.coeffs(), den.coeffs(), p);
  num_ = Polynomial::from_reduced(poly_div_exact(num.coeffs(), g, p));
  den_ = Polynomial::from_reduced(poly_div_exact(den.coeffs(), g, p));
}

bool RationalMap::apply(const PrimeField& field, FieldElement x, FieldElement& out) const {
  const FieldElement d = den_(field, x);
  if (d.value == 0) return false;
  out = field.mul(num_(field, x), field.inv(d));
  return true;
}

TraceFunction make_trivial(const PrimeField& field) {
  const auto p = static_cast<Eigen::Index>(field.p());
  return {field, ComplexVector::Ones(p), {KernelKind::trivial, 0, "trivial"}, 1.0, true};
}

TraceFunction make_additive(const PrimeField& field, std::int64_t a) {
  const auto p = static_cast<std::int64_t>(field.p());
  const std::int64_t ar = field.element(a).value;
  ComplexVector v(p);
  for (std::int64_t x = 0; x < p; ++x) v[x] = unit_root(static_cast<std::int64_t>(static_cast<__int128>(ar) * x % p), p);
  // rank 1, one singular point, Swan conductor 1 at infinity
  return {field, std::move(v), {KernelKind::additive, a, "additive:" + std::to_string(a)}, 3.0, ar == 0};
}

TraceFunction make_mult(const PrimeField& field, std::uint64_t order) {
  const auto p = static_cast<Eigen::Index>(field.p());
  ComplexVector v(p);
  for (Eigen::Index x = 0; x < p; ++x) v[x] = mult_character(field, order, {static_cast<std::uint64_t>(x)});
  // rank 1, tamely ramified at 0 and infinity
  return {field, std::move(v),
          {KernelKind::mult, static_cast<std::int64_t>(order), "mult:" + std::to_string(order)}, 3.0, true};
}

TraceFunction make_legendre(const PrimeField& field) {
  TraceFunction k = make_mult(field, 2);
  return {field, k.values(), {KernelKind::mult, 2, "legendre"}, k.conductor_bound(), true};
}

TraceFunction make_kloosterman(const PrimeField& field, int m) {
  if (m < 2) throw DomainError("make_kloosterman: m must be at least 2, got " + std::to_string(m));
  const TraceFunction psi = make_additive(field, 1);
  TraceFunction current = psi;
  for (int i = 1; i < m; ++i) current = mult_convolve(current, psi);
  return {field, current.values(), {KernelKind::kloosterman, m, "kloosterman:" + std::to_string(m)},
          static_cast<double>(m + 2), true};
}

TraceFunction make_custom(const PrimeField& field, ComplexVector values, double conductor_bound,
                          bool fourier_eligible, std::string label) {
  return {field, std::move(values), {KernelKind::custom, 0, std::move(label)}, conductor_bound, fourier_eligible};
}

namespace {

// Declared bound for derived kernels: the coarse constructor bound, raised to
// the observed sup norm when the table exceeds it.
double derived_bound(double coarse, const ComplexVector& v) { return std::max(coarse, sup_of(v)); }

TraceFunction convolution_result(const TraceFunction& k1, const TraceFunction& k2, ComplexVector v) {
  const double bound = derived_bound(k1.conductor_bound() + k2.conductor_bound(), v);
  return {k1.field(), std::move(v),
          {KernelKind::custom, 0, "conv(" + k1.tag().label + "," + k2.tag().label + ")"}, bound, true};
}

}  // namespace

TraceFunction mult_convolve(const TraceFunction& k1, const TraceFunction& k2) {
  require_same_field(k1, k2, "mult_convolve");
  const PrimeField& field = k1.field();
  const std::uint64_t n = field.p() - 1;
  ComplexVector a(static_cast<Eigen::Index>(n));
  ComplexVector b(static_cast<Eigen::Index>(n));
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t x = field.exp_g(static_cast<std::int64_t>(k)).value;
    a[static_cast<Eigen::Index>(k)] = k1[x];
    b[static_cast<Eigen::Index>(k)] = k2[x];
  }
  const ComplexVector c = fft::cyclic_convolve<double>(a, b);
  const double scale = 1.0 / std::sqrt(static_cast<double>(field.p()));
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(field.p()));
  for (std::uint64_t k = 0; k < n; ++k) {
    v[static_cast<Eigen::Index>(field.exp_g(static_cast<std::int64_t>(k)).value)] =
        c[static_cast<Eigen::Index>(k)] * scale;
  }
  return convolution_result(k1, k2, std::move(v));
}

TraceFunction mult_convolve_naive(const TraceFunction& k1, const TraceFunction& k2) {
  require_same_field(k1, k2, "mult_convolve_naive");
  const std::uint64_t p = k1.p();
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(p));
  for (std::uint64_t x = 1; x < p; ++x) {
    for (std::uint64_t y = 1; y < p; ++y) v[static_cast<Eigen::Index>(x * y % p)] += k1[x] * k2[y];
  }
  v /= std::sqrt(static_cast<double>(p));
  return convolution_result(k1, k2, std::move(v));
}

TraceFunction pullback(const TraceFunction& k, const RationalMap& phi) {
  const PrimeField& field = k.field();
  const auto p = static_cast<Eigen::Index>(field.p());
  ComplexVector v = ComplexVector::Zero(p);
  for (Eigen::Index x = 0; x < p; ++x) {
    FieldElement y;
    if (phi.apply(field, {static_cast<std::uint64_t>(x)}, y)) v[x] = k[y.value];
  }
  const double bound = k.conductor_bound() * (1.0 + std::max(phi.degree(), 0));
  return {field, std::move(v), {KernelKind::pullback, 0, "pullback(" + k.tag().label + ")"}, bound,
          k.fourier_eligible()};
}

TraceFunction pointwise_product(const TraceFunction& k1, const TraceFunction& k2) {
  require_same_field(k1, k2, "pointwise_product");
  ComplexVector v = k1.values().cwiseProduct(k2.values());
  return {k1.field(), std::move(v),
          {KernelKind::product, 0, "prod(" + k1.tag().label + "," + k2.tag().label + ")"},
          k1.conductor_bound() * k2.conductor_bound(), k1.fourier_eligible() && k2.fourier_eligible()};
}

TraceFunction linear_combination(Complex alpha, const TraceFunction& k1, Complex beta,
                                 const TraceFunction& k2) {
  require_same_field(k1, k2, "linear_combination");
  ComplexVector v = alpha * k1.values() + beta * k2.values();
  const double bound = derived_bound(std::abs(alpha) * k1.conductor_bound() + std::abs(beta) * k2.conductor_bound(), v);
  return {k1.field(), std::move(v), {KernelKind::custom, 0, "sum(" + k1.tag().label + "," + k2.tag().label + ")"},
          bound, k1.fourier_eligible() && k2.fourier_eligible()};
}

}  // namespace tracefn
