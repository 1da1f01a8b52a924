#include "tracefn/number_field.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace tracefn {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw DomainError("number field arithmetic: 64-bit coefficient overflow");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool squarefree(std::int64_t n) {
  n = n < 0 ? -n : n;
  for (std::int64_t q = 2; q * q <= n; ++q) {
    if (n % (q * q) == 0) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- Rational

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw DomainError("Rational: zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw DomainError("Rational: division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = narrow(n);
  r.den_ = narrow(d);
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("Rational: division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

// --------------------------------------------------------- NumberFieldSpec

NumberFieldSpec NumberFieldSpec::rationals() {
  NumberFieldSpec f;
  f.basis_ = {NFElement{1, 0}};
  f.roots_ = {NFElement{1, 0}, NFElement{-1, 0}};
  return f;
}

NumberFieldSpec NumberFieldSpec::quadratic(std::int64_t D) {
  if (D == 0 || D == 1 || !squarefree(D)) {
    throw DomainError("NumberFieldSpec: D = " + std::to_string(D) + " must be squarefree and different from 0, 1");
  }
  if (D > 1'000'000'000 || D < -1'000'000'000) throw DomainError("NumberFieldSpec: |D| too large");
  NumberFieldSpec f;
  f.degree_ = 2;
  f.D_ = D;
  const bool one_mod_four = ((D % 4) + 4) % 4 == 1;
  f.discriminant_ = one_mod_four ? D : 4 * D;
  f.r_ = D > 0 ? 2 : 0;
  f.s_ = D > 0 ? 0 : 1;
  const NFElement omega = one_mod_four ? NFElement{Rational(1, 2), Rational(1, 2)} : NFElement{0, 1};
  f.basis_ = {NFElement{1, 0}, omega};
  f.roots_ = {NFElement{1, 0}, NFElement{-1, 0}};
  if (D == -1) {
    f.roots_.push_back({0, 1});
    f.roots_.push_back({0, -1});
  } else if (D == -3) {
    for (int sx : {1, -1}) {
      for (int sy : {1, -1}) f.roots_.push_back({Rational(sx, 2), Rational(sy, 2)});
    }
  }
  if (D > 0) {
    // Continued fraction of omega = (P + sqrt D)/Q; the first convergent p/q
    // with p - q*omega a unit yields the fundamental unit.
    const std::int64_t s = isqrt(D);
    __int128 P = one_mod_four ? 1 : 0;
    __int128 Q = one_mod_four ? 2 : 1;
    const __int128 tr = one_mod_four ? 1 : 0;
    const __int128 nm = one_mod_four ? (1 - static_cast<__int128>(D)) / 4 : -static_cast<__int128>(D);
    __int128 p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
    for (int iter = 0; iter < 100000; ++iter) {
      const __int128 a = (P + s) / Q;
      const __int128 p = a * p_prev + p_prev2;
      const __int128 q = a * q_prev + q_prev2;
      if (p > (static_cast<__int128>(1) << 62) || q > (static_cast<__int128>(1) << 62)) {
        throw DomainError("NumberFieldSpec: fundamental unit of Q(sqrt " + std::to_string(D) +
                          ") exceeds 64-bit coefficients");
      }
      // Nm(p - q omega) = p^2 - pq Tr(omega) + q^2 Nm(omega)
      const __int128 norm = p * p - p * q * tr + q * q * nm;
      if (norm == 1 || norm == -1) {
        const NFElement u = f.from_coordinates({Rational(narrow(p)), Rational(narrow(-q))});
        NFElement best = u;
        for (const NFElement& cand : {u, f.conj(u), NFElement{-u.x, -u.y}, f.conj(NFElement{-u.x, -u.y})}) {
          if (f.embeddings(cand)[0].real() > 1.0) best = cand;
        }
        f.unit_ = best;
        break;
      }
      p_prev2 = p_prev;
      p_prev = p;
      q_prev2 = q_prev;
      q_prev = q;
      P = a * Q - P;
      Q = (static_cast<__int128>(D) - P * P) / Q;
    }
    if (!f.unit_) throw DomainError("NumberFieldSpec: continued fraction did not produce a unit");
  }
  return f;
}

NFElement NumberFieldSpec::add(const NFElement& a, const NFElement& b) const { return {a.x + b.x, a.y + b.y}; }
NFElement NumberFieldSpec::sub(const NFElement& a, const NFElement& b) const { return {a.x - b.x, a.y - b.y}; }

NFElement NumberFieldSpec::mul(const NFElement& a, const NFElement& b) const {
  return {a.x * b.x + a.y * b.y * Rational(D_), a.x * b.y + a.y * b.x};
}

NFElement NumberFieldSpec::conj(const NFElement& a) const { return {a.x, -a.y}; }

Rational NumberFieldSpec::norm(const NFElement& a) const {
  if (degree_ == 1) return a.x;
  return a.x * a.x - Rational(D_) * a.y * a.y;
}

Rational NumberFieldSpec::trace(const NFElement& a) const {
  if (degree_ == 1) return a.x;
  return Rational(2) * a.x;
}

NFElement NumberFieldSpec::inv(const NFElement& a) const {
  if (is_zero(a)) throw DomainError("NumberFieldSpec::inv: zero element");
  if (degree_ == 1) return {Rational(1) / a.x, 0};
  const Rational n = norm(a);
  const NFElement c = conj(a);
  return {c.x / n, c.y / n};
}

std::vector<std::complex<double>> NumberFieldSpec::embeddings(const NFElement& a) const {
  const long double x = a.x.to_long_double();
  if (degree_ == 1) return {std::complex<double>(static_cast<double>(x), 0.0)};
  const long double y = a.y.to_long_double();
  if (D_ > 0) {
    const long double r = std::sqrt(static_cast<long double>(D_));
    return {std::complex<double>(static_cast<double>(x + y * r), 0.0),
            std::complex<double>(static_cast<double>(x - y * r), 0.0)};
  }
  const long double r = std::sqrt(static_cast<long double>(-D_));
  return {std::complex<double>(static_cast<double>(x), static_cast<double>(y * r)),
          std::complex<double>(static_cast<double>(x), static_cast<double>(-y * r))};
}

double NumberFieldSpec::l1_norm(const NFElement& a) const {
  const long double x = a.x.to_long_double();
  if (degree_ == 1) return static_cast<double>(std::fabs(x));
  const long double y = a.y.to_long_double();
  if (D_ > 0) {
    // |s1| + |s2| = max(|s1 + s2|, |s1 - s2|)
    return static_cast<double>(std::max(std::fabs(2 * x), std::fabs(2 * y) * std::sqrt(static_cast<long double>(D_))));
  }
  return static_cast<double>(2 * std::sqrt(x * x - static_cast<long double>(D_) * y * y));
}

bool NumberFieldSpec::l1_below(const NFElement& a, double R) const {
  const long double r = R;
  const long double x = a.x.to_long_double();
  if (degree_ == 1) return std::fabs(x) < r;
  const long double y = a.y.to_long_double();
  if (D_ > 0) {
    // Compare squares so the irrational part never needs a square root.
    return std::fabs(2 * x) < r && 4 * y * y * static_cast<long double>(D_) < r * r;
  }
  return 4 * (x * x - static_cast<long double>(D_) * y * y) < r * r;
}

Eigen::VectorXd NumberFieldSpec::minkowski(const NFElement& a) const {
  const auto sig = embeddings(a);
  Eigen::VectorXd v(degree_);
  if (degree_ == 1 || D_ > 0) {
    for (int i = 0; i < degree_; ++i) v[i] = sig[static_cast<std::size_t>(i)].real();
  } else {
    v[0] = std::numbers::sqrt2 * sig[0].real();
    v[1] = std::numbers::sqrt2 * sig[0].imag();
  }
  return v;
}

std::vector<Rational> NumberFieldSpec::coordinates(const NFElement& a) const {
  if (degree_ == 1) return {a.x};
  if (basis_[1].x == 0) return {a.x, a.y};
  // a = c0 + c1 (1 + sqrt D)/2
  return {a.x - a.y, Rational(2) * a.y};
}

NFElement NumberFieldSpec::from_coordinates(const std::vector<Rational>& c) const {
  NFElement out{c[0], 0};
  if (degree_ == 2) out = add(out, mul(NFElement{c[1], 0}, basis_[1]));
  return out;
}

bool NumberFieldSpec::is_integral(const NFElement& a) const {
  for (const Rational& c : coordinates(a)) {
    if (!c.is_integer()) return false;
  }
  return true;
}

std::string NumberFieldSpec::describe() const {
  return degree_ == 1 ? std::string("Q") : "Q(sqrt(" + std::to_string(D_) + "))";
}

// ------------------------------------------------------------------- HNF

std::vector<std::vector<std::int64_t>> hermite_normal_form(std::vector<std::vector<std::int64_t>> rows, int cols) {
  std::vector<std::vector<__int128>> m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  std::size_t pivot = 0;
  for (int j = 0; j < cols && pivot < m.size(); ++j) {
    // Euclid on column j among rows pivot..end
    while (true) {
      std::size_t best = m.size();
      for (std::size_t i = pivot; i < m.size(); ++i) {
        if (m[i][static_cast<std::size_t>(j)] != 0 &&
            (best == m.size() || abs128(m[i][static_cast<std::size_t>(j)]) < abs128(m[best][static_cast<std::size_t>(j)]))) {
          best = i;
        }
      }
      if (best == m.size()) break;
      std::swap(m[pivot], m[best]);
      bool done = true;
      for (std::size_t i = pivot + 1; i < m.size(); ++i) {
        const __int128 q = m[i][static_cast<std::size_t>(j)] / m[pivot][static_cast<std::size_t>(j)];
        if (q != 0) {
          for (int k = 0; k < cols; ++k) m[i][static_cast<std::size_t>(k)] -= q * m[pivot][static_cast<std::size_t>(k)];
        }
        if (m[i][static_cast<std::size_t>(j)] != 0) done = false;
      }
      if (done) break;
    }
    if (m[pivot][static_cast<std::size_t>(j)] == 0) continue;
    if (m[pivot][static_cast<std::size_t>(j)] < 0) {
      for (auto& v : m[pivot]) v = -v;
    }
    for (std::size_t i = 0; i < pivot; ++i) {
      __int128 q = m[i][static_cast<std::size_t>(j)] / m[pivot][static_cast<std::size_t>(j)];
      if (m[i][static_cast<std::size_t>(j)] - q * m[pivot][static_cast<std::size_t>(j)] < 0) --q;
      for (int k = 0; k < cols; ++k) m[i][static_cast<std::size_t>(k)] -= q * m[pivot][static_cast<std::size_t>(k)];
    }
    ++pivot;
  }
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t i = 0; i < pivot; ++i) {
    std::vector<std::int64_t> r;
    for (const auto v : m[i]) r.push_back(narrow(v));
    out.push_back(std::move(r));
  }
  return out;
}

// ------------------------------------------------------------ IdealLattice

IdealLattice::IdealLattice(NumberFieldSpec field, const std::vector<std::vector<Rational>>& z_generators)
    : field_(std::move(field)) {
  const int n = field_.degree();
  std::int64_t common = 1;
  for (const auto& row : z_generators) {
    for (const Rational& c : row) common = narrow(static_cast<__int128>(common) / gcd128(common, c.den()) * c.den());
  }
  std::vector<std::vector<std::int64_t>> ints;
  for (const auto& row : z_generators) {
    std::vector<std::int64_t> r;
    for (const Rational& c : row) r.push_back((c * Rational(common)).num());
    ints.push_back(std::move(r));
  }
  const auto h = hermite_normal_form(std::move(ints), n);
  if (static_cast<int>(h.size()) != n) throw DomainError("IdealLattice: generators span a degenerate lattice");
  norm_ = Rational(1);
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> row;
    for (int k = 0; k < n; ++k) row.emplace_back(h[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], common);
    norm_ = norm_ * row[static_cast<std::size_t>(i)];
    basis_.push_back(field_.from_coordinates(row));
    hnf_.push_back(std::move(row));
  }
}

IdealLattice IdealLattice::generated_by(const NumberFieldSpec& field, const std::vector<NFElement>& generators) {
  std::vector<std::vector<Rational>> z;
  for (const NFElement& g : generators) {
    if (field.is_zero(g)) continue;
    for (const NFElement& w : field.integral_basis()) z.push_back(field.coordinates(field.mul(g, w)));
  }
  if (z.empty()) throw DomainError("IdealLattice: the zero ideal is not a lattice");
  return {field, z};
}

IdealLattice IdealLattice::principal(const NumberFieldSpec& field, const NFElement& m0) {
  return generated_by(field, {m0});
}

IdealLattice IdealLattice::unit_ideal(const NumberFieldSpec& field) { return generated_by(field, {NFElement{1, 0}}); }

Eigen::MatrixXd IdealLattice::embedding_matrix() const {
  const int n = field_.degree();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) m.row(i) = field_.minkowski(basis_[static_cast<std::size_t>(i)]).transpose();
  return m;
}

bool IdealLattice::contains(const NFElement& a) const {
  const std::vector<Rational> c = field_.coordinates(a);
  if (field_.degree() == 1) return (c[0] / hnf_[0][0]).is_integer();
  // c = t0 * row0 + t1 * row1 with row1 = (0, h11)
  const Rational t0 = c[0] / hnf_[0][0];
  if (!t0.is_integer()) return false;
  const Rational t1 = (c[1] - t0 * hnf_[0][1]) / hnf_[1][1];
  return t1.is_integer();
}

bool IdealLattice::contains(const IdealLattice& other) const {
  for (const NFElement& b : other.basis_) {
    if (!contains(b)) return false;
  }
  return true;
}

bool IdealLattice::is_integral() const { return unit_ideal(field_).contains(*this); }

IdealLattice IdealLattice::dual() const {
  const int n = field_.degree();
  if (n == 1) return {field_, {{Rational(1) / basis_[0].x}}};
  Rational t[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      t[i][j] = field_.trace(field_.mul(basis_[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(j)]));
    }
  }
  const Rational det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
  const Rational inv[2][2] = {{t[1][1] / det, -t[0][1] / det}, {-t[1][0] / det, t[0][0] / det}};
  std::vector<std::vector<Rational>> z;
  for (int j = 0; j < 2; ++j) {
    NFElement e{0, 0};
    for (int i = 0; i < 2; ++i) {
      e = field_.add(e, field_.mul(NFElement{inv[i][j], 0}, basis_[static_cast<std::size_t>(i)]));
    }
    z.push_back(field_.coordinates(e));
  }
  return {field_, z};
}

IdealLattice IdealLattice::inverse() const {
  if (field_.degree() == 1) return {field_, {{Rational(1) / basis_[0].x}}};
  // I * conj(I) = (Nm I)
  std::vector<std::vector<Rational>> z;
  const NFElement scale{Rational(1) / norm_, 0};
  for (const NFElement& b : basis_) z.push_back(field_.coordinates(field_.mul(field_.conj(b), scale)));
  return {field_, z};
}

IdealLattice IdealLattice::times(const IdealLattice& other) const {
  std::vector<std::vector<Rational>> z;
  for (const NFElement& b : basis_) {
    for (const NFElement& c : other.basis_) z.push_back(field_.coordinates(field_.mul(b, c)));
  }
  return {field_, z};
}

IdealLattice IdealLattice::times(const NFElement& a) const {
  if (field_.is_zero(a)) throw DomainError("IdealLattice::times: zero multiplier");
  std::vector<std::vector<Rational>> z;
  for (const NFElement& b : basis_) z.push_back(field_.coordinates(field_.mul(b, a)));
  return {field_, z};
}

std::string IdealLattice::describe() const {
  std::ostringstream os;
  os << field_.describe() << " ideal with HNF basis [";
  for (std::size_t i = 0; i < hnf_.size(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t k = 0; k < hnf_[i].size(); ++k) os << (k ? " " : "") << hnf_[i][k].str();
  }
  os << "], norm " << norm_.str();
  return os.str();
}

}  // namespace tracefn
