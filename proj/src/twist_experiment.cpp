#include "tracefn/twist_experiment.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "tracefn/ff_core.hpp"

namespace tracefn {

double WindowSpec::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  const double l = std::log(x);
  return std::exp(-sharpness * l * l);
}

double WindowSpec::x_min() const { return std::exp(-std::sqrt(-std::log(kWindowCutoff) / sharpness)); }

double WindowSpec::x_max() const { return std::exp(std::sqrt(-std::log(kWindowCutoff) / sharpness)); }

std::string WindowSpec::describe() const {
  std::ostringstream os;
  os << "exp(-" << sharpness << " log(x)^2)";
  return os.str();
}

ExtentError::ExtentError(std::uint64_t needed, std::uint64_t have)
    : DomainError("coefficient extent " + std::to_string(have) + " is below the required " + std::to_string(needed) +
                  "; extend the tau table first"),
      needed_(needed) {}

std::uint64_t required_extent(const WindowSpec& window, std::uint64_t p) {
  return static_cast<std::uint64_t>(std::floor(window.x_max() * static_cast<double>(p)));
}

namespace {

template <typename Fn>
void for_each_term(const CuspFormCoeffs& coeffs, std::uint64_t p, const WindowSpec& window, Fn&& fn) {
  const std::uint64_t hi = required_extent(window, p);
  if (coeffs.extent() < hi) throw ExtentError(hi, coeffs.extent());
  const auto lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(window.x_min() * static_cast<double>(p))));
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const double v = window(static_cast<double>(n) / static_cast<double>(p));
    if (v < kWindowCutoff) continue;
    fn(n, coeffs.lambda(n) * v);
  }
}

}  // namespace

std::complex<double> twisted_sum(const CuspFormCoeffs& coeffs, const TraceFunction& k, const WindowSpec& window) {
  const std::uint64_t p = k.p();
  std::complex<double> acc{0.0, 0.0};
  for_each_term(coeffs, p, window, [&](std::uint64_t n, double weight) { acc += weight * k[n % p]; });
  return acc;
}

double trivial_bound(const CuspFormCoeffs& coeffs, const TraceFunction& k, const WindowSpec& window) {
  double acc = 0.0;
  for_each_term(coeffs, k.p(), window, [&](std::uint64_t, double weight) { acc += std::fabs(weight); });
  return k.sup_norm() * acc;
}

TwistRun run_twist(const CuspFormCoeffs& coeffs, const std::string& kernel_label, const KernelFactory& factory,
                   std::vector<std::uint64_t> primes, const WindowSpec& window, Parallelism par) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (std::uint64_t p : primes) {
    if (!is_prime(p)) throw DomainError("run_twist: " + std::to_string(p) + " is not prime");
  }
  TwistRun run;
  run.form_id = coeffs.form_id();
  run.kernel = kernel_label;
  run.window = window;
  run.rows.resize(primes.size());
  parallel_for(primes.size(), par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PrimeField field(primes[i]);
      const TraceFunction k = factory(field);
      TwistRow& row = run.rows[i];
      row.p = primes[i];
      row.value = twisted_sum(coeffs, k, window);
      row.magnitude = std::abs(row.value);
      row.trivial = trivial_bound(coeffs, k, window);
      row.ratio = row.trivial > 0.0 ? row.magnitude / row.trivial : 0.0;
      if (i == 0 && k.tag().kind == KernelKind::trivial) run.control = true;
    }
  });
  return run;
}

ExponentFit exponent_fit(const TwistRun& run) {
  if (run.rows.size() < 5) throw DomainError("exponent_fit: need at least 5 primes, got " + std::to_string(run.rows.size()));
  ExponentFit fit;
  std::vector<const TwistRow*> used;
  for (const TwistRow& row : run.rows) {
    if (row.magnitude < 1e-12) {
      ++fit.dropped;
    } else {
      used.push_back(&row);
    }
  }
  fit.used = used.size();
  if (used.size() < 3) {
    fit.degenerate = true;
    return fit;
  }
  const auto m = static_cast<Eigen::Index>(used.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = std::log(static_cast<double>(used[static_cast<std::size_t>(i)]->p));
    y[i] = std::log(used[static_cast<std::size_t>(i)]->magnitude);
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  const double rss = (y - X * beta).squaredNorm();
  const double sigma2 = rss / static_cast<double>(m - 2);
  const Eigen::Matrix2d cov = sigma2 * (X.transpose() * X).inverse();
  fit.intercept = beta[0];
  fit.slope = beta[1];
  fit.delta = 1.0 - fit.slope;
  fit.stderr_delta = std::sqrt(cov(1, 1));
  if (!run.control) fit.pass = fit.delta >= 0.125 - 2.0 * fit.stderr_delta;
  return fit;
}

std::vector<std::uint64_t> prime_grid(std::uint64_t pmin, std::uint64_t pmax, std::size_t count) {
  if (pmin < 3 || pmax < pmin || count == 0) throw DomainError("prime_grid: need 3 <= pmin <= pmax and count >= 1");
  std::vector<std::uint64_t> out;
  const double lmin = std::log(static_cast<double>(pmin));
  const double lmax = std::log(static_cast<double>(pmax));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    auto target = static_cast<std::uint64_t>(std::llround(std::exp(lmin + t * (lmax - lmin))));
    std::uint64_t p = std::max(target, pmin);
    while (p <= pmax && !is_prime(p)) ++p;
    if (p > pmax) {
      p = std::min(target, pmax);
      while (p >= pmin && !is_prime(p)) --p;
      if (p < pmin) continue;
    }
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AmplifiedReport amplified_second_moment_demo(const CuspFormCoeffs& coeffs, const TraceFunction& k,
                                             const WindowSpec& window, double L, AmplifierKind kind) {
  AmplifiedReport report;
  report.amplifier = amplifier_weights(kind, L, coeffs);
  report.twisted = twisted_sum(coeffs, k, window);
  const double a = report.amplifier.amplifier;
  report.amplified = a * a * std::norm(report.twisted);
  return report;
}

}  // namespace tracefn
