#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tracefn/cusp_coeffs.hpp"
#include "tracefn/parallel.hpp"
#include "tracefn/trace_zoo.hpp"

namespace tracefn {

/// Smooth window V(x) = exp(-sharpness (log x)^2) for x > 0, peaked at x = 1.
/// Terms with V < 1e-12 are dropped, which confines n/p to [x_min, x_max].
struct WindowSpec {
  double sharpness = 4.0;

  double operator()(double x) const;
  double x_min() const;
  double x_max() const;
  std::string describe() const;
};

inline constexpr double kWindowCutoff = 1e-12;

/// Thrown when the coefficient table does not reach the window's support.
class ExtentError : public DomainError {
 public:
  ExtentError(std::uint64_t needed, std::uint64_t have);
  std::uint64_t needed() const { return needed_; }

 private:
  std::uint64_t needed_;
};

/// Coefficient extent needed for the window at modulus p.
std::uint64_t required_extent(const WindowSpec& window, std::uint64_t p);

/// S_V(f, K; p) = sum_n lambda(n) K(n mod p) V(n/p).
std::complex<double> twisted_sum(const CuspFormCoeffs& coeffs, const TraceFunction& k, const WindowSpec& window);

/// ||K||_inf * sum_n |lambda(n) V(n/p)|, same truncation as twisted_sum.
double trivial_bound(const CuspFormCoeffs& coeffs, const TraceFunction& k, const WindowSpec& window);

struct TwistRow {
  std::uint64_t p = 0;
  std::complex<double> value;
  double magnitude = 0.0;
  double trivial = 0.0;
  double ratio = 0.0;
};

struct ExponentFit {
  bool degenerate = false;
  double delta = 0.0;
  double stderr_delta = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
  std::size_t dropped = 0;
  /// Unset for control runs (trivial kernel).
  std::optional<bool> pass;
};

struct TwistRun {
  std::string form_id;
  std::string kernel;
  WindowSpec window;
  std::vector<TwistRow> rows;  // ascending p
  bool control = false;
};

using KernelFactory = std::function<TraceFunction(const PrimeField&)>;

/// One row per prime, computed in parallel and gathered in input order.
TwistRun run_twist(const CuspFormCoeffs& coeffs, const std::string& kernel_label, const KernelFactory& factory,
                   std::vector<std::uint64_t> primes, const WindowSpec& window, Parallelism par = {});

/// Least squares of log|S| = (1 - delta) log p + const. Requires >= 5 rows.
/// pass = delta >= 1/8 - 2 stderr for non-control runs.
ExponentFit exponent_fit(const TwistRun& run);

/// About `count` primes in [pmin, pmax], spaced geometrically.
std::vector<std::uint64_t> prime_grid(std::uint64_t pmin, std::uint64_t pmax, std::size_t count);

struct AmplifiedReport {
  AmplifierWeights amplifier;
  std::complex<double> twisted;
  /// |A|^2 |S_V|^2
  double amplified = 0.0;
};

/// Single-form analogue of the amplified second moment.
AmplifiedReport amplified_second_moment_demo(const CuspFormCoeffs& coeffs, const TraceFunction& k,
                                             const WindowSpec& window, double L, AmplifierKind kind);

}  // namespace tracefn
