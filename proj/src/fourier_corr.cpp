#include "tracefn/fourier_corr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "tracefn/fft.hpp"

namespace tracefn {

namespace {

TraceFunction transform_result(const TraceFunction& k, ComplexVector v) {
  const double bound = std::max(k.conductor_bound(), v.cwiseAbs().maxCoeff());
  return {k.field(), std::move(v), {KernelKind::custom, 0, "fourier(" + k.tag().label + ")"}, bound,
          k.fourier_eligible()};
}

void require_fourier(const TraceFunction& k, const char* op) {
  if (!k.fourier_eligible()) {
    throw DomainError(std::string(op) + ": kernel '" + k.tag().label +
                      "' has an additive-character component; its Fourier transform is not a bounded trace function");
  }
}

}  // namespace

TraceFunction fourier(const TraceFunction& k) {
  ComplexVector v = fft::dft<double>(k.values(), -1) / std::sqrt(static_cast<double>(k.p()));
  return transform_result(k, std::move(v));
}

TraceFunction fourier_naive(const TraceFunction& k) {
  ComplexVector v = fft::dft_naive<double>(k.values(), -1) / std::sqrt(static_cast<double>(k.p()));
  return transform_result(k, std::move(v));
}

Complex correlate(const TraceFunction& k1, const TraceFunction& k2) {
  if (!(k1.field() == k2.field())) throw DomainError("correlate: field mismatch");
  // Eigen's dot conjugates its left operand.
  return k2.values().dot(k1.values()) / static_cast<double>(k1.p());
}

MobiusMap::MobiusMap(const PrimeField& field, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  std::array<FieldElement, 4> e{field.element(a), field.element(b), field.element(c), field.element(d)};
  if (field.sub(field.mul(e[0], e[3]), field.mul(e[1], e[2])).value == 0) {
    throw DomainError("MobiusMap: singular matrix [[" + std::to_string(a) + "," + std::to_string(b) + "],[" +
                      std::to_string(c) + "," + std::to_string(d) + "]] mod " + std::to_string(field.p()));
  }
  const FieldElement lead = e[0].value != 0 ? e[0] : e[1];
  const FieldElement scale = field.inv(lead);
  for (std::size_t i = 0; i < 4; ++i) entries_[i] = field.mul(e[i], scale).value;
}

std::optional<FieldElement> mobius_apply(const PrimeField& field, const MobiusMap& gamma, FieldElement x) {
  const FieldElement den = field.add(field.mul({gamma.c()}, x), {gamma.d()});
  if (den.value == 0) return std::nullopt;
  return field.mul(field.add(field.mul({gamma.a()}, x), {gamma.b()}), field.inv(den));
}

MobiusMap compose(const PrimeField& field, const MobiusMap& g, const MobiusMap& h) {
  const auto p = field.p();
  auto dot = [p](std::uint64_t x1, std::uint64_t y1, std::uint64_t x2, std::uint64_t y2) {
    return static_cast<std::int64_t>((x1 * y1 + x2 * y2) % p);
  };
  return {field, dot(g.a(), h.a(), g.b(), h.c()), dot(g.a(), h.b(), g.b(), h.d()),
          dot(g.c(), h.a(), g.d(), h.c()), dot(g.c(), h.b(), g.d(), h.d())};
}

MobiusMap inverse(const PrimeField& field, const MobiusMap& g) {
  const auto s = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
  return {field, s(g.d()), -s(g.b()), -s(g.c()), s(g.a())};
}

std::uint64_t pgl2_order(std::uint64_t p) { return p * (p * p - 1); }

MobiusMap pgl2_element(const PrimeField& field, std::uint64_t index) {
  const std::uint64_t p = field.p();
  const auto s = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
  const std::uint64_t first_block = p * (p - 1);
  if (index < first_block) {
    // [[0, 1], [c, d]], c != 0
    return {field, 0, 1, s(1 + index / p), s(index % p)};
  }
  const std::uint64_t j = index - first_block;
  const std::uint64_t pair = j / (p - 1);
  const std::uint64_t b = pair / p;
  const std::uint64_t c = pair % p;
  const std::uint64_t r = j % (p - 1);
  const std::uint64_t excluded = b * c % p;  // d = bc is singular
  const std::uint64_t d = r < excluded ? r : r + 1;
  return {field, 1, s(b), s(c), s(d)};
}

Complex gamma_correlation_hat(const TraceFunction& khat, const MobiusMap& gamma) {
  const PrimeField& field = khat.field();
  const std::uint64_t p = field.p();
  const ComplexVector& v = khat.values();
  Complex acc{0.0, 0.0};
  for (std::uint64_t t = 0; t < p; ++t) {
    const std::uint64_t den = (gamma.c() * t + gamma.d()) % p;
    if (den == 0) continue;
    const std::uint64_t num = (gamma.a() * t + gamma.b()) % p;
    const std::uint64_t image = num * field.inv({den}).value % p;
    acc += v[static_cast<Eigen::Index>(t)] * std::conj(v[static_cast<Eigen::Index>(image)]);
  }
  return acc / static_cast<double>(p);
}

Complex gamma_correlation(const TraceFunction& k, const MobiusMap& gamma) {
  require_fourier(k, "gamma_correlation");
  return gamma_correlation_hat(fourier(k), gamma);
}

MobiusMap gamma_family(const PrimeField& field, FieldElement m, FieldElement n, FieldElement mu) {
  if (mu.value == 0) throw DomainError("gamma_family: mu = 0 gives a singular matrix");
  const FieldElement upper_right = field.sub(mu, field.mul(m, n));
  return {field, static_cast<std::int64_t>(m.value), static_cast<std::int64_t>(upper_right.value), 1,
          static_cast<std::int64_t>(field.neg(n).value)};
}

Complex gamma_family_correlation(const TraceFunction& k, FieldElement m, FieldElement n, FieldElement mu) {
  require_fourier(k, "gamma_family_correlation");
  return gamma_correlation(k, gamma_family(k.field(), m, n, mu));
}

FMScanReport fm_scan(const TraceFunction& k, double tau, Parallelism par) {
  require_fourier(k, "fm_scan");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("fm_scan: threshold tau must lie in (0, 1)");
  const auto start = std::chrono::steady_clock::now();
  const PrimeField& field = k.field();
  const TraceFunction khat = fourier(k);
  const std::uint64_t total = pgl2_order(field.p());
  std::vector<double> magnitude(total);
  parallel_for(total, par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      magnitude[i] = std::abs(gamma_correlation_hat(khat, pgl2_element(field, i)));
    }
  });

  FMScanReport report;
  report.p = field.p();
  report.kind = k.tag().label;
  report.tau = tau;
  report.scanned = total;
  report.min_member = 0.0;
  bool first_member = true;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (magnitude[i] >= tau) {
      report.members.push_back(pgl2_element(field, i));
      report.values.push_back(magnitude[i]);
      report.min_member = first_member ? magnitude[i] : std::min(report.min_member, magnitude[i]);
      first_member = false;
    } else {
      report.max_nonmember = std::max(report.max_nonmember, magnitude[i]);
    }
  }
  report.gap_warning = field.p() >= 53 && !report.members.empty() && report.min_member < 2.0 * report.max_nonmember;
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

bool is_subgroup(const PrimeField& field, const std::vector<MobiusMap>& members) {
  std::vector<MobiusMap> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  const auto contains = [&](const MobiusMap& g) { return std::binary_search(sorted.begin(), sorted.end(), g); };
  if (!contains(MobiusMap::identity(field))) return false;
  for (const auto& g : sorted) {
    if (!contains(inverse(field, g))) return false;
    for (const auto& h : sorted) {
      if (!contains(compose(field, g, h))) return false;
    }
  }
  return true;
}

}  // namespace tracefn
