#include "tracefn/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tracefn/cusp_coeffs.hpp"
#include "tracefn/export.hpp"
#include "tracefn/fft.hpp"
#include "tracefn/fourier_corr.hpp"
#include "tracefn/kernel_spec.hpp"
#include "tracefn/kloosterman_ring.hpp"
#include "tracefn/lattice_count.hpp"
#include "tracefn/twist_experiment.hpp"

namespace tracefn {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct RunConfig {
  std::string format;
  std::string out_path;
  std::string threads = "1";
  std::uint64_t seed = 0;
  std::string config_path;
  std::string cache_dir;
  bool omit_timing = false;

  // shared parameters
  std::string kernel = "legendre";
  std::string kernel2 = "trivial";
  std::uint64_t p = 13;
  double tau = 0.5;
  std::int64_t a = 1, b = 1, c = 1, d = 1;
  std::int64_t cmax = 0;
  int degree = 1;
  std::int64_t D = 0;
  std::vector<std::string> ideal_gens;
  std::string m0 = "1";
  std::string k_elem = "1";
  double R = 10.0;
  std::string profile = "gaussian";
  std::uint64_t n = 10;
  double L = 10.0;
  std::string amplifier = "dfi";
  std::string form = "delta";
  std::uint64_t pmin = 101, pmax = 4999, count = 30;
  std::string summary_path;
  bool quick = false;
};

Parallelism parse_threads(const std::string& s) {
  if (s == "auto") return {0};
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos == s.size() && v >= 1 && v <= 4096) return {static_cast<unsigned>(v)};
  } catch (const std::exception&) {
  }
  throw ConfigError("--threads must be a positive integer or 'auto', got '" + s + "'");
}

Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    std::size_t pos = 0;
    if (slash == std::string::npos) {
      const long long v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return Rational(v);
    }
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    const long long nv = std::stoll(num, &pos);
    if (pos != num.size()) throw std::invalid_argument(s);
    const long long dv = std::stoll(den, &pos);
    if (pos != den.size()) throw std::invalid_argument(s);
    if (dv == 0) throw DomainError("zero denominator in '" + s + "'");
    return Rational(nv, dv);
  } catch (const std::invalid_argument&) {
    throw ConfigError("cannot parse rational '" + s + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("rational out of range '" + s + "'");
  }
}

/// "x" or "x,y" for x + y sqrt(D).
NFElement parse_element(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_rational(s), Rational(0)};
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

NumberFieldSpec build_field(const RunConfig& cfg) {
  if (cfg.degree == 1) return NumberFieldSpec::rationals();
  if (cfg.degree == 2) return NumberFieldSpec::quadratic(cfg.D);
  throw DomainError("field degree must be 1 or 2, got " + std::to_string(cfg.degree));
}

IdealLattice build_ideal(const NumberFieldSpec& field, const RunConfig& cfg) {
  if (cfg.ideal_gens.empty()) return IdealLattice::unit_ideal(field);
  std::vector<NFElement> gens;
  for (const auto& g : cfg.ideal_gens) gens.push_back(parse_element(g));
  return IdealLattice::generated_by(field, gens);
}

Json field_inputs(const NumberFieldSpec& field) {
  return Json{{"degree", field.degree()}, {"D", field.degree() == 1 ? 0 : field.D()}};
}

std::filesystem::path cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("TRACEFN_CACHE"); env != nullptr && *env != '\0') return env;
  return ".tracefn_cache";
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + cfg.out_path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + cfg.out_path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_or(const RunConfig& cfg, const std::string& fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "csv" && f != "json") throw ConfigError("--format must be csv or json, got '" + f + "'");
  return f;
}

TraceFunction build_kernel(const std::string& spec, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
  return KernelSpec::parse(spec).build(PrimeField(p));
}

std::string complex_csv(const std::string& label, Complex v) {
  std::ostringstream os;
  os << "quantity,re,im,abs\n"
     << label << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
     << format_double(std::abs(v)) << '\n';
  return os.str();
}

Json complex_json(Complex v) { return Json{{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}}; }

void apply_config(CLI::App& app, CLI::App* sub, const RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream f(cfg.config_path);
  if (!f) throw ConfigError("cannot open config file '" + cfg.config_path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + cfg.config_path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  // {"field": {"degree": 2, "D": 5}} expands into the degree/D flags.
  if (j.contains("field")) {
    const Json field = j["field"];
    j.erase("field");
    if (!field.is_object()) throw ConfigError("config key 'field' must be an object {degree, D}");
    for (const auto& [key, value] : field.items()) {
      if (key != "degree" && key != "D") throw ConfigError("unknown key 'field." + key + "' in config");
      j[key] = value;
    }
  }
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    CLI::Option* opt = sub != nullptr ? sub->get_option_no_throw(flag) : nullptr;
    if (opt == nullptr) opt = app.get_option_no_throw(flag);
    if (opt == nullptr || key == "config" || key == "help") {
      throw ConfigError("unknown key '" + key + "' in config");
    }
    if (opt->count() > 0) continue;  // command line wins
    std::vector<std::string> items;
    if (value.is_array()) {
      for (const auto& v : value) items.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    } else if (value.is_string()) {
      items.push_back(value.get<std::string>());
    } else if (value.is_boolean()) {
      items.push_back(value.get<bool>() ? "true" : "false");
    } else {
      items.push_back(value.dump());
    }
    for (const auto& item : items) opt->add_result(item);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

// ---- subcommand bodies ----

void run_trace(const RunConfig& cfg, std::ostream& out, bool transformed) {
  TraceFunction k = build_kernel(cfg.kernel, cfg.p);
  if (transformed) k = fourier(k);
  if (format_or(cfg, "csv") == "csv") {
    emit(cfg, out, trace_table_csv(k));
  } else {
    emit(cfg, out, dump(trace_table_json(k)));
  }
}

void run_correlate(const RunConfig& cfg, std::ostream& out) {
  const TraceFunction k1 = build_kernel(cfg.kernel, cfg.p);
  const TraceFunction k2 = build_kernel(cfg.kernel2, cfg.p);
  const Complex v = correlate(k1, k2);
  if (format_or(cfg, "json") == "csv") {
    emit(cfg, out, complex_csv("correlation", v));
  } else {
    Json j{{"p", cfg.p}, {"kernel", cfg.kernel}, {"kernel2", cfg.kernel2}};
    j.update(complex_json(v));
    emit(cfg, out, dump(j));
  }
}

void run_gamma(const RunConfig& cfg, std::ostream& out) {
  const TraceFunction k = build_kernel(cfg.kernel, cfg.p);
  const MobiusMap g(k.field(), cfg.a, cfg.b, cfg.c, cfg.d);
  const Complex v = gamma_correlation(k, g);
  if (format_or(cfg, "json") == "csv") {
    emit(cfg, out, complex_csv("gamma_correlation", v));
  } else {
    Json j{{"p", cfg.p}, {"kernel", cfg.kernel}, {"gamma", {g.a(), g.b(), g.c(), g.d()}}};
    j.update(complex_json(v));
    emit(cfg, out, dump(j));
  }
}

void run_fm_scan(const RunConfig& cfg, std::ostream& out) {
  const TraceFunction k = build_kernel(cfg.kernel, cfg.p);
  const FMScanReport report = fm_scan(k, cfg.tau, parse_threads(cfg.threads));
  if (format_or(cfg, "json") == "json") {
    emit(cfg, out, dump(fm_scan_json(report, !cfg.omit_timing)));
    return;
  }
  std::ostringstream os;
  os << "a,b,c,d,abs\n";
  for (std::size_t i = 0; i < report.members.size(); ++i) {
    const MobiusMap& g = report.members[i];
    os << g.a() << ',' << g.b() << ',' << g.c() << ',' << g.d() << ',' << format_double(report.values[i]) << '\n';
  }
  emit(cfg, out, os.str());
}

void run_kl(const RunConfig& cfg, std::ostream& out) {
  std::vector<KlRow> rows;
  if (cfg.cmax > 0) {
    const Parallelism par = parse_threads(cfg.threads);
    rows.resize(static_cast<std::size_t>(cfg.cmax));
    parallel_for(rows.size(), par, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto c = static_cast<std::int64_t>(i) + 1;
        const RingKloosterman r = RingKloosterman::make(cfg.a, cfg.b, cfg.d, c);
        rows[i] = {r.a, r.b, r.d, r.c, kl_ring(r)};
      }
    });
  } else {
    const RingKloosterman r = RingKloosterman::make(cfg.a, cfg.b, cfg.d, cfg.c);
    rows.push_back({r.a, r.b, r.d, r.c, kl_ring(r)});
  }
  if (format_or(cfg, "csv") == "csv") {
    emit(cfg, out, kl_csv(rows));
    return;
  }
  Json arr = Json::array();
  for (const KlRow& r : rows) {
    Json j{{"a", r.a}, {"b", r.b}, {"d", r.d}, {"c", r.c}};
    j.update(complex_json(r.value));
    arr.push_back(j);
  }
  emit(cfg, out, dump(arr));
}

void run_verify_lpc(const RunConfig& cfg, std::ostream& out) {
  const NumberFieldSpec field = build_field(cfg);
  const IdealLattice ideal = build_ideal(field, cfg);
  const TestProfile profile = TestProfile::parse(cfg.profile);
  const LatticeSumResult res = lattice_sum(ideal, profile, cfg.R);
  Json inputs{{"field", field_inputs(field)},
              {"ideal", ideal.describe()},
              {"norm", ideal.norm().str()},
              {"R", cfg.R},
              {"profile", profile.name()}};
  Json j = lattice_json(inputs, res.value, res.poisson_main_term);
  j["error_bound"] = res.error_bound;
  j["points"] = res.points;
  if (profile.kind() == ProfileKind::gaussian) {
    const double dual = poisson_dual_sum(ideal, cfg.R);
    j["dual_sum"] = dual;
    j["poisson_residual"] = std::fabs(res.value - dual);
  }
  emit(cfg, out, dump(j));
}

void run_count_units(const RunConfig& cfg, std::ostream& out) {
  const NumberFieldSpec field = build_field(cfg);
  const NFElement m0 = parse_element(cfg.m0);
  const std::uint64_t count = count_units_in_box(field, m0, cfg.R);
  // Heuristic main term: w log(R^2/|Nm m0|) / log(eps) for real quadratic
  // fields, w when the single orbit lies inside the box otherwise.
  const double w = static_cast<double>(field.roots_of_unity().size());
  const double nm = std::fabs(field.norm(m0).to_double());
  double main = 0.0;
  if (field.is_real_quadratic()) {
    const double log_eps = std::log(std::fabs(field.embeddings(*field.fundamental_unit())[0].real()));
    main = std::max(0.0, w * std::log(cfg.R * cfg.R / nm) / log_eps);
  } else if (field.l1_below(m0, cfg.R)) {
    main = w;
  }
  Json inputs{{"field", field_inputs(field)}, {"m0", cfg.m0}, {"R", cfg.R}};
  emit(cfg, out, dump(lattice_json(inputs, static_cast<double>(count), main)));
}

void run_count_divisors(const RunConfig& cfg, std::ostream& out) {
  const NumberFieldSpec field = build_field(cfg);
  const IdealLattice ideal = build_ideal(field, cfg);
  const NFElement k = parse_element(cfg.k_elem);
  const std::uint64_t count = count_divisor_pairs(ideal, k, cfg.R);
  Json inputs{{"field", field_inputs(field)}, {"ideal", ideal.describe()}, {"k", cfg.k_elem}, {"R", cfg.R}};
  Json j{{"inputs", inputs}, {"value", count}, {"main_term", nullptr}, {"ratio", nullptr}};
  emit(cfg, out, dump(j));
}

CuspFormCoeffs tau_table(const RunConfig& cfg, std::uint64_t n) {
  const std::uint64_t N = std::max<std::uint64_t>(n, 1);
  return load_or_extend_tau(cache_dir(cfg), N);
}

void run_tau(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n < 1) throw DomainError("tau: --n must be >= 1");
  const CuspFormCoeffs coeffs = tau_table(cfg, cfg.n);
  if (format_or(cfg, "csv") == "csv") {
    emit(cfg, out, tau_csv(coeffs, cfg.n));
  } else {
    emit(cfg, out, dump(tau_json(coeffs, cfg.n)));
  }
}

void run_satake(const RunConfig& cfg, std::ostream& out) {
  if (!is_prime(cfg.p)) throw DomainError("satake: p = " + std::to_string(cfg.p) + " is not prime");
  const CuspFormCoeffs coeffs = extend_tau(std::max<std::uint64_t>(cfg.p, 2));
  const SatakeResult s = satake_check(coeffs, cfg.p);
  Json j{{"p", s.p},
         {"tau_p", to_string(coeffs.tau(cfg.p))},
         {"tau_p2", to_string(coeffs.tau(cfg.p * cfg.p))},
         {"alpha", complex_json(s.alpha)},
         {"beta", complex_json(s.beta)},
         {"residual", s.residual},
         {"exact_identity", s.exact_identity}};
  emit(cfg, out, dump(j));
}

void run_amplifier(const RunConfig& cfg, std::ostream& out) {
  const AmplifierKind kind = parse_amplifier_kind(cfg.amplifier);
  if (!(cfg.L >= 2.0)) throw DomainError("amplifier: L must be >= 2");
  const auto extent = static_cast<std::uint64_t>(std::ceil(2.0 * cfg.L));
  const CuspFormCoeffs coeffs = tau_table(cfg, extent);
  const AmplifierWeights w = amplifier_weights(kind, cfg.L, coeffs);
  Json j{{"kind", to_string(w.kind)},
         {"L", w.L},
         {"prime_count", w.primes.size()},
         {"primes", w.primes},
         {"amplifier", w.amplifier}};
  j["exact_total"] = w.exact_total >= 0 ? Json(w.exact_total) : Json(nullptr);
  emit(cfg, out, dump(j));
}

void run_twist(const RunConfig& cfg, std::ostream& out) {
  if (cfg.form != "delta") throw ConfigError("unknown form '" + cfg.form + "' (available: delta)");
  const KernelSpec spec = KernelSpec::parse(cfg.kernel);
  const std::vector<std::uint64_t> primes = prime_grid(cfg.pmin, cfg.pmax, cfg.count);
  const WindowSpec window;
  const std::uint64_t needed = required_extent(window, primes.back());
  const CuspFormCoeffs coeffs = tau_table(cfg, std::max<std::uint64_t>(needed, 50000));
  const TwistRun run = run_twist(
      coeffs, spec.text(), [&](const PrimeField& f) { return spec.build(f); }, primes, window,
      parse_threads(cfg.threads));
  const ExponentFit fit = exponent_fit(run);
  const Json summary = twist_summary_json(run, fit);
  if (format_or(cfg, "csv") == "json") {
    Json rows = Json::array();
    for (const TwistRow& r : run.rows) {
      rows.push_back({{"p", r.p},
                      {"re", r.value.real()},
                      {"im", r.value.imag()},
                      {"abs", r.magnitude},
                      {"trivial", r.trivial},
                      {"ratio", r.ratio}});
    }
    emit(cfg, out, dump(Json{{"rows", rows}, {"summary", summary}}));
    return;
  }
  std::string summary_path = cfg.summary_path;
  if (summary_path.empty() && !cfg.out_path.empty()) summary_path = cfg.out_path + ".summary.json";
  if (summary_path.empty()) {
    emit(cfg, out, twist_csv(run) + "\n" + dump(summary));
    return;
  }
  emit(cfg, out, twist_csv(run));
  std::ofstream f(summary_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open summary file '" + summary_path + "'");
  f << dump(summary);
}

void run_bench(const RunConfig& cfg, std::ostream& out) {
  const Parallelism par = parse_threads(cfg.threads);
  Json report{{"threads", par.resolved()}};

  Json dft = Json::array();
  const std::vector<std::uint64_t> dft_primes =
      cfg.quick ? std::vector<std::uint64_t>{1009} : std::vector<std::uint64_t>{10007, 100003};
  for (std::uint64_t p : dft_primes) {
    const TraceFunction k = make_kloosterman(PrimeField(p), 2);
    auto t0 = Clock::now();
    const TraceFunction fast = fourier(k);
    const double fast_ms = ms_since(t0);
    Json row{{"p", p}, {"fast_ms", fast_ms}, {"fast_ns_per_element", fast_ms * 1e6 / static_cast<double>(p)}};
    // The quadratic transform at 1e5 would take minutes; it is timed only up to 2e4.
    if (p <= 20000) {
      t0 = Clock::now();
      const TraceFunction slow = fourier_naive(k);
      const double slow_ms = ms_since(t0);
      row["naive_ms"] = slow_ms;
      row["speedup"] = slow_ms / std::max(fast_ms, 1e-9);
      row["max_abs_diff"] = (fast.values() - slow.values()).cwiseAbs().maxCoeff();
    }
    dft.push_back(row);
  }
  report["dft"] = dft;

  Json scans = Json::array();
  const std::vector<std::uint64_t> scan_primes =
      cfg.quick ? std::vector<std::uint64_t>{13} : std::vector<std::uint64_t>{53, 101};
  for (std::uint64_t p : scan_primes) {
    const TraceFunction k = make_legendre(PrimeField(p));
    const auto t0 = Clock::now();
    const FMScanReport r = fm_scan(k, 0.5, par);
    const double ms = ms_since(t0);
    scans.push_back({{"p", p},
                     {"scanned", r.scanned},
                     {"expected", pgl2_order(p)},
                     {"members", r.members.size()},
                     {"elapsed_ms", ms},
                     {"ns_per_element", ms * 1e6 / static_cast<double>(r.scanned)}});
  }
  report["fm_scan"] = scans;

  const std::int64_t cmax = cfg.quick ? 500 : 10000;
  std::vector<Complex> values(static_cast<std::size_t>(cmax));
  const auto t0 = Clock::now();
  parallel_for(values.size(), par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = kl_ring(1, 1, 1, static_cast<std::int64_t>(i) + 1);
  });
  const double ms = ms_since(t0);
  report["kl_grid"] = {{"cmax", cmax}, {"sums", values.size()}, {"elapsed_ms", ms},
                       {"ns_per_sum", ms * 1e6 / static_cast<double>(cmax)}};
  emit(cfg, out, dump(report));
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"tracefn: finite-field trace functions, lattice counting in number fields and twisted cusp-form sums"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "Output format: csv or json");
  app.add_option("--out", cfg.out_path, "Write results to this file instead of stdout");
  app.add_option("--threads", cfg.threads, "Worker threads: positive integer or 'auto'");
  app.add_option("--seed", cfg.seed, "Seed for randomized steps");
  app.add_option("--config", cfg.config_path, "JSON file whose keys mirror the long flags");
  app.add_option("--cache-dir", cfg.cache_dir, "Cache directory (default: $TRACEFN_CACHE or .tracefn_cache)");
  app.add_flag("--omit-timing", cfg.omit_timing, "Drop wall-clock fields so outputs compare byte for byte");

  auto kernel_opts = [&](CLI::App* s) {
    s->add_option("--kernel", cfg.kernel,
                  "Kernel: trivial | additive:a | mult:order | legendre | kloosterman:m | "
                  "pullback(<k>,<num>/<den>) | prod(<k1>,<k2>)");
    s->add_option("--p", cfg.p, "Prime modulus");
  };

  auto* trace = app.add_subcommand("trace", "Evaluate a trace function on F_p (trace function zoo)");
  kernel_opts(trace);
  auto* four = app.add_subcommand("fourier", "Unitary Fourier transform of a trace function on F_p");
  kernel_opts(four);
  auto* corr = app.add_subcommand("correlate", "Correlation sum C(K1, K2) = (1/p) sum K1 conj(K2)");
  kernel_opts(corr);
  corr->add_option("--kernel2", cfg.kernel2, "Second kernel");
  auto* gamma = app.add_subcommand("gamma", "Correlation of the Fourier transform with a PGL_2 translate");
  kernel_opts(gamma);
  for (auto [name, ref] : {std::pair{"--a", &cfg.a}, {"--b", &cfg.b}, {"--c", &cfg.c}, {"--d", &cfg.d}}) {
    gamma->add_option(name, *ref, "Matrix entry");
  }
  auto* scan = app.add_subcommand("fm-scan", "Fourier-Moebius group of a kernel: scan of PGL_2(F_p)");
  kernel_opts(scan);
  scan->add_option("--tau", cfg.tau, "Detection threshold in (0, 1)");

  auto* kl = app.add_subcommand("kl", "Complete Kloosterman-type sums Kl(a, b, d; c) over Z/c");
  for (auto [name, ref] : {std::pair{"--a", &cfg.a}, {"--b", &cfg.b}, {"--c", &cfg.c}, {"--d", &cfg.d}}) {
    kl->add_option(name, *ref, "Parameter");
  }
  kl->add_option("--cmax", cfg.cmax, "Emit the grid c = 1..cmax instead of a single modulus");

  auto* lattice = app.add_subcommand("lattice", "Lattice-point counting in ideals of Q or a quadratic field");
  lattice->require_subcommand(1);
  auto field_opts = [&](CLI::App* s) {
    s->add_option("--degree", cfg.degree, "Field degree: 1 (Q) or 2");
    s->add_option("--D", cfg.D, "Squarefree D for Q(sqrt D)");
  };
  auto* lpc = lattice->add_subcommand("verify-lpc", "Smoothed lattice-point count in an ideal and its Poisson main term");
  field_opts(lpc);
  lpc->add_option("--ideal-gen", cfg.ideal_gens, "Ideal generator 'x' or 'x,y' = x + y sqrt(D); repeatable");
  lpc->add_option("--R", cfg.R, "Scale R");
  lpc->add_option("--profile", cfg.profile, "Test function: gaussian or bump");
  auto* units = lattice->add_subcommand("count-units", "Count generators of (m0) in an l1 box (unit counting)");
  field_opts(units);
  units->add_option("--m0", cfg.m0, "Element 'x' or 'x,y'");
  units->add_option("--R", cfg.R, "Box radius");
  auto* divs = lattice->add_subcommand("count-divisors", "Count factorizations k = mn in I x I inside an l1 box");
  field_opts(divs);
  divs->add_option("--ideal-gen", cfg.ideal_gens, "Ideal generator 'x' or 'x,y'; repeatable");
  divs->add_option("--k", cfg.k_elem, "Element k of I^2");
  divs->add_option("--R", cfg.R, "Box radius");

  auto* tau = app.add_subcommand("tau", "Ramanujan tau coefficients of the discriminant form");
  tau->add_option("--n", cfg.n, "Number of coefficients");
  auto* satake = app.add_subcommand("satake", "Hecke relation and Satake parameters of the discriminant form at p");
  satake->add_option("--p", cfg.p, "Prime");
  auto* amp = app.add_subcommand("amplifier", "Amplifier weights on primes in [L, 2L]");
  amp->add_option("--L", cfg.L, "Amplifier length");
  amp->add_option("--kind", cfg.amplifier, "venkatesh or dfi");
  auto* twist = app.add_subcommand("twist", "Twisted sums S_V(f, K; p) and the fitted power saving (amplified twist experiment)");
  twist->add_option("--form", cfg.form, "Cusp form (delta)");
  twist->add_option("--kernel", cfg.kernel, "Kernel spec");
  twist->add_option("--pmin", cfg.pmin, "Smallest prime");
  twist->add_option("--pmax", cfg.pmax, "Largest prime");
  twist->add_option("--count", cfg.count, "Number of primes on the grid");
  twist->add_option("--summary", cfg.summary_path, "Write the JSON fit summary here");
  auto* bench = app.add_subcommand("bench", "Timings for the fast transform, the PGL_2 scan and the Kloosterman grid");
  bench->add_flag("--quick", cfg.quick, "Small sizes (smoke test)");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
    CLI::App* sub = app.get_subcommands().front();
    CLI::App* leaf = sub->get_subcommands().empty() ? sub : sub->get_subcommands().front();
    apply_config(app, leaf, cfg);
    parse_threads(cfg.threads);

    if (sub == trace) run_trace(cfg, out, false);
    else if (sub == four) run_trace(cfg, out, true);
    else if (sub == corr) run_correlate(cfg, out);
    else if (sub == gamma) run_gamma(cfg, out);
    else if (sub == scan) run_fm_scan(cfg, out);
    else if (sub == kl) run_kl(cfg, out);
    else if (leaf == lpc) run_verify_lpc(cfg, out);
    else if (leaf == units) run_count_units(cfg, out);
    else if (leaf == divs) run_count_divisors(cfg, out);
    else if (sub == tau) run_tau(cfg, out);
    else if (sub == satake) run_satake(cfg, out);
    else if (sub == amp) run_amplifier(cfg, out);
    else if (sub == twist) run_twist(cfg, out);
    else if (sub == bench) run_bench(cfg, out);
    return 0;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace tracefn
