#include "tracefn/export.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace tracefn {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string trace_table_csv(const TraceFunction& k) {
  std::ostringstream os;
  os << "x,re,im\n";
  for (std::uint64_t x = 0; x < k.p(); ++x) {
    os << x << ',' << format_double(k[x].real()) << ',' << format_double(k[x].imag()) << '\n';
  }
  return os.str();
}

Json trace_table_json(const TraceFunction& k) {
  Json re = Json::array();
  Json im = Json::array();
  for (std::uint64_t x = 0; x < k.p(); ++x) {
    re.push_back(k[x].real());
    im.push_back(k[x].imag());
  }
  return Json{{"p", k.p()},
              {"kernel", k.tag().label},
              {"conductor_bound", k.conductor_bound()},
              {"fourier_eligible", k.fourier_eligible()},
              {"re", re},
              {"im", im}};
}

Json fm_scan_json(const FMScanReport& report, bool with_timing) {
  Json members = Json::array();
  for (const MobiusMap& g : report.members) members.push_back({g.a(), g.b(), g.c(), g.d()});
  Json out{{"p", report.p},
           {"kind", report.kind},
           {"tau", report.tau},
           {"members", members},
           {"values", report.values},
           {"max_nonmember", report.max_nonmember},
           {"scanned", report.scanned},
           {"gap_warning", report.gap_warning}};
  if (with_timing) out["elapsed_ms"] = report.elapsed_ms;
  return out;
}

std::string kl_csv(const std::vector<KlRow>& rows) {
  std::ostringstream os;
  os << "a,b,d,c,re,im,abs\n";
  for (const KlRow& r : rows) {
    os << r.a << ',' << r.b << ',' << r.d << ',' << r.c << ',' << format_double(r.value.real()) << ','
       << format_double(r.value.imag()) << ',' << format_double(std::abs(r.value)) << '\n';
  }
  return os.str();
}

Json lattice_json(const Json& inputs, double value, double main_term) {
  return Json{{"inputs", inputs},
              {"value", value},
              {"main_term", main_term},
              {"ratio", main_term != 0.0 ? value / main_term : 0.0}};
}

std::string twist_csv(const TwistRun& run) {
  std::ostringstream os;
  os << "p,re,im,abs,trivial,ratio\n";
  for (const TwistRow& r : run.rows) {
    os << r.p << ',' << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
       << format_double(r.magnitude) << ',' << format_double(r.trivial) << ',' << format_double(r.ratio) << '\n';
  }
  return os.str();
}

Json twist_summary_json(const TwistRun& run, const ExponentFit& fit) {
  Json grid = Json::array();
  for (const TwistRow& r : run.rows) grid.push_back(r.p);
  Json out{{"form", run.form_id},
           {"kernel", run.kernel},
           {"window", run.window.describe()},
           {"control", run.control},
           {"degenerate", fit.degenerate},
           {"delta_emp", fit.delta},
           {"stderr", fit.stderr_delta},
           {"slope", fit.slope},
           {"used", fit.used},
           {"dropped", fit.dropped}};
  out["pass"] = fit.pass ? Json(*fit.pass) : Json(nullptr);
  out["grid"] = grid;
  return out;
}

std::string tau_csv(const CuspFormCoeffs& coeffs, std::uint64_t count) {
  std::ostringstream os;
  os << "n,tau\n";
  for (std::uint64_t n = 1; n <= count; ++n) os << n << ',' << to_string(coeffs.tau(n)) << '\n';
  return os.str();
}

Json tau_json(const CuspFormCoeffs& coeffs, std::uint64_t count) {
  Json values = Json::array();
  for (std::uint64_t n = 1; n <= count; ++n) values.push_back(to_string(coeffs.tau(n)));
  return Json{{"form", coeffs.form_id()}, {"count", count}, {"tau", values}};
}

}  // namespace tracefn
