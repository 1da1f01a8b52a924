#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "tracefn/cusp_coeffs.hpp"
#include "tracefn/fourier_corr.hpp"
#include "tracefn/lattice_count.hpp"
#include "tracefn/twist_experiment.hpp"

namespace tracefn {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal for a double, '.' separator regardless of locale.
std::string format_double(double v);

/// CSV with header x,re,im; one row per x in F_p.
std::string trace_table_csv(const TraceFunction& k);
Json trace_table_json(const TraceFunction& k);

/// Timings are dropped when with_timing is false so outputs can be compared
/// byte for byte.
Json fm_scan_json(const FMScanReport& report, bool with_timing = true);

struct KlRow {
  std::int64_t a, b, d, c;
  Complex value;
};
/// CSV with header a,b,d,c,re,im,abs.
std::string kl_csv(const std::vector<KlRow>& rows);

Json lattice_json(const Json& inputs, double value, double main_term);

/// CSV with header p,re,im,abs,trivial,ratio.
std::string twist_csv(const TwistRun& run);
Json twist_summary_json(const TwistRun& run, const ExponentFit& fit);

/// CSV n,tau with exact integers; JSON carries tau values as strings.
std::string tau_csv(const CuspFormCoeffs& coeffs, std::uint64_t count);
Json tau_json(const CuspFormCoeffs& coeffs, std::uint64_t count);

}  // namespace tracefn
