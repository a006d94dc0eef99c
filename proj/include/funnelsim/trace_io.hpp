#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "funnelsim/simulate.hpp"

namespace funnelsim {

/// printf("%.17g"): 17 significant digits, "." decimal separator.
std::string format_number(double value);

/// Header t,y_1..,yref_1..,u_1..,w_1..,e0norm..,k0..,rad0.. then one row per record.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

/// Flat key=value lines with the run summary and the verification verdict.
void write_report(std::ostream& out, const std::string& name, const RunReport& report,
                  const VerificationVerdict& verdict, const std::vector<std::string>& notes = {});

/// Two stacked panels: |e| against the funnel radius, and the input u.
void write_svg(std::ostream& out, const std::vector<TraceRecord>& trace, const std::string& title);

}  // namespace funnelsim
