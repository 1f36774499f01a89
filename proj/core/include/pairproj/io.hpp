#pragma once

#include <string>
#include <vector>

#include "pairproj/expsim.hpp"
#include "pairproj/hardy.hpp"
#include "pairproj/tomography.hpp"
#include "pairproj/types.hpp"

namespace pairproj {
namespace io {

/// 17-significant-digit decimal form; round-trips doubles exactly.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Complex numbers as "re+imj" (e.g. "0.5-0.25j"), 17 significant digits.
std::string format_complex(const Complex& value);
/// Throws Error(parse) naming the bad position.
Complex parse_complex(const std::string& text);

/// Comma-separated amplitude quadruple (c_HH, c_HV, c_VH, c_VV).
std::string format_amplitudes(const Vector4c& amps);
Vector4c parse_amplitudes(const std::string& text);

// --- counts tables -------------------------------------------------------
// Schema: header "label,counts,duration_s,rate_scale", one row per probe.

std::string emit_counts_table(const std::vector<tomo::CountRecord>& records);
std::vector<tomo::CountRecord> parse_counts_table(const std::string& text);

/// Validates a 16-row probe counts file against the probe set order,
/// reordering rows if needed. Throws Error(schema) listing missing labels.
std::vector<tomo::CountRecord> align_probe_counts(
    const std::vector<tomo::CountRecord>& records,
    const std::vector<tomo::Probe>& probes);

/// Hardy counts use the same schema with the six analyzer-pair labels.
std::string emit_hardy_table(const hardy::HardyCounts& counts,
                             double rate_scale);
hardy::HardyCounts parse_hardy_table(const std::string& text);

// --- sweep and delay-scan tables ------------------------------------------

std::string emit_sweep_table(const std::vector<tomo::SweepPoint>& points);
std::string emit_delay_table(const expsim::DelayScan& scan,
                             double rate_scale = 0.0, double dark_rate = 0.0);

/// Generic delimited parse used by round-trip checks: header + rows of
/// doubles.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
Table parse_table(const std::string& text);

}  // namespace io
}  // namespace pairproj
