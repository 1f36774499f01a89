#include "pairproj/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "pairproj/error.hpp"

namespace pairproj {
namespace io {

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, "bad number '" + text + "'");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
    ++pos;
  }
  if (pos != text.size()) {
    throw Error(ErrorKind::parse,
                "trailing characters at position " + std::to_string(pos) +
                    " in number '" + text + "'");
  }
  return v;
}

std::string format_complex(const Complex& value) {
  std::string re = format_double(value.real());
  std::string im = format_double(value.imag());
  std::string out = re;
  if (!im.empty() && im[0] != '-') out += '+';
  out += im;
  out += 'j';
  return out;
}

Complex parse_complex(const std::string& text) {
  if (text.empty()) {
    throw Error(ErrorKind::parse, "empty complex literal");
  }
  if (text.back() != 'j') {
    throw Error(ErrorKind::parse,
                "complex literal '" + text + "' must end in 'j' (position " +
                    std::to_string(text.size()) + ")");
  }
  std::string body = text.substr(0, text.size() - 1);
  // Split at the sign of the imaginary part: the last '+'/'-' that is not
  // part of an exponent and not the leading sign.
  size_t split = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    throw Error(ErrorKind::parse,
                "complex literal '" + text +
                    "' has no imaginary part separator");
  }
  double re = parse_double(body.substr(0, split));
  double im = parse_double(body.substr(split));
  return Complex(re, im);
}

std::string format_amplitudes(const Vector4c& amps) {
  std::string out;
  for (int i = 0; i < 4; ++i) {
    if (i) out += ',';
    out += format_complex(amps(i));
  }
  return out;
}

Vector4c parse_amplitudes(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    parts.push_back(token);
  }
  if (parts.size() != 4) {
    throw Error(ErrorKind::parse,
                "expected 4 comma-separated amplitudes, got " +
                    std::to_string(parts.size()));
  }
  Vector4c out;
  for (int i = 0; i < 4; ++i) {
    try {
      out(i) = parse_complex(parts[i]);
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, "amplitude " + std::to_string(i + 1) +
                                        ": " + e.what());
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(line);
  while (std::getline(in, token, ',')) {
    out.push_back(token);
  }
  return out;
}

const std::string kCountsHeader = "label,counts,duration_s,rate_scale";

}  // namespace

std::string emit_counts_table(const std::vector<tomo::CountRecord>& records) {
  std::string out = kCountsHeader + "\n";
  for (const auto& rec : records) {
    out += rec.label;
    out += ',';
    out += format_double(rec.counts);
    out += ',';
    out += format_double(rec.duration);
    out += ',';
    out += format_double(rec.rate_scale);
    out += '\n';
  }
  return out;
}

std::vector<tomo::CountRecord> parse_counts_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::schema, "empty counts file");
  }
  if (line != kCountsHeader) {
    throw Error(ErrorKind::schema,
                "counts file must start with header '" + kCountsHeader + "'");
  }
  std::vector<tomo::CountRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw Error(ErrorKind::schema,
                  "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    tomo::CountRecord rec;
    rec.label = fields[0];
    rec.counts = parse_double(fields[1]);
    rec.duration = parse_double(fields[2]);
    rec.rate_scale = parse_double(fields[3]);
    if (!(rec.counts >= 0.0) || !std::isfinite(rec.counts) ||
        !(rec.duration > 0.0) || !(rec.rate_scale > 0.0) ||
        !std::isfinite(rec.rate_scale)) {
      throw Error(ErrorKind::schema,
                  "line " + std::to_string(line_no) +
                      ": counts must be finite and >= 0, duration and "
                      "rate_scale finite and > 0");
    }
    out.push_back(rec);
  }
  return out;
}

std::vector<tomo::CountRecord> align_probe_counts(
    const std::vector<tomo::CountRecord>& records,
    const std::vector<tomo::Probe>& probes) {
  std::map<std::string, tomo::CountRecord> by_label;
  for (const auto& rec : records) {
    if (by_label.count(rec.label)) {
      throw Error(ErrorKind::schema, "duplicate label '" + rec.label + "'");
    }
    by_label[rec.label] = rec;
  }
  std::vector<tomo::CountRecord> out;
  std::string missing;
  for (const auto& probe : probes) {
    auto it = by_label.find(probe.label);
    if (it == by_label.end()) {
      missing += missing.empty() ? probe.label : ", " + probe.label;
    } else {
      out.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::schema, "counts file is missing labels: " + missing);
  }
  return out;
}

std::string emit_hardy_table(const hardy::HardyCounts& counts,
                             double rate_scale) {
  std::vector<tomo::CountRecord> records;
  const auto& labels = hardy::hardy_pair_labels();
  for (int i = 0; i < 6; ++i) {
    tomo::CountRecord rec;
    rec.label = labels[i];
    rec.counts = counts[i];
    rec.duration = counts.duration;
    rec.rate_scale = rate_scale > 0.0 ? rate_scale : 1.0;
    records.push_back(rec);
  }
  return emit_counts_table(records);
}

hardy::HardyCounts parse_hardy_table(const std::string& text) {
  std::vector<tomo::CountRecord> records = parse_counts_table(text);
  std::map<std::string, tomo::CountRecord> by_label;
  for (const auto& rec : records) {
    by_label[rec.label] = rec;
  }
  hardy::HardyCounts out;
  const auto& labels = hardy::hardy_pair_labels();
  std::string missing;
  for (int i = 0; i < 6; ++i) {
    auto it = by_label.find(labels[i]);
    if (it == by_label.end()) {
      missing += missing.empty() ? labels[i] : ", " + labels[i];
      continue;
    }
    out.counts[i] = it->second.counts;
    out.duration = it->second.duration;
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::schema,
                "Hardy counts file is missing rows: " + missing);
  }
  return out;
}

std::string emit_sweep_table(const std::vector<tomo::SweepPoint>& points) {
  std::string out =
      "t_h,gamma,eta,elem_hvhv,elem_vhvh,elem_hvvh_re,elem_hvvh_im,"
      "neg_abs_hvvh,max_offsector,fidelity,concurrence,converged\n";
  for (const auto& p : points) {
    out += format_double(p.big_t_h);
    out += ',' + format_double(p.gamma);
    out += ',' + format_double(p.eta);
    out += ',' + format_double(p.elem_hvhv);
    out += ',' + format_double(p.elem_vhvh);
    out += ',' + format_double(p.elem_hvvh.real());
    out += ',' + format_double(p.elem_hvvh.imag());
    out += ',' + format_double(p.neg_abs_hvvh);
    out += ',' + format_double(p.max_offsector);
    out += ',' + format_double(p.fidelity);
    out += ',' + format_double(p.concurrence);
    out += ',' + std::string(p.converged ? "1" : "0");
    out += '\n';
  }
  return out;
}

std::string emit_delay_table(const expsim::DelayScan& scan, double rate_scale,
                             double dark_rate) {
  bool rates = rate_scale > 0.0;
  std::string out = rates ? "delay,rate\n" : "delay,probability\n";
  for (size_t i = 0; i < scan.delays.size(); ++i) {
    double y = scan.probabilities[i];
    if (rates) y = rate_scale * y + dark_rate;
    out += format_double(scan.delays[i]);
    out += ',' + format_double(y);
    out += '\n';
  }
  return out;
}

Table parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::schema, "empty table");
  }
  Table table;
  table.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != table.header.size()) {
      throw Error(ErrorKind::schema, "ragged table row '" + line + "'");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      row.push_back(parse_double(f));
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace io
}  // namespace pairproj
