// src/csv.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mlferns {

namespace {

// 17 significant digits: parses back to the identical double.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, begin);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

double parse_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error("malformed number '" + s + "' in " + context);
  }
  return v;
}

std::vector<std::string> parse_labels(const std::string& field) {
  std::vector<std::string> labels;
  if (field.empty()) return labels;
  for (auto& name : split(field, ';')) {
    if (!name.empty()) labels.push_back(std::move(name));
  }
  return labels;
}

std::string join_labels(std::span<const std::string> labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += ';';
    out += labels[i];
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  return out;
}

std::string feature_header(bool with_labels) {
  std::string header;
  for (const auto& name : FeatureExtractor::feature_names()) {
    header += name;
    header += ',';
  }
  header += "start_time";
  if (with_labels) header += ",labels";
  return header;
}

}  // namespace

void write_feature_csv(const std::string& path, std::span<const FeatureRecord> rows,
                       bool with_labels) {
  std::ofstream out = open_out(path);
  out << feature_header(with_labels) << '\n';
  for (const auto& row : rows) {
    if (row.features.size() != kFeatureCount) {
      throw std::invalid_argument("feature row does not have 91 values");
    }
    for (const double v : row.features) out << fmt(v) << ',';
    out << fmt(row.start_time);
    if (with_labels) out << ',' << join_labels(row.labels);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<FeatureRecord> read_feature_csv(const std::string& path, bool* has_labels) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty feature CSV: " + path);
  bool labeled;
  if (line == feature_header(false)) {
    labeled = false;
  } else if (line == feature_header(true)) {
    labeled = true;
  } else {
    throw std::runtime_error("unrecognized feature CSV header in " + path);
  }
  if (has_labels != nullptr) *has_labels = labeled;

  const std::size_t expected = kFeatureCount + 1 + (labeled ? 1 : 0);
  std::vector<FeatureRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != expected) {
      throw std::runtime_error("wrong column count at " + path + ":" + std::to_string(line_no));
    }
    FeatureRecord row;
    row.features.resize(kFeatureCount);
    const std::string context = path + ":" + std::to_string(line_no);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      row.features[i] = parse_double(fields[i], context);
    }
    row.start_time = parse_double(fields[kFeatureCount], context);
    if (labeled) row.labels = parse_labels(fields[kFeatureCount + 1]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_frame_csv(const std::string& path, std::span<const FrameRecord> rows) {
  std::ofstream out = open_out(path);
  out << "start_time,rms,labels\n";
  for (const auto& row : rows) {
    out << fmt(row.start_time) << ',' << fmt(row.rms) << ',' << join_labels(row.labels) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<FrameRecord> read_frame_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "start_time,rms,labels") {
    throw std::runtime_error("unrecognized frame CSV header in " + path);
  }
  std::vector<FrameRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw std::runtime_error("wrong column count at " + path + ":" + std::to_string(line_no));
    }
    const std::string context = path + ":" + std::to_string(line_no);
    rows.push_back(FrameRecord{parse_double(fields[0], context), parse_double(fields[1], context),
                               parse_labels(fields[2])});
  }
  return rows;
}

void write_segments_csv(const std::string& path, std::span<const SegmentRecord> rows) {
  std::ofstream out = open_out(path);
  out << "start_time,end_time,labels\n";
  for (const auto& row : rows) {
    out << fmt(row.start) << ',' << fmt(row.end) << ',' << join_labels(row.labels) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<SegmentRecord> read_segments_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "start_time,end_time,labels") {
    throw std::runtime_error("unrecognized segment CSV header in " + path);
  }
  std::vector<SegmentRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw std::runtime_error("wrong column count at " + path + ":" + std::to_string(line_no));
    }
    const std::string context = path + ":" + std::to_string(line_no);
    rows.push_back(SegmentRecord{parse_double(fields[0], context),
                                 parse_double(fields[1], context), parse_labels(fields[2])});
  }
  return rows;
}

void write_report(std::ostream& out, const EvalReport& report) {
  out << std::left << std::setw(20) << "instrument" << std::right << std::setw(11) << "precision"
      << std::setw(11) << "recall" << std::setw(11) << "f_score" << std::setw(14) << "tp_mass"
      << std::setw(14) << "pred_mass" << std::setw(14) << "annot_mass"
      << "  flags\n";
  const auto row = [&](const std::string& name, double p, double r, double f, double tp,
                       double pm, double am, const std::string& flags) {
    out << std::left << std::setw(20) << name << std::right << std::fixed
        << std::setprecision(4) << std::setw(11) << p << std::setw(11) << r << std::setw(11)
        << f << std::setprecision(3) << std::setw(14) << tp << std::setw(14) << pm
        << std::setw(14) << am << "  " << flags << '\n';
    out.unsetf(std::ios::fixed);
  };
  for (const auto& s : report.per_instrument) {
    std::string flags;
    if (s.zero_predicted) flags += "never-predicted ";
    if (s.zero_annotated) flags += "never-annotated";
    row(s.name, s.precision, s.recall, s.f_score, s.tp_mass, s.predicted_mass, s.annotated_mass,
        flags);
  }
  double tp = 0.0;
  double pm = 0.0;
  double am = 0.0;
  for (const auto& s : report.per_instrument) {
    tp += s.tp_mass;
    pm += s.predicted_mass;
    am += s.annotated_mass;
  }
  row("overall", report.precision, report.recall, report.f_score, tp, pm, am, "");

  out << '\n';
  for (const auto& s : report.per_instrument) {
    out << "precision." << s.name << '=' << s.precision << '\n';
    out << "recall." << s.name << '=' << s.recall << '\n';
    out << "f_score." << s.name << '=' << s.f_score << '\n';
  }
  out << "precision.overall=" << report.precision << '\n';
  out << "recall.overall=" << report.recall << '\n';
  out << "f_score.overall=" << report.f_score << '\n';
}

void write_report(const std::string& path, const EvalReport& report) {
  std::ofstream out = open_out(path);
  write_report(out, report);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mlferns
