// mlferns/csv.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_CSV_HPP
#define MLFERNS_CSV_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlferns/eval.hpp"

namespace mlferns {

// One row of a feature CSV: the 91 canonical feature columns, start_time,
// and (in files produced by the synthesizer) a labels column with
// semicolon-separated instrument names.
struct FeatureRecord {
  std::vector<double> features;
  double start_time = 0.0;
  std::vector<std::string> labels;
};

void write_feature_csv(const std::string& path, std::span<const FeatureRecord> rows,
                       bool with_labels);
// has_labels reports whether the file carried a labels column.
std::vector<FeatureRecord> read_feature_csv(const std::string& path, bool* has_labels = nullptr);

// Frame-level prediction dump: start_time, rms, labels.
struct FrameRecord {
  double start_time = 0.0;
  double rms = 0.0;
  std::vector<std::string> labels;
};

void write_frame_csv(const std::string& path, std::span<const FrameRecord> rows);
std::vector<FrameRecord> read_frame_csv(const std::string& path);

// Time-segment annotations: start_time, end_time, labels.
struct SegmentRecord {
  double start = 0.0;
  double end = 0.0;
  std::vector<std::string> labels;
};

void write_segments_csv(const std::string& path, std::span<const SegmentRecord> rows);
std::vector<SegmentRecord> read_segments_csv(const std::string& path);

// Text table (one row per instrument plus overall) followed by a
// machine-readable key=value block.
void write_report(std::ostream& out, const EvalReport& report);
void write_report(const std::string& path, const EvalReport& report);

}  // namespace mlferns

#endif  // MLFERNS_CSV_HPP
