// src/dataset.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace mlferns {

TrainingSet::TrainingSet(std::vector<std::string> classes, std::size_t feature_count)
    : classes_(std::move(classes)), feature_count_(feature_count) {
  std::set<std::string> seen(classes_.begin(), classes_.end());
  if (seen.size() != classes_.size()) {
    throw std::invalid_argument("class catalog contains duplicates");
  }
}

void TrainingSet::add(std::span<const double> features, LabelSet labels) {
  if (features.size() != feature_count_) {
    throw std::invalid_argument("feature vector length mismatch");
  }
  if (labels.empty()) {
    throw std::invalid_argument("label set must be non-empty");
  }
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw std::invalid_argument("label set contains duplicates");
  }
  if (labels.back() >= classes_.size()) {
    throw std::invalid_argument("label outside class catalog");
  }
  features_.insert(features_.end(), features.begin(), features.end());
  labels_.push_back(std::move(labels));
}

bool TrainingSet::has_label(std::size_t i, std::uint32_t cls) const {
  const LabelSet& l = labels_[i];
  return std::binary_search(l.begin(), l.end(), cls);
}

std::vector<TrainingSet::FeatureRange> TrainingSet::feature_ranges() const {
  if (size() == 0) throw std::invalid_argument("empty training set");
  std::vector<FeatureRange> ranges(feature_count_,
                                   {std::numeric_limits<double>::infinity(),
                                    -std::numeric_limits<double>::infinity()});
  for (std::size_t i = 0; i < size(); ++i) {
    const double* row = features_.data() + i * feature_count_;
    for (std::size_t f = 0; f < feature_count_; ++f) {
      const double v = row[f];
      if (!std::isfinite(v)) {
        throw std::invalid_argument("non-finite feature value in training set");
      }
      ranges[f].min = std::min(ranges[f].min, v);
      ranges[f].max = std::max(ranges[f].max, v);
    }
  }
  return ranges;
}

}  // namespace mlferns
