// mlferns/dataset.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_DATASET_HPP
#define MLFERNS_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mlferns {

// A label set is a sorted, duplicate-free list of class-catalog indices.
using LabelSet = std::vector<std::uint32_t>;

// Multi-label training data with row-major flat feature storage.
class TrainingSet {
 public:
  TrainingSet(std::vector<std::string> classes, std::size_t feature_count);

  // Appends one object; labels must be non-empty and within the catalog.
  void add(std::span<const double> features, LabelSet labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t feature_count() const { return feature_count_; }
  std::size_t class_count() const { return classes_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }

  std::span<const double> features_of(std::size_t i) const {
    return {features_.data() + i * feature_count_, feature_count_};
  }
  const LabelSet& labels_of(std::size_t i) const { return labels_[i]; }
  bool has_label(std::size_t i, std::uint32_t cls) const;

  // Observed [min, max] per feature over all objects; throws on empty set
  // or non-finite values.
  struct FeatureRange {
    double min;
    double max;
  };
  std::vector<FeatureRange> feature_ranges() const;

 private:
  std::vector<std::string> classes_;
  std::size_t feature_count_;
  std::vector<double> features_;
  std::vector<LabelSet> labels_;
};

}  // namespace mlferns

#endif  // MLFERNS_DATASET_HPP
