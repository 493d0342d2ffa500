// tests/oracles.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Independent reference implementations used only by tests. These
// deliberately avoid the library's computation paths: the DFT is the naive
// O(N^2) sum and the fern tables are recomputed by enumerating the bag
// multiset leaf by leaf.

#ifndef MLFERNS_TESTS_ORACLES_HPP
#define MLFERNS_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "mlferns/dataset.hpp"
#include "mlferns/ferns.hpp"
#include "mlferns/rng.hpp"

namespace oracles {

inline std::vector<std::complex<double>> naive_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t bins = n / 2 + 1;
  std::vector<std::complex<double>> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(t) /
                           static_cast<double>(n);
      re += x[t] * std::cos(angle);
      im += x[t] * std::sin(angle);
    }
    out[k] = {re, im};
  }
  return out;
}

// 1-based leaf number straight from the indicator-bit formula.
inline std::uint32_t leaf_number(std::span<const mlferns::SplitCriterion> criteria,
                                 std::span<const double> x) {
  std::uint32_t leaf = 1;
  for (std::size_t i = 1; i <= criteria.size(); ++i) {
    const auto& c = criteria[i - 1];
    const std::uint32_t sigma = x[c.feature_index] > c.threshold ? 1 : 0;
    leaf += (1u << (i - 1)) * sigma;
  }
  return leaf;
}

// Expands a bag into an explicit list of object indices.
inline std::vector<std::size_t> bag_objects(const mlferns::Bag& bag) {
  std::vector<std::size_t> objects;
  for (std::size_t i = 0; i < bag.size(); ++i) {
    for (std::uint32_t m = 0; m < bag[i]; ++m) objects.push_back(i);
  }
  return objects;
}

// Brute-force per-leaf table column for class y; `quotients` selects the
// normalised variant.
inline std::vector<double> fern_table_column(std::span<const mlferns::SplitCriterion> criteria,
                                             const mlferns::Bag& bag,
                                             const mlferns::TrainingSet& training,
                                             std::uint32_t cls, bool quotients) {
  const auto objects = bag_objects(bag);
  const std::size_t leaves = std::size_t{1} << criteria.size();
  const double n = static_cast<double>(objects.size());
  const double class_count = static_cast<double>(training.class_count());

  double c = 0.0;
  for (const std::size_t i : objects) {
    if (training.has_label(i, cls)) c += 1.0;
  }

  std::vector<double> out(leaves);
  for (std::size_t leaf = 1; leaf <= leaves; ++leaf) {
    double a = 0.0;
    double b = 0.0;
    for (const std::size_t i : objects) {
      if (leaf_number(criteria, training.features_of(i)) == leaf) {
        b += 1.0;
        if (training.has_label(i, cls)) a += 1.0;
      }
    }
    out[leaf - 1] = quotients
                        ? std::log((1.0 + a) / (1.0 + b - a) * (1.0 + n - c) / (1.0 + c))
                        : std::log((1.0 + a) / (class_count + b) * (class_count + n) / (1.0 + c));
  }
  return out;
}

// Random multi-label dataset; every label set is non-empty.
inline mlferns::TrainingSet random_dataset(mlferns::Rng& rng, std::size_t objects,
                                           std::size_t features, std::size_t classes,
                                           bool multilabel) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back("class" + std::to_string(c));
  mlferns::TrainingSet set(names, features);
  std::vector<double> x(features);
  for (std::size_t i = 0; i < objects; ++i) {
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    mlferns::LabelSet labels;
    if (multilabel) {
      while (labels.empty()) {
        for (std::uint32_t c = 0; c < classes; ++c) {
          if (rng.uniform01() < 0.4) labels.push_back(c);
        }
      }
    } else {
      labels.push_back(static_cast<std::uint32_t>(rng.below(classes)));
    }
    set.add(x, labels);
  }
  return set;
}

}  // namespace oracles

#endif  // MLFERNS_TESTS_ORACLES_HPP
