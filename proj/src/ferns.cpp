// src/ferns.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/ferns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mlferns/kernels.hpp"
#include "mlferns/threading.hpp"

namespace mlferns {

namespace {

// log((1+a)/(C+b)) + log((C+n)/(1+c)); all counts multiplicity-weighted.
double score_value(double a, double b, double c, double n, double class_count) {
  return std::log((1.0 + a) / (class_count + b)) + std::log((class_count + n) / (1.0 + c));
}

// log((1+a)/(1+b-a)) + log((1+n-c)/(1+c))
double quotient_value(double a, double b, double c, double n) {
  return std::log((1.0 + a) / (1.0 + b - a)) + std::log((1.0 + n - c) / (1.0 + c));
}

std::size_t leaf_offset(const SplitCriterion* criteria, std::size_t depth, const double* x) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    off |= static_cast<std::size_t>(x[criteria[i].feature_index] > criteria[i].threshold) << i;
  }
  return off;
}

enum class TableKind { Scores, Quotients };

struct TallyScratch {
  std::vector<std::uint64_t> leaf_mass;        // per leaf
  std::vector<std::uint64_t> class_leaf_mass;  // per class x leaf
  std::vector<std::uint64_t> class_mass;       // per class
};

Fern train_fern(Rng rng, const TrainingSet& training,
                const std::vector<TrainingSet::FeatureRange>& ranges, std::uint32_t depth,
                TableKind kind, TallyScratch& scratch) {
  const std::size_t n = training.size();
  const std::size_t class_count = training.class_count();
  const std::size_t leaves = std::size_t{1} << depth;

  Fern fern;
  const Bag bag = make_bag(rng, n);
  fern.criteria = build_fern_structure(rng, ranges, depth);

  scratch.leaf_mass.assign(leaves, 0);
  scratch.class_leaf_mass.assign(class_count * leaves, 0);
  scratch.class_mass.assign(class_count, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t m = bag[i];
    if (m == 0) continue;
    const std::size_t off = leaf_offset(fern.criteria.data(), depth, training.features_of(i).data());
    scratch.leaf_mass[off] += m;
    for (const std::uint32_t y : training.labels_of(i)) {
      scratch.class_leaf_mass[static_cast<std::size_t>(y) * leaves + off] += m;
      scratch.class_mass[y] += m;
    }
  }

  fern.leaf_values.resize(leaves * class_count);
  const double nn = static_cast<double>(n);
  for (std::size_t y = 0; y < class_count; ++y) {
    const double c = static_cast<double>(scratch.class_mass[y]);
    const std::uint64_t* a_row = scratch.class_leaf_mass.data() + y * leaves;
    for (std::size_t off = 0; off < leaves; ++off) {
      const double a = static_cast<double>(a_row[off]);
      const double b = static_cast<double>(scratch.leaf_mass[off]);
      fern.leaf_values[off * class_count + y] =
          kind == TableKind::Scores ? score_value(a, b, c, nn, static_cast<double>(class_count))
                                    : quotient_value(a, b, c, nn);
    }
  }
  return fern;
}

FernsModel train_ensemble(const TrainingSet& training, std::uint32_t fern_count,
                          std::uint32_t depth, std::uint64_t seed, TableKind kind,
                          unsigned threads) {
  if (fern_count == 0) throw std::invalid_argument("fern count must be >= 1");
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");
  const auto ranges = training.feature_ranges();

  FernsModel model;
  model.mode = ModelMode::MultiLabel;
  model.fern_count = fern_count;
  model.depth = depth;
  model.feature_count = static_cast<std::uint32_t>(training.feature_count());
  model.seed = seed;
  model.classes = training.classes();
  model.ferns.resize(fern_count);

  parallel_for_ranges(fern_count, threads, [&](std::size_t begin, std::size_t end) {
    TallyScratch scratch;
    for (std::size_t k = begin; k < end; ++k) {
      model.ferns[k] =
          train_fern(Rng(derive_seed(seed, k)), training, ranges, depth, kind, scratch);
    }
  });
  return model;
}

void check_vector(const FernsModel& model, std::span<const double> x) {
  if (x.size() != model.feature_count) {
    throw std::invalid_argument("feature vector length mismatch");
  }
}

}  // namespace

std::vector<SplitCriterion> build_fern_structure(Rng& rng, const TrainingSet& training,
                                                 std::uint32_t depth) {
  return build_fern_structure(rng, training.feature_ranges(), depth);
}

std::vector<SplitCriterion> build_fern_structure(
    Rng& rng, const std::vector<TrainingSet::FeatureRange>& ranges, std::uint32_t depth) {
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");
  if (ranges.empty()) throw std::invalid_argument("empty training set");
  std::vector<SplitCriterion> criteria(depth);
  for (auto& crit : criteria) {
    crit.feature_index = static_cast<std::uint32_t>(rng.below(ranges.size()));
    const auto& r = ranges[crit.feature_index];
    crit.threshold = rng.uniform(r.min, r.max);
  }
  return criteria;
}

Bag make_bag(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("empty training set");
  Bag bag(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++bag[rng.below(n)];
  return bag;
}

std::uint32_t leaf_index(std::span<const SplitCriterion> criteria, std::span<const double> x) {
  for (const auto& crit : criteria) {
    if (crit.feature_index >= x.size()) {
      throw std::invalid_argument("feature vector length mismatch");
    }
  }
  return 1u + static_cast<std::uint32_t>(leaf_offset(criteria.data(), criteria.size(), x.data()));
}

namespace {

// Shared tally for the two per-class table routines.
struct ClassTally {
  std::vector<std::uint64_t> leaf_mass;
  std::vector<std::uint64_t> class_leaf_mass;
  std::uint64_t class_mass = 0;
  std::uint64_t total = 0;
};

ClassTally tally_class(std::span<const SplitCriterion> criteria, const Bag& bag,
                       const TrainingSet& training, std::uint32_t cls) {
  if (bag.size() != training.size()) {
    throw std::invalid_argument("bag size does not match training set");
  }
  if (cls >= training.class_count()) throw std::invalid_argument("class index out of range");
  const std::size_t leaves = std::size_t{1} << criteria.size();
  ClassTally t;
  t.leaf_mass.assign(leaves, 0);
  t.class_leaf_mass.assign(leaves, 0);
  for (std::size_t i = 0; i < bag.size(); ++i) {
    const std::uint64_t m = bag[i];
    if (m == 0) continue;
    t.total += m;
    const std::size_t off =
        leaf_offset(criteria.data(), criteria.size(), training.features_of(i).data());
    t.leaf_mass[off] += m;
    if (training.has_label(i, cls)) {
      t.class_leaf_mass[off] += m;
      t.class_mass += m;
    }
  }
  return t;
}

}  // namespace

std::vector<double> compute_scores(std::span<const SplitCriterion> criteria, const Bag& bag,
                                   const TrainingSet& training, std::uint32_t cls) {
  const ClassTally t = tally_class(criteria, bag, training, cls);
  const std::size_t leaves = t.leaf_mass.size();
  const double class_count = static_cast<double>(training.class_count());
  std::vector<double> values(leaves);
  for (std::size_t off = 0; off < leaves; ++off) {
    values[off] = score_value(static_cast<double>(t.class_leaf_mass[off]),
                              static_cast<double>(t.leaf_mass[off]),
                              static_cast<double>(t.class_mass),
                              static_cast<double>(t.total), class_count);
  }
  return values;
}

std::vector<double> compute_score_quotients(std::span<const SplitCriterion> criteria,
                                            const Bag& bag, const TrainingSet& training,
                                            std::uint32_t cls) {
  const ClassTally t = tally_class(criteria, bag, training, cls);
  const std::size_t leaves = t.leaf_mass.size();
  std::vector<double> values(leaves);
  for (std::size_t off = 0; off < leaves; ++off) {
    values[off] = quotient_value(static_cast<double>(t.class_leaf_mass[off]),
                                 static_cast<double>(t.leaf_mass[off]),
                                 static_cast<double>(t.class_mass),
                                 static_cast<double>(t.total));
  }
  return values;
}

FernsModel train_multilabel(const TrainingSet& training, std::uint32_t fern_count,
                            std::uint32_t depth, std::uint64_t seed, unsigned threads) {
  return train_ensemble(training, fern_count, depth, seed, TableKind::Quotients, threads);
}

FernsModel train_single_label(const TrainingSet& training, std::uint32_t fern_count,
                              std::uint32_t depth, std::uint64_t seed, unsigned threads) {
  return train_ensemble(training, fern_count, depth, seed, TableKind::Scores, threads);
}

FernsModel train_battery(const TrainingSet& training, std::uint32_t fern_count,
                         std::uint32_t depth, std::uint64_t seed, std::uint32_t per_class_cap,
                         unsigned threads) {
  if (fern_count == 0) throw std::invalid_argument("fern count must be >= 1");
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");
  if (per_class_cap == 0) throw std::invalid_argument("per-class cap must be >= 1");
  if (training.size() == 0) throw std::invalid_argument("empty training set");

  const std::size_t class_count = training.class_count();

  FernsModel model;
  model.mode = ModelMode::Battery;
  model.fern_count = fern_count;
  model.depth = depth;
  model.feature_count = static_cast<std::uint32_t>(training.feature_count());
  model.seed = seed;
  model.classes = training.classes();
  model.ferns.resize(class_count * fern_count);

  for (std::uint32_t cls = 0; cls < class_count; ++cls) {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < training.size(); ++i) {
      (training.has_label(i, cls) ? positives : negatives).push_back(i);
    }
    if (positives.empty() || negatives.empty()) {
      throw std::runtime_error("battery training: class '" + model.classes[cls] + "' has no " +
                               (positives.empty() ? "positive" : "negative") + " examples");
    }

    const std::uint64_t class_seed = derive_seed(seed, cls);
    Rng class_rng(class_seed);
    const std::size_t take =
        std::min({static_cast<std::size_t>(per_class_cap), positives.size(), negatives.size()});
    // Partial Fisher-Yates; draw order: positives first, then negatives.
    const auto sample = [&](std::vector<std::size_t>& pool) {
      for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + class_rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
      }
      pool.resize(take);
    };
    sample(positives);
    sample(negatives);

    TrainingSet binary({model.classes[cls], "not-" + model.classes[cls]},
                       training.feature_count());
    for (const std::size_t i : positives) binary.add(training.features_of(i), {0});
    for (const std::size_t i : negatives) binary.add(training.features_of(i), {1});
    const auto ranges = binary.feature_ranges();

    Fern* group = model.ferns.data() + static_cast<std::size_t>(cls) * fern_count;
    parallel_for_ranges(fern_count, threads, [&](std::size_t begin, std::size_t end) {
      TallyScratch scratch;
      for (std::size_t k = begin; k < end; ++k) {
        group[k] = train_fern(Rng(derive_seed(class_seed, k)), binary, ranges, depth,
                              TableKind::Scores, scratch);
      }
    });
  }
  return model;
}

void multilabel_sums(const FernsModel& model, std::span<const double> x, std::span<double> sums) {
  check_vector(model, x);
  if (model.mode != ModelMode::MultiLabel) {
    throw std::invalid_argument("model is not in multi-label mode");
  }
  const std::size_t class_count = model.class_count();
  if (sums.size() != class_count) throw std::invalid_argument("sums span has wrong length");
  std::fill(sums.begin(), sums.end(), 0.0);
  for (const Fern& fern : model.ferns) {
    const std::size_t off = leaf_offset(fern.criteria.data(), model.depth, x.data());
    kernels::accumulate(sums.data(), fern.leaf_values.data() + off * class_count, class_count);
  }
}

LabelSet predict_multilabel(const FernsModel& model, std::span<const double> x) {
  std::vector<double> sums(model.class_count());
  multilabel_sums(model, x, sums);
  LabelSet out;
  for (std::uint32_t y = 0; y < sums.size(); ++y) {
    if (sums[y] > 0.0) out.push_back(y);
  }
  return out;
}

std::uint32_t predict_single(const FernsModel& model, std::span<const double> x) {
  if (model.mode == ModelMode::Battery) {
    throw std::invalid_argument("predict_single requires a score-table ensemble");
  }
  std::vector<double> sums(model.class_count());
  multilabel_sums(model, x, sums);
  std::uint32_t best = 0;
  for (std::uint32_t y = 1; y < sums.size(); ++y) {
    if (sums[y] > sums[best]) best = y;  // ties keep the lowest index
  }
  return best;
}

void battery_margins(const FernsModel& model, std::span<const double> x,
                     std::span<double> margins) {
  check_vector(model, x);
  if (model.mode != ModelMode::Battery) {
    throw std::invalid_argument("model is not in battery mode");
  }
  const std::size_t class_count = model.class_count();
  if (margins.size() != class_count) throw std::invalid_argument("margins span has wrong length");
  for (std::size_t cls = 0; cls < class_count; ++cls) {
    double margin = 0.0;
    for (const Fern& fern : model.battery_ferns(cls)) {
      const std::size_t off = leaf_offset(fern.criteria.data(), model.depth, x.data());
      const double* row = fern.leaf_values.data() + off * 2;
      margin += row[0] - row[1];
    }
    margins[cls] = margin;
  }
}

LabelSet predict_battery(const FernsModel& model, std::span<const double> x) {
  std::vector<double> margins(model.class_count());
  battery_margins(model, x, margins);
  LabelSet out;
  for (std::uint32_t y = 0; y < margins.size(); ++y) {
    if (margins[y] > 0.0) out.push_back(y);
  }
  return out;
}

LabelSet predict(const FernsModel& model, std::span<const double> x) {
  return model.mode == ModelMode::Battery ? predict_battery(model, x)
                                          : predict_multilabel(model, x);
}

}  // namespace mlferns
