// mlferns/ferns.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_FERNS_HPP
#define MLFERNS_FERNS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlferns/dataset.hpp"
#include "mlferns/rng.hpp"

namespace mlferns {

// One split: indicator(x) = 1 iff x[feature_index] > threshold.
struct SplitCriterion {
  std::uint32_t feature_index;
  double threshold;

  friend bool operator==(const SplitCriterion&, const SplitCriterion&) = default;
};

// A fern of depth D: D shared split criteria and a 2^D x columns table of
// per-leaf values (log scores or log score quotients, depending on the
// model mode). Rows are leaves, addressed 0-based by the indicator bits.
struct Fern {
  std::vector<SplitCriterion> criteria;
  std::vector<double> leaf_values;  // (1 << D) * columns, row-major

  std::span<const double> leaf_row(std::size_t leaf0, std::size_t columns) const {
    return {leaf_values.data() + leaf0 * columns, columns};
  }
};

enum class ModelMode : std::uint8_t { MultiLabel = 0, Battery = 1 };

// Ensemble model. MultiLabel mode holds K ferns whose tables have one
// column per class (score quotients). Battery mode holds C groups of K
// ferns, class-major, each with a two-column table for {class, not-class}
// (plain scores).
struct FernsModel {
  ModelMode mode = ModelMode::MultiLabel;
  std::uint32_t fern_count = 0;  // K
  std::uint32_t depth = 0;       // D
  std::uint32_t feature_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  std::vector<Fern> ferns;  // MultiLabel: K entries; Battery: C*K entries

  std::size_t class_count() const { return classes.size(); }
  std::size_t columns() const { return mode == ModelMode::Battery ? 2 : classes.size(); }
  std::size_t leaves() const { return std::size_t{1} << depth; }
  // Battery sub-ensemble of class c occupies ferns [c*K, (c+1)*K).
  std::span<const Fern> battery_ferns(std::size_t cls) const {
    return {ferns.data() + cls * fern_count, fern_count};
  }
};

// Bag: multiplicity per training object, total equals the set size.
using Bag = std::vector<std::uint32_t>;

// --- construction primitives ---------------------------------------------

// Draws D criteria: feature uniform over 0..F-1, threshold uniform over the
// observed [min, max] of that feature. Draw order per level: feature, then
// threshold.
std::vector<SplitCriterion> build_fern_structure(Rng& rng, const TrainingSet& training,
                                                 std::uint32_t depth);

// Variant with precomputed feature ranges (used by the trainers).
std::vector<SplitCriterion> build_fern_structure(
    Rng& rng, const std::vector<TrainingSet::FeatureRange>& ranges, std::uint32_t depth);

// n draws with replacement from {0..n-1}.
Bag make_bag(Rng& rng, std::size_t n);

// 1-based leaf number: 1 + sum over i of 2^i * [x[f_i] > t_i].
std::uint32_t leaf_index(std::span<const SplitCriterion> criteria, std::span<const double> x);

// Per-leaf log scores for class y (battery / single-label tables):
//   S = log((1+a)/(C+b)) + log((C+n)/(1+c))
// with a = bag mass of class-y objects in the leaf, b = bag mass in the
// leaf, c = bag mass of class-y objects, n = bag size, C = class count.
std::vector<double> compute_scores(std::span<const SplitCriterion> criteria, const Bag& bag,
                                   const TrainingSet& training, std::uint32_t cls);

// Per-leaf log score quotients for class y (multi-label tables):
//   Q = log((1+a)/(1+b-a)) + log((1+n-c)/(1+c))
std::vector<double> compute_score_quotients(std::span<const SplitCriterion> criteria,
                                            const Bag& bag, const TrainingSet& training,
                                            std::uint32_t cls);

// --- training --------------------------------------------------------------

// Multi-label model: K ferns, score-quotient tables over all classes.
// Fern k draws from substream k of `seed`; bag first, then criteria.
FernsModel train_multilabel(const TrainingSet& training, std::uint32_t ferns, std::uint32_t depth,
                            std::uint64_t seed, unsigned threads = 1);

// Classic single-label ensemble: same structure, Eq-style score tables;
// predict with predict_single. Not a serializable mode of its own.
FernsModel train_single_label(const TrainingSet& training, std::uint32_t ferns,
                              std::uint32_t depth, std::uint64_t seed, unsigned threads = 1);

// Binary-relevance battery: per class, a balanced subsample of at most
// per_class_cap positives plus the same number of negatives (shrunk to the
// smaller side when short), trained as a two-class score-table ensemble.
FernsModel train_battery(const TrainingSet& training, std::uint32_t ferns, std::uint32_t depth,
                         std::uint64_t seed, std::uint32_t per_class_cap = 3000,
                         unsigned threads = 1);

// --- prediction ------------------------------------------------------------

// Per-class quotient sums over the ensemble; sums.size() == class_count.
void multilabel_sums(const FernsModel& model, std::span<const double> x, std::span<double> sums);

// Classes with strictly positive quotient sum. May be empty.
LabelSet predict_multilabel(const FernsModel& model, std::span<const double> x);

// argmax over summed scores; ties broken by lowest catalog index.
std::uint32_t predict_single(const FernsModel& model, std::span<const double> x);

// Per-class margins sum_k [S_k(x,y) - S_k(x,not-y)]; margins.size() == C.
void battery_margins(const FernsModel& model, std::span<const double> x,
                     std::span<double> margins);

// Classes whose battery margin is strictly positive.
LabelSet predict_battery(const FernsModel& model, std::span<const double> x);

// Dispatches on model.mode (MultiLabel or Battery).
LabelSet predict(const FernsModel& model, std::span<const double> x);

}  // namespace mlferns

#endif  // MLFERNS_FERNS_HPP
