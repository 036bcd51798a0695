#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mlbase/dataset.hpp"
#include "mlbase/error.hpp"
#include "mlbase/label_set.hpp"

// The constant-labelset baseline: rank labels by training frequency, take
// the label cardinality of the training set rounded to the nearest integer
// as the prediction size sigma, and predict the top-sigma labels for every
// instance. Simple as it is, it sets a meaningful floor — a proposed
// method that scores at or below it is not extracting any per-instance
// information from the features.

namespace mlbase {

struct general_b_model {
  std::string dataset;
  std::vector<std::size_t> ranked_labels;  // all q labels, most frequent first
  std::size_t sigma = 0;                   // how many of them get predicted
  label_set prediction{0};                 // the constant labelset, |prediction| == sigma
  std::vector<std::string> label_names;

  friend bool operator==(const general_b_model&, const general_b_model&) = default;
};

/// sigma = label cardinality rounded half away from zero, clamped to
/// [1, q] so the baseline always predicts at least one label.
inline std::size_t compute_sigma(const multi_label_dataset& data) {
  const std::size_t q = data.label_count();
  if (q == 0) throw argument_error("compute_sigma: dataset has no labels");
  const long long rounded = std::llround(cardinality(data));
  if (rounded < 1) return 1;
  return std::min<std::size_t>(static_cast<std::size_t>(rounded), q);
}

/// Orders all label indices by descending frequency. A frequency tie is
/// broken in favour of the candidate whose summed co-occurrence with the
/// already-ranked labels is largest; a remaining tie falls back to
/// ascending label index, which keeps the ordering deterministic.
inline std::vector<std::size_t> rank_labels(const multi_label_dataset& data) {
  const std::vector<std::size_t> frequencies = label_frequencies(data);
  const cooccurrence_matrix pairs = cooccurrence(data);
  const std::size_t q = frequencies.size();
  if (q == 0) throw argument_error("rank_labels: dataset has no labels");

  std::vector<std::size_t> ranked;
  ranked.reserve(q);
  std::vector<bool> placed(q, false);
  while (ranked.size() < q) {
    std::size_t best_frequency = 0;
    bool found = false;
    for (std::size_t label = 0; label < q; ++label) {
      if (!placed[label] && (!found || frequencies[label] > best_frequency)) {
        best_frequency = frequencies[label];
        found = true;
      }
    }
    std::size_t chosen = q;
    std::size_t chosen_affinity = 0;
    for (std::size_t label = 0; label < q; ++label) {
      if (placed[label] || frequencies[label] != best_frequency) continue;
      std::size_t affinity = 0;
      for (const std::size_t earlier : ranked) affinity += pairs.at(label, earlier);
      if (chosen == q || affinity > chosen_affinity) {
        chosen = label;
        chosen_affinity = affinity;
      }
    }
    placed[chosen] = true;
    ranked.push_back(chosen);
  }
  return ranked;
}

inline general_b_model fit_general_b(const multi_label_dataset& data) {
  if (data.instances.empty()) throw argument_error("fit_general_b: empty dataset");
  general_b_model model;
  model.dataset = data.name;
  model.label_names = data.label_names;
  model.ranked_labels = rank_labels(data);
  model.sigma = compute_sigma(data);
  model.prediction = label_set(data.label_count());
  for (std::size_t position = 0; position < model.sigma; ++position) {
    model.prediction.insert(model.ranked_labels[position]);
  }
  return model;
}

/// The model ignores the features entirely; the instance argument exists
/// to keep the call shape of a real classifier and to validate that the
/// instance lives in the label space the model was fitted on.
inline label_set predict(const general_b_model& model, const instance& example) {
  if (example.labels.label_space() != model.prediction.label_space()) {
    throw argument_error("predict: instance label space does not match the model");
  }
  return model.prediction;
}

}  // namespace mlbase
