#pragma once

// Shared fixture builders for the test suite.

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mlbase/mlbase.hpp"
#include "oracle.hpp"

namespace test_support {

/// A featureless dataset over q labels; label names are L1..Lq.
inline mlbase::multi_label_dataset make_dataset(
    std::size_t q, const std::vector<std::vector<std::size_t>>& labelsets,
    std::string name = "synthetic") {
  mlbase::multi_label_dataset data;
  data.name = std::move(name);
  for (std::size_t i = 0; i < q; ++i) data.label_names.push_back("L" + std::to_string(i + 1));
  for (const std::vector<std::size_t>& members : labelsets) {
    mlbase::instance inst;
    inst.labels = mlbase::label_set(q);
    for (const std::size_t index : members) inst.labels.insert(index);
    data.instances.push_back(std::move(inst));
  }
  return data;
}

inline mlbase::label_set make_set(std::size_t q, const std::vector<std::size_t>& members) {
  mlbase::label_set set(q);
  for (const std::size_t index : members) set.insert(index);
  return set;
}

/// Builds (truth, predicted) pairs from index lists.
inline std::vector<mlbase::bipartition_pair> make_pairs(
    std::size_t q,
    const std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>& pairs) {
  std::vector<mlbase::bipartition_pair> out;
  out.reserve(pairs.size());
  for (const auto& [truth, predicted] : pairs) {
    out.push_back({make_set(q, truth), make_set(q, predicted)});
  }
  return out;
}

inline std::vector<oracle::pair_sets> to_oracle(const std::vector<mlbase::bipartition_pair>& pairs) {
  std::vector<oracle::pair_sets> out;
  out.reserve(pairs.size());
  for (const mlbase::bipartition_pair& pair : pairs) {
    oracle::pair_sets sets;
    for (const std::size_t index : pair.truth.members()) sets.truth.insert(index);
    for (const std::size_t index : pair.predicted.members()) sets.predicted.insert(index);
    out.push_back(std::move(sets));
  }
  return out;
}

/// The worked two-pair example used across the metric tests:
/// truths [{l1,l2},{l3}], predictions [{l1},{l2,l3}] over q=3.
inline std::vector<mlbase::bipartition_pair> two_pair_fixture() {
  return make_pairs(3, {{{0, 1}, {0}}, {{2}, {1, 2}}});
}

}  // namespace test_support
