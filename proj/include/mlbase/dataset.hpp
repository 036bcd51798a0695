#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "mlbase/error.hpp"
#include "mlbase/label_set.hpp"
#include "mlbase/stats.hpp"

namespace mlbase {

/// One feature cell: a number, a nominal/string token, or a missing marker.
/// Missing values are stored as-is; nothing in this library imputes them.
struct feature_value {
  enum class kind_t { numeric, token, missing };

  kind_t kind = kind_t::missing;
  double number = 0.0;
  std::string text;

  static feature_value numeric(double value) {
    return feature_value{kind_t::numeric, value, {}};
  }
  static feature_value token(std::string value) {
    return feature_value{kind_t::token, 0.0, std::move(value)};
  }
  static feature_value missing() { return feature_value{}; }

  friend bool operator==(const feature_value&, const feature_value&) = default;
};

enum class attribute_kind { numeric, nominal, text };

/// One column of the feature schema. Nominal attributes keep their declared
/// value domain in declaration order.
struct feature_attribute {
  std::string name;
  attribute_kind kind = attribute_kind::numeric;
  std::vector<std::string> domain;

  friend bool operator==(const feature_attribute&, const feature_attribute&) = default;
};

/// A feature record plus its true labelset.
struct instance {
  std::vector<feature_value> features;
  label_set labels;

  friend bool operator==(const instance&, const instance&) = default;
};

class multi_label_dataset {
 public:
  std::string name;
  std::vector<instance> instances;
  std::vector<std::string> label_names;
  std::vector<feature_attribute> feature_schema;

  /// N, the number of instances.
  std::size_t size() const noexcept { return instances.size(); }
  /// q, the number of labels.
  std::size_t label_count() const noexcept { return label_names.size(); }
  /// M, the number of features.
  std::size_t feature_count() const noexcept { return feature_schema.size(); }

  friend bool operator==(const multi_label_dataset&, const multi_label_dataset&) = default;
};

/// Symmetric q-by-q matrix of pairwise labelset membership counts.
/// Entry (i, j) is the number of instances carrying both labels;
/// the diagonal equals the single-label frequencies.
class cooccurrence_matrix {
 public:
  cooccurrence_matrix() = default;
  explicit cooccurrence_matrix(std::size_t label_count)
      : q_(label_count), cells_(label_count * label_count, 0) {}

  std::size_t label_count() const noexcept { return q_; }

  std::size_t& at(std::size_t i, std::size_t j) { return cells_[i * q_ + j]; }
  std::size_t at(std::size_t i, std::size_t j) const { return cells_[i * q_ + j]; }

  friend bool operator==(const cooccurrence_matrix&, const cooccurrence_matrix&) = default;

 private:
  std::size_t q_ = 0;
  std::vector<std::size_t> cells_;
};

namespace detail {

inline void require_instances(const multi_label_dataset& d, const char* op) {
  if (d.instances.empty()) {
    throw argument_error(std::string(op) + ": dataset has no instances");
  }
}

}  // namespace detail

/// Mean labelset size, (1/N) sum |Y_i|.
inline double cardinality(const multi_label_dataset& d) {
  detail::require_instances(d, "cardinality");
  std::size_t total = 0;
  for (const instance& inst : d.instances) total += inst.labels.count();
  return static_cast<double>(total) / static_cast<double>(d.size());
}

/// Cardinality normalized by the label space, (1/N) sum |Y_i| / q.
inline double density(const multi_label_dataset& d) {
  if (d.label_count() == 0) throw argument_error("density: dataset has no labels");
  return cardinality(d) / static_cast<double>(d.label_count());
}

/// Number of unique labelset values among the instances.
inline std::size_t distinct_labelsets(const multi_label_dataset& d) {
  std::set<label_set> seen;
  for (const instance& inst : d.instances) seen.insert(inst.labels);
  return seen.size();
}

/// Entry i counts the instances whose labelset contains label i.
inline std::vector<std::size_t> label_frequencies(const multi_label_dataset& d) {
  std::vector<std::size_t> freqs(d.label_count(), 0);
  for (const instance& inst : d.instances) {
    for (std::size_t index : inst.labels.members()) ++freqs[index];
  }
  return freqs;
}

/// Order statistics of a label frequency vector.
inline five_number_summary freq_summary(const std::vector<std::size_t>& freqs) {
  if (freqs.empty()) throw argument_error("freq_summary: empty frequency vector");
  std::vector<double> values(freqs.begin(), freqs.end());
  return five_numbers(std::move(values));
}

inline cooccurrence_matrix cooccurrence(const multi_label_dataset& d) {
  cooccurrence_matrix counts(d.label_count());
  for (const instance& inst : d.instances) {
    const std::vector<std::size_t> members = inst.labels.members();
    for (std::size_t a : members) {
      for (std::size_t b : members) ++counts.at(a, b);
    }
  }
  return counts;
}

struct dataset_stats {
  double cardinality = 0;
  double density = 0;
  std::size_t distinct_labelsets = 0;
  std::vector<std::size_t> label_frequencies;
  five_number_summary freq_summary;
};

inline dataset_stats compute_stats(const multi_label_dataset& d) {
  dataset_stats stats;
  stats.cardinality = cardinality(d);
  stats.density = density(d);
  stats.distinct_labelsets = distinct_labelsets(d);
  stats.label_frequencies = label_frequencies(d);
  stats.freq_summary = freq_summary(stats.label_frequencies);
  return stats;
}

}  // namespace mlbase
