#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlbase/error.hpp"
#include "mlbase/label_set.hpp"
#include "mlbase/text.hpp"

// The eight bipartition evaluation measures used throughout: six
// example-based ones (Hamming-Loss, Subset-Accuracy, Accuracy, Precision,
// Recall, F-Measure) averaged per instance, and the label-based macro- and
// micro-averaged F1 computed from per-label confusion counts. All values
// live in [0, 1]; Hamming-Loss is the only lower-is-better measure.

namespace mlbase {

enum class measure {
  accuracy,
  f_measure,
  hamming_loss,
  precision,
  recall,
  subset_accuracy,
  macro_f1,
  micro_f1,
};

inline constexpr std::array<measure, 8> all_measures = {
    measure::accuracy,  measure::f_measure,       measure::hamming_loss,
    measure::precision, measure::recall,          measure::subset_accuracy,
    measure::macro_f1,  measure::micro_f1,
};

enum class direction { higher_better, lower_better };

constexpr direction measure_direction(measure m) {
  return m == measure::hamming_loss ? direction::lower_better : direction::higher_better;
}

constexpr std::string_view to_string(measure m) {
  switch (m) {
    case measure::accuracy: return "Acc";
    case measure::f_measure: return "F1";
    case measure::hamming_loss: return "HL";
    case measure::precision: return "Pr";
    case measure::recall: return "Re";
    case measure::subset_accuracy: return "SAcc";
    case measure::macro_f1: return "MacroF1";
    case measure::micro_f1: return "MicroF1";
  }
  return "?";
}

constexpr std::string_view to_string(direction d) {
  return d == direction::lower_better ? "lower-better" : "higher-better";
}

/// Accepts the canonical short names plus common longhand spellings,
/// ignoring case and '-', '_', ' ' separators (e.g. "hamming-loss" == "HL").
inline std::optional<measure> measure_from_string(std::string_view text) {
  std::string key;
  key.reserve(text.size());
  for (const char c : text) {
    if (c == '-' || c == '_' || c == ' ') continue;
    key.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  if (key == "acc" || key == "accuracy") return measure::accuracy;
  if (key == "f1" || key == "fmeasure") return measure::f_measure;
  if (key == "hl" || key == "hammingloss") return measure::hamming_loss;
  if (key == "pr" || key == "precision") return measure::precision;
  if (key == "re" || key == "recall") return measure::recall;
  if (key == "sacc" || key == "subsetaccuracy") return measure::subset_accuracy;
  if (key == "macrof1" || key == "f1macro" || key == "f1m") return measure::macro_f1;
  if (key == "microf1" || key == "f1micro" || key == "f1u" || key == "f1mu") {
    return measure::micro_f1;
  }
  return std::nullopt;
}

/// One test example: true labelset Y and predicted labelset Z over the
/// same q-label space.
struct bipartition_pair {
  label_set truth;
  label_set predicted;

  friend bool operator==(const bipartition_pair&, const bipartition_pair&) = default;
};

/// Contribution of a pair with empty truth AND empty prediction to the
/// example-based Accuracy/Precision/Recall/F-Measure averages. Predicting
/// nothing when nothing is true is counted as fully correct; a pair where
/// only one side is empty contributes 0 to the ratios whose denominator
/// vanished.
inline constexpr double both_empty_contribution = 1.0;

namespace detail {

inline std::size_t check_pairs(std::span<const bipartition_pair> pairs, const char* op) {
  if (pairs.empty()) throw argument_error(std::string(op) + ": empty pair sequence");
  const std::size_t q = pairs.front().truth.label_space();
  if (q == 0) throw argument_error(std::string(op) + ": empty label space");
  for (const bipartition_pair& pair : pairs) {
    if (pair.truth.label_space() != q || pair.predicted.label_space() != q) {
      throw argument_error(std::string(op) + ": pairs span different label spaces");
    }
  }
  return q;
}

}  // namespace detail

/// (1/N) sum |Y_i xor Z_i| / q — the rate of single-label mistakes.
inline double hamming_loss(std::span<const bipartition_pair> pairs) {
  const std::size_t q = detail::check_pairs(pairs, "hamming_loss");
  double total = 0;
  for (const bipartition_pair& pair : pairs) {
    total += static_cast<double>(symmetric_difference_count(pair.truth, pair.predicted)) /
             static_cast<double>(q);
  }
  return total / static_cast<double>(pairs.size());
}

/// Fraction of instances whose prediction matches the truth exactly.
inline double subset_accuracy(std::span<const bipartition_pair> pairs) {
  detail::check_pairs(pairs, "subset_accuracy");
  std::size_t exact = 0;
  for (const bipartition_pair& pair : pairs) {
    if (pair.truth == pair.predicted) ++exact;
  }
  return static_cast<double>(exact) / static_cast<double>(pairs.size());
}

/// (1/N) sum |Y n Z| / |Y u Z| (Jaccard score of each pair).
inline double accuracy(std::span<const bipartition_pair> pairs) {
  detail::check_pairs(pairs, "accuracy");
  double total = 0;
  for (const bipartition_pair& pair : pairs) {
    const std::size_t united = union_count(pair.truth, pair.predicted);
    total += united == 0 ? both_empty_contribution
                         : static_cast<double>(intersection_count(pair.truth, pair.predicted)) /
                               static_cast<double>(united);
  }
  return total / static_cast<double>(pairs.size());
}

/// (1/N) sum |Y n Z| / |Z|.
inline double precision(std::span<const bipartition_pair> pairs) {
  detail::check_pairs(pairs, "precision");
  double total = 0;
  for (const bipartition_pair& pair : pairs) {
    const std::size_t predicted = pair.predicted.count();
    if (predicted == 0) {
      total += pair.truth.empty() ? both_empty_contribution : 0.0;
    } else {
      total += static_cast<double>(intersection_count(pair.truth, pair.predicted)) /
               static_cast<double>(predicted);
    }
  }
  return total / static_cast<double>(pairs.size());
}

/// (1/N) sum |Y n Z| / |Y|.
inline double recall(std::span<const bipartition_pair> pairs) {
  detail::check_pairs(pairs, "recall");
  double total = 0;
  for (const bipartition_pair& pair : pairs) {
    const std::size_t truth = pair.truth.count();
    if (truth == 0) {
      total += pair.predicted.empty() ? both_empty_contribution : 0.0;
    } else {
      total += static_cast<double>(intersection_count(pair.truth, pair.predicted)) /
               static_cast<double>(truth);
    }
  }
  return total / static_cast<double>(pairs.size());
}

/// (1/N) sum 2 |Y n Z| / (|Y| + |Z|) — per-pair harmonic mean of
/// precision and recall.
inline double f_measure(std::span<const bipartition_pair> pairs) {
  detail::check_pairs(pairs, "f_measure");
  double total = 0;
  for (const bipartition_pair& pair : pairs) {
    const std::size_t denominator = pair.truth.count() + pair.predicted.count();
    total += denominator == 0
                 ? both_empty_contribution
                 : 2.0 * static_cast<double>(intersection_count(pair.truth, pair.predicted)) /
                       static_cast<double>(denominator);
  }
  return total / static_cast<double>(pairs.size());
}

/// Per-label binary confusion counts; tp+fp+tn+fn == N for every label.
struct label_confusion {
  std::vector<std::size_t> tp, fp, tn, fn;

  std::size_t label_count() const noexcept { return tp.size(); }
};

inline label_confusion confusion(std::span<const bipartition_pair> pairs) {
  const std::size_t q = detail::check_pairs(pairs, "confusion");
  label_confusion counts;
  counts.tp.assign(q, 0);
  counts.fp.assign(q, 0);
  counts.tn.assign(q, 0);
  counts.fn.assign(q, 0);
  for (const bipartition_pair& pair : pairs) {
    for (std::size_t label = 0; label < q; ++label) {
      const bool truth = pair.truth.contains(label);
      const bool predicted = pair.predicted.contains(label);
      if (truth && predicted) ++counts.tp[label];
      else if (!truth && predicted) ++counts.fp[label];
      else if (truth) ++counts.fn[label];
      else ++counts.tn[label];
    }
  }
  return counts;
}

namespace detail {

// Binary F1 from confusion counts; a label never true and never predicted
// scores 0, which deliberately depresses macro-F1 on corpora that keep
// zero-frequency labels.
inline double binary_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denominator = 2 * tp + fp + fn;
  return denominator == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denominator);
}

}  // namespace detail

/// Mean of the per-label F1 scores.
inline double macro_f1(const label_confusion& counts) {
  if (counts.label_count() == 0) throw argument_error("macro_f1: empty confusion");
  double total = 0;
  for (std::size_t label = 0; label < counts.label_count(); ++label) {
    total += detail::binary_f1(counts.tp[label], counts.fp[label], counts.fn[label]);
  }
  return total / static_cast<double>(counts.label_count());
}

/// F1 of the label-wise summed confusion counts.
inline double micro_f1(const label_confusion& counts) {
  if (counts.label_count() == 0) throw argument_error("micro_f1: empty confusion");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t label = 0; label < counts.label_count(); ++label) {
    tp += counts.tp[label];
    fp += counts.fp[label];
    fn += counts.fn[label];
  }
  return detail::binary_f1(tp, fp, fn);
}

/// All eight measure values plus each measure's optimization direction,
/// so downstream comparisons never hardcode which way is better.
struct evaluation_report {
  std::map<measure, double> values;
  std::map<measure, direction> directions;

  friend bool operator==(const evaluation_report&, const evaluation_report&) = default;
};

inline evaluation_report evaluate_all(std::span<const bipartition_pair> pairs) {
  detail::check_pairs(pairs, "evaluate_all");
  const label_confusion counts = confusion(pairs);
  evaluation_report report;
  report.values[measure::accuracy] = accuracy(pairs);
  report.values[measure::f_measure] = f_measure(pairs);
  report.values[measure::hamming_loss] = hamming_loss(pairs);
  report.values[measure::precision] = precision(pairs);
  report.values[measure::recall] = recall(pairs);
  report.values[measure::subset_accuracy] = subset_accuracy(pairs);
  report.values[measure::macro_f1] = macro_f1(counts);
  report.values[measure::micro_f1] = micro_f1(counts);
  for (const measure m : all_measures) report.directions[m] = measure_direction(m);
  return report;
}

/// CSV rows "dataset,measure,value,direction", one per measure.
inline std::string report_to_csv(const evaluation_report& report, const std::string& dataset,
                                 bool header = true) {
  std::string out;
  if (header) out += "dataset,measure,value,direction\n";
  for (const auto& [m, value] : report.values) {
    out += dataset;
    out.push_back(',');
    out += to_string(m);
    out.push_back(',');
    out += detail::format_double(value);
    out.push_back(',');
    out += to_string(report.directions.at(m));
    out.push_back('\n');
  }
  return out;
}

}  // namespace mlbase
