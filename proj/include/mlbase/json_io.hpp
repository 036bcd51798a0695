#pragma once

#include <string>

#include "json.hpp"
#include "mlbase/baseline.hpp"
#include "mlbase/dataset.hpp"
#include "mlbase/metrics.hpp"
#include "mlbase/registry.hpp"

// JSON views of the library's result types, kept in one translation-
// friendly header so the core stays free of the (heavy) JSON dependency.
// Keys are stable: downstream plotting scripts key on them.

namespace mlbase {

inline nlohmann::json stats_to_json(const std::string& dataset_name,
                                    const multi_label_dataset& data, const dataset_stats& stats) {
  nlohmann::json out;
  out["dataset"] = dataset_name;
  out["instances"] = data.size();
  out["features"] = data.feature_count();
  out["labels"] = data.label_count();
  out["cardinality"] = stats.cardinality;
  out["density"] = stats.density;
  out["distinct_labelsets"] = stats.distinct_labelsets;
  out["label_frequencies"] = stats.label_frequencies;
  out["frequency_summary"] = {
      {"min", stats.freq_summary.min},   {"q1", stats.freq_summary.q1},
      {"median", stats.freq_summary.median}, {"q3", stats.freq_summary.q3},
      {"max", stats.freq_summary.max},
  };
  return out;
}

inline nlohmann::json model_to_json(const general_b_model& model) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const std::size_t label : model.ranked_labels) ranked.push_back(model.label_names[label]);
  nlohmann::json prediction = nlohmann::json::array();
  for (const std::size_t label : model.prediction.members()) {
    prediction.push_back(model.label_names[label]);
  }
  return nlohmann::json{
      {"dataset", model.dataset},
      {"sigma", model.sigma},
      {"ranked_labels", ranked},
      {"prediction", prediction},
  };
}

inline nlohmann::json report_to_json(const evaluation_report& report) {
  nlohmann::json values = nlohmann::json::object();
  nlohmann::json directions = nlohmann::json::object();
  for (const auto& [m, value] : report.values) values[std::string(to_string(m))] = value;
  for (const auto& [m, d] : report.directions) {
    directions[std::string(to_string(m))] = std::string(to_string(d));
  }
  return nlohmann::json{{"values", values}, {"directions", directions}};
}

/// Per-cell counts, totals, and the baselines they were measured against.
inline nlohmann::json summary_to_json(const comparison_summary& summary) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [dataset, row] : summary.cells) {
    for (const auto& [m, counts] : row) {
      nlohmann::json cell{
          {"dataset", dataset},
          {"measure", std::string(to_string(m))},
          {"underperforming", counts.underperforming},
          {"total", counts.total},
      };
      if (const auto share = percentage(counts)) cell["percentage"] = *share;
      cells.push_back(std::move(cell));
    }
  }

  nlohmann::json dataset_totals = nlohmann::json::array();
  for (const auto& [dataset, row] : summary.cells) {
    const cell_counts total = summary.dataset_total(dataset);
    nlohmann::json entry{
        {"dataset", dataset},
        {"underperforming", total.underperforming},
        {"total", total.total},
    };
    if (const auto share = percentage(total)) entry["percentage"] = *share;
    dataset_totals.push_back(std::move(entry));
  }

  nlohmann::json measure_totals = nlohmann::json::array();
  for (const measure m : all_measures) {
    const cell_counts total = summary.measure_total(m);
    nlohmann::json entry{
        {"measure", std::string(to_string(m))},
        {"underperforming", total.underperforming},
        {"total", total.total},
    };
    if (const auto share = percentage(total)) entry["percentage"] = *share;
    measure_totals.push_back(std::move(entry));
  }

  const cell_counts grand = summary.grand_total();
  nlohmann::json grand_json{{"underperforming", grand.underperforming}, {"total", grand.total}};
  if (const auto share = percentage(grand)) grand_json["percentage"] = *share;

  nlohmann::json baselines = nlohmann::json::array();
  for (const auto& [key, value] : summary.baselines) {
    baselines.push_back({{"dataset", key.first},
                         {"measure", std::string(to_string(key.second))},
                         {"value", value}});
  }

  return nlohmann::json{
      {"cells", cells},
      {"dataset_totals", dataset_totals},
      {"measure_totals", measure_totals},
      {"grand_total", grand_json},
      {"baselines", baselines},
  };
}

inline nlohmann::json distribution_to_json(const measure_distribution& dist) {
  nlohmann::json distributions = nlohmann::json::array();
  for (const auto& [dataset, row] : dist.cells) {
    for (const auto& [m, cell] : row) {
      distributions.push_back({
          {"dataset", dataset},
          {"measure", std::string(to_string(m))},
          {"count", cell.count},
          {"min", cell.summary.min},
          {"q1", cell.summary.q1},
          {"median", cell.summary.median},
          {"q3", cell.summary.q3},
          {"max", cell.summary.max},
          {"worst", cell.worst},
          {"best", cell.best},
          {"baseline", cell.baseline},
          {"gap_flagged", gap_flagged(cell)},
      });
    }
  }
  return distributions;
}

/// The full comparison bundle: summary plus distributions, the shape the
/// plotting scripts consume.
inline nlohmann::json bundle_to_json(const comparison_summary& summary,
                                     const measure_distribution& dist) {
  nlohmann::json out = summary_to_json(summary);
  out["distributions"] = distribution_to_json(dist);
  return out;
}

}  // namespace mlbase
