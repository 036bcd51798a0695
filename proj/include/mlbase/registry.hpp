#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlbase/error.hpp"
#include "mlbase/metrics.hpp"
#include "mlbase/stats.hpp"
#include "mlbase/text.hpp"

// Registry of externally published measure values and their comparison
// against the baseline: how many published results underperform (or merely
// equal) a classifier that never looks at the features, per dataset and
// per measure, plus order statistics of the published values with the
// baseline overlaid. The store is a value — CSV in, tables out.

namespace mlbase {

struct published_result {
  std::string paper_id;
  std::string dataset;
  mlbase::measure measure = measure::accuracy;
  double value = 0;        // always within [0,1] after ingestion
  std::string protocol;    // free-form, as published ("cv:10", "holdout", ...)
  std::optional<double> stddev;

  bool has_stddev() const noexcept { return stddev.has_value(); }

  friend bool operator==(const published_result&, const published_result&) = default;
};

struct ingest_error {
  std::size_t line = 0;
  std::string message;

  friend bool operator==(const ingest_error&, const ingest_error&) = default;
};

/// Valid rows and row-level problems from one ingestion pass; a malformed
/// row never aborts the rows after it.
struct ingest_result {
  std::vector<published_result> results;
  std::vector<ingest_error> errors;
};

using baseline_key = std::pair<std::string, measure>;  // (dataset, measure)
using baseline_map = std::map<baseline_key, double>;

namespace detail {

/// Splits one CSV record. Fields may be double-quoted to protect commas;
/// "" inside quotes is a literal quote. Unquoted fields are trimmed.
inline std::vector<std::string> split_csv_row(std::string_view line, std::size_t line_number) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  bool field_quoted = false;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    const bool at_end = i == line.size();
    if (in_quotes) {
      if (at_end) throw parse_error(line_number, "unterminated quoted field");
      const char c = line[i];
      if (c != '"') {
        current.push_back(c);
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else {
        in_quotes = false;
      }
      continue;
    }
    const char c = at_end ? ',' : line[i];
    if (c == ',') {  // the synthetic comma at the end flushes the last field
      fields.push_back(field_quoted ? current : std::string(trim(current)));
      current.clear();
      field_quoted = false;
    } else if (c == '"' && !field_quoted && trim(current).empty()) {
      in_quotes = true;
      field_quoted = true;
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  return fields;
}

/// Calls visit(line_number, line_text) for every line, CRLF-tolerant.
template <typename Visit>
inline void for_each_line(std::string_view text, Visit&& visit) {
  std::size_t line_number = 0;
  std::size_t position = 0;
  while (position < text.size()) {
    std::size_t end = text.find('\n', position);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(position, end - position);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    visit(++line_number, line);
    position = end + 1;
  }
}

inline constexpr std::array<std::string_view, 6> result_csv_header = {
    "paper_id", "dataset", "measure", "value", "protocol", "stddev"};

inline bool matches_header(const std::vector<std::string>& fields,
                           std::span<const std::string_view> expected) {
  if (fields.size() != expected.size()) return false;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (!iequals(fields[i], expected[i])) return false;
  }
  return true;
}

}  // namespace detail

/// Parses a published-results CSV (`paper_id,dataset,measure,value,
/// protocol,stddev`). An empty document yields an empty result. A wrong
/// header is reported once and parsing stops; anything else wrong with an
/// individual row becomes one ingest_error and the row is skipped.
inline ingest_result ingest_csv(std::string_view text) {
  ingest_result out;
  bool header_seen = false;
  bool header_bad = false;
  detail::for_each_line(text, [&](std::size_t line_number, std::string_view line) {
    if (header_bad || detail::trim(line).empty()) return;
    try {
      const std::vector<std::string> fields = detail::split_csv_row(line, line_number);
      if (!header_seen) {
        header_seen = true;
        if (!detail::matches_header(fields, detail::result_csv_header)) {
          header_bad = true;
          out.errors.push_back(
              {line_number, "expected header 'paper_id,dataset,measure,value,protocol,stddev'"});
        }
        return;
      }
      if (fields.size() != detail::result_csv_header.size()) {
        throw parse_error(line_number, "expected 6 fields, got " + std::to_string(fields.size()));
      }
      published_result record;
      record.paper_id = fields[0];
      if (record.paper_id.empty()) throw parse_error(line_number, "empty paper_id");
      record.dataset = fields[1];
      if (record.dataset.empty()) throw parse_error(line_number, "empty dataset");
      const std::optional<measure> m = measure_from_string(fields[2]);
      if (!m) throw parse_error(line_number, "unknown measure '" + fields[2] + "'");
      record.measure = *m;
      const std::optional<double> value = detail::parse_double(fields[3]);
      if (!value) throw parse_error(line_number, "non-numeric value '" + fields[3] + "'");
      if (*value < 0.0 || *value > 1.0) {
        throw parse_error(line_number, "value " + fields[3] + " outside [0,1]");
      }
      record.value = *value;
      record.protocol = fields[4];
      if (!fields[5].empty()) {
        const std::optional<double> stddev = detail::parse_double(fields[5]);
        if (!stddev) throw parse_error(line_number, "non-numeric stddev '" + fields[5] + "'");
        if (*stddev < 0.0) throw parse_error(line_number, "negative stddev");
        record.stddev = *stddev;
      }
      out.results.push_back(std::move(record));
    } catch (const parse_error& failure) {
      out.errors.push_back({failure.line(), failure.what()});
    }
  });
  return out;
}

/// Copies one evaluation report into the baseline map under the given
/// dataset name, overwriting existing entries for the same keys.
inline void merge_report(baseline_map& baselines, const std::string& dataset,
                         const evaluation_report& report) {
  for (const auto& [m, value] : report.values) baselines[{dataset, m}] = value;
}

/// Parses a static baseline CSV (`dataset,measure,value`). Unlike
/// ingest_csv this throws on the first malformed row: baselines are
/// reference values, and a partially loaded reference is worse than none.
inline baseline_map load_baseline_csv(std::string_view text) {
  static constexpr std::array<std::string_view, 3> header = {"dataset", "measure", "value"};
  baseline_map baselines;
  bool header_seen = false;
  detail::for_each_line(text, [&](std::size_t line_number, std::string_view line) {
    if (detail::trim(line).empty()) return;
    const std::vector<std::string> fields = detail::split_csv_row(line, line_number);
    if (!header_seen) {
      header_seen = true;
      if (!detail::matches_header(fields, header)) {
        throw parse_error(line_number, "expected header 'dataset,measure,value'");
      }
      return;
    }
    if (fields.size() != header.size()) {
      throw parse_error(line_number, "expected 3 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw parse_error(line_number, "empty dataset");
    const std::optional<measure> m = measure_from_string(fields[1]);
    if (!m) throw parse_error(line_number, "unknown measure '" + fields[1] + "'");
    const std::optional<double> value = detail::parse_double(fields[2]);
    if (!value) throw parse_error(line_number, "non-numeric value '" + fields[2] + "'");
    baselines[{fields[0], *m}] = *value;
  });
  return baselines;
}

/// A published value at or below the baseline counts as underperforming —
/// equality included, so a method indistinguishable from the constant
/// classifier is not credited.
inline bool is_underperforming(const published_result& result, double baseline) {
  return measure_direction(result.measure) == direction::lower_better
             ? result.value >= baseline
             : result.value <= baseline;
}

struct cell_counts {
  std::size_t underperforming = 0;  // #U
  std::size_t total = 0;            // #M

  friend bool operator==(const cell_counts&, const cell_counts&) = default;
};

inline std::optional<double> percentage(const cell_counts& counts) {
  if (counts.total == 0) return std::nullopt;
  return 100.0 * static_cast<double>(counts.underperforming) / static_cast<double>(counts.total);
}

struct comparison_summary {
  /// dataset → measure → counts; cells exist only where results exist.
  std::map<std::string, std::map<measure, cell_counts>> cells;
  /// The baseline values actually consulted, for rendering alongside.
  baseline_map baselines;

  cell_counts dataset_total(const std::string& dataset) const {
    cell_counts total;
    const auto row = cells.find(dataset);
    if (row == cells.end()) return total;
    for (const auto& [m, counts] : row->second) {
      total.underperforming += counts.underperforming;
      total.total += counts.total;
    }
    return total;
  }

  cell_counts measure_total(measure m) const {
    cell_counts total;
    for (const auto& [dataset, row] : cells) {
      const auto cell = row.find(m);
      if (cell == row.end()) continue;
      total.underperforming += cell->second.underperforming;
      total.total += cell->second.total;
    }
    return total;
  }

  cell_counts grand_total() const {
    cell_counts total;
    for (const measure m : all_measures) {
      const cell_counts column = measure_total(m);
      total.underperforming += column.underperforming;
      total.total += column.total;
    }
    return total;
  }

  /// Dataset names ordered by descending underperformance percentage,
  /// ties by ascending name. Percentages are compared exactly via
  /// cross-multiplication, so 1/2 and 2/4 tie.
  std::vector<std::string> datasets_by_share() const {
    std::vector<std::string> names;
    names.reserve(cells.size());
    for (const auto& [dataset, row] : cells) names.push_back(dataset);
    std::sort(names.begin(), names.end(), [this](const std::string& a, const std::string& b) {
      const cell_counts ca = dataset_total(a);
      const cell_counts cb = dataset_total(b);
      const std::size_t left = ca.underperforming * cb.total;
      const std::size_t right = cb.underperforming * ca.total;
      if (left != right) return left > right;
      return a < b;
    });
    return names;
  }
};

namespace detail {

inline std::string orphan_key_list(const std::vector<baseline_key>& orphans) {
  std::string text;
  const std::size_t shown = std::min<std::size_t>(orphans.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) text += ", ";
    text += orphans[i].first;
    text += '/';
    text += to_string(orphans[i].second);
  }
  if (orphans.size() > shown) {
    text += ", ... (" + std::to_string(orphans.size() - shown) + " more)";
  }
  return text;
}

inline std::vector<baseline_key> missing_baselines(std::span<const published_result> results,
                                                   const baseline_map& baselines) {
  std::vector<baseline_key> orphans;
  for (const published_result& result : results) {
    const baseline_key key{result.dataset, result.measure};
    if (!baselines.contains(key) &&
        std::find(orphans.begin(), orphans.end(), key) == orphans.end()) {
      orphans.push_back(key);
    }
  }
  return orphans;
}

}  // namespace detail

/// Counts, per (dataset, measure), how many published results sit at or
/// below the baseline. Every result must have a baseline value.
inline comparison_summary compare(std::span<const published_result> results,
                                  const baseline_map& baselines) {
  const std::vector<baseline_key> orphans = detail::missing_baselines(results, baselines);
  if (!orphans.empty()) {
    throw value_error("compare: no baseline value for " + std::to_string(orphans.size()) +
                      " (dataset, measure) key(s): " + detail::orphan_key_list(orphans));
  }
  comparison_summary summary;
  for (const published_result& result : results) {
    const baseline_key key{result.dataset, result.measure};
    const double baseline = baselines.at(key);
    cell_counts& cell = summary.cells[result.dataset][result.measure];
    ++cell.total;
    if (is_underperforming(result, baseline)) ++cell.underperforming;
    summary.baselines[key] = baseline;
  }
  return summary;
}

struct distribution_cell {
  std::size_t count = 0;
  five_number_summary summary;  // of the published values
  double worst = 0;             // resolved by the measure's direction
  double best = 0;
  double baseline = 0;

  friend bool operator==(const distribution_cell&, const distribution_cell&) = default;
};

/// Highlight rule for the distribution table: the spread between the
/// highest and lowest published value reaches 0.5, direction
/// notwithstanding.
inline bool gap_flagged(const distribution_cell& cell) {
  return cell.summary.max - cell.summary.min >= 0.5;
}

struct measure_distribution {
  std::map<std::string, std::map<measure, distribution_cell>> cells;
};

/// Order statistics of the published values per (dataset, measure), with
/// best/worst resolved by direction and the baseline value alongside.
/// Cells with no results are simply absent.
inline measure_distribution distribution(std::span<const published_result> results,
                                         const baseline_map& baselines) {
  const std::vector<baseline_key> orphans = detail::missing_baselines(results, baselines);
  if (!orphans.empty()) {
    throw value_error("distribution: no baseline value for " + std::to_string(orphans.size()) +
                      " (dataset, measure) key(s): " + detail::orphan_key_list(orphans));
  }
  std::map<baseline_key, std::vector<double>> groups;
  for (const published_result& result : results) {
    groups[{result.dataset, result.measure}].push_back(result.value);
  }
  measure_distribution out;
  for (auto& [key, values] : groups) {
    distribution_cell cell;
    cell.count = values.size();
    cell.summary = five_numbers(values);
    const bool lower_better = measure_direction(key.second) == direction::lower_better;
    cell.best = lower_better ? cell.summary.min : cell.summary.max;
    cell.worst = lower_better ? cell.summary.max : cell.summary.min;
    cell.baseline = baselines.at(key);
    out.cells[key.first][key.second] = cell;
  }
  return out;
}

namespace detail {

inline std::string format_percentage(const std::optional<double>& value) {
  return value ? format_fixed(*value, 1) : std::string("—");  // em dash
}

inline void append_row(std::string& out, std::span<const std::string> fields) {
  out.push_back('|');
  for (const std::string& field : fields) {
    out.push_back(' ');
    out += field;
    out += " |";
  }
  out.push_back('\n');
}

inline void append_rule(std::string& out, std::size_t columns) {
  out.push_back('|');
  for (std::size_t i = 0; i < columns; ++i) out += " --- |";
  out.push_back('\n');
}

}  // namespace detail

/// CSV form of a comparison summary: one row per cell, then per-dataset
/// totals, per-measure totals, and the grand total under the reserved
/// name ALL. Percentages use one decimal; undefined ones render empty.
inline std::string summary_to_csv(const comparison_summary& summary) {
  std::string out = "dataset,measure,underperforming,total,percentage\n";
  const auto emit = [&out](const std::string& dataset, const std::string& measure_name,
                           const cell_counts& counts) {
    const std::optional<double> share = percentage(counts);
    out += dataset + ',' + measure_name + ',' + std::to_string(counts.underperforming) + ',' +
           std::to_string(counts.total) + ',' + (share ? detail::format_fixed(*share, 1) : "") +
           '\n';
  };
  for (const auto& [dataset, row] : summary.cells) {
    for (const auto& [m, counts] : row) emit(dataset, std::string(to_string(m)), counts);
  }
  for (const auto& [dataset, row] : summary.cells) {
    emit(dataset, "ALL", summary.dataset_total(dataset));
  }
  for (const measure m : all_measures) {
    emit("ALL", std::string(to_string(m)), summary.measure_total(m));
  }
  emit("ALL", "ALL", summary.grand_total());
  return out;
}

/// CSV form of the distribution table, full-precision values.
inline std::string distribution_to_csv(const measure_distribution& dist) {
  std::string out = "dataset,measure,count,min,q1,median,q3,max,worst,best,baseline,gap_flag\n";
  for (const auto& [dataset, row] : dist.cells) {
    for (const auto& [m, cell] : row) {
      out += dataset + ',' + std::string(to_string(m)) + ',' + std::to_string(cell.count) + ',' +
             detail::format_double(cell.summary.min) + ',' +
             detail::format_double(cell.summary.q1) + ',' +
             detail::format_double(cell.summary.median) + ',' +
             detail::format_double(cell.summary.q3) + ',' +
             detail::format_double(cell.summary.max) + ',' + detail::format_double(cell.worst) +
             ',' + detail::format_double(cell.best) + ',' + detail::format_double(cell.baseline) +
             ',' + (gap_flagged(cell) ? "1" : "0") + '\n';
    }
  }
  return out;
}

/// Deterministic Markdown report: the baseline values consulted, the
/// underperformance counts sorted by share (descending), per-measure
/// totals, and the published-value distributions with gap flags.
inline std::string render_report(const comparison_summary& summary,
                                 const measure_distribution& dist) {
  std::string out = "# Baseline comparison report\n";

  std::vector<std::string> header{"Dataset"};
  for (const measure m : all_measures) header.emplace_back(to_string(m));

  out += "\n## Baseline values\n\n";
  detail::append_row(out, header);
  detail::append_rule(out, header.size());
  std::vector<std::string> baseline_datasets;
  for (const auto& [key, value] : summary.baselines) {
    if (baseline_datasets.empty() || baseline_datasets.back() != key.first) {
      baseline_datasets.push_back(key.first);
    }
  }
  for (const std::string& dataset : baseline_datasets) {
    std::vector<std::string> fields{dataset};
    for (const measure m : all_measures) {
      const auto entry = summary.baselines.find({dataset, m});
      fields.push_back(entry == summary.baselines.end() ? "—"
                                                        : detail::format_fixed(entry->second, 2));
    }
    detail::append_row(out, fields);
  }

  out += "\n## Published results at or below the baseline\n\n";
  std::vector<std::string> count_header = header;
  count_header.insert(count_header.end(), {"#U", "#M", "%"});
  detail::append_row(out, count_header);
  detail::append_rule(out, count_header.size());
  for (const std::string& dataset : summary.datasets_by_share()) {
    const auto& row = summary.cells.at(dataset);
    std::vector<std::string> fields{dataset};
    for (const measure m : all_measures) {
      const auto cell = row.find(m);
      fields.push_back(std::to_string(cell == row.end() ? 0 : cell->second.underperforming));
    }
    const cell_counts total = summary.dataset_total(dataset);
    fields.push_back(std::to_string(total.underperforming));
    fields.push_back(std::to_string(total.total));
    fields.push_back(detail::format_percentage(percentage(total)));
    detail::append_row(out, fields);
  }

  out += "\n### Per-measure totals\n\n";
  std::vector<std::string> totals_header{" "};
  for (const measure m : all_measures) totals_header.emplace_back(to_string(m));
  totals_header.emplace_back("All");
  detail::append_row(out, totals_header);
  detail::append_rule(out, totals_header.size());
  if (!summary.cells.empty()) {
    const cell_counts grand = summary.grand_total();
    std::vector<std::string> u_row{"#U"};
    std::vector<std::string> m_row{"#M"};
    std::vector<std::string> p_row{"%"};
    for (const measure m : all_measures) {
      const cell_counts column = summary.measure_total(m);
      u_row.push_back(std::to_string(column.underperforming));
      m_row.push_back(std::to_string(column.total));
      p_row.push_back(detail::format_percentage(percentage(column)));
    }
    u_row.push_back(std::to_string(grand.underperforming));
    m_row.push_back(std::to_string(grand.total));
    p_row.push_back(detail::format_percentage(percentage(grand)));
    detail::append_row(out, u_row);
    detail::append_row(out, m_row);
    detail::append_row(out, p_row);
  }

  out += "\n## Published value distributions\n\n";
  const std::vector<std::string> dist_header{"Dataset", "Measure", "N",      "Min",
                                             "1Q",      "Median",  "3Q",     "Max",
                                             "Worst",   "Best",    "Baseline", "Gap ≥ 0.5"};
  detail::append_row(out, dist_header);
  detail::append_rule(out, dist_header.size());
  for (const auto& [dataset, row] : dist.cells) {
    for (const auto& [m, cell] : row) {
      std::vector<std::string> fields{
          dataset,
          std::string(to_string(m)),
          std::to_string(cell.count),
          detail::format_fixed(cell.summary.min, 2),
          detail::format_fixed(cell.summary.q1, 2),
          detail::format_fixed(cell.summary.median, 2),
          detail::format_fixed(cell.summary.q3, 2),
          detail::format_fixed(cell.summary.max, 2),
          detail::format_fixed(cell.worst, 2),
          detail::format_fixed(cell.best, 2),
          detail::format_fixed(cell.baseline, 2),
          gap_flagged(cell) ? "yes" : "",
      };
      detail::append_row(out, fields);
    }
  }
  return out;
}

}  // namespace mlbase
