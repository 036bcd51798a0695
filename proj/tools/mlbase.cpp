// mlbase — command-line front end.
//
//   mlbase stats    --dataset d.arff --labels d.xml          dataset statistics
//   mlbase baseline --dataset d.arff --labels d.xml          fitted constant model
//   mlbase eval     --dataset d.arff --labels d.xml          baseline measure values
//   mlbase compare  --results r.csv [--baselines b.csv] ...  underperformance counts
//   mlbase report   --results r.csv [--baselines b.csv] ...  full Markdown/CSV/JSON bundle
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mlbase/json_io.hpp"
#include "mlbase/mlbase.hpp"

namespace {

// A problem with the invocation rather than with the data; exits 1.
struct usage_failure {
  std::string message;
};

struct options {
  std::vector<std::string> dataset_paths;
  std::vector<std::string> label_paths;
  std::vector<std::string> names;
  bool meka = false;
  std::string protocol_text = "full";
  std::uint64_t seed = 0;
  std::string results_path;
  std::string baselines_path;
  std::string format = "table";
  std::string out_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mlbase::error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const options& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw mlbase::error("cannot write '" + opts.out_path + "'");
  out << text;
}

// Renders rows as space-aligned columns; first row is the header.
std::string align_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += "  ";
      out += row[i];
      if (i + 1 < row.size()) out.append(widths[i] - row[i].size(), ' ');
    }
    out.push_back('\n');
  }
  return out;
}

struct named_dataset {
  std::string name;
  mlbase::multi_label_dataset data;
};

std::vector<named_dataset> load_datasets(const options& opts) {
  if (opts.dataset_paths.empty()) throw usage_failure{"at least one --dataset is required"};
  if (!opts.label_paths.empty() && opts.meka) {
    throw usage_failure{"--labels and --meka are mutually exclusive"};
  }
  if (!opts.label_paths.empty() && opts.label_paths.size() != opts.dataset_paths.size()) {
    throw usage_failure{"--labels count must match --dataset count"};
  }
  if (!opts.names.empty() && opts.names.size() != opts.dataset_paths.size()) {
    throw usage_failure{"--name count must match --dataset count"};
  }

  std::vector<named_dataset> loaded;
  loaded.reserve(opts.dataset_paths.size());
  for (std::size_t i = 0; i < opts.dataset_paths.size(); ++i) {
    const std::string arff_text = read_file(opts.dataset_paths[i]);
    mlbase::multi_label_dataset data;
    if (!opts.label_paths.empty()) {
      data = mlbase::parse_mulan(arff_text, read_file(opts.label_paths[i]));
    } else if (opts.meka) {
      data = mlbase::parse_meka(arff_text);
    } else {
      try {  // no label source named: accept a MEKA relation, else complain
        data = mlbase::parse_meka(arff_text);
      } catch (const mlbase::schema_error&) {
        throw usage_failure{"'" + opts.dataset_paths[i] +
                            "': relation carries no MEKA -C label count; pass --labels <xml> "
                            "for Mulan datasets or --meka to insist"};
      }
    }
    const std::string name = opts.names.empty() ? data.name : opts.names[i];
    loaded.push_back({name, std::move(data)});
  }
  return loaded;
}

mlbase::protocol parse_protocol(const options& opts) {
  try {
    return mlbase::protocol::parse(opts.protocol_text, opts.seed);
  } catch (const mlbase::argument_error& failure) {
    throw usage_failure{failure.what()};
  }
}

std::string integer_or_fraction(double value) { return mlbase::detail::format_double(value); }

void run_stats(const options& opts) {
  const std::vector<named_dataset> datasets = load_datasets(opts);
  if (opts.format == "json") {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [name, data] : datasets) {
      out.push_back(mlbase::stats_to_json(name, data, mlbase::compute_stats(data)));
    }
    write_output(opts, out.dump(2) + "\n");
    return;
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"dataset", "instances", "features", "labels", "cardinality", "density",
                  "distinct_labelsets", "min", "q1", "median", "q3", "max"});
  for (const auto& [name, data] : datasets) {
    const mlbase::dataset_stats stats = mlbase::compute_stats(data);
    rows.push_back({name, std::to_string(data.size()), std::to_string(data.feature_count()),
                    std::to_string(data.label_count()),
                    mlbase::detail::format_fixed(stats.cardinality, 3),
                    mlbase::detail::format_fixed(stats.density, 3),
                    std::to_string(stats.distinct_labelsets),
                    integer_or_fraction(stats.freq_summary.min),
                    integer_or_fraction(stats.freq_summary.q1),
                    integer_or_fraction(stats.freq_summary.median),
                    integer_or_fraction(stats.freq_summary.q3),
                    integer_or_fraction(stats.freq_summary.max)});
  }
  if (opts.format == "csv") {
    std::string out;
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += row[i];
      }
      out.push_back('\n');
    }
    write_output(opts, out);
  } else {
    write_output(opts, align_table(rows));
  }
}

void run_baseline(const options& opts) {
  const std::vector<named_dataset> datasets = load_datasets(opts);
  if (opts.format == "json") {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [name, data] : datasets) {
      mlbase::general_b_model model = mlbase::fit_general_b(data);
      model.dataset = name;
      out.push_back(mlbase::model_to_json(model));
    }
    write_output(opts, out.dump(2) + "\n");
    return;
  }
  std::string out;
  for (const auto& [name, data] : datasets) {
    const mlbase::general_b_model model = mlbase::fit_general_b(data);
    auto joined = [&model](const std::vector<std::size_t>& labels, char separator) {
      std::string text;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) text.push_back(separator);
        text += model.label_names[labels[i]];
      }
      return text;
    };
    if (opts.format == "csv") {
      if (out.empty()) out = "dataset,sigma,ranked_labels,prediction\n";
      out += name + ',' + std::to_string(model.sigma) + ',' +
             joined(model.ranked_labels, ';') + ',' + joined(model.prediction.members(), ';') +
             '\n';
    } else {
      out += "dataset:    " + name + '\n';
      out += "sigma:      " + std::to_string(model.sigma) + '\n';
      out += "ranked:     " + joined(model.ranked_labels, ' ') + '\n';
      out += "prediction: " + joined(model.prediction.members(), ' ') + "\n\n";
    }
  }
  write_output(opts, out);
}

void run_eval(const options& opts) {
  const std::vector<named_dataset> datasets = load_datasets(opts);
  const mlbase::protocol protocol = parse_protocol(opts);
  if (opts.format == "json") {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [name, data] : datasets) {
      nlohmann::json entry = mlbase::report_to_json(mlbase::evaluate_baseline(data, protocol));
      entry["dataset"] = name;
      entry["protocol"] = protocol.to_string();
      out.push_back(std::move(entry));
    }
    write_output(opts, out.dump(2) + "\n");
    return;
  }
  if (opts.format == "csv") {
    std::string out;
    for (const auto& [name, data] : datasets) {
      const mlbase::evaluation_report report = mlbase::evaluate_baseline(data, protocol);
      out += mlbase::report_to_csv(report, name, /*header=*/out.empty());
    }
    write_output(opts, out);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"dataset", "protocol"};
  for (const mlbase::measure m : mlbase::all_measures) header.emplace_back(mlbase::to_string(m));
  rows.push_back(std::move(header));
  for (const auto& [name, data] : datasets) {
    const mlbase::evaluation_report report = mlbase::evaluate_baseline(data, protocol);
    std::vector<std::string> row{name, protocol.to_string()};
    for (const mlbase::measure m : mlbase::all_measures) {
      row.push_back(mlbase::detail::format_fixed(report.values.at(m), 2));
    }
    rows.push_back(std::move(row));
  }
  write_output(opts, align_table(rows));
}

mlbase::baseline_map gather_baselines(const options& opts) {
  mlbase::baseline_map baselines;
  if (!opts.baselines_path.empty()) {
    baselines = mlbase::load_baseline_csv(read_file(opts.baselines_path));
  }
  if (!opts.dataset_paths.empty()) {  // live runs override static values
    const mlbase::protocol protocol = parse_protocol(opts);
    for (const auto& [name, data] : load_datasets(opts)) {
      mlbase::merge_report(baselines, name, mlbase::evaluate_baseline(data, protocol));
    }
  }
  return baselines;
}

std::vector<mlbase::published_result> gather_results(const options& opts) {
  if (opts.results_path.empty()) throw usage_failure{"--results is required"};
  mlbase::ingest_result ingested = mlbase::ingest_csv(read_file(opts.results_path));
  for (const mlbase::ingest_error& problem : ingested.errors) {
    std::cerr << opts.results_path << ": " << problem.message << '\n';
  }
  if (!ingested.errors.empty()) {
    throw mlbase::error("results CSV: " + std::to_string(ingested.errors.size()) +
                        " malformed row(s) rejected");
  }
  return std::move(ingested.results);
}

std::string summary_table(const mlbase::comparison_summary& summary) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"dataset"};
  for (const mlbase::measure m : mlbase::all_measures) header.emplace_back(mlbase::to_string(m));
  header.insert(header.end(), {"#U", "#M", "%"});
  rows.push_back(std::move(header));
  for (const std::string& dataset : summary.datasets_by_share()) {
    const auto& row_cells = summary.cells.at(dataset);
    std::vector<std::string> row{dataset};
    for (const mlbase::measure m : mlbase::all_measures) {
      const auto cell = row_cells.find(m);
      row.push_back(std::to_string(cell == row_cells.end() ? 0 : cell->second.underperforming));
    }
    const mlbase::cell_counts total = summary.dataset_total(dataset);
    row.push_back(std::to_string(total.underperforming));
    row.push_back(std::to_string(total.total));
    row.push_back(mlbase::detail::format_percentage(mlbase::percentage(total)));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> u_row{"all (#U)"};
  std::vector<std::string> m_row{"all (#M)"};
  std::vector<std::string> p_row{"all (%)"};
  for (const mlbase::measure m : mlbase::all_measures) {
    const mlbase::cell_counts column = summary.measure_total(m);
    u_row.push_back(std::to_string(column.underperforming));
    m_row.push_back(std::to_string(column.total));
    p_row.push_back(mlbase::detail::format_percentage(mlbase::percentage(column)));
  }
  const mlbase::cell_counts grand = summary.grand_total();
  u_row.insert(u_row.end(), {std::to_string(grand.underperforming), "", ""});
  m_row.insert(m_row.end(), {"", std::to_string(grand.total), ""});
  p_row.insert(p_row.end(),
               {"", "", mlbase::detail::format_percentage(mlbase::percentage(grand))});
  rows.push_back(std::move(u_row));
  rows.push_back(std::move(m_row));
  rows.push_back(std::move(p_row));
  return align_table(rows);
}

void run_compare(const options& opts) {
  const std::vector<mlbase::published_result> results = gather_results(opts);
  const mlbase::baseline_map baselines = gather_baselines(opts);
  const mlbase::comparison_summary summary = mlbase::compare(results, baselines);
  if (opts.format == "json") {
    write_output(opts, mlbase::summary_to_json(summary).dump(2) + "\n");
  } else if (opts.format == "csv") {
    write_output(opts, mlbase::summary_to_csv(summary));
  } else {
    write_output(opts, summary_table(summary));
  }
}

void run_report(const options& opts) {
  const std::vector<mlbase::published_result> results = gather_results(opts);
  const mlbase::baseline_map baselines = gather_baselines(opts);
  const mlbase::comparison_summary summary = mlbase::compare(results, baselines);
  const mlbase::measure_distribution dist = mlbase::distribution(results, baselines);
  if (opts.format == "json") {
    write_output(opts, mlbase::bundle_to_json(summary, dist).dump(2) + "\n");
  } else if (opts.format == "csv") {
    write_output(opts, mlbase::summary_to_csv(summary) + "\n" + mlbase::distribution_to_csv(dist));
  } else {
    write_output(opts, mlbase::render_report(summary, dist));
  }
}

void add_data_options(CLI::App* command, options& opts) {
  command->add_option("--dataset", opts.dataset_paths, "ARFF dataset path (repeatable)");
  command->add_option("--labels", opts.label_paths,
                      "Mulan XML label header, paired with --dataset by position");
  command->add_flag("--meka", opts.meka, "Read label count from the MEKA '-C n' relation name");
  command->add_option("--name", opts.names, "Override the dataset display name (repeatable)");
}

void add_protocol_options(CLI::App* command, options& opts) {
  command->add_option("--protocol", opts.protocol_text, "full | holdout:<fraction> | cv:<k>")
      ->capture_default_str();
  command->add_option("--seed", opts.seed, "Shuffle seed for holdout/cv splits")
      ->capture_default_str();
}

void add_output_options(CLI::App* command, options& opts) {
  command->add_option("--format", opts.format, "table | csv | json")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  command->add_option("--out", opts.out_path, "Write output to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-label baseline evaluation toolkit"};
  app.require_subcommand(1);
  options opts;

  CLI::App* stats = app.add_subcommand("stats", "Dataset and label statistics");
  add_data_options(stats, opts);
  add_output_options(stats, opts);

  CLI::App* baseline = app.add_subcommand("baseline", "Fit and print the constant baseline model");
  add_data_options(baseline, opts);
  add_output_options(baseline, opts);

  CLI::App* eval = app.add_subcommand("eval", "Evaluate the baseline under a protocol");
  add_data_options(eval, opts);
  add_protocol_options(eval, opts);
  add_output_options(eval, opts);

  CLI::App* compare = app.add_subcommand("compare", "Compare published results to baselines");
  compare->add_option("--results", opts.results_path, "Published results CSV");
  compare->add_option("--baselines", opts.baselines_path, "Static baseline CSV");
  add_data_options(compare, opts);
  add_protocol_options(compare, opts);
  add_output_options(compare, opts);

  CLI::App* report = app.add_subcommand("report", "Emit the full comparison report");
  report->add_option("--results", opts.results_path, "Published results CSV");
  report->add_option("--baselines", opts.baselines_path, "Static baseline CSV");
  add_data_options(report, opts);
  add_protocol_options(report, opts);
  add_output_options(report, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& failure) {
    std::cerr << failure.what() << '\n';
    return 1;
  }

  try {
    if (stats->parsed()) run_stats(opts);
    else if (baseline->parsed()) run_baseline(opts);
    else if (eval->parsed()) run_eval(opts);
    else if (compare->parsed()) run_compare(opts);
    else if (report->parsed()) run_report(opts);
  } catch (const usage_failure& failure) {
    std::cerr << failure.message << '\n';
    return 1;
  } catch (const std::exception& failure) {
    std::cerr << failure.what() << '\n';
    return 2;
  }
  return 0;
}
